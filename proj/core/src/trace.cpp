#include "bldcsim/trace.hpp"

#include <string>

namespace bldcsim {

const std::array<std::string_view, kTraceColumnCount>& trace_columns() {
    static const std::array<std::string_view, kTraceColumnCount> columns{
        "t",          "load_torque", "speed_ref",  "speed_actual", "speed_rad",
        "te",         "ia",          "ib",         "ic",           "ea",
        "eb",         "ec",          "emf_norm_a", "emf_norm_b",   "emf_norm_c",
        "hall_a",     "hall_b",      "hall_c",     "pwm_a",        "pwm_b",
        "pwm_c",      "pwm_d",       "pwm_e",      "pwm_f",        "duty",
    };
    return columns;
}

double record_field(const TraceRecord& r, int column) {
    switch (column) {
        case 0: return r.t;
        case 1: return r.load_torque;
        case 2: return r.speed_ref_rpm;
        case 3: return r.speed_actual_rpm;
        case 4: return r.speed_rad;
        case 5: return r.te;
        case 6: case 7: case 8:
            return r.currents[static_cast<std::size_t>(column - 6)];
        case 9: case 10: case 11:
            return r.emf_volts[static_cast<std::size_t>(column - 9)];
        case 12: case 13: case 14:
            return r.emf_norm[static_cast<std::size_t>(column - 12)];
        case 15: case 16: case 17:
            return r.hall[static_cast<std::size_t>(column - 15)];
        case 18: case 19: case 20: case 21: case 22: case 23:
            return r.pwm[static_cast<std::size_t>(column - 18)];
        case 24: return r.duty;
        default:
            throw MissingColumn("trace column index out of range: " + std::to_string(column));
    }
}

std::vector<double> trace_column(const Trace& trace, std::string_view name) {
    const auto& columns = trace_columns();
    int index = -1;
    for (int i = 0; i < kTraceColumnCount; ++i) {
        if (columns[static_cast<std::size_t>(i)] == name) {
            index = i;
            break;
        }
    }
    if (index < 0) {
        throw MissingColumn("no trace column named '" + std::string(name) + "'");
    }
    std::vector<double> out;
    out.reserve(trace.records.size());
    for (const auto& r : trace.records) {
        out.push_back(record_field(r, index));
    }
    return out;
}

}  // namespace bldcsim
