#include "bldcsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bldcsim {

namespace {

bool is_binary_column(int column) {
    return column >= 15 && column <= 23;  // hall_a..c, pwm_a..f
}

void set_record_field(TraceRecord& r, int column, double v) {
    switch (column) {
        case 0: r.t = v; break;
        case 1: r.load_torque = v; break;
        case 2: r.speed_ref_rpm = v; break;
        case 3: r.speed_actual_rpm = v; break;
        case 4: r.speed_rad = v; break;
        case 5: r.te = v; break;
        case 6: case 7: case 8:
            r.currents[static_cast<std::size_t>(column - 6)] = v;
            break;
        case 9: case 10: case 11:
            r.emf_volts[static_cast<std::size_t>(column - 9)] = v;
            break;
        case 12: case 13: case 14:
            r.emf_norm[static_cast<std::size_t>(column - 12)] = v;
            break;
        case 15: case 16: case 17:
            r.hall[static_cast<std::size_t>(column - 15)] = static_cast<int>(v);
            break;
        case 18: case 19: case 20: case 21: case 22: case 23:
            r.pwm[static_cast<std::size_t>(column - 18)] = static_cast<int>(v);
            break;
        case 24: r.duty = v; break;
        default: break;
    }
}

}  // namespace

std::string format_csv_value(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string trace_to_csv(const Trace& trace) {
    std::string out;
    out.reserve(trace.records.size() * 160 + 256);
    const auto& columns = trace_columns();
    for (int c = 0; c < kTraceColumnCount; ++c) {
        if (c > 0) {
            out += ',';
        }
        out += columns[static_cast<std::size_t>(c)];
    }
    out += '\n';
    for (const auto& r : trace.records) {
        for (int c = 0; c < kTraceColumnCount; ++c) {
            if (c > 0) {
                out += ',';
            }
            if (is_binary_column(c)) {
                out += record_field(r, c) != 0.0 ? '1' : '0';
            } else {
                out += format_csv_value(record_field(r, c));
            }
        }
        out += '\n';
    }
    return out;
}

void export_csv(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open for writing: " + path.string());
    }
    out << trace_to_csv(trace);
    if (!out) {
        throw IoFailure("write failed: " + path.string());
    }
}

Trace csv_to_trace(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaMismatch("empty trace CSV");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    {
        std::string expected;
        const auto& columns = trace_columns();
        for (int c = 0; c < kTraceColumnCount; ++c) {
            if (c > 0) {
                expected += ',';
            }
            expected += columns[static_cast<std::size_t>(c)];
        }
        if (line != expected) {
            throw SchemaMismatch("trace CSV header does not match the schema");
        }
    }

    Trace trace;
    trace.config = default_config();
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        TraceRecord r;
        std::size_t pos = 0;
        for (int c = 0; c < kTraceColumnCount; ++c) {
            const auto comma = line.find(',', pos);
            const bool last = c == kTraceColumnCount - 1;
            if (last != (comma == std::string::npos)) {
                throw ParseFailure("trace CSV row " + std::to_string(row) + ": expected " +
                                   std::to_string(kTraceColumnCount) + " columns");
            }
            const std::string cell = line.substr(pos, last ? std::string::npos : comma - pos);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cell.size() || cell.empty()) {
                throw ParseFailure("trace CSV row " + std::to_string(row) + ", column '" +
                                   std::string(trace_columns()[static_cast<std::size_t>(c)]) +
                                   "': bad value '" + cell + "'");
            }
            set_record_field(r, c, v);
            pos = last ? pos : comma + 1;
        }
        trace.records.push_back(r);
    }
    if (trace.records.size() >= 2) {
        trace.config.log_step = trace.records[1].t - trace.records[0].t;
    }
    return trace;
}

Trace import_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure("cannot open for reading: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return csv_to_trace(ss.str());
}

}  // namespace bldcsim
