#include "bldcsim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bldcsim/csv.hpp"

namespace bldcsim {

namespace {

constexpr double k_min_range = 1e-12;

ColumnScale min_max_scale(const std::vector<double>& column) {
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    return {*lo, std::max(*hi - *lo, k_min_range)};
}

struct ColumnSpec {
    const char* name;
    bool normalize;  // min-max for continuous columns, raw for binary ones
};

struct CaseSpec {
    std::vector<ColumnSpec> inputs;
    std::vector<ColumnSpec> targets;
    int hidden_layers;
    bool level_targets;  // emf_norm remapped to {0, 0.5, 1}
};

CaseSpec case_spec(int case_id) {
    switch (case_id) {
        case 1:
            return {{{"load_torque", true}, {"te", true}, {"speed_ref", true}},
                    {{"speed_actual", true}},
                    5,
                    false};
        case 2:
            return {{{"ea", true}, {"eb", true}, {"ec", true}},
                    {{"ia", true}, {"ib", true}, {"ic", true}},
                    14,
                    false};
        case 3:
            return {{{"hall_a", false}, {"hall_b", false}, {"hall_c", false}},
                    {{"emf_norm_a", false}, {"emf_norm_b", false}, {"emf_norm_c", false}},
                    6,
                    true};
        case 4:
            return {{{"pwm_a", false}, {"pwm_b", false}, {"pwm_c", false},
                     {"pwm_d", false}, {"pwm_e", false}, {"pwm_f", false}},
                    {{"emf_norm_a", false}, {"emf_norm_b", false}, {"emf_norm_c", false}},
                    6,
                    true};
        default:
            throw ConfigInvalid("case id must be 1..4, got " + std::to_string(case_id));
    }
}

}  // namespace

double normalize_value(double value, const ColumnScale& scale) {
    return (value - scale.min) / scale.range;
}

double denormalize_value(double value, const ColumnScale& scale) {
    return value * scale.range + scale.min;
}

CaseSetup build_case(int case_id, const Trace& trace, std::uint64_t seed, bool softmax_output) {
    const CaseSpec spec = case_spec(case_id);
    const std::size_t rows = trace.records.size();
    if (rows < 2) {
        throw TooFewRows("trace has fewer than 2 rows");
    }

    CaseSetup setup;
    CaseDataset& data = setup.data;
    data.inputs.assign(rows, {});
    data.targets.assign(rows, {});

    auto append_columns = [&](const std::vector<ColumnSpec>& specs,
                              std::vector<std::vector<double>>& matrix,
                              std::vector<ColumnScale>& scales,
                              std::vector<std::string>& names, bool level_targets) {
        for (const auto& col : specs) {
            std::vector<double> values = trace_column(trace, col.name);
            ColumnScale scale;  // identity
            if (level_targets) {
                scale = {-1.0, 2.0};  // (e + 1) / 2 maps {-1, 0, 1} onto {0, 0.5, 1}
            } else if (col.normalize) {
                scale = min_max_scale(values);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                matrix[r].push_back(normalize_value(values[r], scale));
            }
            scales.push_back(scale);
            names.emplace_back(col.name);
        }
    };
    append_columns(spec.inputs, data.inputs, data.input_scales, data.input_names, false);
    append_columns(spec.targets, data.targets, data.target_scales, data.target_names,
                   spec.level_targets);

    data.partition = split_dataset(rows, 0.8, seed);
    data.loss = Loss::mse;
    if (spec.level_targets) {
        data.accuracy.levels = {0.0, 0.5, 1.0};
    } else {
        data.accuracy.levels.clear();
        data.accuracy.tolerance = 0.02;  // 2% of the normalized column range
    }

    const int n_in = static_cast<int>(spec.inputs.size());
    const int n_out = static_cast<int>(spec.targets.size());
    setup.topology.push_back({n_in, Activation::identity});
    for (int l = 0; l < spec.hidden_layers; ++l) {
        setup.topology.push_back({5, Activation::sigmoid});
    }
    Activation out_act = spec.level_targets ? Activation::sigmoid : Activation::identity;
    if (softmax_output) {
        out_act = Activation::softmax;
    }
    setup.topology.push_back({n_out, out_act});
    return setup;
}

std::vector<std::vector<double>> predict_case(const Mlp& model, const CaseDataset& data) {
    if (data.inputs.empty()) {
        throw DimensionMismatch("predict: empty dataset");
    }
    if (model.input_width() != static_cast<int>(data.inputs.front().size()) ||
        model.output_width() != static_cast<int>(data.targets.front().size())) {
        throw DimensionMismatch("predict: model does not match the case topology");
    }
    std::vector<std::vector<double>> out;
    out.reserve(data.inputs.size());
    for (const auto& row : data.inputs) {
        std::vector<double> y = forward(model, row).output();
        for (std::size_t c = 0; c < y.size(); ++c) {
            y[c] = denormalize_value(y[c], data.target_scales[c]);
        }
        out.push_back(std::move(y));
    }
    return out;
}

std::string predictions_to_csv(const Trace& trace, const CaseDataset& data,
                               const std::vector<std::vector<double>>& predictions) {
    if (predictions.size() != trace.records.size()) {
        throw ShapeMismatch("predictions do not cover every trace row");
    }
    std::vector<char> is_val(trace.records.size(), 0);
    for (std::size_t r : data.partition.validation) {
        is_val[r] = 1;
    }

    std::string out = "t,partition";
    for (const auto& name : data.target_names) {
        out += ',' + name + "_target," + name + "_pred";
    }
    out += '\n';
    for (std::size_t r = 0; r < trace.records.size(); ++r) {
        out += format_csv_value(trace.records[r].t);
        out += is_val[r] ? ",val" : ",train";
        for (std::size_t c = 0; c < data.target_names.size(); ++c) {
            out += ',';
            out += format_csv_value(denormalize_value(data.targets[r][c], data.target_scales[c]));
            out += ',';
            out += format_csv_value(predictions[r][c]);
        }
        out += '\n';
    }
    return out;
}

void export_predictions_csv(const Trace& trace, const CaseDataset& data,
                            const std::vector<std::vector<double>>& predictions,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open for writing: " + path.string());
    }
    out << predictions_to_csv(trace, data, predictions);
    if (!out) {
        throw IoFailure("write failed: " + path.string());
    }
}

}  // namespace bldcsim
