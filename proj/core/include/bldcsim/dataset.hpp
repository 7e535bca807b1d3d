#pragma once

#include <string>
#include <vector>

#include "bldcsim/train.hpp"
#include "bldcsim/trace.hpp"

namespace bldcsim {

/// Affine column transform: normalized = (value - min) / range.
struct ColumnScale {
    double min = 0.0;
    double range = 1.0;
};

double normalize_value(double value, const ColumnScale& scale);
double denormalize_value(double value, const ColumnScale& scale);

/// Input/target matrices for one prediction case, already normalized, with
/// the 80:20 row partition and the per-column scales needed to invert the
/// normalization.
struct CaseDataset {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
    Partition partition;
    std::vector<ColumnScale> input_scales;
    std::vector<ColumnScale> target_scales;
    std::vector<std::string> input_names;
    std::vector<std::string> target_names;
    AccuracyRule accuracy;
    Loss loss = Loss::mse;
};

struct CaseSetup {
    CaseDataset data;
    std::vector<LayerSpec> topology;
};

/// The four prediction cases:
///   1: load_torque, te, speed_ref -> speed_actual; 5 hidden layers of 5.
///   2: ea, eb, ec -> ia, ib, ic; 14 hidden layers of 5.
///   3: hall_a..c -> emf_norm_a..c remapped to {0, 0.5, 1}; 6 hidden layers.
///   4: pwm_a..f -> emf_norm_a..c remapped; 6 hidden layers.
/// Continuous columns are min-max normalized; cases 1-2 use sigmoid hidden
/// layers with an identity output (softmax_output switches the output layer
/// to softmax for fidelity experiments), cases 3-4 use sigmoid throughout.
CaseSetup build_case(int case_id, const Trace& trace, std::uint64_t seed,
                     bool softmax_output = false);

/// Forward pass per row with the normalization inverted; one output row per
/// dataset row, in trace order.
std::vector<std::vector<double>> predict_case(const Mlp& model, const CaseDataset& data);

/// Prediction-vs-target series: t, partition tag, then per target column the
/// denormalized target and prediction.
std::string predictions_to_csv(const Trace& trace, const CaseDataset& data,
                               const std::vector<std::vector<double>>& predictions);
void export_predictions_csv(const Trace& trace, const CaseDataset& data,
                            const std::vector<std::vector<double>>& predictions,
                            const std::filesystem::path& path);

}  // namespace bldcsim
