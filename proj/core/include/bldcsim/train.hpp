#pragma once

#include <filesystem>
#include <vector>

#include "bldcsim/mlp.hpp"

namespace bldcsim {

struct TrainConfig {
    int epochs = 100;
    double split_fraction = 0.8;
    double learning_rate = 0.05;
    int batch_size = 32;
    Loss loss = Loss::mse;
    std::uint64_t seed = 1;
};

void validate(const TrainConfig& cfg);

struct Partition {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Seeded shuffle then contiguous split; the training side takes
/// ceil(split_fraction * rows). Throws TooFewRows for fewer than 2 rows.
Partition split_dataset(std::size_t rows, double split_fraction, std::uint64_t seed);

/// How predictions are scored as "accurate". With levels set, prediction and
/// target are both rounded to the nearest level and must agree; otherwise a
/// prediction counts when it falls within `tolerance` of the target
/// (fraction of the normalized column range).
struct AccuracyRule {
    std::vector<double> levels;
    double tolerance = 0.02;
};

struct MetricSet {
    double loss = 0.0;
    double accuracy = 0.0;
    double mse = 0.0;
    double mae = 0.0;
};

/// Row-wise metrics over equal-shaped prediction/target matrices; accuracy
/// counts scalar entries. mae^2 <= mse always holds (Jensen).
MetricSet compute_metrics(const std::vector<std::vector<double>>& predictions,
                          const std::vector<std::vector<double>>& targets,
                          Loss loss, const AccuracyRule& rule);

struct EpochMetrics {
    int epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double train_accuracy = 0.0;
    double val_accuracy = 0.0;
    double mse = 0.0;  // validation
    double mae = 0.0;  // validation
};

struct TrainResult {
    Mlp model;
    std::vector<EpochMetrics> history;
};

/// Mini-batch SGD for cfg.epochs epochs with per-epoch reshuffling from the
/// seeded generator; metrics are computed on both partitions after every
/// epoch. Deterministic given the seed. Throws NonFiniteLoss when the
/// training loss diverges.
TrainResult train(Mlp model,
                  const std::vector<std::vector<double>>& inputs,
                  const std::vector<std::vector<double>>& targets,
                  const Partition& partition,
                  const AccuracyRule& rule,
                  const TrainConfig& cfg);

/// Per-epoch metrics CSV: epoch,train_loss,val_loss,train_accuracy,
/// val_accuracy,mse,mae.
std::string metrics_to_csv(const std::vector<EpochMetrics>& history);
void export_metrics_csv(const std::vector<EpochMetrics>& history, const std::filesystem::path& path);
std::vector<EpochMetrics> import_metrics_csv(const std::filesystem::path& path);

}  // namespace bldcsim
