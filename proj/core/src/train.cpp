#include "bldcsim/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "bldcsim/csv.hpp"

namespace bldcsim {

namespace {

// Portable Fisher-Yates using the standardized mt19937_64 output directly.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

double round_to_level(double value, const std::vector<double>& levels) {
    double best = levels.front();
    double best_dist = std::fabs(value - best);
    for (double level : levels) {
        const double d = std::fabs(value - level);
        if (d < best_dist) {
            best = level;
            best_dist = d;
        }
    }
    return best;
}

MetricSet evaluate(const Mlp& model,
                   const std::vector<std::vector<double>>& inputs,
                   const std::vector<std::vector<double>>& targets,
                   const std::vector<std::size_t>& rows,
                   Loss loss, const AccuracyRule& rule) {
    std::vector<std::vector<double>> preds;
    std::vector<std::vector<double>> targs;
    preds.reserve(rows.size());
    targs.reserve(rows.size());
    for (std::size_t r : rows) {
        preds.push_back(forward(model, inputs[r]).output());
        targs.push_back(targets[r]);
    }
    return compute_metrics(preds, targs, loss, rule);
}

}  // namespace

void validate(const TrainConfig& cfg) {
    if (cfg.epochs < 1) {
        throw ConfigInvalid("train epochs must be >= 1");
    }
    if (!(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0)) {
        throw ConfigInvalid("train split_fraction must lie in (0, 1)");
    }
    if (!(cfg.learning_rate > 0.0)) {
        throw ConfigInvalid("train learning_rate must be > 0");
    }
    if (cfg.batch_size < 1) {
        throw ConfigInvalid("train batch_size must be >= 1");
    }
}

Partition split_dataset(std::size_t rows, double split_fraction, std::uint64_t seed) {
    if (rows < 2) {
        throw TooFewRows("dataset needs at least 2 rows to split");
    }
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw ConfigInvalid("split_fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> idx(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        idx[i] = i;
    }
    std::mt19937_64 rng(seed);
    shuffle_indices(idx, rng);

    const std::size_t train_size =
        std::min(rows - 1, static_cast<std::size_t>(std::ceil(split_fraction * static_cast<double>(rows))));
    Partition p;
    p.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_size));
    p.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(train_size), idx.end());
    return p;
}

MetricSet compute_metrics(const std::vector<std::vector<double>>& predictions,
                          const std::vector<std::vector<double>>& targets,
                          Loss loss, const AccuracyRule& rule) {
    if (predictions.size() != targets.size()) {
        throw ShapeMismatch("metrics: prediction and target row counts differ");
    }
    if (predictions.empty()) {
        throw ShapeMismatch("metrics: empty prediction set");
    }
    MetricSet m;
    std::size_t entries = 0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < predictions.size(); ++r) {
        const auto& p = predictions[r];
        const auto& t = targets[r];
        if (p.size() != t.size()) {
            throw ShapeMismatch("metrics: row " + std::to_string(r) + " shapes differ");
        }
        m.loss += loss_value(p, t, loss);
        for (std::size_t c = 0; c < p.size(); ++c) {
            const double d = p[c] - t[c];
            m.mse += d * d;
            m.mae += std::fabs(d);
            ++entries;
            if (!rule.levels.empty()) {
                hits += round_to_level(p[c], rule.levels) == round_to_level(t[c], rule.levels) ? 1 : 0;
            } else {
                hits += std::fabs(d) <= rule.tolerance ? 1 : 0;
            }
        }
    }
    m.loss /= static_cast<double>(predictions.size());
    m.mse /= static_cast<double>(entries);
    m.mae /= static_cast<double>(entries);
    m.accuracy = static_cast<double>(hits) / static_cast<double>(entries);
    return m;
}

TrainResult train(Mlp model,
                  const std::vector<std::vector<double>>& inputs,
                  const std::vector<std::vector<double>>& targets,
                  const Partition& partition,
                  const AccuracyRule& rule,
                  const TrainConfig& cfg) {
    validate(cfg);
    validate(model);
    if (inputs.empty() || inputs.size() != targets.size()) {
        throw DimensionMismatch("train: input and target row counts differ or are empty");
    }
    for (std::size_t r : partition.train) {
        if (r >= inputs.size()) {
            throw DimensionMismatch("train: partition index out of range");
        }
    }

    TrainResult result;
    result.history.reserve(static_cast<std::size_t>(cfg.epochs));
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order = partition.train;
    Gradients grads = zero_gradients(model);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_indices(order, rng);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            for (auto& g : grads.d_weights) std::fill(g.begin(), g.end(), 0.0);
            for (auto& g : grads.d_biases) std::fill(g.begin(), g.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t r = order[k];
                const ForwardResult pass = forward(model, inputs[r]);
                accumulate_backward(model, pass, targets[r], cfg.loss, grads);
            }
            apply_sgd(model, grads, cfg.learning_rate, 1.0 / static_cast<double>(end - start));
        }

        EpochMetrics em;
        em.epoch = epoch;
        const MetricSet train_m = evaluate(model, inputs, targets, partition.train, cfg.loss, rule);
        const MetricSet val_m = evaluate(model, inputs, targets, partition.validation, cfg.loss, rule);
        em.train_loss = train_m.loss;
        em.train_accuracy = train_m.accuracy;
        em.val_loss = val_m.loss;
        em.val_accuracy = val_m.accuracy;
        em.mse = val_m.mse;
        em.mae = val_m.mae;
        if (!std::isfinite(em.train_loss)) {
            throw NonFiniteLoss("training loss diverged at epoch " + std::to_string(epoch) +
                                " (learning rate too high?)");
        }
        result.history.push_back(em);
    }
    result.model = std::move(model);
    return result;
}

std::string metrics_to_csv(const std::vector<EpochMetrics>& history) {
    std::string out = "epoch,train_loss,val_loss,train_accuracy,val_accuracy,mse,mae\n";
    for (const auto& m : history) {
        out += std::to_string(m.epoch);
        for (double v : {m.train_loss, m.val_loss, m.train_accuracy, m.val_accuracy, m.mse, m.mae}) {
            out += ',';
            out += format_csv_value(v);
        }
        out += '\n';
    }
    return out;
}

void export_metrics_csv(const std::vector<EpochMetrics>& history, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open for writing: " + path.string());
    }
    out << metrics_to_csv(history);
    if (!out) {
        throw IoFailure("write failed: " + path.string());
    }
}

std::vector<EpochMetrics> import_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open for reading: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaMismatch("empty metrics CSV");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "epoch,train_loss,val_loss,train_accuracy,val_accuracy,mse,mae") {
        throw SchemaMismatch("metrics CSV header does not match the schema");
    }
    std::vector<EpochMetrics> history;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        EpochMetrics m;
        double fields[7];
        std::size_t pos = 0;
        for (int c = 0; c < 7; ++c) {
            const auto comma = line.find(',', pos);
            const bool last = c == 6;
            if (last != (comma == std::string::npos)) {
                throw ParseFailure("metrics CSV row " + std::to_string(row) + ": expected 7 columns");
            }
            const std::string cell = line.substr(pos, last ? std::string::npos : comma - pos);
            try {
                fields[c] = std::stod(cell);
            } catch (const std::exception&) {
                throw ParseFailure("metrics CSV row " + std::to_string(row) + ": bad value '" + cell + "'");
            }
            pos = last ? pos : comma + 1;
        }
        m.epoch = static_cast<int>(fields[0]);
        m.train_loss = fields[1];
        m.val_loss = fields[2];
        m.train_accuracy = fields[3];
        m.val_accuracy = fields[4];
        m.mse = fields[5];
        m.mae = fields[6];
        history.push_back(m);
    }
    return history;
}

}  // namespace bldcsim
