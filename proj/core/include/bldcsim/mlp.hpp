#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bldcsim/errors.hpp"

namespace bldcsim {

enum class Activation { identity, sigmoid, softmax };
enum class Loss { mse, binary_cross_entropy };

struct LayerSpec {
    int width = 1;
    Activation activation = Activation::identity;
};

/// Fully connected feed-forward network. layers includes the input layer
/// (whose activation is ignored); weights[l] is row-major
/// layers[l+1].width x layers[l].width and biases[l] matches the output
/// width. Softmax is only allowed on the output layer.
struct Mlp {
    std::vector<LayerSpec> layers;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_width() const { return layers.front().width; }
    int output_width() const { return layers.back().width; }
};

void validate(const Mlp& mlp);

/// Seeded uniform initialization, zero biases. Sigmoid layers use the
/// sigmoid-corrected bound 4*sqrt(6/(fan_in+fan_out)); identity and softmax
/// layers use sqrt(6/(fan_in+fan_out)).
Mlp make_mlp(const std::vector<LayerSpec>& topology, std::uint64_t seed);

struct ForwardResult {
    std::vector<std::vector<double>> activations;      // [0] = input .. [L-1] = output
    std::vector<std::vector<double>> pre_activations;  // [l] = z feeding layer l+1

    const std::vector<double>& output() const { return activations.back(); }
};

ForwardResult forward(const Mlp& mlp, std::span<const double> input);

double loss_value(std::span<const double> output, std::span<const double> target, Loss loss);

struct Gradients {
    std::vector<std::vector<double>> d_weights;
    std::vector<std::vector<double>> d_biases;
};

Gradients zero_gradients(const Mlp& mlp);

/// Adds the exact analytic gradient of the per-sample loss to `grads`.
void accumulate_backward(const Mlp& mlp, const ForwardResult& pass,
                         std::span<const double> target, Loss loss, Gradients& grads);

/// w -= learning_rate * scale * dw (scale is typically 1/batch).
void apply_sgd(Mlp& mlp, const Gradients& grads, double learning_rate, double scale);

std::vector<double> activate(std::span<const double> z, Activation activation);

/// Plain-text serialization: topology header, then per-layer weight rows
/// and bias line at full decimal precision.
std::string model_to_text(const Mlp& mlp);
Mlp model_from_text(const std::string& text);
void save_model(const Mlp& mlp, const std::filesystem::path& path);
Mlp load_model(const std::filesystem::path& path);

}  // namespace bldcsim
