#include "bldcsim/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace bldcsim {

namespace {

constexpr double k_bce_clamp = 1e-12;

double sigmoid(double z) {
    return 1.0 / (1.0 + std::exp(-z));
}

// Uniform double in [0, 1) from the standardized mt19937_64 stream; avoids
// the implementation-defined std::uniform_real_distribution.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::sigmoid: return "sigmoid";
        case Activation::softmax: return "softmax";
    }
    return "identity";
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "softmax") return Activation::softmax;
    throw ParseFailure("unknown activation name '" + name + "'");
}

}  // namespace

void validate(const Mlp& mlp) {
    if (mlp.layers.size() < 2) {
        throw ConfigInvalid("mlp needs at least an input and an output layer");
    }
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        if (mlp.layers[l].width < 1) {
            throw ConfigInvalid("mlp layer width must be >= 1");
        }
        if (mlp.layers[l].activation == Activation::softmax && l + 1 != mlp.layers.size()) {
            throw ConfigInvalid("softmax is only allowed on the output layer");
        }
    }
    if (mlp.weights.size() != mlp.layers.size() - 1 || mlp.biases.size() != mlp.layers.size() - 1) {
        throw DimensionMismatch("mlp weight/bias count does not match the layer count");
    }
    for (std::size_t l = 0; l + 1 < mlp.layers.size(); ++l) {
        const std::size_t rows = static_cast<std::size_t>(mlp.layers[l + 1].width);
        const std::size_t cols = static_cast<std::size_t>(mlp.layers[l].width);
        if (mlp.weights[l].size() != rows * cols || mlp.biases[l].size() != rows) {
            throw DimensionMismatch("mlp layer " + std::to_string(l) + " has inconsistent dimensions");
        }
        for (double w : mlp.weights[l]) {
            if (!std::isfinite(w)) {
                throw ConfigInvalid("mlp weights must be finite");
            }
        }
    }
}

Mlp make_mlp(const std::vector<LayerSpec>& topology, std::uint64_t seed) {
    Mlp mlp;
    mlp.layers = topology;
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < topology.size(); ++l) {
        const int fan_in = topology[l].width;
        const int fan_out = topology[l + 1].width;
        double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        if (topology[l + 1].activation == Activation::sigmoid) {
            bound *= 4.0;  // keeps the per-layer signal variance near unity
        }
        std::vector<double> w(static_cast<std::size_t>(fan_in) * static_cast<std::size_t>(fan_out));
        for (double& v : w) {
            v = (2.0 * next_unit(rng) - 1.0) * bound;
        }
        mlp.weights.push_back(std::move(w));
        mlp.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    validate(mlp);
    return mlp;
}

std::vector<double> activate(std::span<const double> z, Activation activation) {
    std::vector<double> out(z.begin(), z.end());
    switch (activation) {
        case Activation::identity:
            break;
        case Activation::sigmoid:
            for (double& v : out) {
                v = sigmoid(v);
            }
            break;
        case Activation::softmax: {
            const double zmax = *std::max_element(out.begin(), out.end());
            double sum = 0.0;
            for (double& v : out) {
                v = std::exp(v - zmax);
                sum += v;
            }
            for (double& v : out) {
                v /= sum;
            }
            break;
        }
    }
    return out;
}

ForwardResult forward(const Mlp& mlp, std::span<const double> input) {
    if (static_cast<int>(input.size()) != mlp.input_width()) {
        throw DimensionMismatch("forward: input width " + std::to_string(input.size()) +
                                " does not match network input " + std::to_string(mlp.input_width()));
    }
    ForwardResult r;
    r.activations.reserve(mlp.layers.size());
    r.pre_activations.reserve(mlp.layers.size() - 1);
    r.activations.emplace_back(input.begin(), input.end());

    for (std::size_t l = 0; l + 1 < mlp.layers.size(); ++l) {
        const auto& a = r.activations.back();
        const std::size_t rows = static_cast<std::size_t>(mlp.layers[l + 1].width);
        const std::size_t cols = static_cast<std::size_t>(mlp.layers[l].width);
        std::vector<double> z(rows);
        const double* w = mlp.weights[l].data();
        for (std::size_t i = 0; i < rows; ++i) {
            double acc = mlp.biases[l][i];
            const double* wrow = w + i * cols;
            for (std::size_t j = 0; j < cols; ++j) {
                acc += wrow[j] * a[j];
            }
            z[i] = acc;
        }
        r.pre_activations.push_back(z);
        r.activations.push_back(activate(z, mlp.layers[l + 1].activation));
    }
    return r;
}

double loss_value(std::span<const double> output, std::span<const double> target, Loss loss) {
    if (output.size() != target.size()) {
        throw ShapeMismatch("loss: output and target sizes differ");
    }
    const double inv_m = 1.0 / static_cast<double>(output.size());
    double acc = 0.0;
    switch (loss) {
        case Loss::mse:
            for (std::size_t i = 0; i < output.size(); ++i) {
                const double d = output[i] - target[i];
                acc += d * d;
            }
            break;
        case Loss::binary_cross_entropy:
            for (std::size_t i = 0; i < output.size(); ++i) {
                const double y = std::clamp(output[i], k_bce_clamp, 1.0 - k_bce_clamp);
                acc -= target[i] * std::log(y) + (1.0 - target[i]) * std::log(1.0 - y);
            }
            break;
    }
    return acc * inv_m;
}

Gradients zero_gradients(const Mlp& mlp) {
    Gradients g;
    g.d_weights.reserve(mlp.weights.size());
    g.d_biases.reserve(mlp.biases.size());
    for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
        g.d_weights.emplace_back(mlp.weights[l].size(), 0.0);
        g.d_biases.emplace_back(mlp.biases[l].size(), 0.0);
    }
    return g;
}

void accumulate_backward(const Mlp& mlp, const ForwardResult& pass,
                         std::span<const double> target, Loss loss, Gradients& grads) {
    const std::size_t n_layers = mlp.layers.size();
    const auto& y = pass.activations.back();
    if (y.size() != target.size()) {
        throw DimensionMismatch("backward: target width does not match network output");
    }
    const double inv_m = 1.0 / static_cast<double>(y.size());

    // dLoss/dy
    std::vector<double> dy(y.size());
    switch (loss) {
        case Loss::mse:
            for (std::size_t i = 0; i < y.size(); ++i) {
                dy[i] = 2.0 * (y[i] - target[i]) * inv_m;
            }
            break;
        case Loss::binary_cross_entropy:
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] <= k_bce_clamp || y[i] >= 1.0 - k_bce_clamp) {
                    dy[i] = 0.0;  // loss is flat where the clamp is active
                } else {
                    dy[i] = (y[i] - target[i]) / (y[i] * (1.0 - y[i])) * inv_m;
                }
            }
            break;
    }

    // Chain through the output activation to get dLoss/dz.
    std::vector<double> delta(y.size());
    switch (mlp.layers.back().activation) {
        case Activation::identity:
            delta = dy;
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < y.size(); ++i) {
                delta[i] = dy[i] * y[i] * (1.0 - y[i]);
            }
            break;
        case Activation::softmax: {
            double dot = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                dot += y[i] * dy[i];
            }
            for (std::size_t i = 0; i < y.size(); ++i) {
                delta[i] = y[i] * (dy[i] - dot);
            }
            break;
        }
    }

    for (std::size_t l = n_layers - 1; l >= 1; --l) {
        const std::size_t wi = l - 1;
        const auto& a_prev = pass.activations[wi];
        const std::size_t rows = delta.size();
        const std::size_t cols = a_prev.size();
        double* dw = grads.d_weights[wi].data();
        for (std::size_t i = 0; i < rows; ++i) {
            grads.d_biases[wi][i] += delta[i];
            double* dwrow = dw + i * cols;
            for (std::size_t j = 0; j < cols; ++j) {
                dwrow[j] += delta[i] * a_prev[j];
            }
        }
        if (wi == 0) {
            break;
        }
        // delta for the previous layer: (W^T delta) * act'(a_prev)
        std::vector<double> prev(cols, 0.0);
        const double* w = mlp.weights[wi].data();
        for (std::size_t i = 0; i < rows; ++i) {
            const double* wrow = w + i * cols;
            for (std::size_t j = 0; j < cols; ++j) {
                prev[j] += wrow[j] * delta[i];
            }
        }
        if (mlp.layers[wi].activation == Activation::sigmoid) {
            for (std::size_t j = 0; j < cols; ++j) {
                prev[j] *= a_prev[j] * (1.0 - a_prev[j]);
            }
        }
        delta = std::move(prev);
    }
}

void apply_sgd(Mlp& mlp, const Gradients& grads, double learning_rate, double scale) {
    const double step = learning_rate * scale;
    for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
        for (std::size_t i = 0; i < mlp.weights[l].size(); ++i) {
            mlp.weights[l][i] -= step * grads.d_weights[l][i];
        }
        for (std::size_t i = 0; i < mlp.biases[l].size(); ++i) {
            mlp.biases[l][i] -= step * grads.d_biases[l][i];
        }
    }
}

std::string model_to_text(const Mlp& mlp) {
    std::string out = "bldcsim-mlp 1\n";
    out += "layers " + std::to_string(mlp.layers.size()) + "\n";
    for (const auto& layer : mlp.layers) {
        out += "layer " + std::to_string(layer.width) + " " + activation_name(layer.activation) + "\n";
    }
    char buf[40];
    for (std::size_t l = 0; l + 1 < mlp.layers.size(); ++l) {
        const std::size_t rows = static_cast<std::size_t>(mlp.layers[l + 1].width);
        const std::size_t cols = static_cast<std::size_t>(mlp.layers[l].width);
        out += "weights " + std::to_string(l) + "\n";
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", mlp.weights[l][i * cols + j]);
                out += buf;
                out += j + 1 < cols ? ' ' : '\n';
            }
        }
        out += "bias " + std::to_string(l) + "\n";
        for (std::size_t i = 0; i < rows; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", mlp.biases[l][i]);
            out += buf;
            out += i + 1 < rows ? ' ' : '\n';
        }
    }
    return out;
}

Mlp model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    int version = 0;
    if (!(in >> token >> version) || token != "bldcsim-mlp" || version != 1) {
        throw ParseFailure("model file: bad magic line");
    }
    std::size_t n_layers = 0;
    if (!(in >> token >> n_layers) || token != "layers" || n_layers < 2) {
        throw ParseFailure("model file: bad layer count");
    }
    Mlp mlp;
    for (std::size_t l = 0; l < n_layers; ++l) {
        int width = 0;
        std::string name;
        if (!(in >> token >> width >> name) || token != "layer" || width < 1) {
            throw ParseFailure("model file: bad layer line " + std::to_string(l));
        }
        mlp.layers.push_back({width, activation_from_name(name)});
    }
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        const std::size_t rows = static_cast<std::size_t>(mlp.layers[l + 1].width);
        const std::size_t cols = static_cast<std::size_t>(mlp.layers[l].width);
        std::size_t idx = 0;
        if (!(in >> token >> idx) || token != "weights" || idx != l) {
            throw ParseFailure("model file: expected weights block " + std::to_string(l));
        }
        std::vector<double> w(rows * cols);
        for (double& v : w) {
            if (!(in >> v)) {
                throw ParseFailure("model file: truncated weights block " + std::to_string(l));
            }
        }
        if (!(in >> token >> idx) || token != "bias" || idx != l) {
            throw ParseFailure("model file: expected bias block " + std::to_string(l));
        }
        std::vector<double> b(rows);
        for (double& v : b) {
            if (!(in >> v)) {
                throw ParseFailure("model file: truncated bias block " + std::to_string(l));
            }
        }
        mlp.weights.push_back(std::move(w));
        mlp.biases.push_back(std::move(b));
    }
    validate(mlp);
    return mlp;
}

void save_model(const Mlp& mlp, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open for writing: " + path.string());
    }
    out << model_to_text(mlp);
    if (!out) {
        throw IoFailure("write failed: " + path.string());
    }
}

Mlp load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure("cannot open for reading: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_text(ss.str());
}

}  // namespace bldcsim
