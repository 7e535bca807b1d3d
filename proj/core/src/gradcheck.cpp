#include "bldcsim/gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

namespace bldcsim {

namespace {

double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const char* loss_name(Loss loss) {
    return loss == Loss::mse ? "mse" : "bce";
}

const char* act_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::sigmoid: return "sigmoid";
        case Activation::softmax: return "softmax";
    }
    return "?";
}

}  // namespace

GradCheckReport run_gradient_audit(std::uint64_t seed, double epsilon, double threshold) {
    GradCheckReport report;
    std::mt19937_64 rng(seed);

    const Activation outputs[] = {Activation::identity, Activation::sigmoid, Activation::softmax};
    const Loss losses[] = {Loss::mse, Loss::binary_cross_entropy};

    for (Activation out_act : outputs) {
        for (Loss loss : losses) {
            double combo_max = 0.0;
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<LayerSpec> topology{
                    {3, Activation::identity},
                    {4, Activation::sigmoid},
                    {4, Activation::sigmoid},
                    {3, out_act},
                };
                Mlp mlp = make_mlp(topology, rng());
                // Non-zero biases so their gradients are exercised off-origin.
                for (auto& b : mlp.biases) {
                    for (double& v : b) {
                        v = 0.4 * (2.0 * next_unit(rng) - 1.0);
                    }
                }
                std::vector<double> input(3);
                for (double& v : input) {
                    v = 2.0 * next_unit(rng) - 1.0;
                }
                std::vector<double> target(3);
                for (double& v : target) {
                    // Targets in (0, 1) keep binary cross entropy well defined.
                    v = loss == Loss::binary_cross_entropy ? 0.1 + 0.8 * next_unit(rng)
                                                           : 2.0 * next_unit(rng) - 1.0;
                }

                Gradients analytic = zero_gradients(mlp);
                accumulate_backward(mlp, forward(mlp, input), target, loss, analytic);

                auto loss_at = [&]() {
                    return loss_value(forward(mlp, input).output(), target, loss);
                };
                for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
                    auto check_param = [&](double& param, double grad) {
                        const double saved = param;
                        param = saved + epsilon;
                        const double up = loss_at();
                        param = saved - epsilon;
                        const double down = loss_at();
                        param = saved;
                        const double numeric = (up - down) / (2.0 * epsilon);
                        const double denom = std::max({std::fabs(grad), std::fabs(numeric), 1.0});
                        const double rel = std::fabs(grad - numeric) / denom;
                        combo_max = std::max(combo_max, rel);
                        ++report.parameters_checked;
                    };
                    for (std::size_t i = 0; i < mlp.weights[l].size(); ++i) {
                        check_param(mlp.weights[l][i], analytic.d_weights[l][i]);
                    }
                    for (std::size_t i = 0; i < mlp.biases[l].size(); ++i) {
                        check_param(mlp.biases[l][i], analytic.d_biases[l][i]);
                    }
                }
            }
            char line[96];
            std::snprintf(line, sizeof(line), "%-8s x %-3s  max rel err %.3e\n",
                          act_name(out_act), loss_name(loss), combo_max);
            report.detail += line;
            report.max_rel_error = std::max(report.max_rel_error, combo_max);
        }
    }
    report.passed = report.max_rel_error < threshold;
    return report;
}

}  // namespace bldcsim
