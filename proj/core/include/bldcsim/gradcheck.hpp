#pragma once

#include <cstdint>
#include <string>

#include "bldcsim/mlp.hpp"

namespace bldcsim {

struct GradCheckReport {
    double max_rel_error = 0.0;
    int parameters_checked = 0;
    bool passed = false;
    std::string detail;  // one line per network configuration
};

/// Central finite differences against the analytic gradients over random
/// small networks covering every output activation and loss combination.
/// Relative error uses max(|analytic|, |numeric|, 1) as the denominator.
GradCheckReport run_gradient_audit(std::uint64_t seed, double epsilon = 1e-5,
                                   double threshold = 1e-6);

}  // namespace bldcsim
