#pragma once

#include <vector>

#include "bldcsim/errors.hpp"

namespace bldcsim {

struct ProfilePoint {
    double t = 0.0;
    double value = 0.0;
};

/// Piecewise-linear schedule over (time, value) breakpoints sorted by time.
struct PiecewiseProfile {
    std::vector<ProfilePoint> points;
};

/// Linear interpolation between breakpoints, constant extrapolation beyond
/// either end. Throws EmptyProfile when there are no breakpoints.
double profile_eval(const PiecewiseProfile& profile, double t);

/// Throws ConfigInvalid unless breakpoints are sorted by strictly
/// increasing time.
void validate(const PiecewiseProfile& profile);

}  // namespace bldcsim
