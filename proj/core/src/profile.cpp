#include "bldcsim/profile.hpp"

#include <algorithm>
#include <cmath>

namespace bldcsim {

void validate(const PiecewiseProfile& profile) {
    if (profile.points.empty()) {
        throw EmptyProfile("profile has no breakpoints");
    }
    for (std::size_t i = 1; i < profile.points.size(); ++i) {
        if (!(profile.points[i].t > profile.points[i - 1].t)) {
            throw ConfigInvalid("profile breakpoints must have strictly increasing times");
        }
    }
}

double profile_eval(const PiecewiseProfile& profile, double t) {
    const auto& pts = profile.points;
    if (pts.empty()) {
        throw EmptyProfile("profile has no breakpoints");
    }
    if (t <= pts.front().t) {
        return pts.front().value;
    }
    if (t >= pts.back().t) {
        return pts.back().value;
    }
    const auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                     [](double v, const ProfilePoint& p) { return v < p.t; });
    const auto lo = hi - 1;
    const double span = hi->t - lo->t;
    const double frac = (t - lo->t) / span;
    return std::lerp(lo->value, hi->value, frac);
}

}  // namespace bldcsim
