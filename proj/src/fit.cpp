#include "nsp/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "nsp/core.hpp"

namespace nsp {

DecayFit fit_decay(std::span<const double> t, std::span<const double> value, double decades) {
    if (t.size() != value.size()) throw ValidationError("fit_decay: time and value lengths differ");
    if (t.size() < 10) throw ValidationError(fmt::format("fit_decay: need at least 10 points, got {}", t.size()));
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(t[k] > 0.0)) throw ValidationError("fit_decay: times must be positive");
        if (!(value[k] > 0.0) || !std::isfinite(value[k]))
            throw ValidationError(fmt::format("fit_decay: nonpositive value {} at t={}", value[k], t[k]));
    }
    const double t_hi = *std::max_element(t.begin(), t.end());
    const double t_min = *std::min_element(t.begin(), t.end());
    const double t_lo = t_hi / std::pow(10.0, decades);
    if (t_min > t_lo * (1.0 + 1e-12))
        throw ValidationError("fit_decay: samples do not span the requested window");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_lo * (1.0 - 1e-12)) continue;
        const double lx = std::log(t[k]);
        const double ly = std::log(value[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 3) throw ValidationError("fit_decay: fewer than 3 points in the fit window");
    const double mx = sx / m;
    const double my = sy / m;
    const double var = sxx / m - mx * mx;
    DecayFit f;
    f.slope = (sxy / m - mx * my) / var;
    f.constant = std::exp(my - f.slope * mx);
    f.t_lo = t_lo;
    f.t_hi = t_hi;
    f.points = m;
    return f;
}

}  // namespace nsp
