#pragma once

#include <span>

namespace nsp {

// Power-law fit value ≈ constant · t^slope.
struct DecayFit {
    double slope = 0.0;
    double constant = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int points = 0;
};

// Least squares of log value against log t, restricted to the trailing
// `decades` of the time range.
DecayFit fit_decay(std::span<const double> t, std::span<const double> value, double decades = 1.0);

}  // namespace nsp
