#pragma once

#include <span>
#include <vector>

#include "nsp/core.hpp"

namespace nsp {

// Burgers problem with smoothed Riemann data
// w0(x) = (w₊+w₋)/2 + (w₊−w₋)/2 · tanh(ε x).
struct BurgersWave {
    double w_minus = 0.0;
    double w_plus = 1.0;
    double eps_smooth = 1.0;

    double delta() const { return w_plus - w_minus; }
    void validate() const;

    static BurgersWave from(const PhysParamsOne& p);
    static BurgersWave from(const PhysParamsTwo& p);
};

struct BurgersJet {
    double w = 0.0;
    double wx = 0.0;
    double wxx = 0.0;
    double wxxx = 0.0;
    double foot = 0.0;  // x₀ of the characteristic through (t, x)
};

double burgers_value(const BurgersWave& wave, double t, double x);
BurgersJet burgers_derivatives(const BurgersWave& wave, double t, double x);
double riemann_fan(const BurgersWave& wave, double t, double x);

struct RarefactionProfile {
    double time = 0.0;
    Field nr, ur, phir;
    Field dnr, dur, dphir;
    Field d2nr, d2ur, d2phir;
    Field d3ur;
    // ∂t∂x of the potential profile; needed by the two-fluid energy corrections.
    Field dt_dphir;
};

RarefactionProfile profile_onefluid(const PhysParamsOne& params, double t, const Grid1D& grid);
RarefactionProfile profile_twofluid(const PhysParamsTwo& params, double t, const Grid1D& grid);

// Interval outside which the profile equals its far-field values to within
// rounding, at profile time t.
struct FanExtent {
    double left = 0.0;
    double right = 0.0;
};
FanExtent fan_extent(const BurgersWave& wave, double t, double tail_widths = 5.0);

struct DecayRateReport {
    double p = 0.0;
    double slope = 0.0;
    double envelope_constant = 0.0;
    double fit_t_lo = 0.0;
    double fit_t_hi = 0.0;
    std::vector<double> times;
    std::vector<double> norms;
};

// ‖∂x uʳ(t)‖_Lp at each profile time t (the Burgers solution at t+1).
DecayRateReport verify_decay_rates(const BurgersWave& wave, double p, std::span<const double> times);

}  // namespace nsp
