#include "nsp/rarewave.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "nsp/fit.hpp"

namespace nsp {

void BurgersWave::validate() const {
    if (!std::isfinite(w_minus) || !std::isfinite(w_plus) || !(w_minus < w_plus))
        throw ValidationError(fmt::format("burgers: need w_minus < w_plus, got {} and {}", w_minus, w_plus));
    if (!(eps_smooth > 0.0) || !std::isfinite(eps_smooth))
        throw ValidationError(fmt::format("burgers: eps_smooth must be positive, got {}", eps_smooth));
}

BurgersWave BurgersWave::from(const PhysParamsOne& p) {
    return {p.u_minus + p.c(), p.u_plus() + p.c(), p.eps_smooth};
}

BurgersWave BurgersWave::from(const PhysParamsTwo& p) {
    return {p.u_minus + p.c(), p.u_plus() + p.c(), p.eps_smooth};
}

namespace {

struct InitialJet {
    double w, d1, d2, d3;
};

// Initial data and its x-derivatives. sech² is formed from q = e^{-2|z|},
// which cannot overflow; tanh saturates to ±1 exactly well before |z| = 40.
InitialJet initial_jet(const BurgersWave& wv, double x0) {
    const double mid = 0.5 * (wv.w_plus + wv.w_minus);
    const double half = 0.5 * (wv.w_plus - wv.w_minus);
    const double e = wv.eps_smooth;
    const double z = e * x0;
    double s, sech2;
    if (std::abs(z) > 40.0) {
        s = z > 0.0 ? 1.0 : -1.0;
        const double q = std::exp(-2.0 * std::abs(z));
        sech2 = 4.0 * q;
    } else {
        s = std::tanh(z);
        const double q = std::exp(-2.0 * std::abs(z));
        sech2 = 4.0 * q / ((1.0 + q) * (1.0 + q));
    }
    return {mid + half * s,
            half * e * sech2,
            -2.0 * half * e * e * s * sech2,
            -2.0 * half * e * e * e * sech2 * (1.0 - 3.0 * s * s)};
}

double initial_value(const BurgersWave& wv, double x0) {
    const double z = wv.eps_smooth * x0;
    const double s = std::abs(z) > 40.0 ? (z > 0.0 ? 1.0 : -1.0) : std::tanh(z);
    // Anchor at the nearer far-field state so the value never rounds past it.
    const double half = 0.5 * (wv.w_plus - wv.w_minus);
    return s < 0.0 ? wv.w_minus + half * (1.0 + s) : wv.w_plus - half * (1.0 - s);
}

// Foot of the characteristic through (t, x): root of x0 + t·w0(x0) = x.
double characteristic_foot(const BurgersWave& wv, double t, double x) {
    if (t < 0.0 || !std::isfinite(t)) throw ValidationError(fmt::format("burgers: t must be >= 0, got {}", t));
    if (!std::isfinite(x)) throw ValidationError("burgers: x must be finite");
    if (t == 0.0) return x;

    double lo = x - t * wv.w_plus;
    double hi = x - t * wv.w_minus;
    const double tol = 1e-13 * (1.0 + std::abs(x));
    const double guess = std::clamp(x / t, wv.w_minus, wv.w_plus);
    double x0 = std::clamp(x - t * guess, lo, hi);

    for (int it = 0; it < 200; ++it) {
        const InitialJet j = initial_jet(wv, x0);
        const double F = x0 + t * j.w - x;
        if (std::abs(F) <= tol) return x0;
        if (F < 0.0)
            lo = x0;
        else
            hi = x0;
        double next = x0 - F / (1.0 + t * j.d1);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        // Bracket exhausted at the rounding level: F cannot be resolved further.
        if (next == x0 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))
            return next;
        x0 = next;
    }
    throw NumericalError(fmt::format("burgers: characteristic solve did not converge at t={} x={}", t, x));
}

}  // namespace

double burgers_value(const BurgersWave& wave, double t, double x) {
    return initial_value(wave, characteristic_foot(wave, t, x));
}

BurgersJet burgers_derivatives(const BurgersWave& wave, double t, double x) {
    const double x0 = characteristic_foot(wave, t, x);
    const InitialJet j = initial_jet(wave, x0);
    const double D = 1.0 + t * j.d1;
    const double D2 = D * D;
    const double D4 = D2 * D2;
    BurgersJet out;
    out.foot = x0;
    out.w = initial_value(wave, x0);
    out.wx = j.d1 / D;
    out.wxx = j.d2 / (D2 * D);
    out.wxxx = j.d3 / D4 - 3.0 * t * j.d2 * j.d2 / (D4 * D);
    return out;
}

double riemann_fan(const BurgersWave& wave, double t, double x) {
    if (!(t > 0.0)) throw ValidationError(fmt::format("riemann_fan: t must be positive, got {}", t));
    if (x <= wave.w_minus * t) return wave.w_minus;
    if (x >= wave.w_plus * t) return wave.w_plus;
    return x / t;
}

namespace {

// phi_per_logn: coefficient k in φʳ = k·ln nʳ.
RarefactionProfile build_profile(const BurgersWave& wave, double c, double n_minus, double u_minus,
                                 double phi_per_logn, double t, const Grid1D& grid) {
    wave.validate();
    if (t < 0.0 || !std::isfinite(t)) throw ValidationError(fmt::format("profile: t must be >= 0, got {}", t));
    RarefactionProfile p;
    p.time = t;
    p.nr = p.ur = p.phir = Field(grid);
    p.dnr = p.dur = p.dphir = Field(grid);
    p.d2nr = p.d2ur = p.d2phir = Field(grid);
    p.d3ur = p.dt_dphir = Field(grid);

    const double tb = t + 1.0;
    const double k_over_c = phi_per_logn / c;
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const BurgersJet j = burgers_derivatives(wave, tb, grid.x(i));
        const double u = j.w - c;
        const double n = n_minus * std::exp((u - u_minus) / c);
        const double gx = j.wx / c;  // ∂x ln nʳ
        p.ur[i] = u;
        p.dur[i] = j.wx;
        p.d2ur[i] = j.wxx;
        p.d3ur[i] = j.wxxx;
        p.nr[i] = n;
        p.dnr[i] = n * gx;
        p.d2nr[i] = n * (j.wxx / c + gx * gx);
        p.phir[i] = phi_per_logn == -1.0 ? -std::log(n) : phi_per_logn * std::log(n);
        p.dphir[i] = k_over_c * j.wx;
        p.d2phir[i] = k_over_c * j.wxx;
        // Burgers: ∂t w_x = −(w_x² + w·w_xx)
        p.dt_dphir[i] = -k_over_c * (j.wx * j.wx + j.w * j.wxx);
    }
    return p;
}

}  // namespace

RarefactionProfile profile_onefluid(const PhysParamsOne& params, double t, const Grid1D& grid) {
    params.validate();
    return build_profile(BurgersWave::from(params), params.c(), params.n_minus, params.u_minus, -1.0, t, grid);
}

RarefactionProfile profile_twofluid(const PhysParamsTwo& params, double t, const Grid1D& grid) {
    params.validate();
    return build_profile(BurgersWave::from(params), params.c(), params.n_minus, params.u_minus,
                         params.phi_coeff(), t, grid);
}

FanExtent fan_extent(const BurgersWave& wave, double t, double tail_widths) {
    const double tail = tail_widths / wave.eps_smooth;
    return {wave.w_minus * t - tail, wave.w_plus * t + tail};
}

DecayRateReport verify_decay_rates(const BurgersWave& wave, double p, std::span<const double> times) {
    wave.validate();
    if (times.size() < 2) throw ValidationError("verify_decay_rates: need at least two times");
    const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
    if (!(*tmin > 0.0) || *tmax < 100.0 * *tmin)
        throw ValidationError("verify_decay_rates: times must be positive and span at least two decades");

    DecayRateReport r;
    r.p = p;
    const double eps = wave.eps_smooth;
    const double delta = wave.delta();
    for (double t : times) {
        const double tb = t + 1.0;
        // Beyond 40/ε from the fan the derivative is below e^{-80} relative.
        const FanExtent ext = fan_extent(wave, tb, 40.0);
        const double scale = std::min(1.0 / eps, delta * tb + 1.0 / eps);
        const Grid1D grid = Grid1D::with_spacing(ext.left, ext.right, scale / 50.0);
        Field wx(grid);
        for (std::size_t i = 0; i < grid.n_cells; ++i) wx[i] = burgers_derivatives(wave, tb, grid.x(i)).wx;
        const double edge = std::max(wx.front(), wx.back());
        if (edge > 1e-12 * wx.max_abs())
            throw ValidationError("verify_decay_rates: grid too small to contain the fan");
        r.times.push_back(t);
        r.norms.push_back(lp_norm(wx, p));
    }

    const DecayFit fit = fit_decay(r.times, r.norms);
    r.slope = fit.slope;
    r.fit_t_lo = fit.t_lo;
    r.fit_t_hi = fit.t_hi;
    const double q = std::isinf(p) ? 0.0 : 1.0 / p;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        const double envelope = std::min(delta * std::pow(eps, 1.0 - q), std::pow(delta, q) * std::pow(r.times[k], -1.0 + q));
        r.envelope_constant = std::max(r.envelope_constant, r.norms[k] / envelope);
    }
    return r;
}

}  // namespace nsp
