#include "nsp/diagnostics.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace nsp {

double psi_potential(double n, double nr, double A) {
    if (!(n > 0.0) || !(nr > 0.0)) throw ValidationError(fmt::format("psi_potential: need n, nr > 0, got {} and {}", n, nr));
    const double d = (n - nr) / nr;
    if (std::abs(d) < 1e-2) {
        // Σ_{k≥2} (−1)^k (k−1)/k d^k; the closed form cancels badly here.
        double term = d * d;
        double sum = 0.0;
        for (int k = 2; k < 12; ++k) {
            sum += (k % 2 == 0 ? 1.0 : -1.0) * (k - 1.0) / k * term;
            term *= d;
        }
        return A * sum;
    }
    return A * (std::log(n / nr) + nr / n - 1.0);
}

namespace {

Field squared(const Field& f) { return f.map([](double v) { return v * v; }); }

double sup_abs(const Field& f) { return f.max_abs(); }

struct Perturbation1 {
    Field n, u, phi;
    Field n_x, u_x, phi_x;
};

Perturbation1 perturbation_of(const FluidState& s, const RarefactionProfile& pr) {
    require_same_grid(s.n, pr.nr, "diagnostics");
    Perturbation1 d;
    d.n = s.n - pr.nr;
    d.u = s.u - pr.ur;
    d.phi = s.phi - pr.phir;
    d.n_x = ddx(d.n);
    d.u_x = ddx(d.u);
    d.phi_x = ddx(d.phi);
    return d;
}

ZeroOrderEnergy zero_order_from(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p,
                                const Perturbation1& d) {
    const Grid1D& g = s.n.grid();
    const std::size_t N = g.n_cells;
    Field kin(g), pres(g), quad(g), cubic(g);
    for (std::size_t i = 0; i < N; ++i) {
        const double ph = d.phi[i];
        kin[i] = s.n[i] * d.u[i] * d.u[i];
        pres[i] = 2.0 * s.n[i] * psi_potential(s.n[i], pr.nr[i], p.A);
        quad[i] = ph * ph * pr.nr[i];
        cubic[i] = -2.0 / 3.0 * ph * ph * ph * pr.nr[i];
    }
    ZeroOrderEnergy z;
    z.kinetic = integrate(kin);
    z.pressure = integrate(pres);
    z.potential_quad = integrate(quad);
    z.potential_grad = integrate(squared(d.phi_x));
    z.potential_cubic = integrate(cubic);
    return z;
}

FirstOrderEnergy first_order_from(const FluidState& s, const Perturbation1& d) {
    const Grid1D& g = s.n.grid();
    Field dens(g), cross(g);
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        dens[i] = d.n_x[i] * d.n_x[i] / (s.n[i] * s.n[i]);
        cross[i] = 2.0 * d.u[i] * d.n_x[i];
    }
    FirstOrderEnergy f;
    f.density_grad = integrate(dens);
    f.cross = integrate(cross);
    f.velocity_grad = integrate(squared(d.u_x));
    return f;
}

DissipationRates dissipation_from(const RarefactionProfile& pr, const Perturbation1& d) {
    const Grid1D& g = d.n.grid();
    Field wave(g);
    for (std::size_t i = 0; i < g.n_cells; ++i)
        wave[i] = pr.dur[i] * (d.u[i] * d.u[i] + d.n_x[i] * d.n_x[i] + d.u_x[i] * d.u_x[i]);
    DissipationRates r;
    r.wave_weighted = integrate(wave);
    r.density = integrate(squared(d.n_x));
    r.visc = integrate(squared(d.u_x));
    r.potential = integrate(squared(d.phi_x)) + integrate(squared(d2dx2(d.phi)));
    r.flat = r.density + r.visc + r.potential + integrate(squared(d2dx2(d.u)));
    return r;
}

}  // namespace

ZeroOrderEnergy zero_order_energy(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p) {
    return zero_order_from(s, pr, p, perturbation_of(s, pr));
}

FirstOrderEnergy first_order_energy(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne&) {
    return first_order_from(s, perturbation_of(s, pr));
}

DissipationRates dissipation_rates(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne&) {
    return dissipation_from(pr, perturbation_of(s, pr));
}

double lyapunov_weight(const PhysParamsOne& p) { return 4.0 * std::max(1.0, 1.0 / (p.n_minus * p.n_minus)); }

double lyapunov_weight(const PhysParamsTwo& p) {
    const double base = 4.0 * std::max(1.0, 1.0 / (p.n_minus * p.n_minus));
    const double n_max = std::max(p.n_minus, p.n_plus);
    return std::max(base, 2.0 * std::max(p.m_i, p.m_e) * n_max);
}

double lyapunov_block_margin(const Field& n, double weight, double mass) {
    double margin = infinity;
    for (double v : n.values()) {
        const double a = weight * mass * v;
        const double d = 1.0 / (v * v);
        const double b = mass;
        const double lam = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
        margin = std::min(margin, lam);
    }
    return margin;
}

EnergyReport energy_report(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p) {
    const Perturbation1 d = perturbation_of(s, pr);
    EnergyReport r;
    r.time = s.time;
    r.weight = lyapunov_weight(p);
    r.zero = zero_order_from(s, pr, p, d);
    r.first = first_order_from(s, d);
    r.dissipation = dissipation_from(pr, d);
    r.E_zero = r.weight * r.zero.total();
    r.E_first = r.first.total();
    r.sup_n = sup_abs(d.n);
    r.sup_u = sup_abs(d.u);
    r.sup_distance = std::max(r.sup_n, r.sup_u);
    r.sup_phi = sup_abs(d.phi);
    double gap = 0.0;
    for (std::size_t i = 0; i < s.n.size(); ++i) gap = std::max(gap, std::abs(s.phi[i] + std::log(s.n[i])));
    r.quasineutral_gap = gap;
    return r;
}

double poisson_identity_gap(const FluidState& s, const RarefactionProfile& pr) {
    const Field phi_t = s.phi - pr.phir;
    const Field lhs = d2dx2(phi_t);
    const Field lap_r = d2dx2(pr.phir);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < s.n.size(); ++i) {
        const double n_t = s.n[i] - pr.nr[i];
        const double rhs = n_t + pr.nr[i] * (1.0 - std::exp(-phi_t[i])) - lap_r[i];
        worst = std::max(worst, std::abs(lhs[i] - rhs));
    }
    return worst;
}

void TwoFluidWeights::validate(const PhysParamsTwo& p) const {
    if (!(beta > 0.0) || !(gamma > 0.0)) throw ValidationError("two-fluid weights must be positive");
    if (std::abs(p.m_i * beta - p.m_e * gamma) > 1e-14 * p.m_i * beta)
        throw ValidationError(fmt::format("two-fluid weights violate m_i*beta = m_e*gamma ({} vs {})", p.m_i * beta,
                                          p.m_e * gamma));
}

namespace {

struct SpeciesPert {
    Field n, u, n_x, u_x;
};

SpeciesPert species_pert(const Field& n, const Field& u, const RarefactionProfile& pr) {
    require_same_grid(n, pr.nr, "two-fluid diagnostics");
    SpeciesPert d;
    d.n = n - pr.nr;
    d.u = u - pr.ur;
    d.n_x = ddx(d.n);
    d.u_x = ddx(d.u);
    return d;
}

}  // namespace

TwoFluidEnergy twofluid_energy(const TwoFluidState& s, const RarefactionProfile& pr, const PhysParamsTwo& p,
                               const TwoFluidWeights& w) {
    w.validate(p);
    const Grid1D& g = s.n_i.grid();
    const std::size_t N = g.n_cells;
    const SpeciesPert di = species_pert(s.n_i, s.u_i, pr);
    const SpeciesPert de = species_pert(s.n_e, s.u_e, pr);
    const Field phi_x = ddx(s.phi - pr.phir);
    const double C = lyapunov_weight(p);
    const double bg = w.beta + w.gamma;
    const double sqi = std::sqrt(w.gamma * p.m_i);
    const double sqe = std::sqrt(w.beta * p.m_e);

    Field kin(g), pres(g), cbg(g), dens(g), cross(g), vel(g), quad(g), corr_n(g), corr_t(g);
    for (std::size_t k = 0; k < N; ++k) {
        const double ui = di.u[k], ue = de.u[k];
        const double ni = s.n_i[k], ne = s.n_e[k];
        const double dur = pr.dur[k];
        kin[k] = C * (p.m_i * ni * ui * ui + p.m_e * ne * ue * ue);
        pres[k] = 2.0 * C * (ni * psi_potential(ni, pr.nr[k], p.T_i) + ne * psi_potential(ne, pr.nr[k], p.T_e));
        cbg[k] = C / bg * (-w.beta * p.m_i * ui + w.gamma * p.m_e * ue) * phi_x[k] * dur;
        dens[k] = di.n_x[k] * di.n_x[k] / (ni * ni) + de.n_x[k] * de.n_x[k] / (ne * ne);
        cross[k] = 2.0 * (p.m_i * ui * di.n_x[k] + p.m_e * ue * de.n_x[k]);
        vel[k] = p.m_i * di.u_x[k] * di.u_x[k] + p.m_e * de.u_x[k] * de.u_x[k];
        const double sq = sqi * ui + sqe * ue;
        quad[k] = pr.nr[k] * sq * sq * dur / (2.0 * bg);
        corr_n[k] = dur / (2.0 * bg) *
                    (w.gamma * p.m_i * di.n[k] * ui * ui + w.beta * p.m_e * de.n[k] * ue * ue +
                     w.beta * p.m_i * de.n[k] * ui * ue + w.gamma * p.m_e * di.n[k] * ui * ue);
        corr_t[k] = -(w.beta * p.m_i * ui - w.gamma * p.m_e * ue) * pr.dt_dphir[k] * dur / (2.0 * bg);
    }
    TwoFluidEnergy e;
    e.weight = C;
    e.kinetic = integrate(kin);
    e.pressure = integrate(pres);
    e.potential_grad = C * integrate(squared(phi_x));
    e.cross_beta_gamma = integrate(cbg);
    e.density_grad = integrate(dens);
    e.cross = integrate(cross);
    e.velocity_grad = integrate(vel);
    e.quad_form = integrate(quad);
    e.density_correction = integrate(corr_n);
    e.profile_time_correction = integrate(corr_t);
    return e;
}

double twofluid_half_I0_plus_I6(const TwoFluidState& s, const RarefactionProfile& pr, const PhysParamsTwo& p,
                                const TwoFluidWeights& w) {
    w.validate(p);
    const Grid1D& g = s.n_i.grid();
    const double bg = w.beta + w.gamma;
    Field f(g);
    for (std::size_t k = 0; k < g.n_cells; ++k) {
        const double ui = s.u_i[k] - pr.ur[k];
        const double ue = s.u_e[k] - pr.ur[k];
        const double dur = pr.dur[k];
        const double half_i0 = 0.5 * (p.m_i * s.n_i[k] * ui * ui + p.m_e * s.n_e[k] * ue * ue) * dur;
        // ∂t∂x φ̃ = n_e ũ_e − n_i ũ_i − ∂t∂x φʳ
        const double dtdx_phi = s.n_e[k] * ue - s.n_i[k] * ui - pr.dt_dphir[k];
        const double i6 = (w.beta * p.m_i * ui - w.gamma * p.m_e * ue) * dtdx_phi * dur / (2.0 * bg);
        f[k] = half_i0 + i6;
    }
    return integrate(f);
}

ConvergenceRow convergence_row(const FluidState& s, const RarefactionProfile& pr) {
    require_same_grid(s.n, pr.nr, "convergence_row");
    return {s.time, sup_abs(s.n - pr.nr), sup_abs(s.u - pr.ur), sup_abs(s.phi - pr.phir)};
}

ConvergenceRow convergence_row(const TwoFluidState& s, const RarefactionProfile& pr) {
    require_same_grid(s.n_i, pr.nr, "convergence_row");
    return {s.time, std::max(sup_abs(s.n_i - pr.nr), sup_abs(s.n_e - pr.nr)),
            std::max(sup_abs(s.u_i - pr.ur), sup_abs(s.u_e - pr.ur)), sup_abs(ddx(s.phi - pr.phir))};
}

std::vector<ConvergenceRow> convergence_report(const Trajectory& traj) {
    if (traj.snapshots.size() < 2) throw ValidationError("convergence_report: need at least two snapshots");
    std::vector<ConvergenceRow> rows;
    rows.reserve(traj.snapshots.size());
    for (const Snapshot& s : traj.snapshots) rows.push_back({s.t, s.sup_n, s.sup_u, s.sup_phi});
    return rows;
}

Snapshot snapshot_onefluid(const FluidState& s, const PhysParamsOne& p, long step) {
    const RarefactionProfile pr = profile_onefluid(p, s.time, s.n.grid());
    const EnergyReport e = energy_report(s, pr, p);
    Snapshot sn;
    sn.t = s.time;
    sn.step = step;
    sn.E_zero = e.E_zero;
    sn.E_first = e.E_first;
    sn.lyapunov = e.lyapunov();
    sn.D_visc = e.dissipation.visc;
    sn.D_density = e.dissipation.density;
    sn.D_potential = e.dissipation.potential;
    sn.D_wave = e.dissipation.wave_weighted;
    sn.D_flat = e.dissipation.flat;
    sn.sup_n = e.sup_n;
    sn.sup_u = e.sup_u;
    sn.sup_phi = e.sup_phi;
    sn.quasineutral_gap = e.quasineutral_gap;
    const Field lap = d2dx2(s.phi);
    double gap = 0.0;
    for (std::size_t i = 1; i + 1 < s.n.size(); ++i)
        gap = std::max(gap, std::abs(s.n[i] - std::exp(-s.phi[i]) - lap[i]));
    sn.elliptic_gap = gap;
    sn.mass = integrate(s.n);
    return sn;
}

Snapshot snapshot_twofluid(const TwoFluidState& s, const PhysParamsTwo& p, long step) {
    const RarefactionProfile pr = profile_twofluid(p, s.time, s.n_i.grid());
    const TwoFluidWeights w = TwoFluidWeights::defaults(p);
    const TwoFluidEnergy e = twofluid_energy(s, pr, p, w);
    const SpeciesPert di = species_pert(s.n_i, s.u_i, pr);
    const SpeciesPert de = species_pert(s.n_e, s.u_e, pr);
    const Field phi_t = s.phi - pr.phir;
    const Field phi_x = ddx(phi_t);
    const Grid1D& g = s.n_i.grid();

    Field wave(g);
    for (std::size_t k = 0; k < g.n_cells; ++k) {
        wave[k] = pr.dur[k] * (di.u[k] * di.u[k] + di.n_x[k] * di.n_x[k] + di.u_x[k] * di.u_x[k] +
                               de.u[k] * de.u[k] + de.n_x[k] * de.n_x[k] + de.u_x[k] * de.u_x[k]);
    }
    Snapshot sn;
    sn.t = s.time;
    sn.step = step;
    sn.E_zero = e.E_zero();
    sn.E_first = e.E_first();
    sn.lyapunov = e.total();
    sn.D_visc = integrate(squared(di.u_x)) + integrate(squared(de.u_x));
    sn.D_density = integrate(squared(di.n_x)) + integrate(squared(de.n_x));
    sn.D_potential = integrate(squared(phi_x)) + integrate(squared(d2dx2(phi_t)));
    sn.D_wave = integrate(wave);
    sn.D_flat = sn.D_visc + sn.D_density + sn.D_potential + integrate(squared(d2dx2(di.u))) +
                integrate(squared(d2dx2(de.u)));
    sn.sup_n = std::max(sup_abs(di.n), sup_abs(de.n));
    sn.sup_u = std::max(sup_abs(di.u), sup_abs(de.u));
    sn.sup_phi = sup_abs(phi_x);
    sn.species_gap = sup_abs(s.u_i - s.u_e);
    sn.quad_form = e.quad_form;
    sn.mass = integrate(s.n_i) + integrate(s.n_e);
    return sn;
}

EnvelopeCheck envelope_nonincreasing(const std::vector<double>& t, const std::vector<double>& v, double t_start,
                                     double window, double slack) {
    if (t.size() != v.size()) throw ValidationError("envelope: length mismatch");
    if (!(window > 0.0)) throw ValidationError("envelope: window must be positive");
    EnvelopeCheck c;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_start) continue;
        const auto w = static_cast<std::size_t>((t[k] - t_start) / window);
        if (c.window_max.size() <= w) c.window_max.resize(w + 1, -infinity);
        c.window_max[w] = std::max(c.window_max[w], v[k]);
    }
    double running_min = infinity;
    for (double m : c.window_max) {
        if (m == -infinity) continue;
        if (running_min < infinity && running_min > 0.0) c.worst_ratio = std::max(c.worst_ratio, m / running_min);
        if (m > slack * running_min) c.holds = false;
        running_min = std::min(running_min, m);
    }
    return c;
}

}  // namespace nsp
