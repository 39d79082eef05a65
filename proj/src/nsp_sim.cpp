#include "nsp/nsp_sim.hpp"

#include <algorithm>
#include <random>

#include <fmt/core.h>

#include "nsp/diagnostics.hpp"
#include "nsp/poisson.hpp"

namespace nsp {

namespace {

// Fastest signal speed magnitude of the two-fluid model relative to the flow.
double twofluid_sound(const PhysParamsTwo& p) {
    return std::max({p.c(), std::sqrt(p.T_i / p.m_i), std::sqrt(p.T_e / p.m_e)});
}

struct WaveSpan {
    BurgersWave wave;
    double sound = 0.0;
    double u_minus = 0.0;
    double u_plus = 0.0;
};

WaveSpan wave_span(const SimConfig& cfg) {
    if (cfg.model == Model::one_fluid)
        return {BurgersWave::from(cfg.one), cfg.one.c(), cfg.one.u_minus, cfg.one.u_plus()};
    return {BurgersWave::from(cfg.two), twofluid_sound(cfg.two), cfg.two.u_minus, cfg.two.u_plus()};
}

}  // namespace

void validate_config(const SimConfig& cfg) {
    if (cfg.model == Model::one_fluid)
        cfg.one.validate();
    else
        cfg.two.validate();
    if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final))
        throw ValidationError(fmt::format("config: t_final must be >= 0, got {}", cfg.t_final));
    if (!(cfg.cfl_number > 0.0 && cfg.cfl_number <= 1.0))
        throw ValidationError(fmt::format("config: cfl_number must lie in (0, 1], got {}", cfg.cfl_number));
    if (!(cfg.viscous_theta >= 0.5 && cfg.viscous_theta <= 1.0))
        throw ValidationError(fmt::format("config: viscous_theta must lie in [0.5, 1], got {}", cfg.viscous_theta));
    if (!(cfg.output_interval > 0.0))
        throw ValidationError(fmt::format("config: output_interval must be positive, got {}", cfg.output_interval));
    if (!(cfg.dump_interval >= 0.0))
        throw ValidationError(fmt::format("config: dump_interval must be >= 0, got {}", cfg.dump_interval));
    if (!(cfg.grid.dx > 0.0)) throw ValidationError(fmt::format("config: dx must be positive, got {}", cfg.grid.dx));
    if (!(cfg.grid.margin >= 0.0)) throw ValidationError("config: margin must be >= 0");
    const PerturbationSpec& ps = cfg.perturbation;
    if (!(ps.amplitude >= 0.0) || !std::isfinite(ps.amplitude))
        throw ValidationError(fmt::format("config: perturbation amplitude must be >= 0, got {}", ps.amplitude));
    if (!(ps.width > 0.0)) throw ValidationError("config: perturbation width must be positive");
    if (ps.bumps < 1) throw ValidationError("config: perturbation bumps must be >= 1");
}

Grid1D simulation_grid(const SimConfig& cfg) {
    const WaveSpan ws = wave_span(cfg);
    const double horizon = cfg.t_final + 1.0;
    const double slowest = std::min(0.0, ws.u_minus - ws.sound);
    const double fastest = std::max(0.0, ws.u_plus + ws.sound);
    // Acoustic pulses also spread diffusively; keep their tails off the pinned ends.
    // The fan itself carries tanh tails of width 1/ε beyond its characteristic edges.
    const double pad = cfg.grid.margin + 8.0 * std::sqrt(horizon) + 5.0 / ws.wave.eps_smooth;
    const double x_min = cfg.grid.x_min.value_or(-pad + slowest * horizon);
    const double x_max = cfg.grid.x_max.value_or(pad + fastest * horizon);
    return Grid1D::with_spacing(x_min, x_max, cfg.grid.dx);
}

void validate_domain(const SimConfig& cfg, const Grid1D& grid) {
    const WaveSpan ws = wave_span(cfg);
    // Profile time t corresponds to Burgers time t+1; the fan edges move linearly.
    const FanExtent start = fan_extent(ws.wave, 1.0);
    const FanExtent end = fan_extent(ws.wave, cfg.t_final + 1.0);
    const double need_left = std::min(start.left, end.left);
    const double need_right = std::max(start.right, end.right);
    if (grid.x_min > need_left || grid.x_max < need_right)
        throw ValidationError(fmt::format(
            "domain [{}, {}] does not contain the rarefaction fan up to t_final={} (needs [{}, {}])", grid.x_min,
            grid.x_max, cfg.t_final, need_left, need_right));
    if (cfg.perturbation.amplitude > 0.0) {
        const Field pert = perturbation_field(cfg.perturbation, grid);
        const double edge = std::max(std::abs(pert.front()), std::abs(pert.back()));
        if (edge > 1e-12 * cfg.perturbation.amplitude)
            throw ValidationError("perturbation is not contained in the domain");
    }
}

Field perturbation_field(const PerturbationSpec& spec, const Grid1D& grid) {
    const double a = spec.amplitude;
    const double c = spec.center;
    const double w = spec.width;
    switch (spec.shape) {
        case PerturbationSpec::Shape::gaussian:
            return Field::from_function(grid, [=](double x) {
                const double r = (x - c) / w;
                return a * std::exp(-r * r);
            });
        case PerturbationSpec::Shape::bump:
            return Field::from_function(grid, [=](double x) {
                const double r = (x - c) / w;
                return std::abs(r) < 1.0 ? a * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
            });
        case PerturbationSpec::Shape::random: {
            std::mt19937_64 rng(spec.seed);
            std::uniform_real_distribution<double> amp(-a, a);
            std::uniform_real_distribution<double> pos(c - 4.0 * w, c + 4.0 * w);
            std::vector<std::pair<double, double>> bumps;
            for (int k = 0; k < spec.bumps; ++k) {
                const double ak = amp(rng);
                bumps.emplace_back(ak, pos(rng));
            }
            return Field::from_function(grid, [&](double x) {
                double v = 0.0;
                for (const auto& [ak, ck] : bumps) {
                    const double r = (x - ck) / w;
                    v += ak * std::exp(-r * r);
                }
                return v;
            });
        }
    }
    throw ValidationError("unknown perturbation shape");
}

namespace {

using Vec = std::vector<double>;

bool perturbs_density(const PerturbationSpec& p) { return p.target != PerturbationSpec::Target::velocity; }
bool perturbs_velocity(const PerturbationSpec& p) { return p.target != PerturbationSpec::Target::density; }

void pin(Field& f, double left, double right) {
    f[0] = left;
    f[f.size() - 1] = right;
}

void require_positive_density(const Vec& n, const Grid1D& g, const char* species) {
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(n[i] > 0.0) || !std::isfinite(n[i]))
            throw NumericalError(fmt::format("positivity lost: {} density {} at x={}", species, n[i], g.x(i)));
    }
}

}  // namespace

FluidState initial_state_onefluid(const SimConfig& cfg, const Grid1D& grid) {
    const PhysParamsOne& p = cfg.one;
    p.validate();
    const RarefactionProfile pr = profile_onefluid(p, 0.0, grid);
    FluidState s;
    s.n = pr.nr;
    s.u = pr.ur;
    if (cfg.perturbation.amplitude > 0.0) {
        const Field pert = perturbation_field(cfg.perturbation, grid);
        if (perturbs_density(cfg.perturbation)) s.n += pert;
        if (perturbs_velocity(cfg.perturbation)) s.u += pert;
    }
    pin(s.n, p.n_minus, p.n_plus);
    pin(s.u, p.u_minus, p.u_plus());
    if (s.n.min() <= 0.0) throw ValidationError(fmt::format("initial density not positive (min {})", s.n.min()));
    const EllipticSolveReport rep = solve_poisson_boltzmann(s.n, p.phi_minus(), p.phi_plus());
    if (!rep.converged) throw NumericalError("initial Poisson-Boltzmann solve did not converge");
    s.phi = rep.phi;
    return s;
}

TwoFluidState initial_state_twofluid(const SimConfig& cfg, const Grid1D& grid) {
    const PhysParamsTwo& p = cfg.two;
    p.validate();
    const RarefactionProfile pr = profile_twofluid(p, 0.0, grid);
    TwoFluidState s;
    s.n_i = pr.nr;
    s.u_i = pr.ur;
    if (cfg.perturbation.amplitude > 0.0) {
        const Field pert = perturbation_field(cfg.perturbation, grid);
        if (perturbs_density(cfg.perturbation)) s.n_i += pert;
        if (perturbs_velocity(cfg.perturbation)) s.u_i += pert;
    }
    pin(s.n_i, p.n_minus, p.n_plus);
    pin(s.u_i, p.u_minus, p.u_plus());
    s.n_e = s.n_i;
    s.u_e = s.u_i;
    if (s.n_i.min() <= 0.0) throw ValidationError(fmt::format("initial density not positive (min {})", s.n_i.min()));
    const EllipticSolveReport rep = solve_poisson_linear(s.n_i - s.n_e, p.phi_minus(), p.phi_plus());
    s.phi = rep.phi;
    return s;
}

AnyState initial_state(const SimConfig& cfg) {
    validate_config(cfg);
    const Grid1D grid = simulation_grid(cfg);
    validate_domain(cfg, grid);
    if (cfg.model == Model::one_fluid) return initial_state_onefluid(cfg, grid);
    return initial_state_twofluid(cfg, grid);
}

double cfl_dt(const FluidState& s, const PhysParamsOne& p, double cfl_number) {
    double speed = 0.0;
    for (double u : s.u.values()) speed = std::max(speed, std::abs(u));
    return cfl_number * s.u.grid().dx / (speed + p.c());
}

double cfl_dt(const TwoFluidState& s, const PhysParamsTwo& p, double cfl_number) {
    double speed = 0.0;
    for (double u : s.u_i.values()) speed = std::max(speed, std::abs(u));
    for (double u : s.u_e.values()) speed = std::max(speed, std::abs(u));
    const double advective = s.u_i.grid().dx / (speed + twofluid_sound(p));
    // Explicit electrostatic coupling: keep ω_p·dt small.
    const double n_max = std::max(s.n_i.max(), s.n_e.max());
    const double omega_p = std::sqrt(n_max * (1.0 / p.m_i + 1.0 / p.m_e));
    return cfl_number * std::min(advective, 1.0 / omega_p);
}

namespace {

struct Species {
    double mass = 1.0;
    double temperature = 1.0;
    double viscosity = 1.0;
    double charge = 1.0;  // +1: force +n∂xφ on the right side; −1: −n∂xφ
    double sound = 1.0;
    double n_left = 1.0, n_right = 1.0, u_left = 0.0, u_right = 0.0;
};

struct Flux {
    double left = 0.0;
    double right = 0.0;
};

// −∂x(n u) in flux form: central face flux plus a fourth-difference term on
// faces whose stencil stays inside the domain.
Flux continuity_rate(const Vec& n, const Vec& u, double dx, double diss, Vec& dn) {
    const std::size_t N = n.size();
    double prev = 0.0;
    Flux f;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        double F = 0.5 * (n[i] * u[i] + n[i + 1] * u[i + 1]);
        if (i >= 1 && i + 2 < N) F += diss * (n[i + 2] - 3.0 * n[i + 1] + 3.0 * n[i] - n[i - 1]);
        if (i == 0)
            f.left = F;
        else
            dn[i] = -(F - prev) / dx;
        prev = F;
    }
    f.right = prev;
    dn[0] = 0.0;
    dn[N - 1] = 0.0;
    return f;
}

// Advection, pressure and electrostatic parts of ∂t u.
void momentum_rate(const Vec& n, const Vec& u, const Vec& phi, const Species& sp, double dx, Vec& du) {
    const std::size_t N = n.size();
    const double h2 = 2.0 * dx;
    const double tm = sp.temperature / sp.mass;
    const double qm = sp.charge / sp.mass;
    du[0] = du[N - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < N; ++i) {
        du[i] = -u[i] * (u[i + 1] - u[i - 1]) / h2 - tm * (n[i + 1] - n[i - 1]) / (h2 * n[i]) +
                qm * (phi[i + 1] - phi[i - 1]) / h2;
    }
}

// (μ/(m n)) ∂x² u
void viscous_rate(const Vec& n, const Vec& u, const Species& sp, double dx, Vec& vu) {
    const std::size_t N = n.size();
    const double k = sp.viscosity / (sp.mass * dx * dx);
    vu[0] = vu[N - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < N; ++i) vu[i] = k / n[i] * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
}

// Solves u − τ (μ/(m n)) ∂x² u = rhs with pinned end values.
Vec viscous_solve(const Vec& n, const Vec& rhs, const Species& sp, double dx, double tau) {
    const std::size_t N = n.size();
    const std::size_t m = N - 2;
    const double k = tau * sp.viscosity / (sp.mass * dx * dx);
    Vec lower(m - 1), upper(m - 1), diag(m), b(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double r = k / n[j + 1];
        diag[j] = 1.0 + 2.0 * r;
        if (j > 0) lower[j - 1] = -r;
        if (j + 1 < m) upper[j] = -r;
        b[j] = rhs[j + 1];
    }
    b.front() += k / n[1] * sp.u_left;
    b.back() += k / n[N - 2] * sp.u_right;
    const Vec x = tridiag_solve(lower, diag, upper, b);
    Vec u(N);
    u.front() = sp.u_left;
    u.back() = sp.u_right;
    std::copy(x.begin(), x.end(), u.begin() + 1);
    return u;
}

double max_speed(const Vec& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

// One species through one Heun stage pair. The potential callback recomputes φ
// from the stage densities of all species, so stages are driven externally.
struct SpeciesStage {
    Vec n, u;
    Vec dn, du_explicit, du_visc;
    Flux flux;
};

void evaluate_rates(SpeciesStage& st, const Vec& phi, const Species& sp, double dx, double diss) {
    const std::size_t N = st.n.size();
    st.dn.resize(N);
    st.du_explicit.resize(N);
    st.flux = continuity_rate(st.n, st.u, dx, diss, st.dn);
    momentum_rate(st.n, st.u, phi, sp, dx, st.du_explicit);
}

// Predictor (first) or corrector (second) update of one species.
SpeciesStage advance(const SpeciesStage& base, const SpeciesStage* pred, const Species& sp, double dx, double dt,
                     double theta, const Grid1D& g, const char* name) {
    const std::size_t N = base.n.size();
    SpeciesStage out;
    out.n.resize(N);
    Vec rhs(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double dn = pred ? 0.5 * (base.dn[i] + pred->dn[i]) : base.dn[i];
        const double du = pred ? 0.5 * (base.du_explicit[i] + pred->du_explicit[i]) : base.du_explicit[i];
        out.n[i] = base.n[i] + dt * dn;
        rhs[i] = base.u[i] + dt * (du + (1.0 - theta) * base.du_visc[i]);
    }
    out.n.front() = sp.n_left;
    out.n.back() = sp.n_right;
    require_positive_density(out.n, g, name);
    out.u = viscous_solve(out.n, rhs, sp, dx, dt * theta);
    return out;
}

Species onefluid_species(const PhysParamsOne& p) {
    Species sp;
    sp.mass = 1.0;
    sp.temperature = p.A;
    sp.viscosity = 1.0;
    sp.charge = 1.0;
    sp.sound = p.c();
    sp.n_left = p.n_minus;
    sp.n_right = p.n_plus;
    sp.u_left = p.u_minus;
    sp.u_right = p.u_plus();
    return sp;
}

std::pair<Species, Species> twofluid_species(const PhysParamsTwo& p) {
    Species ion, ele;
    ion.mass = p.m_i;
    ion.temperature = p.T_i;
    ion.viscosity = p.mu_i;
    ion.charge = 1.0;
    ion.sound = std::max(p.c(), std::sqrt(p.T_i / p.m_i));
    ele.mass = p.m_e;
    ele.temperature = p.T_e;
    ele.viscosity = p.mu_e;
    ele.charge = -1.0;
    ele.sound = std::max(p.c(), std::sqrt(p.T_e / p.m_e));
    for (Species* s : {&ion, &ele}) {
        s->n_left = p.n_minus;
        s->n_right = p.n_plus;
        s->u_left = p.u_minus;
        s->u_right = p.u_plus();
    }
    return {ion, ele};
}

void check_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError(fmt::format("step: dt must be positive, got {}", dt));
}

}  // namespace

FluidState step_onefluid(const FluidState& s, const PhysParamsOne& p, double dt, const StepOptions& opt,
                         StepTelemetry* tele) {
    check_dt(dt);
    const Grid1D& g = s.n.grid();
    const double dx = g.dx;
    const Species sp = onefluid_species(p);
    const double diss = opt.dissipation * (max_speed(s.u.data()) + sp.sound);
    const double phi_l = p.phi_minus();
    const double phi_r = p.phi_plus();

    SpeciesStage base{s.n.data(), s.u.data(), {}, {}, {}, {}};
    evaluate_rates(base, s.phi.data(), sp, dx, diss);
    base.du_visc.resize(base.n.size());
    viscous_rate(base.n, base.u, sp, dx, base.du_visc);

    int iters = 0;
    double resid = 0.0;
    auto solve_phi = [&](const Vec& n, const Field& guess) {
        EllipticSolveReport rep = solve_poisson_boltzmann(Field(g, n), phi_l, phi_r, guess);
        if (!rep.converged)
            throw NumericalError(fmt::format("Poisson-Boltzmann solve stalled at residual {}", rep.final_residual));
        iters += rep.iterations;
        resid = std::max(resid, rep.final_residual);
        return std::move(rep.phi);
    };

    SpeciesStage pred = advance(base, nullptr, sp, dx, dt, opt.theta, g, "ion");
    const Field phi_pred = solve_phi(pred.n, s.phi);
    evaluate_rates(pred, phi_pred.data(), sp, dx, diss);

    SpeciesStage next = advance(base, &pred, sp, dx, dt, opt.theta, g, "ion");
    FluidState out;
    out.time = s.time + dt;
    out.phi = solve_phi(next.n, phi_pred);
    out.n = Field(g, std::move(next.n));
    out.u = Field(g, std::move(next.u));

    if (tele) {
        tele->outflow = 0.5 * dt * ((base.flux.right - base.flux.left) + (pred.flux.right - pred.flux.left));
        tele->poisson_iterations = iters;
        tele->poisson_residual = resid;
    }
    return out;
}

TwoFluidState step_twofluid(const TwoFluidState& s, const PhysParamsTwo& p, double dt, const StepOptions& opt,
                            StepTelemetry* tele) {
    check_dt(dt);
    const Grid1D& g = s.n_i.grid();
    const double dx = g.dx;
    const auto [ion, ele] = twofluid_species(p);
    const double speed = std::max(max_speed(s.u_i.data()), max_speed(s.u_e.data()));
    const double diss_i = opt.dissipation * (speed + ion.sound);
    const double diss_e = opt.dissipation * (speed + ele.sound);
    const double phi_l = p.phi_minus();
    const double phi_r = p.phi_plus();

    SpeciesStage bi{s.n_i.data(), s.u_i.data(), {}, {}, {}, {}};
    SpeciesStage be{s.n_e.data(), s.u_e.data(), {}, {}, {}, {}};
    evaluate_rates(bi, s.phi.data(), ion, dx, diss_i);
    evaluate_rates(be, s.phi.data(), ele, dx, diss_e);
    bi.du_visc.resize(bi.n.size());
    be.du_visc.resize(be.n.size());
    viscous_rate(bi.n, bi.u, ion, dx, bi.du_visc);
    viscous_rate(be.n, be.u, ele, dx, be.du_visc);

    double resid = 0.0;
    auto solve_phi = [&](const Vec& ni, const Vec& ne) {
        Field rhs(g);
        for (std::size_t k = 0; k < ni.size(); ++k) rhs[k] = ni[k] - ne[k];
        EllipticSolveReport rep = solve_poisson_linear(rhs, phi_l, phi_r);
        resid = std::max(resid, rep.final_residual);
        return std::move(rep.phi);
    };

    SpeciesStage pi = advance(bi, nullptr, ion, dx, dt, opt.theta, g, "ion");
    SpeciesStage pe = advance(be, nullptr, ele, dx, dt, opt.theta, g, "electron");
    const Field phi_pred = solve_phi(pi.n, pe.n);
    evaluate_rates(pi, phi_pred.data(), ion, dx, diss_i);
    evaluate_rates(pe, phi_pred.data(), ele, dx, diss_e);

    SpeciesStage ni = advance(bi, &pi, ion, dx, dt, opt.theta, g, "ion");
    SpeciesStage ne = advance(be, &pe, ele, dx, dt, opt.theta, g, "electron");
    TwoFluidState out;
    out.time = s.time + dt;
    out.phi = solve_phi(ni.n, ne.n);
    out.n_i = Field(g, std::move(ni.n));
    out.u_i = Field(g, std::move(ni.u));
    out.n_e = Field(g, std::move(ne.n));
    out.u_e = Field(g, std::move(ne.u));

    if (tele) {
        tele->outflow = 0.5 * dt * ((bi.flux.right - bi.flux.left) + (pi.flux.right - pi.flux.left));
        tele->outflow_e = 0.5 * dt * ((be.flux.right - be.flux.left) + (pe.flux.right - pe.flux.left));
        tele->poisson_iterations = 2;
        tele->poisson_residual = resid;
    }
    return out;
}

namespace {

// Next event time on a uniform schedule, as an index to avoid drift.
struct Schedule {
    double interval = 0.0;
    long index = 1;
    bool enabled() const { return interval > 0.0; }
    double next() const { return static_cast<double>(index) * interval; }
};

template <class State, class Params, class SnapFn>
Trajectory integrate(const SimConfig& cfg, const Grid1D& grid, State state, const Params& params, SnapFn snap,
                     const RunHooks& hooks) {
    Trajectory traj;
    traj.config = cfg;
    traj.grid = grid;
    const StepOptions opt{cfg.viscous_theta, 0.02};
    const double t_end = cfg.t_final;

    auto record = [&](long step) {
        Snapshot sn = snap(state, params, step);
        if (cfg.model == Model::one_fluid && sn.elliptic_gap > 1e-9 * (1.0 + 2.0 * params.n_plus))
            throw SimulationFailure(fmt::format("quasineutral monitor: |n - e^-phi - phi_xx| = {} at t={}",
                                                sn.elliptic_gap, state.time),
                                    state.time, state);
        traj.snapshots.push_back(sn);
        if (hooks.on_snapshot) hooks.on_snapshot(sn);
    };
    auto dump = [&](long step) {
        if (hooks.on_dump) hooks.on_dump(AnyState(state), step);
    };

    Schedule out{cfg.output_interval};
    Schedule dumps{cfg.dump_interval};
    long step = 0;
    record(step);
    if (dumps.enabled() || t_end == 0.0) dump(step);

    double t = 0.0;
    while (t < t_end) {
        double target = std::min(out.next(), t_end);
        if (dumps.enabled()) target = std::min(target, dumps.next());
        double dt = cfl_dt(state, params, cfg.cfl_number);
        bool land = false;
        if (t + dt >= target - 1e-12 * std::max(1.0, target)) {
            dt = target - t;
            land = true;
        } else if (t + 2.0 * dt > target) {
            dt = 0.5 * (target - t);  // avoid a sliver step before the event
        }
        StepTelemetry tele;
        try {
            State next = [&] {
                if constexpr (std::is_same_v<State, FluidState>)
                    return step_onefluid(state, params, dt, opt, &tele);
                else
                    return step_twofluid(state, params, dt, opt, &tele);
            }();
            state = std::move(next);
        } catch (const SimulationFailure&) {
            throw;
        } catch (const NumericalError& e) {
            throw SimulationFailure(fmt::format("step {} failed at t={}: {}", step + 1, t, e.what()), t, state);
        }
        ++step;
        traj.cumulative_outflow += tele.outflow + tele.outflow_e;
        t = land ? target : t + dt;
        state.time = t;

        bool snapped = false;
        if (land && t == std::min(out.next(), t_end)) {
            record(step);
            snapped = true;
            while (out.next() <= t * (1.0 + 1e-12)) ++out.index;
        }
        if (t >= t_end && !snapped) record(step);
        if (dumps.enabled() && land && (t == dumps.next() || t >= t_end)) {
            dump(step);
            while (dumps.next() <= t * (1.0 + 1e-12)) ++dumps.index;
        }
    }
    traj.steps = step;
    return traj;
}

}  // namespace

Trajectory run_simulation(const SimConfig& cfg, const RunHooks& hooks) {
    validate_config(cfg);
    const Grid1D grid = simulation_grid(cfg);
    validate_domain(cfg, grid);
    if (cfg.model == Model::one_fluid) {
        FluidState s0 = initial_state_onefluid(cfg, grid);
        if (lyapunov_block_margin(s0.n, lyapunov_weight(cfg.one)) <= 0.0)
            throw ValidationError("Lyapunov weight does not make the energy functional definite for this state");
        return integrate(cfg, grid, std::move(s0), cfg.one, snapshot_onefluid, hooks);
    }
    TwoFluidState s0 = initial_state_twofluid(cfg, grid);
    const double w2 = lyapunov_weight(cfg.two);
    if (lyapunov_block_margin(s0.n_i, w2, cfg.two.m_i) <= 0.0 || lyapunov_block_margin(s0.n_e, w2, cfg.two.m_e) <= 0.0)
        throw ValidationError("Lyapunov weight does not make the two-fluid energy functional definite for this state");
    return integrate(cfg, grid, std::move(s0), cfg.two, snapshot_twofluid, hooks);
}

}  // namespace nsp
