#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsp/core.hpp"
#include "nsp/rarewave.hpp"

namespace nsp {

enum class Model { one_fluid, two_fluid };

struct FluidState {
    double time = 0.0;
    Field n, u, phi;
};

struct TwoFluidState {
    double time = 0.0;
    Field n_i, u_i, n_e, u_e, phi;
};

using AnyState = std::variant<FluidState, TwoFluidState>;

struct PerturbationSpec {
    enum class Shape { gaussian, bump, random };
    enum class Target { density, velocity, both };

    Shape shape = Shape::gaussian;
    Target target = Target::density;
    double amplitude = 0.05;
    double center = 0.0;
    double width = 1.0;
    int bumps = 4;  // random shape: number of Gaussians
    std::uint64_t seed = 0;
};

struct GridSpec {
    double margin = 60.0;  // L: clearance beyond the outermost wave at t_final
    double dx = 0.05;
    std::optional<double> x_min;
    std::optional<double> x_max;
};

struct SimConfig {
    Model model = Model::one_fluid;
    PhysParamsOne one;
    PhysParamsTwo two;
    GridSpec grid;
    double t_final = 10.0;
    double cfl_number = 0.4;
    double viscous_theta = 0.5;
    double output_interval = 1.0;  // simulated time between diagnostic snapshots
    double dump_interval = 0.0;  // simulated time between full-state dumps; 0 disables
    PerturbationSpec perturbation;
};

struct StepOptions {
    double theta = 0.5;
    double dissipation = 0.02;  // fourth-difference coefficient, in units of dx³·(max|u|+c)
};

// Net flux through the faces next to the pinned boundary nodes, integrated
// over the step (per species for two-fluid runs).
struct StepTelemetry {
    double outflow = 0.0;
    double outflow_e = 0.0;
    int poisson_iterations = 0;
    double poisson_residual = 0.0;
};

// Abort of a run. Carries the last accepted state.
struct SimulationFailure : NumericalError {
    SimulationFailure(const std::string& what, double time, AnyState last_state)
        : NumericalError(what), time(time), state(std::move(last_state)) {}
    double time;
    AnyState state;
};

// Domain holding every wave of the run up to t_final plus the margin, unless
// explicit bounds are configured.
Grid1D simulation_grid(const SimConfig& cfg);
void validate_config(const SimConfig& cfg);
void validate_domain(const SimConfig& cfg, const Grid1D& grid);

Field perturbation_field(const PerturbationSpec& spec, const Grid1D& grid);

FluidState initial_state_onefluid(const SimConfig& cfg, const Grid1D& grid);
TwoFluidState initial_state_twofluid(const SimConfig& cfg, const Grid1D& grid);
AnyState initial_state(const SimConfig& cfg);

double cfl_dt(const FluidState& s, const PhysParamsOne& p, double cfl_number = 0.4);
double cfl_dt(const TwoFluidState& s, const PhysParamsTwo& p, double cfl_number = 0.4);

FluidState step_onefluid(const FluidState& s, const PhysParamsOne& p, double dt, const StepOptions& opt = {},
                         StepTelemetry* tele = nullptr);
TwoFluidState step_twofluid(const TwoFluidState& s, const PhysParamsTwo& p, double dt, const StepOptions& opt = {},
                            StepTelemetry* tele = nullptr);

// Per-output diagnostics recorded along a run.
struct Snapshot {
    double t = 0.0;
    long step = 0;
    double E_zero = 0.0;  // C·(zero-order functional)
    double E_first = 0.0;
    double lyapunov = 0.0;  // E_zero + E_first
    double D_visc = 0.0;
    double D_density = 0.0;
    double D_potential = 0.0;
    double D_wave = 0.0;
    double D_flat = 0.0;
    double sup_n = 0.0;
    double sup_u = 0.0;
    double sup_phi = 0.0;  // one-fluid: sup|φ−φʳ|; two-fluid: sup|∂x(φ−φʳ)|
    double quasineutral_gap = 0.0;  // one-fluid: sup|φ + ln n|
    double elliptic_gap = 0.0;  // one-fluid: sup|(n − e^{−φ}) − ∂x²φ|
    double species_gap = 0.0;  // two-fluid: sup|u_i − u_e|
    double quad_form = 0.0;  // two-fluid
    double mass = 0.0;
};

struct Trajectory {
    SimConfig config;
    Grid1D grid;
    std::vector<Snapshot> snapshots;
    long steps = 0;
    double cumulative_outflow = 0.0;
};

struct RunHooks {
    // Called for every full-state dump (t = 0, every dump_interval, t_final).
    std::function<void(const AnyState&, long step)> on_dump;
    std::function<void(const Snapshot&)> on_snapshot;
};

Trajectory run_simulation(const SimConfig& cfg, const RunHooks& hooks = {});

}  // namespace nsp
