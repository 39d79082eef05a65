#include <doctest.h>

#include <cmath>

#include "nsp/diagnostics.hpp"
#include "nsp/nsp_sim.hpp"

using namespace nsp;

namespace {

SimConfig short_run(Model model) {
    SimConfig c;
    c.model = model;
    c.one = {1.0, 1.0, 2.0, 0.0, 0.1};
    c.two.m_i = 2.0;
    c.two.m_e = 1.0;
    c.grid.margin = 20.0;
    c.grid.dx = 0.2;
    c.t_final = 4.0;
    c.output_interval = 1.0;
    c.dump_interval = 2.0;
    return c;
}

}  // namespace

TEST_CASE("default domain contains the fan and validation catches a short one") {
    SimConfig c = short_run(Model::one_fluid);
    const Grid1D g = simulation_grid(c);
    CHECK_NOTHROW(validate_domain(c, g));
    c.grid.x_min = -10.0;
    c.grid.x_max = 10.0;
    CHECK_THROWS_AS(validate_domain(c, simulation_grid(c)), ValidationError);
}

TEST_CASE("random perturbations are a function of the seed") {
    const Grid1D g(-20.0, 20.0, 401);
    PerturbationSpec s;
    s.shape = PerturbationSpec::Shape::random;
    s.seed = 42;
    const Field a = perturbation_field(s, g), b = perturbation_field(s, g);
    CHECK((a - b).max_abs() == 0.0);
    s.seed = 43;
    CHECK((a - perturbation_field(s, g)).max_abs() > 0.0);
}

TEST_CASE("initial state pins the far-field values and carries the bump") {
    const SimConfig c = short_run(Model::one_fluid);
    const Grid1D g = simulation_grid(c);
    const FluidState s = initial_state_onefluid(c, g);
    CHECK(s.n.front() == c.one.n_minus);
    CHECK(s.n.back() == c.one.n_plus);
    CHECK(s.u.back() == c.one.u_plus());
    const RarefactionProfile pr = profile_onefluid(c.one, 0.0, g);
    CHECK((s.n - pr.nr).max_abs() == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("outputs land on the requested times and dumps on their interval") {
    const SimConfig c = short_run(Model::one_fluid);
    std::vector<double> dump_times;
    RunHooks hooks;
    hooks.on_dump = [&](const AnyState& s, long) { dump_times.push_back(std::get<FluidState>(s).time); };
    const Trajectory tr = run_simulation(c, hooks);
    REQUIRE(tr.snapshots.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(tr.snapshots[k].t == doctest::Approx(double(k)).epsilon(1e-14));
    CHECK(dump_times == std::vector<double>{0.0, 2.0, 4.0});
}

TEST_CASE("mass changes only through the boundary faces") {
    const Trajectory tr = run_simulation(short_run(Model::one_fluid));
    const double drift = tr.snapshots.back().mass - tr.snapshots.front().mass + tr.cumulative_outflow;
    CHECK(std::abs(drift) <= 1e-10 * tr.snapshots.front().mass);
}

TEST_CASE("unperturbed runs stay close to the profile") {
    SimConfig c = short_run(Model::one_fluid);
    c.perturbation.amplitude = 0.0;
    const Trajectory tr = run_simulation(c);
    // Only the boundary nodes move: they are pinned to the far-field states, off the tanh tail.
    CHECK(tr.snapshots.front().sup_n <= 1e-8);
    CHECK(tr.snapshots.back().sup_n < 0.02);
}

TEST_CASE("equal species stay equal") {
    SimConfig c = short_run(Model::two_fluid);
    c.two.m_i = c.two.m_e = 1.0;
    const Grid1D g = simulation_grid(c);
    TwoFluidState s = initial_state_twofluid(c, g);
    for (int k = 0; k < 200; ++k) s = step_twofluid(s, c.two, cfl_dt(s, c.two));
    CHECK((s.n_i - s.n_e).max_abs() == 0.0);
    CHECK((s.u_i - s.u_e).max_abs() == 0.0);
    CHECK(s.phi.max_abs() <= 1e-14);
}

TEST_CASE("two-fluid quadratic form stays nonnegative") {
    const Trajectory tr = run_simulation(short_run(Model::two_fluid));
    for (const Snapshot& s : tr.snapshots) CHECK(s.quad_form >= 0.0);
}

TEST_CASE("invalid steps are rejected") {
    const SimConfig c = short_run(Model::one_fluid);
    const FluidState s = initial_state_onefluid(c, simulation_grid(c));
    CHECK_THROWS_AS(step_onefluid(s, c.one, -1.0), ValidationError);
    FluidState bad = s;
    bad.n[bad.n.size() / 2] = -0.5;
    CHECK_THROWS_AS(step_onefluid(bad, c.one, 0.01), NumericalError);
}
