#include <doctest.h>

#include <cmath>
#include <random>

#include "nsp/rarewave.hpp"

using namespace nsp;

namespace {

double initial_data(const BurgersWave& w, double x) {
    return 0.5 * (w.w_plus + w.w_minus) + 0.5 * w.delta() * std::tanh(w.eps_smooth * x);
}

}  // namespace

TEST_CASE("Burgers solution stays strictly between the far-field states and increases in x") {
    const BurgersWave w{0.2, 1.5, 0.1};
    for (double t : {0.0, 1.0, 50.0, 1000.0}) {
        double prev = -INFINITY;
        for (double x = -200.0; x <= 2000.0; x += 3.7) {
            const double v = burgers_value(w, t, x);
            CHECK(v >= w.w_minus);
            CHECK(v <= w.w_plus);
            CHECK(v >= prev);
            prev = v;
        }
    }
    CHECK(burgers_value(w, 0.0, 3.0) == doctest::Approx(initial_data(w, 3.0)).epsilon(1e-15));
}

TEST_CASE("Burgers solution satisfies the PDE with centred time differences") {
    const BurgersWave w{0.0, 1.0, 0.1};
    const double dt = 1e-4;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(1.0, 200.0), ux(-50.0, 250.0);
    for (int k = 0; k < 200; ++k) {
        const double t = ut(rng), x = ux(rng);
        const BurgersJet j = burgers_derivatives(w, t, x);
        const double wt = (burgers_value(w, t + dt, x) - burgers_value(w, t - dt, x)) / (2.0 * dt);
        CHECK(std::abs(wt + j.w * j.wx) <= 1e-6);
    }
}

TEST_CASE("analytic x-derivatives match finite differences") {
    const BurgersWave w{0.0, 1.0, 0.1};
    const double h = 1e-3;
    for (double x : {-20.0, 0.0, 5.0, 12.5, 30.0}) {
        const BurgersJet j = burgers_derivatives(w, 5.0, x);
        const double fd = (burgers_value(w, 5.0, x + h) - burgers_value(w, 5.0, x - h)) / (2.0 * h);
        const double fd2 = (burgers_value(w, 5.0, x + h) - 2.0 * j.w + burgers_value(w, 5.0, x - h)) / (h * h);
        CHECK(j.wx == doctest::Approx(fd).epsilon(1e-6));
        CHECK(std::abs(j.wxx - fd2) <= 1e-6);
        // The foot of the characteristic maps to (t, x).
        CHECK(j.foot + 5.0 * initial_data(w, j.foot) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("Riemann fan") {
    const BurgersWave w{0.0, 1.0, 0.1};
    CHECK(riemann_fan(w, 10.0, -1.0) == 0.0);
    CHECK(riemann_fan(w, 10.0, 5.0) == 0.5);
    CHECK(riemann_fan(w, 10.0, 11.0) == 1.0);
    CHECK_THROWS_AS(riemann_fan(w, 0.0, 1.0), ValidationError);
}

TEST_CASE("one-fluid profile keeps the 2-Riemann invariant and is monotone") {
    const PhysParamsOne p{1.0, 1.0, 2.0, 0.0, 0.1};
    const Grid1D g = Grid1D::with_spacing(-150.0, 300.0, 0.25);
    const RarefactionProfile pr = profile_onefluid(p, 10.0, g);
    const double inv = p.u_minus - p.c() * std::log(p.n_minus);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(pr.ur[i] - p.c() * std::log(pr.nr[i]) - inv) <= 1e-12);
        CHECK(pr.dnr[i] >= 0.0);
        CHECK(pr.dur[i] >= 0.0);
        CHECK(pr.phir[i] == doctest::Approx(-std::log(pr.nr[i])).epsilon(1e-14));
        if (i > 0) CHECK(pr.nr[i] >= pr.nr[i - 1]);
    }
    CHECK(pr.nr.front() == doctest::Approx(p.n_minus).epsilon(1e-6));
    CHECK(pr.nr.back() == doctest::Approx(p.n_plus).epsilon(1e-6));
}

TEST_CASE("two-fluid potential profile is proportional to log density") {
    PhysParamsTwo p;
    p.m_i = 2.0;
    p.m_e = 1.0;
    CHECK(p.phi_coeff() == doctest::Approx(-1.0 / 3.0));
    const Grid1D g = Grid1D::with_spacing(-100.0, 200.0, 0.5);
    const RarefactionProfile pr = profile_twofluid(p, 3.0, g);
    for (std::size_t i = 0; i < g.size(); i += 17)
        CHECK(pr.phir[i] == doctest::Approx(p.phi_coeff() * std::log(pr.nr[i])).epsilon(1e-13));
}

TEST_CASE("fan extent contains the transition layer") {
    const BurgersWave w{0.0, 1.0, 0.1};
    const FanExtent e = fan_extent(w, 100.0);
    CHECK(e.left <= 0.0);
    CHECK(e.right >= 100.0);
    CHECK(std::abs(burgers_value(w, 100.0, e.left) - w.w_minus) <= 1e-3);
    CHECK(std::abs(burgers_value(w, 100.0, e.right) - w.w_plus) <= 1e-3);
}

TEST_CASE("decay-rate verifier needs two decades") {
    const BurgersWave w{0.0, 1.0, 0.1};
    const std::vector<double> short_span{100.0, 200.0, 500.0};
    CHECK_THROWS_AS(verify_decay_rates(w, 2.0, short_span), ValidationError);
}

TEST_CASE("parameter validation") {
    PhysParamsOne p;
    p.n_plus = 0.5;  // compressive data is not a rarefaction
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_THROWS_AS((BurgersWave{1.0, 0.5, 0.1}.validate()), ValidationError);
}
