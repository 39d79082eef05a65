#include <doctest.h>

#include <cmath>
#include <random>

#include "nsp/core.hpp"
#include "nsp/fit.hpp"

using namespace nsp;

TEST_CASE("grid spacing and node placement") {
    const Grid1D g = Grid1D::with_spacing(-1.0, 1.0, 0.1);
    CHECK(g.n_cells == 21);
    CHECK(g.dx == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(g.x(20) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 10), ValidationError);
}

TEST_CASE("central differences are exact on quadratics") {
    const Grid1D g(0.0, 2.0, 41);
    const Field f = Field::from_function(g, [](double x) { return 3.0 * x * x - x + 2.0; });
    const Field d1 = ddx(f), d2 = d2dx2(f);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        CHECK(d1[i] == doctest::Approx(6.0 * g.x(i) - 1.0).epsilon(1e-12));
        CHECK(d2[i] == doctest::Approx(6.0).epsilon(1e-10));
    }
}

TEST_CASE("trapezoidal integral and norms") {
    const Grid1D g(0.0, 1.0, 101);
    const Field lin = Field::from_function(g, [](double x) { return 2.0 * x + 1.0; });
    CHECK(integrate(lin) == doctest::Approx(2.0).epsilon(1e-14));
    const Field s = Field::from_function(g, [](double x) { return std::sin(M_PI * x); });
    // Trapezoid rule on a periodic-like integrand: error O(dx²).
    CHECK(integrate(s) == doctest::Approx(2.0 / M_PI).epsilon(1e-4));
    CHECK(lp_norm(s, INFINITY) == doctest::Approx(1.0));
    CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("compensated sum recovers cancellation") {
    CompensatedSum s;
    s.add(1e16);
    for (int k = 0; k < 1000; ++k) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}

TEST_CASE("Sobolev sup inequality holds for random bumps") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Grid1D g(-20.0, 20.0, 2001);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = u(rng), b = u(rng) * 5.0, w = 0.5 + std::abs(u(rng));
        const Field f = Field::from_function(g, [&](double x) { return a * std::exp(-(x - b) * (x - b) / w); });
        const SobolevCheck c = sobolev_sup_check(f);
        CHECK(c.holds);
    }
}

TEST_CASE("power-law fit recovers exponent") {
    std::vector<double> t, v;
    for (int k = 0; k <= 20; ++k) {
        t.push_back(std::pow(10.0, 1.0 + k * 0.1));
        v.push_back(3.0 * std::pow(t.back(), -0.75));
    }
    const DecayFit f = fit_decay(t, v, 1.0);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(f.constant == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f.t_lo == doctest::Approx(100.0));
}
