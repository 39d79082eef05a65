#include <doctest.h>

#include <cmath>
#include <random>

#include "nsp/poisson.hpp"

using namespace nsp;

TEST_CASE("tridiagonal solve matches dense elimination") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 12;
    std::vector<double> lo(n - 1), di(n), up(n - 1), rhs(n);
    for (auto& v : lo) v = u(rng);
    for (auto& v : up) v = u(rng);
    for (auto& v : di) v = 4.0 + u(rng);
    for (auto& v : rhs) v = u(rng);
    const std::vector<double> x = tridiag_solve(lo, di, up, rhs);
    // Dense Gaussian elimination with partial pivoting as the oracle.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = di[i];
        if (i > 0) a[i][i - 1] = lo[i - 1];
        if (i + 1 < n) a[i][i + 1] = up[i];
        a[i][n] = rhs[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a[r][k]) > std::abs(a[piv][k])) piv = r;
        std::swap(a[k], a[piv]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a[r][k] / a[k][k];
            for (std::size_t c = k; c <= n; ++c) a[r][c] -= f * a[k][c];
        }
    }
    std::vector<double> ref(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = a[k][n];
        for (std::size_t c = k + 1; c < n; ++c) s -= a[k][c] * ref[c];
        ref[k] = s / a[k][k];
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}

TEST_CASE("constant equilibrium is a fixed point") {
    const Grid1D g(0.0, 10.0, 101);
    const EllipticSolveReport r = solve_poisson_boltzmann(Field(g, 1.0), 0.0, 0.0);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.phi.max_abs() == 0.0);
}

TEST_CASE("manufactured solution with a positive source") {
    // φ* = 0.3 sin x keeps n = φ*'' + e^{−φ*} positive.
    const Grid1D g = Grid1D::with_spacing(0.0, 6.0, 0.01);
    const Field exact = Field::from_function(g, [](double x) { return 0.3 * std::sin(x); });
    Field n = d2dx2(exact);
    for (std::size_t i = 0; i < g.size(); ++i) n[i] += std::exp(-exact[i]);
    n[0] = std::exp(-exact[0]);
    n[g.size() - 1] = std::exp(-exact[g.size() - 1]);
    const EllipticSolveReport r = solve_poisson_boltzmann(n, exact.front(), exact.back());
    CHECK(r.converged);
    CHECK((r.phi - exact).max_abs() <= 1e-10);
    CHECK(r.final_residual <= r.tolerance);
}

TEST_CASE("nonpositive density is rejected but a general source is accepted") {
    const Grid1D g(0.0, 1.0, 11);
    Field n(g, 1.0);
    n[5] = -0.1;
    CHECK_THROWS_AS(solve_poisson_boltzmann(n, 0.0, 0.0), ValidationError);
    const EllipticSolveReport r = solve_boltzmann_source(n, 0.0, 0.0);
    CHECK(r.converged);
}

TEST_CASE("linear Poisson solve is exact for quadratics") {
    const Grid1D g(0.0, 1.0, 51);
    const EllipticSolveReport r = solve_poisson_linear(Field(g, 2.0), 0.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.phi[i] == doctest::Approx(g.x(i) * g.x(i)).epsilon(1e-12));
}

TEST_CASE("residual history records every evaluation") {
    const Grid1D g = Grid1D::with_spacing(-10.0, 10.0, 0.05);
    const Field n = Field::from_function(g, [](double x) { return 1.5 + 0.5 * std::tanh(x); });
    const EllipticSolveReport r = solve_poisson_boltzmann(n, -std::log(1.0), -std::log(2.0));
    CHECK(r.converged);
    CHECK(static_cast<int>(r.residual_history.size()) == r.iterations);
    CHECK(r.residual_history.back() == r.final_residual);
}
