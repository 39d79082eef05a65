#include <doctest.h>

#include <cmath>

#include "nsp/core.hpp"
#include "nsp/linear.hpp"

using namespace nsp::linear;

TEST_CASE("mode coefficients") {
    const SpectralMode z = mode_coefficients(0.0, 1.0, 1.0);
    CHECK(z.a == 1.0);
    CHECK(z.sigma == 2.0);
    CHECK(mode_coefficients(1.0, 1.0, 1.0).sigma == 1.5);
    CHECK(mode_coefficients(1.0, 1.0, 1.0, Coefficient::literal).sigma == 2.0);
    CHECK(mode_coefficients(1e4, 1.0, 1.0).sigma == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::string(to_string(Coefficient::literal)) == "literal");
}

TEST_CASE("eigenvalues from the quadratic formula") {
    const SpectralMode c = spectral_mode(1.0, 1.0, 1.0);
    CHECK(c.lambda_plus.real() == doctest::Approx(-0.5));
    CHECK(c.lambda_plus.imag() == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-14));
    CHECK(c.lambda_minus.imag() == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-14));
    const SpectralMode l = spectral_mode(1.0, 1.0, 1.0, Coefficient::literal);
    CHECK(l.lambda_plus.imag() == doctest::Approx(std::sqrt(7.0) / 2.0).epsilon(1e-14));
    const SpectralMode z = spectral_mode(0.0, 1.0, 1.0);
    CHECK(z.degenerate);
    CHECK(z.lambda_plus == cplx(0.0, 0.0));
}

TEST_CASE("real parts are negative away from zero") {
    for (double xi = -50.0; xi <= 50.0; xi += 0.73) {
        const SpectralMode m = spectral_mode(xi, 0.5, 2.0);
        CHECK(m.lambda_plus.real() < 0.0);
        CHECK(m.lambda_minus.real() <= m.lambda_plus.real());
    }
}

TEST_CASE("Green's matrix solves G' = MG") {
    for (double xi : {0.3, 1.0, 4.0}) {
        const SpectralMode m = spectral_mode(xi, 1.0, 1.0);
        const double h = 1e-6;
        const Mat2 M = m.M();
        // Centred difference around t = h, since G is only defined for t >= 0.
        const Mat2 dc = (1.0 / (2.0 * h)) * (greens_matrix(m, 2.0 * h) - greens_matrix(m, 0.0));
        const Mat2 MG = M * greens_matrix(m, h);
        CHECK(max_abs(dc - MG) <= 1e-6 * std::max(1.0, max_abs(M)));
    }
}

TEST_CASE("closed form agrees with the projector form away from the crossover") {
    for (double xi : {0.2, 1.0, 7.0})
        for (double t : {0.1, 1.0, 3.0}) {
            const SpectralMode m = spectral_mode(xi, 1.0, 1.0);
            CHECK(max_abs(greens_matrix(m, t) - greens_matrix_closed_form(m, t)) <= 1e-12);
        }
}

TEST_CASE("Green's matrix is continuous through the sonic crossover") {
    const double xc = std::sqrt((3.0 + std::sqrt(41.0)) / 2.0);
    const Mat2 at = greens_matrix(spectral_mode(xc, 1.0, 1.0), 1.0);
    const Mat2 near = greens_matrix(spectral_mode(xc * (1.0 + 1e-7), 1.0, 1.0), 1.0);
    CHECK(max_abs(at - near) <= 1e-5);
}

TEST_CASE("mode energy") {
    const SpectralMode m = spectral_mode(1.0, 1.0, 1.0);
    const ModeEnergy z = mode_energy(0.0, 0.0, m);
    CHECK(z.E == 0.0);
    CHECK(z.D == 0.0);
    CHECK_THROWS_AS(mode_energy(1.0, 0.0, m, 0.5), nsp::ValidationError);
    // Plain energy (κ = 0) only dissipates along the propagator.
    double prev = mode_energy(1.0, 0.0, m, 0.0).E;
    for (double t = 0.5; t <= 20.0; t += 0.5) {
        const Mat2 G = greens_matrix(m, t);
        const double E = mode_energy(G[0][0], G[1][0], m, 0.0).E;
        CHECK(E <= prev * (1.0 + 1e-12));
        prev = E;
    }
    // The fitted rate is asymptotic: it matches the late-time slope of log E.
    const double rate = fit_mode_decay(m).rate;
    CHECK(rate > 0.0);
    auto E_at = [&](double t) {
        const Mat2 G = greens_matrix(m, t);
        return mode_energy(G[0][0], G[1][0], m).E;
    };
    const double late = std::log(E_at(20.0) / E_at(40.0)) / 20.0;
    CHECK(late == doctest::Approx(rate).epsilon(0.1));
}

TEST_CASE("linearized nonlinear run: zero data gives zero error") {
    PeriodicConfig c;
    c.amplitude = 0.0;
    c.t_final = 1.0;
    const double xi[] = {1.0};
    const ConsistencyReport r = linearized_consistency(c, xi);
    CHECK(r.field_error == 0.0);
}

TEST_CASE("retained modes must be well resolved") {
    PeriodicConfig c;
    c.n_cells = 64;
    const double xi[] = {10.0};
    CHECK_THROWS_AS(linearized_consistency(c, xi), nsp::ValidationError);
}
