#include <doctest.h>

#include <cmath>
#include <random>

#include "nsp/diagnostics.hpp"

using namespace nsp;

TEST_CASE("psi potential: closed form, series branch and positivity") {
    auto closed = [](double n, double nr, double A) { return A * (std::log(n / nr) + nr / n - 1.0); };
    CHECK(psi_potential(3.0, 1.5, 2.0) == doctest::Approx(closed(3.0, 1.5, 2.0)).epsilon(1e-14));
    CHECK(psi_potential(0.2, 1.0, 1.0) == doctest::Approx(closed(0.2, 1.0, 1.0)).epsilon(1e-14));
    CHECK(psi_potential(1.3, 1.3, 1.0) == 0.0);
    // Near n = nr: ψ = A(d²/2 − 2d³/3 + 3d⁴/4 − ...) with d = (n − nr)/nr.
    const double d = 1e-4;
    const double series = d * d / 2 - 2 * d * d * d / 3 + 3 * d * d * d * d / 4;
    CHECK(psi_potential(1.0 + d, 1.0, 1.0) == doctest::Approx(series).epsilon(1e-12));
    // Both branches agree where they meet.
    CHECK(psi_potential(1.0 + 0.0099999, 1.0, 1.0) ==
          doctest::Approx(psi_potential(1.0 + 0.0100001, 1.0, 1.0)).epsilon(1e-4));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int k = 0; k < 200; ++k) CHECK(psi_potential(u(rng), u(rng), 1.0) >= 0.0);
    CHECK_THROWS_AS(psi_potential(-1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("Lyapunov weights") {
    CHECK(lyapunov_weight(PhysParamsOne{1.0, 1.0, 2.0, 0.0, 0.1}) == 4.0);
    CHECK(lyapunov_weight(PhysParamsOne{1.0, 0.5, 2.0, 0.0, 0.1}) == 16.0);
    CHECK(lyapunov_weight(PhysParamsOne{1.0, 2.0, 3.0, 0.0, 0.1}) == 4.0);
    PhysParamsTwo p;
    p.m_i = 2.0;
    p.m_e = 1.0;
    CHECK(lyapunov_weight(p) >= 4.0);
    const Grid1D g(0.0, 1.0, 11);
    CHECK(lyapunov_block_margin(Field(g, 1.5), 4.0) > 0.0);
}

TEST_CASE("energies vanish on the profile itself") {
    const PhysParamsOne p{1.0, 1.0, 2.0, 0.0, 0.1};
    const Grid1D g = Grid1D::with_spacing(-100.0, 200.0, 0.2);
    const RarefactionProfile pr = profile_onefluid(p, 5.0, g);
    const FluidState s{5.0, pr.nr, pr.ur, pr.phir};
    const EnergyReport r = energy_report(s, pr, p);
    CHECK(r.lyapunov() == 0.0);
    CHECK(r.sup_distance == 0.0);
    CHECK(r.quasineutral_gap <= 1e-15);
    CHECK(r.weight == 4.0);
}

TEST_CASE("zero-order energy grows with the perturbation size") {
    const PhysParamsOne p{1.0, 1.0, 2.0, 0.0, 0.1};
    const Grid1D g = Grid1D::with_spacing(-100.0, 200.0, 0.2);
    const RarefactionProfile pr = profile_onefluid(p, 5.0, g);
    auto energy = [&](double a) {
        FluidState s{5.0, pr.nr, pr.ur, pr.phir};
        for (std::size_t i = 0; i < g.size(); ++i) s.u[i] += a * std::exp(-g.x(i) * g.x(i));
        return zero_order_energy(s, pr, p).kinetic;
    };
    // Kinetic part is (ũ, n ũ), quadratic in the amplitude.
    CHECK(energy(0.02) == doctest::Approx(4.0 * energy(0.01)).epsilon(1e-12));
}

TEST_CASE("two-fluid quadratic form splits the combined integrand") {
    PhysParamsTwo p;
    p.m_i = 2.0;
    p.m_e = 1.0;
    const Grid1D g = Grid1D::with_spacing(-100.0, 200.0, 0.2);
    const RarefactionProfile pr = profile_twofluid(p, 5.0, g);
    TwoFluidState s{5.0, pr.nr, pr.ur, pr.nr, pr.ur, pr.phir};
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.u_i[i] += 0.03 * std::exp(-(g.x(i) - 10.0) * (g.x(i) - 10.0) / 4.0);
        s.n_e[i] += 0.02 * std::exp(-(g.x(i) - 12.0) * (g.x(i) - 12.0) / 9.0);
    }
    const TwoFluidWeights w = TwoFluidWeights::defaults(p);
    const TwoFluidEnergy e = twofluid_energy(s, pr, p, w);
    CHECK(e.quad_form >= 0.0);
    const double direct = twofluid_half_I0_plus_I6(s, pr, p, w);
    CHECK(direct == doctest::Approx(e.quad_form + e.density_correction + e.profile_time_correction).epsilon(1e-10));
}

TEST_CASE("envelope check") {
    std::vector<double> t, v, up;
    for (int k = 0; k <= 200; ++k) {
        t.push_back(k);
        v.push_back(std::exp(-0.01 * k) * (1.0 + 0.02 * std::sin(k)));
        up.push_back(1.0 + 0.01 * k);
    }
    CHECK(envelope_nonincreasing(t, v, 5.0, 10.0, 1.05).holds);
    CHECK_FALSE(envelope_nonincreasing(t, up, 5.0, 10.0, 1.05).holds);
}
