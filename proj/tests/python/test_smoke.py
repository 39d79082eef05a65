import math

import numpy as np
import pytest

import nsplab


def test_version_is_set():
    assert nsplab.__version__.count(".") == 2


def test_derived_right_state():
    p = nsplab.OneFluidParams(A=1, n_minus=1, n_plus=2, u_minus=0, eps=0.1)
    assert p.c == pytest.approx(math.sqrt(2), rel=1e-15)
    assert p.u_plus == pytest.approx(math.sqrt(2) * math.log(2), rel=1e-14)


def test_profile_is_monotone_and_keeps_riemann_invariant():
    p = nsplab.OneFluidParams()
    grid = nsplab.Grid1D.with_spacing(-100.0, 200.0, 0.5)
    pr = nsplab.profile(p, 10.0, grid)
    assert np.all(np.diff(pr["nr"]) >= 0)
    assert np.all(pr["dnr"] >= 0)
    drift = pr["ur"] - p.c * np.log(pr["nr"])
    assert np.max(np.abs(drift - drift[0])) < 1e-12


def test_invalid_params_raise_value_error():
    with pytest.raises(ValueError):
        nsplab.OneFluidParams(n_minus=-1.0)


def test_poisson_constant_equilibrium():
    grid = nsplab.Grid1D(0.0, 10.0, 101)
    n = np.full(101, 2.0)
    r = nsplab.solve_poisson_boltzmann(grid, n, -math.log(2), -math.log(2))
    assert r["converged"]
    assert np.max(np.abs(r["phi"] + math.log(2))) < 1e-13


def test_psi_potential_matches_quadrature():
    from scipy.integrate import quad

    for n, nr in [(0.5, 1.0), (3.0, 1.5), (1.0, 1.0)]:
        expected, _ = quad(lambda s: (s - nr) / s**2, nr, n, epsabs=1e-14, epsrel=1e-13)
        assert nsplab.psi_potential(n, nr, 1.0) == pytest.approx(expected, abs=1e-12)


def test_linear_modes_quadratic_formula():
    # sigma = A + 1/(eps xi^2 + 1) = 1.5 at xi = 1: lambda = -1/2 ± i sqrt(5)/2.
    m = nsplab.spectral_mode(1.0, eps=1.0, A=1.0)
    assert m["sigma"] == pytest.approx(1.5)
    assert m["lambda_plus"] == pytest.approx(complex(-0.5, math.sqrt(5) / 2), abs=1e-14)
    lit = nsplab.spectral_mode(1.0, eps=1.0, A=1.0, literal=True)
    assert lit["lambda_plus"] == pytest.approx(complex(-0.5, math.sqrt(7) / 2), abs=1e-14)


def test_greens_matrix_at_zero_is_identity():
    g = np.array(nsplab.greens_matrix(0.7, 0.0))
    assert np.array_equal(g, np.eye(2))


def test_short_simulation_reports_finite_diagnostics():
    p = nsplab.OneFluidParams()
    snaps = nsplab.simulate(p, t_final=2.0, margin=20.0, dx=0.2, output_interval=1.0)
    assert [s["t"] for s in snaps] == [0.0, 1.0, 2.0]
    assert all(math.isfinite(s["lyapunov"]) for s in snaps)
