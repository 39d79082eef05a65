#include "nsp/poisson.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace nsp {

std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    if (rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n)
        throw ValidationError(fmt::format("tridiag_solve: inconsistent sizes diag={} lower={} upper={} rhs={}", n,
                                          lower.size(), upper.size(), rhs.size()));
    std::vector<double> c(n), x(n);
    double pivot = diag[0];
    if (pivot == 0.0) throw NumericalError("tridiag_solve: zero pivot at row 0");
    c[0] = n > 1 ? upper[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if (pivot == 0.0) throw NumericalError(fmt::format("tridiag_solve: zero pivot at row {}", i));
        c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    for (double v : x)
        if (!std::isfinite(v)) throw NumericalError("tridiag_solve: non-finite solution");
    return x;
}

double laplacian_rounding_floor(double phi_scale, double dx) {
    return 10.0 * std::numeric_limits<double>::epsilon() * phi_scale / (dx * dx);
}

namespace {

struct Residual {
    std::vector<double> r;  // interior nodes 1..N−2, stored at the node index
    double max_abs = 0.0;
    double boundary = 0.0;
};

// ∂x²φ − n + e^{−φ}
Residual boltzmann_residual(const std::vector<double>& phi, const Field& n, double dx) {
    const std::size_t N = phi.size();
    const double inv = 1.0 / (dx * dx);
    Residual res;
    res.r.assign(N, 0.0);
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double v = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) * inv - n[i] + std::exp(-phi[i]);
        res.r[i] = v;
        res.max_abs = std::max(res.max_abs, std::abs(v));
    }
    res.boundary = std::max(std::abs(res.r[1]), std::abs(res.r[N - 2]));
    return res;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

EllipticSolveReport solve_poisson_boltzmann(const Field& n, double phi_bc_left, double phi_bc_right,
                                            const std::optional<Field>& initial_guess) {
    if (!n.all_finite()) throw NumericalError("poisson_boltzmann: non-finite density");
    if (n.min() <= 0.0) throw ValidationError(fmt::format("poisson_boltzmann: density must be positive, min is {}", n.min()));
    return solve_boltzmann_source(n, phi_bc_left, phi_bc_right, initial_guess);
}

EllipticSolveReport solve_boltzmann_source(const Field& n, double phi_bc_left, double phi_bc_right,
                                           const std::optional<Field>& initial_guess) {
    if (!n.all_finite()) throw NumericalError("poisson_boltzmann: non-finite source");
    if (!std::isfinite(phi_bc_left) || !std::isfinite(phi_bc_right))
        throw ValidationError("poisson_boltzmann: boundary values must be finite");

    const Grid1D& g = n.grid();
    const std::size_t N = g.n_cells;
    const double dx = g.dx;
    const double dx2 = dx * dx;

    std::vector<double> phi(N);
    if (initial_guess) {
        require_same_grid(n, *initial_guess, "poisson_boltzmann guess");
        phi = initial_guess->data();
    } else {
        // Quasineutral guess where the source is positive, straight line between the ends elsewhere.
        for (std::size_t i = 0; i < N; ++i)
            phi[i] = n[i] > 0.0 ? -std::log(n[i])
                                : phi_bc_left + (phi_bc_right - phi_bc_left) * static_cast<double>(i) / (N - 1);
    }
    phi.front() = phi_bc_left;
    phi.back() = phi_bc_right;

    const double n_sup = n.max_abs();
    const double stall_tol = 1e-10 * (1.0 + n_sup);

    EllipticSolveReport rep;
    Residual res = boltzmann_residual(phi, n, dx);
    const std::size_t m = N - 2;
    std::vector<double> lower(m - 1, 1.0), upper(m - 1, 1.0), diag(m), rhs(m);

    for (int it = 1; it <= 50; ++it) {
        rep.iterations = it;
        rep.residual_history.push_back(res.max_abs);
        rep.tolerance = 1e-12 * (1.0 + n_sup) + laplacian_rounding_floor(max_abs(phi), dx);
        if (res.max_abs <= rep.tolerance) {
            rep.converged = true;
            break;
        }
        for (std::size_t k = 0; k < m; ++k) {
            diag[k] = -2.0 - dx2 * std::exp(-phi[k + 1]);
            rhs[k] = -dx2 * res.r[k + 1];
        }
        const std::vector<double> step = tridiag_solve(lower, diag, upper, rhs);

        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> trial(phi);
        while (alpha >= 0x1p-20) {
            for (std::size_t k = 0; k < m; ++k) trial[k + 1] = phi[k + 1] + alpha * step[k];
            Residual tr = boltzmann_residual(trial, n, dx);
            if (std::isfinite(tr.max_abs) && tr.max_abs < res.max_abs) {
                phi.swap(trial);
                res = std::move(tr);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // No descent left: the residual sits at the rounding level.
            rep.converged = res.max_abs <= stall_tol;
            break;
        }
        if (it == 50) {
            rep.residual_history.push_back(res.max_abs);
            rep.converged = res.max_abs <= rep.tolerance;
        }
    }
    rep.final_residual = res.max_abs;
    rep.boundary_residual = res.boundary;
    rep.phi = Field(g, std::move(phi));
    return rep;
}

EllipticSolveReport solve_poisson_linear(const Field& rhs, double phi_bc_left, double phi_bc_right) {
    if (!rhs.all_finite()) throw NumericalError("poisson_linear: non-finite right-hand side");
    if (!std::isfinite(phi_bc_left) || !std::isfinite(phi_bc_right))
        throw ValidationError("poisson_linear: boundary values must be finite");
    const Grid1D& g = rhs.grid();
    const std::size_t N = g.n_cells;
    const std::size_t m = N - 2;
    const double dx2 = g.dx * g.dx;

    std::vector<double> lower(m - 1, 1.0), upper(m - 1, 1.0), diag(m, -2.0), b(m);
    for (std::size_t k = 0; k < m; ++k) b[k] = dx2 * rhs[k + 1];
    b.front() -= phi_bc_left;
    b.back() -= phi_bc_right;
    const std::vector<double> inner_phi = tridiag_solve(lower, diag, upper, b);

    std::vector<double> phi(N);
    phi.front() = phi_bc_left;
    phi.back() = phi_bc_right;
    std::copy(inner_phi.begin(), inner_phi.end(), phi.begin() + 1);

    EllipticSolveReport rep;
    rep.iterations = 1;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double r = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) / dx2 - rhs[i];
        worst = std::max(worst, std::abs(r));
        if (i == 1 || i == N - 2) rep.boundary_residual = std::max(rep.boundary_residual, std::abs(r));
    }
    rep.final_residual = worst;
    rep.residual_history.push_back(worst);
    rep.tolerance = 1e-12 * (1.0 + rhs.max_abs()) + laplacian_rounding_floor(max_abs(phi), g.dx);
    rep.converged = worst <= rep.tolerance;
    rep.phi = Field(g, std::move(phi));
    return rep;
}

}  // namespace nsp
