#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nsp/core.hpp"

namespace nsp {

struct EllipticSolveReport {
    Field phi;
    int iterations = 0;
    double final_residual = 0.0;  // max-norm over interior nodes
    double boundary_residual = 0.0;  // residual at the two nodes next to the Dirichlet ends
    double tolerance = 0.0;
    bool converged = false;
    std::vector<double> residual_history;  // one entry per residual evaluation
};

// Thomas algorithm; `lower` and `upper` hold the n−1 off-diagonal entries.
std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs);

// ∂x²φ = n − e^{−φ} with Dirichlet data, damped Newton. A stalled iteration is
// returned with converged = false rather than thrown.
EllipticSolveReport solve_poisson_boltzmann(const Field& n, double phi_bc_left, double phi_bc_right,
                                            const std::optional<Field>& initial_guess = std::nullopt);

// Same Newton iteration for an arbitrary finite source s in ∂x²φ = s − e^{−φ}.
// The monotone nonlinearity keeps it well posed without the density sign;
// manufactured solutions need this since their source can go negative.
EllipticSolveReport solve_boltzmann_source(const Field& source, double phi_bc_left, double phi_bc_right,
                                           const std::optional<Field>& initial_guess = std::nullopt);
// ∂x²φ = rhs with Dirichlet data.
EllipticSolveReport solve_poisson_linear(const Field& rhs, double phi_bc_left, double phi_bc_right);

// Smallest residual max-norm the three-point Laplacian can resolve for a
// solution of size `phi_scale`.
double laplacian_rounding_floor(double phi_scale, double dx);

}  // namespace nsp
