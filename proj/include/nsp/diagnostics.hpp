#pragma once

#include <vector>

#include "nsp/core.hpp"
#include "nsp/fit.hpp"
#include "nsp/nsp_sim.hpp"
#include "nsp/rarewave.hpp"

namespace nsp {

// Relative pressure potential A·∫_{nr}^{n} (s − nr)/s² ds.
double psi_potential(double n, double nr, double A);

struct ZeroOrderEnergy {
    double kinetic = 0.0;  // (ũ, n ũ)
    double pressure = 0.0;  // 2 (n, ψ)
    double potential_quad = 0.0;  // (φ̃², nʳ)
    double potential_grad = 0.0;  // ‖∂x φ̃‖²
    double potential_cubic = 0.0;  // −(2/3)(φ̃³, nʳ)
    double total() const { return kinetic + pressure + potential_quad + potential_grad + potential_cubic; }
};

struct FirstOrderEnergy {
    double density_grad = 0.0;  // ((∂x ñ)², n⁻²)
    double cross = 0.0;  // 2 (ũ, ∂x ñ)
    double velocity_grad = 0.0;  // ‖∂x ũ‖²
    double total() const { return density_grad + cross + velocity_grad; }
};

struct DissipationRates {
    double wave_weighted = 0.0;  // ∫ ∂x uʳ (ũ² + (∂x ñ)² + (∂x ũ)²)
    double flat = 0.0;  // ‖∂x ñ‖² + ‖∂x ũ‖² + ‖∂x φ̃‖² + ‖∂x² φ̃‖² + ‖∂x² ũ‖²
    double visc = 0.0;  // ‖∂x ũ‖²
    double density = 0.0;  // ‖∂x ñ‖²
    double potential = 0.0;  // ‖∂x φ̃‖² + ‖∂x² φ̃‖²
};

ZeroOrderEnergy zero_order_energy(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p);
FirstOrderEnergy first_order_energy(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p);
DissipationRates dissipation_rates(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p);

// Weight on the zero-order group: 4·max(1, 1/n₋²).
double lyapunov_weight(const PhysParamsOne& p);
// Two-fluid weight; raised where needed so each species' (ũ, ∂x ñ) block is definite.
double lyapunov_weight(const PhysParamsTwo& p);

// Smallest eigenvalue of the pointwise (ũ, ∂x ñ) block of the Lyapunov
// integrand, minimised over nodes. Positive means the functional is definite.
double lyapunov_block_margin(const Field& n, double weight, double mass = 1.0);

struct EnergyReport {
    double time = 0.0;
    double weight = 0.0;
    ZeroOrderEnergy zero;
    FirstOrderEnergy first;
    DissipationRates dissipation;
    double E_zero = 0.0;  // weight · zero.total()
    double E_first = 0.0;
    double sup_distance = 0.0;  // max(sup|ñ|, sup|ũ|)
    double sup_n = 0.0;
    double sup_u = 0.0;
    double sup_phi = 0.0;  // sup|φ − φʳ|
    double quasineutral_gap = 0.0;  // sup|φ + ln n|
    double lyapunov() const { return E_zero + E_first; }
};

EnergyReport energy_report(const FluidState& s, const RarefactionProfile& pr, const PhysParamsOne& p);

// Interior max of |d2dx2(φ̃) − (ñ + nʳ(1 − e^{−φ̃}) − d2dx2(φʳ))|, which
// vanishes when φ solves the discrete Poisson–Boltzmann equation.
double poisson_identity_gap(const FluidState& s, const RarefactionProfile& pr);

struct TwoFluidWeights {
    double beta = 1.0;
    double gamma = 1.0;
    static TwoFluidWeights defaults(const PhysParamsTwo& p) { return {p.m_e, p.m_i}; }
    void validate(const PhysParamsTwo& p) const;
};

struct TwoFluidEnergy {
    double kinetic = 0.0;  // C Σ m (ũ, n ũ)
    double pressure = 0.0;  // 2C Σ (n, ψ_α)
    double potential_grad = 0.0;  // C ‖∂x φ̃‖²
    double cross_beta_gamma = 0.0;
    double density_grad = 0.0;  // Σ ((∂x ñ)², n⁻²)
    double cross = 0.0;  // Σ 2m (ũ, ∂x ñ)
    double velocity_grad = 0.0;  // Σ m ‖∂x ũ‖²
    double quad_form = 0.0;  // (nʳ (√(γm_i)ũ_i + √(βm_e)ũ_e)², ∂x uʳ) / (2(β+γ))
    double density_correction = 0.0;  // ñ-part of the split of ½I₀ + I₆
    double profile_time_correction = 0.0;  // ∂t∂x φʳ part of the same split
    double weight = 0.0;
    double E_zero() const { return kinetic + pressure + potential_grad + cross_beta_gamma; }
    double E_first() const { return density_grad + cross + velocity_grad; }
    double total() const { return E_zero() + E_first(); }
};

TwoFluidEnergy twofluid_energy(const TwoFluidState& s, const RarefactionProfile& pr, const PhysParamsTwo& p,
                               const TwoFluidWeights& w);

// ½I₀ + I₆ evaluated directly, for checking the quad_form split.
double twofluid_half_I0_plus_I6(const TwoFluidState& s, const RarefactionProfile& pr, const PhysParamsTwo& p,
                                const TwoFluidWeights& w);

struct ConvergenceRow {
    double t = 0.0;
    double sup_n = 0.0;
    double sup_u = 0.0;
    double sup_phi = 0.0;
};

ConvergenceRow convergence_row(const FluidState& s, const RarefactionProfile& pr);
ConvergenceRow convergence_row(const TwoFluidState& s, const RarefactionProfile& pr);
std::vector<ConvergenceRow> convergence_report(const Trajectory& traj);

Snapshot snapshot_onefluid(const FluidState& s, const PhysParamsOne& p, long step);
Snapshot snapshot_twofluid(const TwoFluidState& s, const PhysParamsTwo& p, long step);

// Windowed envelope test: consecutive window maxima after t_start never grow
// by more than the slack factor.
struct EnvelopeCheck {
    bool holds = true;
    double worst_ratio = 0.0;
    std::vector<double> window_max;
};
EnvelopeCheck envelope_nonincreasing(const std::vector<double>& t, const std::vector<double>& v, double t_start,
                                     double window, double slack);

}  // namespace nsp
