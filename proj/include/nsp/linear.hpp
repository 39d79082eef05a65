#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace nsp::linear {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat2 identity();
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(cplx s, const Mat2& a);
double max_abs(const Mat2& a);

// How the density coefficient of the linearized momentum equation is chosen.
// consistent: A + 1/a(ξ), which is what the Fourier energy identity uses.
// literal: a(ξ), as in the matrix printed with the eigenvalue formula.
enum class Coefficient { consistent, literal };
const char* to_string(Coefficient c);

struct SpectralMode {
    double xi = 0.0;
    double eps = 1.0;
    double A = 1.0;
    Coefficient coefficient = Coefficient::consistent;
    double a = 1.0;  // εξ² + 1
    double sigma = 2.0;
    cplx lambda_plus{0.0, 0.0};
    cplx lambda_minus{0.0, 0.0};
    Mat2 P_plus{};
    Mat2 P_minus{};
    bool degenerate = false;
    bool solved = false;

    // Generator of d/dt (n̂, û) = M (n̂, û).
    Mat2 M() const;
};

SpectralMode mode_coefficients(double xi, double eps, double A, Coefficient coefficient = Coefficient::consistent);
SpectralMode eigensystem(SpectralMode mode);
SpectralMode spectral_mode(double xi, double eps, double A, Coefficient coefficient = Coefficient::consistent);

// e^{tM}, evaluated without cancellation near λ₊ = λ₋.
Mat2 greens_matrix(const SpectralMode& mode, double t);
// Entrywise closed form e^{λ₊t}P₊ + e^{λ₋t}P₋ written out as in the appendix.
Mat2 greens_matrix_closed_form(const SpectralMode& mode, double t);

inline constexpr double default_kappa = 0.05;

struct ModeEnergy {
    double E = 0.0;
    double D = 0.0;
};
ModeEnergy mode_energy(cplx n_hat, cplx u_hat, const SpectralMode& mode, double kappa = default_kappa);

// Exponential decay rate of E(t) along the exact propagator, from a
// least-squares fit of log E over `windows` e-folding times of the slower
// eigenvalue.
struct DecayRateFit {
    double rate = 0.0;
    double t_end = 0.0;
};
DecayRateFit fit_mode_decay(const SpectralMode& mode, double kappa = default_kappa, double windows = 10.0);

// Periodic small-amplitude cross-check of the nonlinear scheme.
struct PeriodicConfig {
    double A = 1.0;
    double eps = 1.0;  // coefficient of φ'' in ε φ'' = n + φ (linearized about n = 1)
    double length = 6.283185307179586;  // period
    std::size_t n_cells = 256;
    double t_final = 10.0;
    double dt = 1e-3;
    double amplitude = 1e-4;
    double sample_interval = 0.25;
    bool perturb_velocity = false;  // default: density-only initial mode
};

struct ModeError {
    double xi = 0.0;
    int index = 0;
    double max_relative_error = 0.0;
};

struct ConsistencyReport {
    std::vector<ModeError> modes;
    // max over samples of ‖field − linear prediction‖₂ / ‖linear prediction‖₂
    double field_error = 0.0;
    std::vector<double> sample_times;
};

ConsistencyReport linearized_consistency(const PeriodicConfig& cfg, std::span<const double> xis);

}  // namespace nsp::linear
