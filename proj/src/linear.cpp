#include "nsp/linear.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "nsp/core.hpp"

namespace nsp::linear {

Mat2 identity() { return Mat2{{{cplx(1.0), cplx(0.0)}, {cplx(0.0), cplx(1.0)}}}; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

Mat2 operator*(cplx s, const Mat2& a) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = s * a[i][j];
    return c;
}

double max_abs(const Mat2& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (const cplx& v : row) m = std::max(m, std::abs(v));
    return m;
}

const char* to_string(Coefficient c) { return c == Coefficient::consistent ? "consistent" : "literal"; }

Mat2 SpectralMode::M() const {
    const cplx i(0.0, 1.0);
    return Mat2{{{cplx(0.0), -i * xi}, {-i * xi * sigma, cplx(-xi * xi)}}};
}

SpectralMode mode_coefficients(double xi, double eps, double A, Coefficient coefficient) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError(fmt::format("mode: eps must be positive, got {}", eps));
    if (!std::isfinite(xi)) throw ValidationError("mode: xi must be finite");
    if (!(A > 0.0)) throw ValidationError(fmt::format("mode: A must be positive, got {}", A));
    SpectralMode m;
    m.xi = xi;
    m.eps = eps;
    m.A = A;
    m.coefficient = coefficient;
    m.a = eps * xi * xi + 1.0;
    m.sigma = coefficient == Coefficient::consistent ? A + 1.0 / m.a : m.a;
    return m;
}

SpectralMode eigensystem(SpectralMode m) {
    // λ² + bλ + c = 0 with b = ξ², c = ξ²σ; the root q avoids cancellation and
    // its partner follows from the product.
    const double b = m.xi * m.xi;
    const double c = b * m.sigma;
    const cplx disc = cplx(b * b - 4.0 * c, 0.0);
    const cplx sd = std::sqrt(disc);
    const cplx q = -0.5 * (b + sd);
    cplx r1 = q;
    cplx r2 = q == cplx(0.0) ? cplx(0.0) : c / q;
    if (disc.real() < 0.0) {
        // Complex pair: the conjugate is exact and keeps the ordering clean.
        r1 = cplx(-0.5 * b, 0.5 * sd.imag());
        r2 = std::conj(r1);
    }
    const bool first = r1.real() > r2.real() || (r1.real() == r2.real() && r1.imag() >= r2.imag());
    m.lambda_plus = first ? r1 : r2;
    m.lambda_minus = first ? r2 : r1;
    const cplx gap = m.lambda_plus - m.lambda_minus;
    m.degenerate = b == 0.0 || std::abs(gap) < 1e-8 * b;
    if (m.degenerate) {
        m.P_plus = identity();
        m.P_minus = Mat2{};
    } else {
        const Mat2 M = m.M();
        m.P_plus = (1.0 / gap) * (M - m.lambda_minus * identity());
        m.P_minus = (-1.0 / gap) * (M - m.lambda_plus * identity());
    }
    m.solved = true;
    return m;
}

SpectralMode spectral_mode(double xi, double eps, double A, Coefficient coefficient) {
    return eigensystem(mode_coefficients(xi, eps, A, coefficient));
}

namespace {

cplx sinhc(cplx h) {
    if (std::abs(h) < 1e-3) {
        const cplx h2 = h * h;
        return 1.0 + h2 / 6.0 * (1.0 + h2 / 20.0 * (1.0 + h2 / 42.0));
    }
    return std::sinh(h) / h;
}

void require_solved(const SpectralMode& m) {
    if (!m.solved) throw ValidationError("mode: eigensystem not computed");
}

}  // namespace

Mat2 greens_matrix(const SpectralMode& m, double t) {
    require_solved(m);
    if (!(t >= 0.0)) throw ValidationError(fmt::format("greens_matrix: t must be >= 0, got {}", t));
    if (t == 0.0) return identity();
    const cplx mean = 0.5 * (m.lambda_plus + m.lambda_minus);
    const cplx h = 0.5 * (m.lambda_plus - m.lambda_minus) * t;
    if (m.degenerate || std::abs(h.real()) <= 1.0) {
        // e^{tM} = e^{λ̄t}[cosh(h) I + t sinhc(h) (M − λ̄I)]; the Jordan form is the h → 0 limit.
        const Mat2 shifted = m.M() - mean * identity();
        return std::exp(mean * t) * (std::cosh(h) * identity() + (t * sinhc(h)) * shifted);
    }
    // Well separated real parts: the spectral sum has no cancellation and no overflow.
    return std::exp(m.lambda_plus * t) * m.P_plus + std::exp(m.lambda_minus * t) * m.P_minus;
}

Mat2 greens_matrix_closed_form(const SpectralMode& m, double t) {
    require_solved(m);
    const cplx lp = m.lambda_plus, lm = m.lambda_minus;
    const cplx ep = std::exp(lp * t), em = std::exp(lm * t);
    const cplx d = lp - lm;
    const cplx i(0.0, 1.0);
    return Mat2{{{(lp * em - lm * ep) / d, -i * m.xi * (ep - em) / d},
                 {-i * m.xi * m.sigma * (ep - em) / d, (lp * ep - lm * em) / d}}};
}

ModeEnergy mode_energy(cplx n_hat, cplx u_hat, const SpectralMode& m, double kappa) {
    if (!(kappa >= 0.0) || kappa > 0.1)
        throw ValidationError(fmt::format("mode_energy: kappa must lie in [0, 0.1], got {}", kappa));
    const double s = m.A + 1.0 / m.a;
    const double xi2 = m.xi * m.xi;
    const double w = 1.0 + xi2;
    const cplx cross = cplx(0.0, m.xi) * n_hat * std::conj(u_hat);
    ModeEnergy e;
    e.E = s * std::norm(n_hat) + std::norm(u_hat) + kappa * cross.real() / w;
    e.D = xi2 * std::norm(u_hat) + xi2 / w * s * std::norm(n_hat);
    return e;
}

DecayRateFit fit_mode_decay(const SpectralMode& m, double kappa, double windows) {
    require_solved(m);
    if (m.xi == 0.0) return {0.0, 0.0};
    // The window spans `windows` e-folds of the slower eigenvalue, so E stays far from underflow.
    const double slowest = std::min(-m.lambda_plus.real(), -m.lambda_minus.real());
    if (!(slowest > 0.0)) return {0.0, 0.0};
    const double t_end = windows / (2.0 * slowest);
    const int samples = 400;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int k = 0; k <= samples; ++k) {
        const double t = t_end * k / samples;
        const Mat2 G = greens_matrix(m, t);
        const ModeEnergy e = mode_energy(G[0][0], G[1][0], m, kappa);
        const double y = std::log(e.E);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double n = samples + 1;
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    return {-slope, t_end};
}

}  // namespace nsp::linear
