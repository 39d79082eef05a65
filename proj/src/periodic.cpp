// Pseudo-spectral periodic solver with the Poisson equation linearized about
// n = 1, used to check the Fourier-mode theory against a nonlinear run.
#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>
#include <fmt/core.h>

#include "nsp/core.hpp"
#include "nsp/linear.hpp"

namespace nsp::linear {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Real-to-complex transform pair of fixed size. FFTW's planner is not
// thread-safe, so plan creation is serialised.
class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n) {
        real_ = fftw_alloc_real(n);
        spec_ = fftw_alloc_complex(n / 2 + 1);
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    // Coefficients c_k with f(x_j) = Σ c_k e^{i ξ_k x_j}, k = 0..n/2.
    std::vector<cplx> forward(const std::vector<double>& f) {
        std::copy(f.begin(), f.end(), real_);
        fftw_execute(fwd_);
        std::vector<cplx> c(n_ / 2 + 1);
        const double s = 1.0 / static_cast<double>(n_);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = cplx(spec_[k][0], spec_[k][1]) * s;
        return c;
    }

    std::vector<double> backward(const std::vector<cplx>& c) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            spec_[k][0] = c[k].real();
            spec_[k][1] = c[k].imag();
        }
        fftw_execute(bwd_);
        return std::vector<double>(real_, real_ + n_);
    }

private:
    std::size_t n_;
    double* real_ = nullptr;
    fftw_complex* spec_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

struct PeriodicModel {
    const PeriodicConfig& cfg;
    RealFft fft;
    std::vector<double> xi;  // wave number per retained coefficient index

    explicit PeriodicModel(const PeriodicConfig& c) : cfg(c), fft(c.n_cells), xi(c.n_cells / 2 + 1) {
        for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = 2.0 * M_PI * static_cast<double>(k) / cfg.length;
    }

    std::vector<double> derivative(const std::vector<cplx>& c, int order) {
        std::vector<cplx> d(c.size());
        const std::size_t nyq = cfg.n_cells / 2;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const cplx ik(0.0, xi[k]);
            d[k] = order == 1 ? (k == nyq ? cplx(0.0) : ik * c[k]) : -xi[k] * xi[k] * c[k];
        }
        return fft.backward(d);
    }

    // Explicit rates: −∂x(nu) and everything in ∂t u except the u_xx part
    // treated implicitly.
    void rates(const std::vector<double>& n, const std::vector<double>& u, std::vector<double>& rn,
               std::vector<cplx>& ru_hat) {
        const std::size_t N = n.size();
        std::vector<double> nt(N), flux(N);
        for (std::size_t j = 0; j < N; ++j) {
            nt[j] = n[j] - 1.0;
            flux[j] = n[j] * u[j];
        }
        const std::vector<cplx> n_hat = fft.forward(n);
        const std::vector<cplx> u_hat = fft.forward(u);
        std::vector<cplx> phi_hat = fft.forward(nt);
        for (std::size_t k = 0; k < phi_hat.size(); ++k) phi_hat[k] /= -(cfg.eps * xi[k] * xi[k] + 1.0);
        const std::vector<double> n_x = derivative(n_hat, 1);
        const std::vector<double> u_x = derivative(u_hat, 1);
        const std::vector<double> u_xx = derivative(u_hat, 2);
        const std::vector<double> phi_x = derivative(phi_hat, 1);
        const std::vector<double> flux_x = derivative(fft.forward(flux), 1);
        std::vector<double> ru(N);
        rn.resize(N);
        for (std::size_t j = 0; j < N; ++j) {
            rn[j] = -flux_x[j];
            ru[j] = -u[j] * u_x[j] - cfg.A * n_x[j] / n[j] + phi_x[j] + u_xx[j] * (1.0 / n[j] - 1.0);
        }
        ru_hat = fft.forward(ru);
    }

    // Heun for the explicit part, trapezoidal rule for u_xx (diagonal in Fourier space).
    void step(std::vector<double>& n, std::vector<double>& u, double dt) {
        const std::size_t N = n.size();
        std::vector<double> rn0, rn1;
        std::vector<cplx> ru0, ru1;
        rates(n, u, rn0, ru0);
        const std::vector<cplx> u_hat = fft.forward(u);

        auto implicit_u = [&](const std::vector<cplx>& explicit_part) {
            std::vector<cplx> c(u_hat.size());
            for (std::size_t k = 0; k < c.size(); ++k) {
                const double x2 = xi[k] * xi[k];
                c[k] = (u_hat[k] * (1.0 - 0.5 * dt * x2) + dt * explicit_part[k]) / (1.0 + 0.5 * dt * x2);
            }
            return fft.backward(c);
        };

        std::vector<double> n1(N);
        for (std::size_t j = 0; j < N; ++j) n1[j] = n[j] + dt * rn0[j];
        const std::vector<double> u1 = implicit_u(ru0);
        rates(n1, u1, rn1, ru1);

        std::vector<cplx> avg(ru0.size());
        for (std::size_t k = 0; k < avg.size(); ++k) avg[k] = 0.5 * (ru0[k] + ru1[k]);
        for (std::size_t j = 0; j < N; ++j) n[j] += 0.5 * dt * (rn0[j] + rn1[j]);
        u = implicit_u(avg);
        for (double v : n)
            if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError("periodic run: positivity lost");
    }
};

}  // namespace

ConsistencyReport linearized_consistency(const PeriodicConfig& cfg, std::span<const double> xis) {
    if (cfg.n_cells < 16 || cfg.n_cells % 2 != 0) throw ValidationError("periodic run: n_cells must be even and >= 16");
    if (!(cfg.amplitude >= 0.0) || cfg.amplitude > 1e-2)
        throw ValidationError(fmt::format("periodic run: amplitude {} outside the small-amplitude regime", cfg.amplitude));
    if (!(cfg.dt > 0.0) || !(cfg.t_final >= 0.0) || !(cfg.sample_interval > 0.0) || !(cfg.length > 0.0))
        throw ValidationError("periodic run: dt, t_final, sample_interval and length must be positive");

    std::vector<int> index;
    for (double xi : xis) {
        const double kf = xi * cfg.length / (2.0 * M_PI);
        const long k = std::lround(kf);
        if (std::abs(kf - static_cast<double>(k)) > 1e-9 || k <= 0)
            throw ValidationError(fmt::format("periodic run: xi={} is not a positive multiple of 2*pi/length", xi));
        if (static_cast<std::size_t>(k) > cfg.n_cells / 8)
            throw ValidationError(fmt::format("periodic run: mode {} aliases (must be <= n_cells/8 = {})", k, cfg.n_cells / 8));
        index.push_back(static_cast<int>(k));
    }

    PeriodicModel model(cfg);
    const std::size_t N = cfg.n_cells;
    const double dx = cfg.length / static_cast<double>(N);
    std::vector<double> n(N, 1.0), u(N, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
        const double x = static_cast<double>(j) * dx;
        for (int k : index) {
            const double xi = model.xi[static_cast<std::size_t>(k)];
            n[j] += cfg.amplitude * std::cos(xi * x);
            if (cfg.perturb_velocity) u[j] += cfg.amplitude * std::sin(xi * x);
        }
    }

    std::vector<SpectralMode> modes;
    std::vector<std::array<cplx, 2>> initial;
    {
        std::vector<double> nt(N);
        for (std::size_t j = 0; j < N; ++j) nt[j] = n[j] - 1.0;
        const auto nh = model.fft.forward(nt);
        const auto uh = model.fft.forward(u);
        for (int k : index) {
            modes.push_back(spectral_mode(model.xi[static_cast<std::size_t>(k)], cfg.eps, cfg.A));
            initial.push_back({nh[static_cast<std::size_t>(k)], uh[static_cast<std::size_t>(k)]});
        }
    }

    ConsistencyReport rep;
    for (std::size_t m = 0; m < index.size(); ++m) rep.modes.push_back({modes[m].xi, index[m], 0.0});

    const long per_sample = std::max(1L, static_cast<long>(std::ceil(cfg.sample_interval / cfg.dt - 1e-9)));
    const double dt = cfg.sample_interval / static_cast<double>(per_sample);
    const long samples = static_cast<long>(std::floor(cfg.t_final / cfg.sample_interval + 1e-9));

    for (long s = 1; s <= samples; ++s) {
        for (long k = 0; k < per_sample; ++k) model.step(n, u, dt);
        const double t = static_cast<double>(s) * cfg.sample_interval;
        rep.sample_times.push_back(t);

        std::vector<double> nt(N);
        for (std::size_t j = 0; j < N; ++j) nt[j] = n[j] - 1.0;
        const auto nh = model.fft.forward(nt);
        const auto uh = model.fft.forward(u);

        std::vector<cplx> lin_n(N / 2 + 1), lin_u(N / 2 + 1);
        for (std::size_t m = 0; m < index.size(); ++m) {
            const Mat2 G = greens_matrix(modes[m], t);
            const cplx pn = G[0][0] * initial[m][0] + G[0][1] * initial[m][1];
            const cplx pu = G[1][0] * initial[m][0] + G[1][1] * initial[m][1];
            const auto k = static_cast<std::size_t>(index[m]);
            lin_n[k] += pn;
            lin_u[k] += pu;
            const double scale = std::hypot(std::abs(pn), std::abs(pu));
            const double diff = std::hypot(std::abs(nh[k] - pn), std::abs(uh[k] - pu));
            const double err = scale > 0.0 ? diff / scale : diff;
            rep.modes[m].max_relative_error = std::max(rep.modes[m].max_relative_error, err);
        }
        // Physical-space comparison over every mode, including those the
        // retained set does not predict.
        const std::vector<double> pred_n = model.fft.backward(lin_n);
        const std::vector<double> pred_u = model.fft.backward(lin_u);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            num += (nt[j] - pred_n[j]) * (nt[j] - pred_n[j]) + (u[j] - pred_u[j]) * (u[j] - pred_u[j]);
            den += pred_n[j] * pred_n[j] + pred_u[j] * pred_u[j];
        }
        const double ferr = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        rep.field_error = std::max(rep.field_error, ferr);
    }
    return rep;
}

}  // namespace nsp::linear
