#include "nsp/core.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace nsp {

Grid1D::Grid1D(double x_min_, double x_max_, std::size_t n_cells_)
    : x_min(x_min_), x_max(x_max_), n_cells(n_cells_) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw ValidationError(fmt::format("grid: need finite x_min < x_max, got [{}, {}]", x_min, x_max));
    if (n_cells < 8) throw ValidationError(fmt::format("grid: n_cells must be >= 8, got {}", n_cells));
    dx = (x_max - x_min) / static_cast<double>(n_cells - 1);
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double spacing) {
    if (!(spacing > 0.0)) throw ValidationError("grid: spacing must be positive");
    const double cells = std::round((x_max - x_min) / spacing);
    return Grid1D(x_min, x_max, static_cast<std::size_t>(std::max(cells, 7.0)) + 1);
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> xs(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) xs[i] = x(i);
    return xs;
}

Field::Field(const Grid1D& g, double fill) : grid_(g), values_(g.n_cells, fill) {}

Field::Field(const Grid1D& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
    if (values_.size() != g.n_cells)
        throw ValidationError(fmt::format("field: {} values for a grid of {} nodes", values_.size(), g.n_cells));
}

Field Field::from_function(const Grid1D& g, const std::function<double(double)>& f) {
    Field out(g);
    for (std::size_t i = 0; i < g.n_cells; ++i) out.values_[i] = f(g.x(i));
    return out;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o, "field +");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o, "field -");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid()) || a.size() != b.size())
        throw ValidationError(fmt::format("{}: grid mismatch", where));
}

Field pointwise_product(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise_product");
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

namespace {

void require_finite(const Field& f, const char* where) {
    if (!f.all_finite()) throw NumericalError(fmt::format("{}: non-finite input", where));
}

}  // namespace

Field ddx(const Field& f) {
    require_finite(f, "ddx");
    const std::size_t n = f.size();
    const double h2 = 2.0 * f.grid().dx;
    Field out(f.grid());
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / h2;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / h2;
    return out;
}

Field d2dx2(const Field& f) {
    require_finite(f, "d2dx2");
    const std::size_t n = f.size();
    const double h = f.grid().dx;
    const double hh = h * h;
    Field out(f.grid());
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / hh;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / hh;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / hh;
    return out;
}

double integrate(std::span<const double> v, double dx) {
    if (v.size() < 2) return 0.0;
    CompensatedSum s;
    s.add(0.5 * v.front());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s.add(v[i]);
    s.add(0.5 * v.back());
    return s.value() * dx;
}

double integrate(const Field& f) { return integrate(f.values(), f.grid().dx); }

double inner(const Field& a, const Field& b) { return integrate(pointwise_product(a, b)); }

double lp_norm(const Field& f, double p) {
    if (std::isnan(p) || p < 1.0) throw ValidationError(fmt::format("lp_norm: p must be >= 1, got {}", p));
    if (std::isinf(p)) return f.max_abs();
    const double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    // Scaling by the max keeps |f|^p in range for large p.
    std::vector<double> powered(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) powered[i] = std::pow(std::abs(f[i]) / scale, p);
    return scale * std::pow(integrate(powered, f.grid().dx), 1.0 / p);
}

SobolevCheck sobolev_sup_check(const Field& f) {
    SobolevCheck r;
    r.tolerance = 5.0 * f.grid().dx;
    r.lhs = f.max_abs();
    if (r.lhs == 0.0) return r;
    const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
    r.applicable = edge < 0.01 * r.lhs;
    r.rhs = std::sqrt(2.0) * std::sqrt(lp_norm(f, 2.0)) * std::sqrt(lp_norm(ddx(f), 2.0));
    r.holds = !r.applicable || r.lhs <= r.rhs * (1.0 + r.tolerance);
    return r;
}

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(fmt::format("params: {} must be positive and finite, got {}", name, v));
}

void check_r2(double n_minus, double n_plus, double u_minus) {
    if (!std::isfinite(u_minus)) throw ValidationError("params: u_minus must be finite");
    if (!(n_plus > n_minus))
        throw ValidationError(fmt::format("params: a 2-rarefaction needs n_plus > n_minus, got n_minus={} n_plus={}", n_minus, n_plus));
}

}  // namespace

void PhysParamsOne::validate() const {
    require_positive(A, "A");
    require_positive(n_minus, "n_minus");
    require_positive(n_plus, "n_plus");
    require_positive(eps_smooth, "eps_smooth");
    check_r2(n_minus, n_plus, u_minus);
}

void PhysParamsTwo::validate() const {
    require_positive(m_i, "m_i");
    require_positive(m_e, "m_e");
    require_positive(T_i, "T_i");
    require_positive(T_e, "T_e");
    require_positive(mu_i, "mu_i");
    require_positive(mu_e, "mu_e");
    require_positive(n_minus, "n_minus");
    require_positive(n_plus, "n_plus");
    require_positive(eps_smooth, "eps_smooth");
    check_r2(n_minus, n_plus, u_minus);
}

}  // namespace nsp
