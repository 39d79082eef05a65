#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsp {

// Failure classes; the CLI maps them to distinct exit codes.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Uniform mesh; n_cells counts nodes, both end nodes included.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_cells = 8;
    double dx = 1.0 / 7.0;

    Grid1D() = default;
    Grid1D(double x_min, double x_max, std::size_t n_cells);

    // Node count chosen so the spacing is as close to `spacing` as possible.
    static Grid1D with_spacing(double x_min, double x_max, double spacing);

    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
    std::size_t size() const { return n_cells; }
    std::vector<double> nodes() const;

    bool operator==(const Grid1D& o) const {
        return x_min == o.x_min && x_max == o.x_max && n_cells == o.n_cells;
    }
};

class Field {
public:
    Field() = default;
    explicit Field(const Grid1D& g, double fill = 0.0);
    Field(const Grid1D& g, std::vector<double> values);

    static Field from_function(const Grid1D& g, const std::function<double(double)>& f);

    const Grid1D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    bool all_finite() const;
    double max_abs() const;
    double min() const;
    double max() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }

    template <class F>
    Field map(F&& f) const {
        Field out(grid_);
        for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = f(values_[i]);
        return out;
    }

private:
    Grid1D grid_;
    std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b, const char* where);
Field pointwise_product(const Field& a, const Field& b);

Field ddx(const Field& f);
Field d2dx2(const Field& f);

// Trapezoidal rule with compensated summation.
double integrate(const Field& f);
double integrate(std::span<const double> values, double dx);
double inner(const Field& a, const Field& b);
double lp_norm(const Field& f, double p);

struct SobolevCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool applicable = true;
    bool holds = true;
};
SobolevCheck sobolev_sup_check(const Field& f);

struct PhysParamsOne {
    double A = 1.0;
    double n_minus = 1.0;
    double n_plus = 2.0;
    double u_minus = 0.0;
    double eps_smooth = 0.1;

    double c() const { return std::sqrt(A + 1.0); }
    double u_plus() const { return u_minus + c() * std::log(n_plus / n_minus); }
    double phi_minus() const { return -std::log(n_minus); }
    double phi_plus() const { return -std::log(n_plus); }
    // |n₊−n₋| + |u₊−u₋|
    double strength() const { return std::abs(n_plus - n_minus) + std::abs(u_plus() - u_minus); }
    void validate() const;
};

struct PhysParamsTwo {
    double m_i = 2.0;
    double m_e = 1.0;
    double T_i = 1.0;
    double T_e = 1.0;
    double mu_i = 1.0;
    double mu_e = 1.0;
    double n_minus = 1.0;
    double n_plus = 2.0;
    double u_minus = 0.0;
    double eps_smooth = 0.1;

    double c() const { return std::sqrt((T_i + T_e) / (m_i + m_e)); }
    double phi_coeff() const { return (T_i * m_e - T_e * m_i) / (m_i + m_e); }
    double u_plus() const { return u_minus + c() * std::log(n_plus / n_minus); }
    double phi_minus() const { return phi_coeff() * std::log(n_minus); }
    double phi_plus() const { return phi_coeff() * std::log(n_plus); }
    double strength() const { return std::abs(n_plus - n_minus) + std::abs(u_plus() - u_minus); }
    void validate() const;
};

// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace nsp
