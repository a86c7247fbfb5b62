#pragma once

#include <functional>
#include <vector>

#include "stratiwave/chebyshev.hpp"
#include "stratiwave/profiles.hpp"

namespace stratiwave {

/// A function of y held by its values at the Chebyshev-Gauss-Lobatto nodes of
/// `domain` (node 0 at the top).
class NodalFunction {
public:
    NodalFunction(std::vector<double> values, Interval domain);

    static NodalFunction constant(int m, Interval domain, double value);
    static NodalFunction sample(int m, Interval domain, const std::function<double(double)>& f);

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    int size() const { return static_cast<int>(values_.size()); }
    const Interval& domain() const { return domain_; }
    std::vector<double> nodes() const { return cheb::nodes(size(), domain_); }

    /// Barycentric interpolation; throws a domain error outside the interval.
    double at(double y) const;
    double sup_norm() const;
    bool same_grid(const NodalFunction& other) const;

    friend NodalFunction operator+(const NodalFunction& a, const NodalFunction& b);
    friend NodalFunction operator-(const NodalFunction& a, const NodalFunction& b);
    friend NodalFunction operator*(const NodalFunction& a, const NodalFunction& b);
    friend NodalFunction operator*(double s, const NodalFunction& a);

private:
    std::vector<double> values_;
    Interval domain_;
};

NodalFunction nodal_diff(const NodalFunction& f);
/// Second derivative of the nodal interpolant (spectrally exact for
/// polynomials of degree <= M-1).
NodalFunction nodal_diff2(const NodalFunction& f);

/// psi(x, y) = sum_n a_{2n}(y) x^{2n}, n = 0..N. Odd powers are not stored.
class EvenSeries {
public:
    explicit EvenSeries(std::vector<NodalFunction> coeffs);

    static EvenSeries zero(int order, int m, Interval domain);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    int grid_size() const { return coeffs_.front().size(); }
    const Interval& domain() const { return coeffs_.front().domain(); }
    const NodalFunction& coeff(int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
    const std::vector<NodalFunction>& coeffs() const { return coeffs_; }

    /// Leading coefficients a_0..a_{2n}.
    EvenSeries truncated(int n) const;

private:
    std::vector<NodalFunction> coeffs_;
};

EvenSeries series_add(const EvenSeries& a, const EvenSeries& b, double alpha, double beta);
/// Truncated Cauchy product in x^2.
EvenSeries series_mul(const EvenSeries& a, const EvenSeries& b);
/// Series of F(sign * psi) by Horner recursion; sign must be +1 or -1.
EvenSeries series_compose_poly(const Polynomial& f, int sign, const EvenSeries& psi);

double series_eval(const EvenSeries& psi, double x, double y);

/// 1 / limsup ||a_2n||^(1/2n) from a log-linear fit; +infinity when every
/// coefficient past a_0 is below 1e-14.
double radius_estimate(const EvenSeries& psi);

/// psi and its first and second partial derivatives at a point.
struct SeriesPoint {
    double psi = 0.0;
    double psi_x = 0.0;
    double psi_y = 0.0;
    double psi_xx = 0.0;
    double psi_yy = 0.0;
    double laplacian() const { return psi_xx + psi_yy; }
};

/// Caches the y-derivative series so pointwise evaluation is cheap.
class SeriesEvaluator {
public:
    explicit SeriesEvaluator(EvenSeries psi);

    const EvenSeries& series() const { return psi_; }
    SeriesPoint at(double x, double y) const;
    double value(double x, double y) const;

private:
    EvenSeries psi_;
    std::vector<NodalFunction> dy_;
    std::vector<NodalFunction> dyy_;
};

}  // namespace stratiwave
