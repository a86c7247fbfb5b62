#pragma once

#include <span>
#include <vector>

namespace stratiwave {

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
    double lo = -1.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double y, double slack = 0.0) const {
        return y >= lo - slack && y <= hi + slack;
    }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Chebyshev-Gauss-Lobatto machinery on a mapped interval.
///
/// Node k sits at the image of cos(k*pi/(M-1)), so node 0 is the top of the
/// interval and node M-1 the bottom. Endpoints are stored exactly.
namespace cheb {

std::vector<double> nodes(int m, Interval iv);

/// Coefficients c_k of sum_k c_k T_k(t) interpolating the nodal values.
std::vector<double> to_coefficients(std::span<const double> values);

/// Nodal values of a Chebyshev expansion with values.size() == coeffs.size().
std::vector<double> to_values(std::span<const double> coeffs);

/// Coefficients of d/dy of the expansion, for the interval of length `len`.
std::vector<double> differentiate(std::span<const double> coeffs, double len);

/// Zero the trailing run of coefficients whose magnitude is below `threshold`.
/// Returns the index one past the last retained coefficient.
std::size_t chop_tail(std::vector<double>& coeffs, double threshold);

/// Barycentric interpolation of nodal data at y (exact at the nodes).
double interpolate(std::span<const double> values, Interval iv, double y);

/// Barycentric weights for evaluating many functions on the same grid at y.
/// weights[k] multiplies values[k]; they sum to one.
std::vector<double> interpolation_weights(int m, Interval iv, double y);

/// Clenshaw-Curtis quadrature weights for the nodes of `nodes(m, iv)`.
std::vector<double> clenshaw_curtis_weights(int m, Interval iv);

/// First-derivative collocation matrix (row-major, m*m) on the mapped grid.
std::vector<double> differentiation_matrix(int m, Interval iv);

}  // namespace cheb
}  // namespace stratiwave
