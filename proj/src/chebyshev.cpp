#include "stratiwave/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "stratiwave/errors.hpp"

namespace stratiwave::cheb {
namespace {

// cos(pi*m/n) for m = 0..2n-1, built once per call so kj products index it
// exactly instead of accumulating argument error.
std::vector<double> cosine_table(int n) {
    std::vector<double> table(2 * static_cast<std::size_t>(n));
    for (int m = 0; m < 2 * n; ++m) table[m] = std::cos(std::numbers::pi * m / n);
    return table;
}

void require_size(std::size_t m) {
    if (m < 2) fail(ErrorKind::structural, "Chebyshev grid needs at least two nodes");
}

// Reference-interval node t_k = cos(k*pi/n), written as a sine so that the
// set is exactly antisymmetric.
double reference_node(int k, int n) {
    return std::sin(std::numbers::pi * (n - 2 * k) / (2.0 * n));
}

}  // namespace

std::vector<double> nodes(int m, Interval iv) {
    require_size(static_cast<std::size_t>(m));
    const int n = m - 1;
    std::vector<double> y(m);
    const double mid = iv.midpoint();
    const double half = 0.5 * iv.length();
    for (int k = 0; k < m; ++k) y[k] = mid + half * reference_node(k, n);
    y.front() = iv.hi;
    y.back() = iv.lo;
    return y;
}

std::vector<double> to_coefficients(std::span<const double> values) {
    require_size(values.size());
    const int n = static_cast<int>(values.size()) - 1;
    const auto table = cosine_table(n);
    std::vector<double> c(values.size(), 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.5 * (values[0] + values[n] * table[(static_cast<long>(k) * n) % (2 * n)]);
        for (int j = 1; j < n; ++j) acc += values[j] * table[(static_cast<long>(k) * j) % (2 * n)];
        c[k] = 2.0 * acc / n;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return c;
}

std::vector<double> to_values(std::span<const double> coeffs) {
    require_size(coeffs.size());
    const int n = static_cast<int>(coeffs.size()) - 1;
    const auto table = cosine_table(n);
    std::vector<double> v(coeffs.size(), 0.0);
    for (int j = 0; j <= n; ++j) {
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) acc += coeffs[k] * table[(static_cast<long>(k) * j) % (2 * n)];
        v[j] = acc;
    }
    return v;
}

std::vector<double> differentiate(std::span<const double> coeffs, double len) {
    const std::size_t m = coeffs.size();
    std::vector<double> d(m, 0.0);
    if (m < 2) return d;
    // d_{k-1} = d_{k+1} + 2k c_k, with d_0 halved at the end.
    for (std::size_t k = m - 1; k >= 1; --k) {
        const double next = (k + 1 < m) ? d[k + 1] : 0.0;
        d[k - 1] = next + 2.0 * static_cast<double>(k) * coeffs[k];
    }
    d[0] *= 0.5;
    const double scale = 2.0 / len;
    for (auto& v : d) v *= scale;
    return d;
}

std::size_t chop_tail(std::vector<double>& coeffs, double threshold) {
    std::size_t keep = coeffs.size();
    while (keep > 0 && std::abs(coeffs[keep - 1]) < threshold) --keep;
    for (std::size_t k = keep; k < coeffs.size(); ++k) coeffs[k] = 0.0;
    return keep;
}

std::vector<double> interpolation_weights(int m, Interval iv, double y) {
    require_size(static_cast<std::size_t>(m));
    const auto y_nodes = nodes(m, iv);
    std::vector<double> w(m, 0.0);
    for (int k = 0; k < m; ++k) {
        if (y == y_nodes[k]) {
            w[k] = 1.0;
            return w;
        }
    }
    double denom = 0.0;
    for (int k = 0; k < m; ++k) {
        double bw = (k % 2 == 0) ? 1.0 : -1.0;
        if (k == 0 || k == m - 1) bw *= 0.5;
        w[k] = bw / (y - y_nodes[k]);
        denom += w[k];
    }
    for (auto& v : w) v /= denom;
    return w;
}

double interpolate(std::span<const double> values, Interval iv, double y) {
    const auto w = interpolation_weights(static_cast<int>(values.size()), iv, y);
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) acc += w[k] * values[k];
    return acc;
}

std::vector<double> clenshaw_curtis_weights(int m, Interval iv) {
    require_size(static_cast<std::size_t>(m));
    const int n = m - 1;
    std::vector<double> w(m, 0.0);
    // Waldvogel's closed form on [-1, 1].
    for (int k = 0; k <= n; ++k) {
        const double theta = std::numbers::pi * k / n;
        double acc = 1.0;
        for (int j = 1; j <= n / 2; ++j) {
            const double b = (2 * j == n) ? 1.0 : 2.0;
            acc -= b * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
        }
        const double ck = (k == 0 || k == n) ? 1.0 : 2.0;
        w[k] = ck * acc / n;
    }
    const double half = 0.5 * iv.length();
    for (auto& v : w) v *= half;
    return w;
}

std::vector<double> differentiation_matrix(int m, Interval iv) {
    require_size(static_cast<std::size_t>(m));
    const int n = m - 1;
    std::vector<double> t(m);
    for (int k = 0; k < m; ++k) t[k] = reference_node(k, n);
    std::vector<double> c(m, 1.0);
    c[0] = c[n] = 2.0;
    for (int k = 1; k < m; k += 2) c[k] = -c[k];
    std::vector<double> d(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double v = (c[i] / c[j]) / (t[i] - t[j]);
            d[i * m + j] = v;
            row += v;
        }
        d[i * m + i] = -row;
    }
    const double scale = 2.0 / iv.length();
    for (auto& v : d) v *= scale;
    return d;
}

}  // namespace stratiwave::cheb
