#include "stratiwave/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stratiwave/errors.hpp"

namespace stratiwave {
namespace {

void require_domain(const Interval& iv, double y) {
    const double slack = 1e-12 * std::max(1.0, iv.length());
    if (!iv.contains(y, slack)) {
        std::ostringstream msg;
        msg << "y = " << y << " outside [" << iv.lo << ", " << iv.hi << "]";
        fail(ErrorKind::domain, msg.str());
    }
}

void require_compatible(const EvenSeries& a, const EvenSeries& b) {
    if (a.order() != b.order()) fail(ErrorKind::structural, "series truncation orders differ");
    if (!a.coeff(0).same_grid(b.coeff(0))) fail(ErrorKind::structural, "series grids differ");
}

void require_finite(const NodalFunction& f, const char* what) {
    for (double v : f.values()) {
        if (!std::isfinite(v)) fail(ErrorKind::divergence, std::string("non-finite value in ") + what);
    }
}

}  // namespace

NodalFunction::NodalFunction(std::vector<double> values, Interval domain)
    : values_(std::move(values)), domain_(domain) {
    if (values_.size() < 4) fail(ErrorKind::structural, "nodal function needs at least 4 nodes");
    if (!(domain_.lo < domain_.hi)) fail(ErrorKind::structural, "nodal function domain must have lo < hi");
    for (double v : values_) {
        if (!std::isfinite(v)) fail(ErrorKind::divergence, "nodal function value is not finite");
    }
}

NodalFunction NodalFunction::constant(int m, Interval domain, double value) {
    return NodalFunction(std::vector<double>(static_cast<std::size_t>(m), value), domain);
}

NodalFunction NodalFunction::sample(int m, Interval domain, const std::function<double(double)>& f) {
    const auto y = cheb::nodes(m, domain);
    std::vector<double> v(y.size());
    std::transform(y.begin(), y.end(), v.begin(), f);
    return NodalFunction(std::move(v), domain);
}

double NodalFunction::at(double y) const {
    require_domain(domain_, y);
    return cheb::interpolate(values_, domain_, std::clamp(y, domain_.lo, domain_.hi));
}

double NodalFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool NodalFunction::same_grid(const NodalFunction& other) const {
    return values_.size() == other.values_.size() && domain_ == other.domain_;
}

namespace {
template <class Op>
NodalFunction pointwise(const NodalFunction& a, const NodalFunction& b, Op op) {
    if (!a.same_grid(b)) fail(ErrorKind::structural, "nodal functions live on different grids");
    std::vector<double> v(a.values().size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(a[k], b[k]);
    return NodalFunction(std::move(v), a.domain());
}
}  // namespace

NodalFunction operator+(const NodalFunction& a, const NodalFunction& b) {
    return pointwise(a, b, [](double x, double y) { return x + y; });
}
NodalFunction operator-(const NodalFunction& a, const NodalFunction& b) {
    return pointwise(a, b, [](double x, double y) { return x - y; });
}
NodalFunction operator*(const NodalFunction& a, const NodalFunction& b) {
    return pointwise(a, b, [](double x, double y) { return x * y; });
}
NodalFunction operator*(double s, const NodalFunction& a) {
    std::vector<double> v(a.values());
    for (auto& x : v) x *= s;
    return NodalFunction(std::move(v), a.domain());
}

namespace {

// Trailing coefficients at the transform's roundoff level carry no signal but are
// amplified by up to k^4 under differentiation.
std::vector<double> clean_coefficients(const NodalFunction& f) {
    auto c = cheb::to_coefficients(f.values());
    cheb::chop_tail(c, 8.0 * std::numeric_limits<double>::epsilon() * f.sup_norm());
    return c;
}

}  // namespace

NodalFunction nodal_diff(const NodalFunction& f) {
    const double len = f.domain().length();
    return NodalFunction(cheb::to_values(cheb::differentiate(clean_coefficients(f), len)), f.domain());
}

NodalFunction nodal_diff2(const NodalFunction& f) {
    const double len = f.domain().length();
    const auto d2 = cheb::differentiate(cheb::differentiate(clean_coefficients(f), len), len);
    return NodalFunction(cheb::to_values(d2), f.domain());
}

EvenSeries::EvenSeries(std::vector<NodalFunction> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) fail(ErrorKind::structural, "even series needs at least a_0");
    for (const auto& c : coeffs_) {
        if (!c.same_grid(coeffs_.front())) fail(ErrorKind::structural, "series coefficients on different grids");
    }
}

EvenSeries EvenSeries::zero(int order, int m, Interval domain) {
    return EvenSeries(std::vector<NodalFunction>(static_cast<std::size_t>(order) + 1,
                                                 NodalFunction::constant(m, domain, 0.0)));
}

EvenSeries EvenSeries::truncated(int n) const {
    if (n < 0 || n > order()) fail(ErrorKind::structural, "truncation order out of range");
    return EvenSeries(std::vector<NodalFunction>(coeffs_.begin(), coeffs_.begin() + n + 1));
}

EvenSeries series_add(const EvenSeries& a, const EvenSeries& b, double alpha, double beta) {
    require_compatible(a, b);
    std::vector<NodalFunction> out;
    out.reserve(a.coeffs().size());
    for (int n = 0; n <= a.order(); ++n) out.push_back(alpha * a.coeff(n) + beta * b.coeff(n));
    return EvenSeries(std::move(out));
}

EvenSeries series_mul(const EvenSeries& a, const EvenSeries& b) {
    require_compatible(a, b);
    const int order = a.order();
    const int m = a.grid_size();
    std::vector<NodalFunction> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) {
        std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
        for (int k = 0; k <= n; ++k) {
            const auto& ak = a.coeff(k).values();
            const auto& bk = b.coeff(n - k).values();
            for (int j = 0; j < m; ++j) acc[j] += ak[j] * bk[j];
        }
        for (double v : acc) {
            if (!std::isfinite(v)) fail(ErrorKind::divergence, "non-finite value in series product");
        }
        out.emplace_back(std::move(acc), a.domain());
    }
    return EvenSeries(std::move(out));
}

EvenSeries series_compose_poly(const Polynomial& f, int sign, const EvenSeries& psi) {
    if (sign != 1 && sign != -1) fail(ErrorKind::structural, "composition sign must be +1 or -1");
    const int order = psi.order();
    const int m = psi.grid_size();
    const auto& c = f.coeffs();
    auto constant = [&](double v) {
        auto s = EvenSeries::zero(order, m, psi.domain());
        std::vector<NodalFunction> coeffs = s.coeffs();
        coeffs[0] = NodalFunction::constant(m, psi.domain(), v);
        return EvenSeries(std::move(coeffs));
    };
    if (c.empty()) return constant(0.0);

    const EvenSeries arg = series_add(psi, psi, static_cast<double>(sign), 0.0);
    EvenSeries acc = constant(c.back());
    for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
        acc = series_add(series_mul(acc, arg), constant(c[static_cast<std::size_t>(i)]), 1.0, 1.0);
    }
    for (const auto& coeff : acc.coeffs()) require_finite(coeff, "polynomial composition");
    return acc;
}

double series_eval(const EvenSeries& psi, double x, double y) {
    const Interval& iv = psi.domain();
    require_domain(iv, y);
    const auto w = cheb::interpolation_weights(psi.grid_size(), iv, std::clamp(y, iv.lo, iv.hi));
    const double x2 = x * x;
    double acc = 0.0;
    for (int n = psi.order(); n >= 0; --n) {
        const auto& v = psi.coeff(n).values();
        double a = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) a += w[k] * v[k];
        acc = acc * x2 + a;
    }
    return acc;
}

double radius_estimate(const EvenSeries& psi) {
    const int order = psi.order();
    if (order < 3) fail(ErrorKind::insufficient_data, "radius estimate needs truncation order >= 3");
    constexpr double floor = 1e-14;

    std::vector<std::pair<double, double>> pts;  // (2n, log norm)
    bool any_above_floor = false;
    for (int n = 1; n <= order; ++n) {
        const double norm = psi.coeff(n).sup_norm();
        if (norm >= floor) any_above_floor = true;
        if (norm > 0.0) pts.emplace_back(2.0 * n, std::log(norm));
    }
    if (!any_above_floor) return std::numeric_limits<double>::infinity();

    const std::size_t window = static_cast<std::size_t>((order + 1) / 2);
    if (pts.size() > window) pts.erase(pts.begin(), pts.end() - static_cast<long>(window));
    if (pts.size() < 2) return std::numeric_limits<double>::infinity();

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [px, py] : pts) {
        sx += px;
        sy += py;
        sxx += px * px;
        sxy += px * py;
    }
    const double cnt = static_cast<double>(pts.size());
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return std::exp(-slope);
}

SeriesEvaluator::SeriesEvaluator(EvenSeries psi) : psi_(std::move(psi)) {
    dy_.reserve(psi_.coeffs().size());
    dyy_.reserve(psi_.coeffs().size());
    for (const auto& c : psi_.coeffs()) {
        dy_.push_back(nodal_diff(c));
        dyy_.push_back(nodal_diff2(c));
    }
}

double SeriesEvaluator::value(double x, double y) const { return series_eval(psi_, x, y); }

SeriesPoint SeriesEvaluator::at(double x, double y) const {
    const Interval& iv = psi_.domain();
    require_domain(iv, y);
    const auto w = cheb::interpolation_weights(psi_.grid_size(), iv, std::clamp(y, iv.lo, iv.hi));
    auto interp = [&](const NodalFunction& f) {
        double a = 0.0;
        const auto& v = f.values();
        for (std::size_t k = 0; k < v.size(); ++k) a += w[k] * v[k];
        return a;
    };
    const double x2 = x * x;
    SeriesPoint out;
    double sx = 0.0;   // sum 2n a_2n x^(2n-2)
    double sxx = 0.0;  // sum 2n(2n-1) a_2n x^(2n-2)
    for (int n = psi_.order(); n >= 0; --n) {
        const double a = interp(psi_.coeff(n));
        out.psi = out.psi * x2 + a;
        out.psi_y = out.psi_y * x2 + interp(dy_[static_cast<std::size_t>(n)]);
        out.psi_yy = out.psi_yy * x2 + interp(dyy_[static_cast<std::size_t>(n)]);
        if (n >= 1) {
            sx = sx * x2 + 2.0 * n * a;
            sxx = sxx * x2 + 2.0 * n * (2.0 * n - 1.0) * a;
        }
    }
    out.psi_x = x * sx;
    out.psi_xx = sxx;
    return out;
}

}  // namespace stratiwave
