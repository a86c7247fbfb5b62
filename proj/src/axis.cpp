#include "stratiwave/axis.hpp"

#include <algorithm>
#include <boost/math/interpolators/barycentric_rational.hpp>
#include <cmath>
#include <sstream>

#include "stratiwave/errors.hpp"

namespace stratiwave {

double AxisData::u_at(double y) const { return cheb::interpolate(u, domain(), y); }

void AxisData::validate() const {
    if (!(d > 0.0)) fail(ErrorKind::structural, "bed depth d must be positive");
    if (!(eta0 > -d)) fail(ErrorKind::structural, "wave height eta0 must lie above the bed");
    if (u.size() < 4) fail(ErrorKind::structural, "axis data needs at least 4 samples");
    for (double v : u) {
        if (!std::isfinite(v)) fail(ErrorKind::structural, "axis velocity sample is not finite");
    }
    if (!std::isfinite(c) || !std::isfinite(g) || !std::isfinite(p_atm))
        fail(ErrorKind::structural, "axis parameters must be finite");
}

AxisData AxisData::from_samples(std::vector<std::pair<double, double>> samples, int m, double eta0,
                                double c, double d, double g, double p_atm) {
    AxisData axis{{}, eta0, c, d, g, p_atm};
    if (samples.size() < 4) fail(ErrorKind::structural, "axis data needs at least 4 samples");
    if (m < 4) fail(ErrorKind::structural, "axis grid needs at least 4 nodes");
    std::sort(samples.begin(), samples.end());
    const double tol = 1e-10 * std::max(1.0, eta0 + d);
    if (std::abs(samples.front().first + d) > tol || std::abs(samples.back().first - eta0) > tol) {
        std::ostringstream msg;
        msg << "axis samples must cover exactly [" << -d << ", " << eta0 << "], got [" << samples.front().first
            << ", " << samples.back().first << "]";
        fail(ErrorKind::structural, msg.str());
    }
    const auto y = cheb::nodes(m, axis.domain());

    bool on_grid = samples.size() == y.size();
    for (std::size_t k = 0; on_grid && k < y.size(); ++k) {
        // samples ascend, nodes descend
        on_grid = std::abs(samples[samples.size() - 1 - k].first - y[k]) <= tol;
    }
    axis.u.resize(y.size());
    if (on_grid) {
        for (std::size_t k = 0; k < y.size(); ++k) axis.u[k] = samples[samples.size() - 1 - k].second;
    } else {
        std::vector<double> ys, us;
        for (const auto& [sy, su] : samples) {
            if (!ys.empty() && sy <= ys.back()) fail(ErrorKind::structural, "axis sample positions must be distinct");
            ys.push_back(sy);
            us.push_back(su);
        }
        const std::size_t order = std::min<std::size_t>(3, ys.size() - 1);
        boost::math::barycentric_rational<double> interp(std::move(ys), std::move(us), order);
        for (std::size_t k = 0; k < y.size(); ++k) axis.u[k] = interp(y[k]);
    }
    axis.validate();
    return axis;
}

StagnationMargin check_no_stagnation(const AxisData& axis) {
    const auto y = axis.nodes();
    StagnationMargin out{axis.c - axis.u.front(), y.front()};
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double margin = axis.c - axis.u[k];
        if (margin < out.margin) out = {margin, y[k]};
    }
    if (!(out.margin > 0.0)) {
        std::ostringstream msg;
        msg << "stagnation: u >= c at y = " << out.y << " (c - u = " << out.margin << ")";
        throw StagnationError(out.y, msg.str());
    }
    return out;
}

AxisStreamFunction solve_axis_streamfunction(const AxisData& axis, const DensityProfile& rho, int substeps) {
    axis.validate();
    if (substeps < 1) fail(ErrorKind::structural, "substep count must be positive");
    const Interval iv = axis.domain();
    const auto y = axis.nodes();

    auto slope = [&](double yy, double a) {
        const double r = rho.rho(-a);
        if (!(r > 0.0)) {
            std::ostringstream msg;
            msg << "density rho(" << -a << ") = " << r << " is not positive at y = " << yy;
            fail(ErrorKind::profile_range, msg.str());
        }
        const double uu = cheb::interpolate(axis.u, iv, std::clamp(yy, iv.lo, iv.hi));
        return std::sqrt(r) * (uu - axis.c);
    };

    std::vector<double> a(y.size(), 0.0);
    double state = 0.0;
    for (std::size_t k = 0; k + 1 < y.size(); ++k) {
        const double h = (y[k + 1] - y[k]) / substeps;
        double yy = y[k];
        for (int s = 0; s < substeps; ++s) {
            const double k1 = slope(yy, state);
            const double k2 = slope(yy + 0.5 * h, state + 0.5 * h * k1);
            const double k3 = slope(yy + 0.5 * h, state + 0.5 * h * k2);
            const double k4 = slope(yy + h, state + h * k3);
            state += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
            yy = (s + 1 == substeps) ? y[k + 1] : yy + h;
            if (!std::isfinite(state)) fail(ErrorKind::divergence, "axis stream function integration diverged");
        }
        a[k + 1] = state;
    }
    std::vector<double> slope_values(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) slope_values[k] = slope(y[k], a[k]);
    const double p0 = -a.back();
    return {NodalFunction(std::move(a), iv), NodalFunction(std::move(slope_values), iv), p0};
}

}  // namespace stratiwave
