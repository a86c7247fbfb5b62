#include "stratiwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stratiwave/errors.hpp"
#include "stratiwave/parallel.hpp"

namespace stratiwave {
namespace {

double inside_tolerance(const WaveParameters& params) { return 1e-12 * std::max(1.0, std::abs(params.p0)); }

double density_at(const DensityProfile& rho, double psi) {
    const double r = rho.rho(-psi);
    if (!(r > 0.0)) {
        std::ostringstream msg;
        msg << "density is not positive at psi = " << psi;
        fail(ErrorKind::profile_range, msg.str());
    }
    return r;
}

SeriesPoint point_inside(const SeriesEvaluator& psi, const WaveParameters& params, double x, double y) {
    const SeriesPoint pt = psi.at(x, y);
    if (pt.psi < -inside_tolerance(params)) {
        std::ostringstream msg;
        msg << "point (" << x << ", " << y << ") lies above the free surface";
        fail(ErrorKind::domain, msg.str());
    }
    return pt;
}

double surface_energy(const DensityProfile& rho, const WaveParameters& params) {
    return 0.5 * params.q + params.p_atm - params.g * rho.rho(0.0) * params.d;
}

}  // namespace

double compute_head(const AxisData& axis, const DensityProfile& rho) {
    const double rho_s = rho.rho(0.0);
    const double du = axis.u.front() - axis.c;  // node 0 is the crest
    return rho_s * du * du + 2.0 * axis.g * rho_s * (axis.eta0 + axis.d);
}

Velocity reconstruct_velocity(const SeriesEvaluator& psi, const DensityProfile& rho, const WaveParameters& params,
                              double x, double y) {
    const SeriesPoint pt = point_inside(psi, params, x, y);
    const double s = std::sqrt(density_at(rho, pt.psi));
    return {params.c + pt.psi_y / s, -pt.psi_x / s};
}

PressurePoint reconstruct_pressure(const SeriesEvaluator& psi, const DensityProfile& rho,
                                   const BernoulliFunction& beta, const WaveParameters& params, double x, double y) {
    const SeriesPoint pt = point_inside(psi, params, x, y);
    const double r = density_at(rho, pt.psi);
    const double e = surface_energy(rho, params) - beta.beta.antiderivative()(pt.psi);
    const double grad2 = pt.psi_x * pt.psi_x + pt.psi_y * pt.psi_y;  // rho((u-c)^2 + v^2)
    return {e - 0.5 * grad2 - params.g * y * r, e};
}

std::vector<SurfacePoint> recover_surface(const SeriesEvaluator& psi, const WaveParameters&,
                                          const std::vector<double>& xs) {
    const Interval iv = psi.series().domain();
    constexpr double target = 1e-12;
    std::vector<SurfacePoint> out;
    out.reserve(xs.size());
    for (double x : xs) {
        double lo = iv.lo, hi = iv.hi;
        double f_lo = psi.value(x, lo), f_hi = psi.value(x, hi);
        if (std::abs(f_hi) <= target) {
            out.push_back({x, hi});
            continue;
        }
        if (!(f_lo > 0.0 && f_hi < 0.0)) {
            std::ostringstream msg;
            msg << "no sign change of psi on [" << lo << ", " << hi << "] at x = " << x
                << "; x is outside the recovered region";
            fail(ErrorKind::surface_escape, msg.str());
        }
        // Bisection to a narrow bracket, then secant steps kept inside it.
        for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double f = psi.value(x, mid);
            (f > 0.0 ? lo : hi) = mid;
            (f > 0.0 ? f_lo : f_hi) = f;
        }
        double root = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            double cand = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
            const double f = psi.value(x, cand);
            root = cand;
            if (std::abs(f) <= target || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi))
                break;
            (f > 0.0 ? lo : hi) = cand;
            (f > 0.0 ? f_lo : f_hi) = f;
        }
        out.push_back({x, root});
    }
    return out;
}

std::vector<double> symmetric_grid(int nx, double x_max) {
    if (nx < 1) fail(ErrorKind::structural, "grid needs at least one point");
    std::vector<double> x(static_cast<std::size_t>(nx), 0.0);
    if (nx == 1) return x;
    for (int j = 0; j < nx / 2; ++j) {
        const double v = x_max * (1.0 - 2.0 * j / (nx - 1.0));
        x[static_cast<std::size_t>(j)] = -v;
        x[static_cast<std::size_t>(nx - 1 - j)] = v;
    }
    return x;
}

FluidField build_field(const SeriesEvaluator& psi, const DensityProfile& rho, const BernoulliFunction& beta,
                       const WaveParameters& params, const std::vector<double>& xs) {
    FluidField field;
    field.x = xs;
    field.y = psi.series().coeff(0).nodes();
    field.params = params;
    const std::size_t cells = field.nx() * field.ny();
    field.inside.assign(cells, 0);
    field.psi.assign(cells, 0.0);
    field.u.assign(cells, 0.0);
    field.v.assign(cells, 0.0);
    field.p.assign(cells, 0.0);
    field.e.assign(cells, 0.0);

    const double e_surface = surface_energy(rho, params);
    const Polynomial b_int = beta.beta.antiderivative();
    const double tol = inside_tolerance(params);
    parallel_for(field.nx(), [&](std::size_t ix) {
        const double x = field.x[ix];
        for (std::size_t iy = 0; iy < field.ny(); ++iy) {
            const double y = field.y[iy];
            const SeriesPoint pt = psi.at(x, y);
            if (pt.psi < -tol) continue;
            const std::size_t k = field.index(iy, ix);
            const double r = density_at(rho, pt.psi);
            const double s = std::sqrt(r);
            const double e = e_surface - b_int(pt.psi);
            field.inside[k] = 1;
            field.psi[k] = pt.psi;
            field.u[k] = params.c + pt.psi_y / s;
            field.v[k] = -pt.psi_x / s;
            field.e[k] = e;
            field.p[k] = e - 0.5 * (pt.psi_x * pt.psi_x + pt.psi_y * pt.psi_y) - params.g * y * r;
        }
    });
    field.surface = recover_surface(psi, params, xs);
    return field;
}

double flux_at(const SeriesEvaluator& psi, const DensityProfile& rho, const WaveParameters& params, double x,
               double eta, int m) {
    const Interval iv{-params.d, eta};
    const auto y = cheb::nodes(m, iv);
    const auto w = cheb::clenshaw_curtis_weights(m, iv);
    double acc = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const SeriesPoint pt = psi.at(x, y[k]);
        const double s = std::sqrt(density_at(rho, pt.psi));
        const double u = params.c + pt.psi_y / s;
        acc += w[k] * s * (u - params.c);
    }
    return acc;
}

PdeResidual pde_residual(const SeriesEvaluator& psi, const DensityProfile& rho, const BernoulliFunction& beta,
                         const WaveParameters& params, const std::vector<double>& xs) {
    const auto y = psi.series().coeff(0).nodes();
    const double tol = inside_tolerance(params);
    PdeResidual out;
    for (double x : xs) {
        for (double yy : y) {
            const SeriesPoint pt = psi.at(x, yy);
            if (pt.psi < -tol) continue;
            const double lap = pt.laplacian();
            const double res = lap - params.g * yy * rho.rho.eval(-pt.psi, 1) + beta.beta(pt.psi);
            out.sup_residual = std::max(out.sup_residual, std::abs(res));
            out.sup_laplacian = std::max(out.sup_laplacian, std::abs(lap));
        }
    }
    return out;
}

double surface_dynamic_residual(const SeriesEvaluator& psi, const DensityProfile& rho,
                                const WaveParameters& params, const std::vector<SurfacePoint>& surface) {
    double worst = 0.0;
    const double rho_s = rho.rho(0.0);
    for (const auto& s : surface) {
        const SeriesPoint pt = psi.at(s.x, s.eta);
        const double grad2 = pt.psi_x * pt.psi_x + pt.psi_y * pt.psi_y;
        worst = std::max(worst, std::abs(grad2 + 2.0 * params.g * rho_s * (s.eta + params.d) - params.q));
    }
    return worst;
}

double surface_relation_residual(const SeriesEvaluator& psi, const DensityProfile& rho, const AxisData& axis,
                                 const std::vector<SurfacePoint>& surface) {
    const double rho_s = rho.rho(0.0);
    const double du = axis.u.front() - axis.c;
    double worst = 0.0;
    for (const auto& s : surface) {
        const SeriesPoint pt = psi.at(s.x, s.eta);
        const double grad2 = pt.psi_x * pt.psi_x + pt.psi_y * pt.psi_y;
        const double eta = (rho_s * du * du - grad2) / (2.0 * axis.g * rho_s) + axis.eta0;
        worst = std::max(worst, std::abs(eta - s.eta));
    }
    return worst;
}

}  // namespace stratiwave
