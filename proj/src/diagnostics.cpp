#include "stratiwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "stratiwave/errors.hpp"

namespace stratiwave {

namespace {

constexpr double coefficient_floor = 1e-14;

}  // namespace

double symmetry_residual(const FluidField& field) {
    const std::size_t nx = field.nx();
    double scale = 0.0;
    for (double x : field.x) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < nx; ++i) {
        if (std::abs(field.x[i] + field.x[nx - 1 - i]) > 1e-14 * std::max(1.0, scale))
            fail(ErrorKind::structural, "symmetry check needs an x grid symmetric about 0");
    }
    double worst = 0.0, sup = 0.0;
    for (std::size_t iy = 0; iy < field.ny(); ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t a = field.index(iy, ix), b = field.index(iy, nx - 1 - ix);
            if (!field.inside[a]) continue;
            sup = std::max(sup, std::abs(field.psi[a]));
            if (!field.inside[b]) continue;
            worst = std::max(worst, std::abs(field.psi[a] - field.psi[b]));
        }
    }
    return sup > 0.0 ? worst / sup : worst;
}

double symmetry_residual(const HeightField& h) {
    if (h.nq % 2 != 0) fail(ErrorKind::structural, "symmetry check needs an even number of q nodes");
    double worst = 0.0, sup = 0.0;
    for (int i = 0; i < h.np; ++i) {
        for (int j = 0; j < h.nq; ++j) {
            const int m = (h.nq - j) % h.nq;
            sup = std::max(sup, std::abs(h.at(i, j)));
            worst = std::max(worst, std::abs(h.at(i, j) - h.at(i, m)));
        }
    }
    return sup > 0.0 ? worst / sup : worst;
}

MonotonicityReport monotonicity_check(const HeightField& h, double tolerance) {
    MonotonicityReport r;
    auto note = [&](double violation, int i, int j) {
        if (violation > r.worst_violation) {
            r.worst_violation = violation;
            r.worst_q = h.q(j);
            r.worst_p = h.p(i);
        }
    };
    const int crest = h.crest_column();
    for (int i = 0; i < h.np; ++i) {
        for (int j = 0; j < h.nq; ++j) {
            const double v = h.at(i, 0) - h.at(i, j);
            if (v > tolerance) {
                r.trough_minimum = false;
                note(v, i, j);
            }
        }
        for (int j = 0; j < crest; ++j) {
            const double v = h.at(i, j) - h.at(i, j + 1);
            if (v > tolerance) {
                r.nondecreasing = false;
                note(v, i, j + 1);
            }
        }
    }
    const int top = h.np - 1;
    double lo = h.at(top, 0), hi = h.at(top, 0);
    for (int j = 0; j < h.nq; ++j) {
        lo = std::min(lo, h.at(top, j));
        hi = std::max(hi, h.at(top, j));
    }
    if (hi - lo <= tolerance) {
        r.degenerate_laminar = true;
    } else {
        for (int j = 1; j < h.nq; ++j) {
            if (!(h.at(top, 0) < h.at(top, j))) {
                r.strict_at_surface = false;
                note(h.at(top, 0) - h.at(top, j), top, j);
            }
        }
    }
    r.passed = r.trough_minimum && r.nondecreasing && r.strict_at_surface;
    std::ostringstream s;
    if (r.passed) {
        s << (r.degenerate_laminar ? "pass (degenerate laminar)" : "pass");
    } else {
        s << "fail: worst violation " << r.worst_violation << " at (q, p) = (" << r.worst_q << ", " << r.worst_p
          << ")";
    }
    r.status = s.str();
    return r;
}

MovingPlaneReport moving_plane_scan(const HeightField& h, double threshold) {
    MovingPlaneReport r;
    const int nq = h.nq;
    // Plane index s: lambda = -pi + (s/2) dq, reflection j -> s - j (mod nq).
    for (int s = 1; s < nq; ++s) {
        ++r.planes;
        const double lambda = -std::numbers::pi + 0.5 * s * h.dq();
        for (int j = 0; 2 * j <= s; ++j) {
            const int jr = ((s - j) % nq + nq) % nq;
            for (int i = 0; i < h.np; ++i) {
                const double omega = h.at(i, jr) - h.at(i, j);
                if (omega < r.min_omega) {
                    r.min_omega = omega;
                    r.lambda = lambda;
                    r.q = h.q(j);
                    r.p = h.p(i);
                }
            }
        }
    }
    r.flagged = r.min_omega < -threshold;
    return r;
}

TheoremReport symmetry_theorem_report(const HeightField& h, double symmetry_tolerance) {
    TheoremReport r;
    r.monotonicity = monotonicity_check(h);
    r.hypothesis = r.monotonicity.passed;
    r.symmetry = symmetry_residual(h);
    r.conclusion = r.symmetry <= symmetry_tolerance;
    if (r.hypothesis && r.conclusion)
        r.verdict = "hypothesis holds, conclusion holds";
    else if (r.hypothesis)
        r.verdict = "hypothesis holds, conclusion fails";
    else if (r.conclusion)
        r.verdict = "hypothesis fails (theorem not applicable), field symmetric";
    else
        r.verdict = "hypothesis fails (theorem not applicable), field asymmetric";
    return r;
}

BernoulliReport bernoulli_residual(const FluidField& field, const DensityProfile& rho,
                                   const BernoulliFunction& beta, std::uint64_t seed, int pairs) {
    const WaveParameters& prm = field.params;
    std::vector<std::size_t> candidates;
    for (std::size_t iy = 0; iy + 1 < field.ny(); ++iy) {
        for (std::size_t ix = 0; ix < field.nx(); ++ix) {
            if (field.inside[field.index(iy, ix)] && field.inside[field.index(iy + 1, ix)])
                candidates.push_back(field.index(iy, ix));
        }
    }
    BernoulliReport r;
    if (candidates.empty()) return r;

    auto energy = [&](std::size_t k, double y) {
        const double dens = rho.rho(-field.psi[k]);
        const double du = field.u[k] - prm.c;
        return field.p[k] + 0.5 * dens * (du * du + field.v[k] * field.v[k]) + prm.g * y * dens;
    };
    const double min_spacing = 1e-10 * (1.0 + std::abs(prm.p0));
    std::mt19937_64 rng(seed);
    for (int s = 0; s < pairs; ++s) {
        const std::size_t a = candidates[rng() % candidates.size()];
        const std::size_t b = a + field.nx();
        const std::size_t iy = a / field.nx(), ix = a % field.nx();
        const double dpsi = field.psi[b] - field.psi[a];
        if (!(std::abs(dpsi) > min_spacing)) {
            ++r.pairs_skipped;
            continue;
        }
        const double de = energy(b, field.y[iy + 1]) - energy(a, field.y[iy]);
        const double bm = beta.beta(0.5 * (field.psi[a] + field.psi[b]));
        const double mismatch = std::abs(de / dpsi + bm) / (1.0 + std::abs(bm));
        ++r.pairs_used;
        if (mismatch > r.sup_mismatch || !std::isfinite(mismatch)) {
            r.sup_mismatch = std::isfinite(mismatch) ? mismatch : std::numeric_limits<double>::infinity();
            r.witness_x = field.x[ix];
            r.witness_y = 0.5 * (field.y[iy] + field.y[iy + 1]);
        }
    }
    return r;
}

AnalyticityReport analyticity_report(const EvenSeries& psi) {
    AnalyticityReport r;
    const int n = psi.order();
    for (int k = 0; k <= n; ++k) r.norms.push_back(psi.coeff(k).sup_norm());
    for (int k = 0; k < n; ++k) {
        if (r.norms[k] > coefficient_floor && r.norms[k + 1] > coefficient_floor)
            r.ratios.push_back(r.norms[k + 1] / r.norms[k]);
    }
    r.below_floor = std::all_of(r.norms.begin() + 1, r.norms.end(), [](double v) { return v < coefficient_floor; });
    std::ostringstream s;
    if (r.below_floor) {
        r.radius = std::numeric_limits<double>::infinity();
        r.monotone_decay = true;
        s << "all higher coefficients below floor; unbounded radius";
        r.summary = s.str();
        return r;
    }
    r.radius = radius_estimate(psi);
    r.decay_slope = r.radius > 0.0 && std::isfinite(r.radius) ? -std::log(r.radius) : 0.0;
    const int tail = (n + 1) / 2;
    r.monotone_decay = true;
    for (int k = n - tail + 1; k <= n; ++k) {
        if (k < 1) continue;
        if (!(r.norms[k] < r.norms[k - 1])) r.monotone_decay = false;
    }
    s << "radius estimate " << r.radius << ", log-norm slope " << r.decay_slope << ", "
      << (r.monotone_decay ? "monotone" : "non-monotone") << " decay over the last " << tail << " orders";
    r.summary = s.str();
    return r;
}

}  // namespace stratiwave
