#pragma once

#include <utility>
#include <vector>

#include "stratiwave/chebyshev.hpp"
#include "stratiwave/profiles.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

inline constexpr double standard_gravity = 9.8;

/// Horizontal velocity on the crest line x = 0, sampled at the
/// Chebyshev-Gauss-Lobatto nodes of [-d, eta0] (node 0 at the surface).
struct AxisData {
    std::vector<double> u;
    double eta0 = 0.0;
    double c = 0.0;
    double d = 1.0;
    double g = standard_gravity;
    double p_atm = 0.0;

    Interval domain() const { return {-d, eta0}; }
    int size() const { return static_cast<int>(u.size()); }
    std::vector<double> nodes() const { return cheb::nodes(size(), domain()); }
    double u_at(double y) const;

    /// Checks the structural invariants (d > 0, eta0 > -d, M >= 4, finite).
    void validate() const;

    /// Builds axis data from (y, u) pairs. Samples already at the M-node
    /// Chebyshev grid are taken verbatim; anything else is resampled with a
    /// rational barycentric interpolant. The samples must span [-d, eta0].
    static AxisData from_samples(std::vector<std::pair<double, double>> samples, int m, double eta0,
                                 double c, double d, double g = standard_gravity, double p_atm = 0.0);
};

/// c, d, g and P_atm from the inputs plus the derived flux and head.
struct WaveParameters {
    double c = 0.0;
    double d = 1.0;
    double g = standard_gravity;
    double p_atm = 0.0;
    double p0 = -1.0;
    double q = 0.0;
};

struct StagnationMargin {
    double margin = 0.0;  // min (c - u)
    double y = 0.0;       // where the minimum sits
};

/// Minimum of c - u over the samples; throws StagnationError if it is <= 0.
StagnationMargin check_no_stagnation(const AxisData& axis);

struct AxisStreamFunction {
    NodalFunction a0;
    NodalFunction slope;  // a0' = sqrt(rho(-a0)) (u - c) at the nodes
    double p0;
};

/// Integrates a0' = sqrt(rho(-a0)) (u - c) downward from a0(eta0) = 0 with
/// classical RK4, `substeps` steps between consecutive nodes. p0 = -a0(-d).
AxisStreamFunction solve_axis_streamfunction(const AxisData& axis, const DensityProfile& rho,
                                             int substeps = 8);

}  // namespace stratiwave
