#pragma once

#include "stratiwave/axis.hpp"
#include "stratiwave/profiles.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

/// Sign attached to the Bernoulli coefficients in the order-matching step.
/// `minus` is the one consistent with  Laplace(psi) = g y rho'(-psi) - beta(psi);
/// `plus` flips the vorticity term and exists only for falsification.
enum class BernoulliSign { minus, plus };

struct RecoveryOptions {
    BernoulliSign sign = BernoulliSign::minus;
    /// Chebyshev coefficients of each new a_2n below this fraction of the
    /// largest term entering its recursion step are roundoff and are dropped.
    double chop_tolerance = 1e-13;
    /// Same for the axis data a_0, relative to its own sup norm.
    double data_chop_tolerance = 1e-15;
};

/// Builds a_2, ..., a_2N from a_0 by matching
///   (2n)(2n-1) a_2n = g y b_{2n-2} - c_{2n-2} - a''_{2n-2},
/// where b and c are the x-expansions of rho'(-psi) and beta(psi).
EvenSeries recover_series(const NodalFunction& a0, const DensityProfile& rho, const BernoulliFunction& beta,
                          const WaveParameters& params, int order, const RecoveryOptions& options = {});

/// Same, but a0'' is taken as the derivative of the known slope a0' instead of
/// the second derivative of a0, which keeps the first step at a lower
/// roundoff level.
EvenSeries recover_series(const AxisStreamFunction& axis, const DensityProfile& rho, const BernoulliFunction& beta,
                          const WaveParameters& params, int order, const RecoveryOptions& options = {});

}  // namespace stratiwave
