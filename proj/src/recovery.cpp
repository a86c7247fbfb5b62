#include "stratiwave/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratiwave/errors.hpp"

namespace stratiwave {
namespace {

double sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

EvenSeries recover_impl(const NodalFunction& a0, const NodalFunction* slope, const DensityProfile& rho,
                        const BernoulliFunction& beta, const WaveParameters& params, int order,
                        const RecoveryOptions& options) {
    if (order < 0) fail(ErrorKind::structural, "truncation order must be non-negative");
    const Interval iv = a0.domain();
    const double len = iv.length();
    const auto y = a0.nodes();
    const Polynomial drho = rho.rho.derivative();

    // Each coefficient is carried as a chopped Chebyshev expansion so that the
    // next second derivative never sees the roundoff tail of a nodal transform.
    std::vector<std::vector<double>> spectra;
    std::vector<NodalFunction> coeffs;

    auto c0 = cheb::to_coefficients(a0.values());
    cheb::chop_tail(c0, options.data_chop_tolerance * sup(c0));
    coeffs.emplace_back(cheb::to_values(c0), iv);
    spectra.push_back(std::move(c0));

    const double bernoulli_sign = options.sign == BernoulliSign::minus ? -1.0 : 1.0;
    for (int n = 1; n <= order; ++n) {
        const EvenSeries partial(coeffs);
        std::vector<double> b, c;
        try {
            b = series_compose_poly(drho, -1, partial).coeff(n - 1).values();
            c = series_compose_poly(beta.beta, +1, partial).coeff(n - 1).values();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::divergence) throw;
            std::ostringstream msg;
            msg << "recursion diverged at order n = " << n << ": " << e.what();
            throw DivergenceError(n, msg.str());
        }
        const auto& prev = spectra.back();
        std::vector<double> a_yy;
        if (n == 1 && slope) {
            auto s1 = cheb::to_coefficients(slope->values());
            cheb::chop_tail(s1, options.data_chop_tolerance * sup(s1));
            a_yy = cheb::to_values(cheb::differentiate(s1, len));
        } else {
            a_yy = cheb::to_values(cheb::differentiate(cheb::differentiate(prev, len), len));
        }

        const double denom = (2.0 * n) * (2.0 * n - 1.0);
        std::vector<double> gyb(y.size());
        std::vector<double> next(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) {
            gyb[k] = params.g * y[k] * b[k];
            next[k] = (gyb[k] + bernoulli_sign * c[k] - a_yy[k]) / denom;
            if (!std::isfinite(next[k])) {
                std::ostringstream msg;
                msg << "recursion produced a non-finite coefficient at order n = " << n;
                throw DivergenceError(n, msg.str());
            }
        }
        const double scale = std::max({sup(gyb), sup(c), sup(a_yy)}) / denom;
        auto spec = cheb::to_coefficients(next);
        cheb::chop_tail(spec, options.chop_tolerance * scale);
        coeffs.emplace_back(cheb::to_values(spec), iv);
        spectra.push_back(std::move(spec));
    }
    return EvenSeries(std::move(coeffs));
}

}  // namespace

EvenSeries recover_series(const NodalFunction& a0, const DensityProfile& rho, const BernoulliFunction& beta,
                          const WaveParameters& params, int order, const RecoveryOptions& options) {
    return recover_impl(a0, nullptr, rho, beta, params, order, options);
}

EvenSeries recover_series(const AxisStreamFunction& axis, const DensityProfile& rho, const BernoulliFunction& beta,
                          const WaveParameters& params, int order, const RecoveryOptions& options) {
    if (!axis.slope.same_grid(axis.a0)) fail(ErrorKind::structural, "axis slope and a0 grids differ");
    return recover_impl(axis.a0, &axis.slope, rho, beta, params, order, options);
}

}  // namespace stratiwave
