#include <doctest.h>

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <random>

#include "stratiwave/errors.hpp"
#include "stratiwave/field.hpp"
#include "stratiwave/recovery.hpp"
#include "stratiwave/reference.hpp"

using namespace stratiwave;

namespace {

const DensityProfile uniform{Polynomial({1.0})};
const DensityProfile quadratic{Polynomial({1.0, -0.2, 0.01})};

struct Recovered {
    AxisData axis;
    WaveParameters params;
    SeriesEvaluator psi;
};

Recovered recover(const AxisData& axis, const DensityProfile& rho, const BernoulliFunction& beta) {
    const auto stream = solve_axis_streamfunction(axis, rho);
    const WaveParameters params{axis.c, axis.d, axis.g, axis.p_atm, stream.p0, compute_head(axis, rho)};
    return {axis, params, SeriesEvaluator(recover_series(stream, rho, beta, params, 12))};
}

Recovered laminar(double p_atm = 0.0) {
    AxisData axis;
    axis.u.assign(48, 0.0);
    axis.c = 1.0;
    axis.p_atm = p_atm;
    return recover(axis, uniform, {});
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    boost::math::tools::eps_tolerance<double> tol(52);
    const auto r = boost::math::tools::bisect(f, lo, hi, tol);
    return 0.5 * (r.first + r.second);
}

}  // namespace

TEST_CASE("compute_head") {
    AxisData axis;
    axis.u.assign(8, 0.0);
    axis.c = 1.0;
    CHECK(compute_head(axis, uniform) == doctest::Approx(20.6).epsilon(1e-15));
    axis.g = 0.0;
    CHECK(compute_head(axis, uniform) == 1.0);
    axis.u.assign(8, 3.0);
    axis.c = 2.0;
    CHECK(compute_head(axis, uniform) == 1.0);
}

TEST_CASE("laminar velocity, pressure and surface") {
    const auto r = laminar(101325.0);
    for (double x : {-0.5, 0.0, 0.3})
        for (double y : {-1.0, -0.6, -0.1, 0.0}) {
            const auto v = reconstruct_velocity(r.psi, uniform, r.params, x, y);
            CHECK(std::abs(v.u) <= 1e-10);
            CHECK(std::abs(v.v) <= 1e-10);
            const auto p = reconstruct_pressure(r.psi, uniform, {}, r.params, x, y);
            CHECK(std::abs(p.p - (101325.0 - standard_gravity * y)) <= 1e-8 * 101325.0);
        }
    const auto s = recover_surface(r.psi, r.params, symmetric_grid(9, 0.5));
    for (const auto& pt : s) CHECK(std::abs(pt.eta) <= 1e-10);
}

TEST_CASE("above the surface is a domain error") {
    const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0);
    const auto m = recover(wave.axis(48), uniform, {wave.bernoulli()});
    // the surface dips away from the crest, so (0.5, eta0) is in the air
    try {
        reconstruct_velocity(m.psi, uniform, m.params, 0.5, wave.eta0());
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
}

TEST_CASE("manufactured velocity against the closed form") {
    const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0);
    const auto r = recover(wave.axis(48), uniform, {wave.bernoulli()});
    const auto v = reconstruct_velocity(r.psi, uniform, r.params, 0.4, -0.3);
    const double x = 0.4, y = -0.3, k = std::sqrt(5.0);
    const double psi_y = -2 * std::cosh(2 * y) + 0.01 * std::cos(x) * k * std::sinh(k * (y + 1));
    const double psi_x = -0.01 * std::sin(x) * std::cosh(k * (y + 1));
    CHECK(std::abs(v.u - psi_y) <= 1e-6);
    CHECK(std::abs(v.v + psi_x) <= 1e-6);

    SUBCASE("v vanishes on the axis and is odd in x") {
        for (double yy : {-0.9, -0.5, -0.1}) {
            CHECK(reconstruct_velocity(r.psi, uniform, r.params, 0.0, yy).v == 0.0);
            const double a = reconstruct_velocity(r.psi, uniform, r.params, 0.3, yy).v;
            const double b = reconstruct_velocity(r.psi, uniform, r.params, -0.3, yy).v;
            CHECK(a == -b);
        }
    }
    SUBCASE("surface against a scalar root-find on the closed form") {
        const auto s = recover_surface(r.psi, r.params, {0.3});
        const double oracle =
            bisect_root([&](double yy) { return -std::sinh(2 * yy) + 0.01 * std::cos(0.3) * std::cosh(k * (yy + 1)); },
                        -0.5, 0.5);
        CHECK(std::abs(s[0].eta - oracle) <= 1e-10);
    }
}

TEST_CASE("unperturbed manufactured surface is flat") {
    const auto wave = manufacture_linear_wave(-4.0, 0.0, 1.0);
    CHECK(wave.eta0() == 0.0);
    const auto r = recover(wave.axis(48), uniform, {wave.bernoulli()});
    for (const auto& pt : recover_surface(r.psi, r.params, symmetric_grid(9, 0.5))) CHECK(std::abs(pt.eta) <= 1e-12);
}

TEST_CASE("surface pressure and energy constancy") {
    const auto lam = solve_laminar(quadratic, {}, 1.0, 20.6);
    const auto r = recover(lam.axis(1.0, 48, 50.0), quadratic, {});
    const auto surface = recover_surface(r.psi, r.params, symmetric_grid(9, 0.5));
    for (const auto& pt : surface) {
        const auto p = reconstruct_pressure(r.psi, quadratic, {}, r.params, pt.x, pt.eta);
        CHECK(std::abs(p.p - 50.0) <= 1e-8 * 51.0);
    }
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(-1.0, 0.0);
    const double e0 = reconstruct_pressure(r.psi, quadratic, {}, r.params, 0.0, -0.5).e;
    for (int i = 0; i < 100; ++i) {
        const double e = reconstruct_pressure(r.psi, quadratic, {}, r.params, ux(rng), uy(rng)).e;
        CHECK(std::abs(e - e0) <= 1e-9);
    }
    CHECK(surface_dynamic_residual(r.psi, quadratic, r.params, surface) <= 1e-6 * r.params.q);
}

TEST_CASE("flux invariance on laminar flows") {
    for (const auto* rho : {&uniform, &quadratic}) {
        const auto lam = solve_laminar(*rho, {}, 1.0, 20.6);
        const auto r = recover(lam.axis(1.0, 48), *rho, {});
        const auto surface = recover_surface(r.psi, r.params, symmetric_grid(9, 0.5));
        for (const auto& pt : surface) {
            const double f = flux_at(r.psi, *rho, r.params, pt.x, pt.eta);
            CHECK(std::abs(f - r.params.p0) <= 1e-6 * std::abs(r.params.p0));
        }
    }
}

TEST_CASE("built fields are even and below c") {
    const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0, 0.0);
    const auto r = recover(wave.axis(48), uniform, {wave.bernoulli()});
    const auto xs = symmetric_grid(11, 0.5);
    const auto f = build_field(r.psi, uniform, {wave.bernoulli()}, r.params, xs);
    for (std::size_t iy = 0; iy < f.ny(); ++iy)
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            const auto k = f.index(iy, ix), kr = f.index(iy, f.nx() - 1 - ix);
            CHECK(f.psi[k] == f.psi[kr]);
            if (f.inside[k]) CHECK(f.u[k] < r.params.c);
        }
}
