#include <doctest.h>

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <random>

#include "stratiwave/errors.hpp"
#include "stratiwave/field.hpp"
#include "stratiwave/reference.hpp"

using namespace stratiwave;

namespace {

const DensityProfile uniform{Polynomial({1.0})};
const DensityProfile quadratic{Polynomial({1.0, -0.2, 0.01})};
const HeightSystem still{uniform, {}, standard_gravity, 1.0};

double sup_interior(const HeightResidual& r, const HeightField& h) {
    double m = 0.0;
    for (int i = 1; i + 1 < h.np; ++i)
        for (int j = 0; j < h.nq; ++j) m = std::max(m, std::abs(r.values[static_cast<std::size_t>(i) * h.nq + j]));
    return m;
}

HeightField affine_laminar(int nq, int np) {
    WaveParameters params{1.0, 1.0, standard_gravity, 0.0, -1.0, 20.6};
    return HeightField::from_function(nq, np, -1.0, params, [](double, double p) { return p + 1.0; });
}

}  // namespace

TEST_CASE("solve_laminar") {
    SUBCASE("uniform density gives the affine profile") {
        const auto lam = solve_laminar(uniform, {}, 1.0, 20.6);
        CHECK(lam.p0() == doctest::Approx(-1.0).epsilon(1e-12));
        for (double p : {-1.0, -0.7, -0.25, 0.0}) {
            CHECK(std::abs(lam.height(p) - (p + 1.0)) <= 1e-12);
            CHECK(std::abs(lam.height_p(p) - 1.0) <= 1e-10);
        }
    }
    SUBCASE("constant density is affine for any admissible head") {
        const auto lam = solve_laminar(uniform, {}, 2.0, 50.0);
        const double slope = lam.height_p(lam.p0());
        CHECK(slope == doctest::Approx(1.0 / std::sqrt(50.0 - 2 * 9.8 * 2.0)).epsilon(1e-12));
        for (double s : {0.1, 0.5, 0.9}) {
            const double p = s * lam.p0();
            CHECK(std::abs(lam.height(p) - (p - lam.p0()) * slope) <= 1e-12);
        }
    }
    SUBCASE("stratified profile satisfies the ODE and the surface condition") {
        const auto lam = solve_laminar(quadratic, {}, 1.0, 20.6);
        const auto& w = lam.hp_of_y();
        const auto& p = lam.p_of_y();
        const auto dw = nodal_diff(w);
        const auto y = w.nodes();
        double ode = 0.0;
        for (int k = 0; k < w.size(); ++k) {
            const double force = -standard_gravity * y[k] * quadratic.rho.eval(p[k], 1);
            ode = std::max(ode, std::abs(dw[k] + force * w[k] * w[k]));
        }
        CHECK(ode <= 1e-10);
        const double w0 = w.at(0.0);
        CHECK(std::abs(1.0 + w0 * w0 * (2 * standard_gravity * quadratic.rho(0.0) * 1.0 - 20.6)) <= 1e-10);
        CHECK(std::abs(lam.height(lam.p0())) <= 1e-12);

        // the same flow viewed as a stream function a0 = -p(y)
        const auto a0 = -1.0 * p;
        const auto a0yy = nodal_diff2(a0);
        double stream = 0.0;
        for (int k = 0; k < a0.size(); ++k)
            stream = std::max(stream, std::abs(a0yy[k] - standard_gravity * y[k] * quadratic.rho.eval(-a0[k], 1)));
        CHECK(stream <= 1e-8);
    }
    SUBCASE("head too small for the depth") {
        try {
            solve_laminar(uniform, {}, 1.0, 19.0);
            FAIL("expected no laminar flow");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::no_laminar_flow);
        }
    }
}

TEST_CASE("manufacture_linear_wave") {
    SUBCASE("zero amplitude") {
        const auto wave = manufacture_linear_wave(-4.0, 0.0, 1.0);
        CHECK(wave.eta0() == 0.0);
        const auto axis = wave.axis(16);
        const auto y = axis.nodes();
        for (int k = 0; k < 16; ++k) CHECK(axis.u[k] == doctest::Approx(-2 * std::cosh(2 * y[k])).epsilon(1e-14));
    }
    SUBCASE("crest height from a bisection oracle") {
        const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0);
        boost::math::tools::eps_tolerance<double> tol(50);
        const auto r = boost::math::tools::bisect(
            [](double y) { return -std::sinh(2 * y) + 0.01 * std::cosh(std::sqrt(5.0) * (y + 1)); }, -0.5, 0.5, tol);
        CHECK(wave.eta0() == doctest::Approx(0.5 * (r.first + r.second)).epsilon(1e-13));
        CHECK(wave.eta0() == doctest::Approx(0.024977039969565525).epsilon(1e-12));
    }
    SUBCASE("interior PDE holds at random points") {
        const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> ux(-M_PI, M_PI), uy(-1.0, 0.0);
        for (int i = 0; i < 100; ++i) {
            const auto pt = wave.at(ux(rng), uy(rng));
            CHECK(std::abs(pt.laplacian() - 4.0 * pt.psi) <= 1e-12 * std::max(1.0, std::abs(pt.psi)));
        }
    }
    SUBCASE("too large an amplitude") {
        try {
            manufacture_linear_wave(-4.0, 1.0, 1.0);
            FAIL("expected stagnation");
        } catch (const StagnationError& e) {
            CHECK(e.kind() == ErrorKind::stagnation);
        }
    }
    SUBCASE("closed-form series decays factorially") {
        const auto psi = manufacture_linear_wave(-4.0, 0.01, 1.0).series(12, 48);
        CHECK(radius_estimate(psi) >= M_PI);
    }
}

TEST_CASE("height residual") {
    SUBCASE("affine laminar field is an exact discrete solution") {
        const auto h = affine_laminar(64, 40);
        CHECK(height_residual(h, still, 20.6).sup() <= 1e-12);
    }
    SUBCASE("flat field loses ellipticity") {
        WaveParameters params{1.0, 1.0, standard_gravity, 0.0, -1.0, 20.6};
        HeightField h(16, 8, -1.0, params);
        CHECK_THROWS_AS(height_residual(h, still, 20.6), StagnationError);
    }
    SUBCASE("second-order truncation error under refinement") {
        const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0);
        const HeightSystem sys{uniform, {wave.bernoulli()}, standard_gravity, 1.0};
        WaveParameters params{0.0, 1.0, standard_gravity, 0.0, 0.0, 0.0};
        const auto coarse = height_from_manufactured(wave, 32, 20, params);
        const auto fine = height_from_manufactured(wave, 64, 39, params);
        const double rc = sup_interior(height_residual(coarse, sys, 0.0), coarse);
        const double rf = sup_interior(height_residual(fine, sys, 0.0), fine);
        CHECK(rc / rf >= 3.0);
    }
}

TEST_CASE("jacobian against central differences") {
    WaveParameters params{1.0, 1.0, standard_gravity, 0.0, 0.0, 0.0};
    const auto lam = solve_laminar(quadratic, BernoulliFunction{Polynomial({0.3, -0.5})}, 1.0, 22.0);
    params.p0 = lam.p0();
    auto h = height_from_laminar(lam, 24, 12, params);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 1; i < h.np; ++i)
        for (int j = 0; j < h.nq; ++j) h.at(i, j) += 0.01 * std::cos(h.q(j)) * h.p(i) / h.p0 + 1e-3 * u(rng);
    const HeightSystem sys{quadratic, {Polynomial({0.3, -0.5})}, standard_gravity, 1.0};

    const int unknowns = (h.np - 1) * h.nq;
    std::vector<double> dir(static_cast<std::size_t>(unknowns));
    for (auto& v : dir) v = u(rng);
    const auto lin = height_residual_and_jacobian(h, sys, 22.0);
    const auto jv = lin.apply(dir);

    const double step = 1e-6;
    auto shifted = [&](double s) {
        HeightField g = h;
        for (int i = 1; i < h.np; ++i)
            for (int j = 0; j < h.nq; ++j) g.at(i, j) += s * dir[height_unknown(h, i, j)];
        return height_residual(g, sys, 22.0).values;
    };
    const auto plus = shifted(step), minus = shifted(-step);
    double err = 0.0, scale = 0.0;
    for (int i = 1; i < h.np; ++i)
        for (int j = 0; j < h.nq; ++j) {
            const auto k = static_cast<std::size_t>(i) * h.nq + j;
            const double fd = (plus[k] - minus[k]) / (2 * step);
            err = std::max(err, std::abs(fd - jv[height_unknown(h, i, j)]));
            scale = std::max(scale, std::abs(fd));
        }
    CHECK(err / scale <= 1e-6);

    // d/dQ of each equation
    HeightField same = h;
    const auto rq = height_residual(same, sys, 22.0 + step).values;
    const auto rm = height_residual(same, sys, 22.0 - step).values;
    for (int i = 1; i < h.np; ++i)
        for (int j = 0; j < h.nq; ++j) {
            const auto k = static_cast<std::size_t>(i) * h.nq + j;
            CHECK(std::abs((rq[k] - rm[k]) / (2 * step) - lin.dr_dq[height_unknown(h, i, j)]) <= 1e-6);
        }
}

TEST_CASE("newton") {
    SUBCASE("laminar initial guess is already a root") {
        const auto r = solve_height_newton(affine_laminar(64, 40), still, 20.6);
        CHECK(r.converged);
        CHECK(r.iterations <= 1);
        CHECK(r.residual <= 1e-10);
    }
    SUBCASE("seeded near the bifurcation") {
        const auto lam = solve_laminar(uniform, {}, 1.0, 27.0);
        const auto column = height_from_laminar(lam, 64, 40, lam.parameters(0.0));
        const auto bif = locate_bifurcation(column, still);
        HeightField seed = bif.laminar;
        for (int i = 1; i < seed.np; ++i)
            for (int j = 0; j < seed.nq; ++j)
                seed.at(i, j) += 1e-3 * std::cos(seed.q(j)) * (seed.p(i) - seed.p0) / -seed.p0;
        NewtonOptions opt;
        opt.pin_amplitude = true;
        const auto r = solve_height_newton(seed, still, bif.head, opt);
        CHECK(r.converged);
        CHECK(r.iterations <= 15);
        CHECK(r.residual <= 1e-10);
        CHECK(r.field.params.q == doctest::Approx(bif.head).epsilon(1e-3));
        const int top = r.field.np - 1;
        CHECK(r.field.at(top, r.field.nq / 2) - r.field.at(top, 0) == doctest::Approx(2e-3).epsilon(1e-9));
    }
}

TEST_CASE("crest_shift moves the maximum to q = 0") {
    WaveParameters params{1.0, 1.0, standard_gravity, 0.0, -1.0, 20.6};
    const auto h = HeightField::from_function(16, 6, -1.0, params,
                                              [](double q, double p) { return p + 1.0 + 0.01 * (p + 1.0) * std::cos(q - 1.1); });
    const auto s = crest_shift(h);
    const int top = s.np - 1;
    for (int j = 0; j < s.nq; ++j) CHECK(s.at(top, j) <= s.at(top, s.crest_column()));
    CHECK(s.q(s.crest_column()) == 0.0);
}

TEST_CASE("sample_axis_from_height") {
    SUBCASE("laminar constant-density field") {
        const auto h = affine_laminar(16, 40);
        const auto axis = sample_axis_from_height(h, uniform, 1.0, 32);
        for (double u : axis.u) CHECK(std::abs(u) <= 1e-12);
        CHECK(axis.eta0 == 0.0);
    }
    SUBCASE("manufactured wave round trip") {
        const auto wave = manufacture_linear_wave(-4.0, 0.01, 1.0);
        WaveParameters params{0.0, 1.0, standard_gravity, 0.0, 0.0, 0.0};
        const auto h = height_from_manufactured(wave, 16, 40, params);
        const auto axis = sample_axis_from_height(h, uniform, 0.0, 48);
        const auto exact = wave.axis(48);
        CHECK(axis.eta0 == doctest::Approx(wave.eta0()).epsilon(1e-12));
        const int top = h.np - 1;
        for (int j = 0; j < h.nq; ++j) CHECK(h.at(top, j) - 1.0 <= axis.eta0);
        double err = 0.0;
        for (int k = 0; k < 48; ++k) err = std::max(err, std::abs(axis.u[k] - exact.u[k]));
        CHECK(err <= 1e-6);
    }
}
