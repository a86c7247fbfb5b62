#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "stratiwave/errors.hpp"
#include "stratiwave/series.hpp"

using namespace stratiwave;

namespace {

const Interval unit{-1.0, 0.0};

EvenSeries constant_series(std::vector<double> c, int m = 8, Interval iv = unit) {
    std::vector<NodalFunction> coeffs;
    for (double v : c) coeffs.push_back(NodalFunction::constant(m, iv, v));
    return EvenSeries(std::move(coeffs));
}

double max_diff(const NodalFunction& a, const NodalFunction& b) {
    double m = 0.0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

EvenSeries random_series(std::mt19937_64& rng, int order, int m) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<NodalFunction> coeffs;
    for (int n = 0; n <= order; ++n) {
        const double a = u(rng), b = u(rng), c = u(rng);
        coeffs.push_back(NodalFunction::sample(m, unit, [=](double y) { return a + b * y + c * std::sin(3 * y); }));
    }
    return EvenSeries(std::move(coeffs));
}

// Dense collocation matrix squared, applied by Eigen; independent of the
// coefficient-space derivative used by nodal_diff2.
std::vector<double> dense_second_derivative(const NodalFunction& f) {
    const int m = f.size();
    const auto d = cheb::differentiation_matrix(m, f.domain());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> D(d.data(), m, m);
    Eigen::Map<const Eigen::VectorXd> v(f.values().data(), m);
    const Eigen::VectorXd r = D * (D * v);
    return {r.data(), r.data() + m};
}

}  // namespace

TEST_CASE("chebyshev nodes are the mapped cosine set") {
    const auto y = cheb::nodes(5, {-2.0, 0.0});
    CHECK(y.front() == 0.0);
    CHECK(y.back() == -2.0);
    CHECK(y[2] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(-1.0 + std::cos(M_PI / 4)).epsilon(1e-15));
}

TEST_CASE("coefficient transform round trips") {
    std::vector<double> v{0.3, -1.0, 2.5, 0.7, 4.0, -0.2};
    const auto back = cheb::to_values(cheb::to_coefficients(v));
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(back[k] == doctest::Approx(v[k]).epsilon(1e-14));
}

TEST_CASE("series_add") {
    const auto a = constant_series({1.0, 2.0, 3.0});
    const auto b = constant_series({5.0, -1.0, 0.5});
    SUBCASE("adding zero times b is identity") {
        const auto r = series_add(a, b, 1.0, 0.0);
        for (int n = 0; n <= 2; ++n) CHECK(max_diff(r.coeff(n), a.coeff(n)) == 0.0);
    }
    SUBCASE("a minus a cancels") {
        const auto r = series_add(a, a, 1.0, -1.0);
        for (int n = 0; n <= 2; ++n) CHECK(r.coeff(n).sup_norm() == 0.0);
    }
    SUBCASE("disjoint supports") {
        const auto r = series_add(constant_series({1.0, 0.0}), constant_series({0.0, 1.0}), 1.0, 1.0);
        CHECK(r.coeff(0)[0] == 1.0);
        CHECK(r.coeff(1)[0] == 1.0);
    }
    SUBCASE("mismatched order is structural") {
        CHECK_THROWS_AS(series_add(a, constant_series({1.0, 2.0}), 1.0, 1.0), Error);
        try {
            series_add(a, constant_series({1.0}, 8, {-2.0, 0.0}), 1.0, 1.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::structural);
        }
    }
}

TEST_CASE("series_mul") {
    SUBCASE("(1 + x^2)(1 - x^2) = 1 - x^4") {
        const auto r = series_mul(constant_series({1.0, 1.0, 0.0}), constant_series({1.0, -1.0, 0.0}));
        CHECK(r.coeff(0)[3] == doctest::Approx(1.0));
        CHECK(r.coeff(1).sup_norm() == 0.0);
        CHECK(r.coeff(2)[3] == doctest::Approx(-1.0));
    }
    SUBCASE("x^2 x^2 truncates at N = 1") {
        const auto r = series_mul(constant_series({0.0, 1.0}), constant_series({0.0, 1.0}));
        CHECK(r.order() == 1);
        CHECK(r.coeff(0).sup_norm() == 0.0);
        CHECK(r.coeff(1).sup_norm() == 0.0);
    }
    SUBCASE("commutative and associative") {
        std::mt19937_64 rng(7);
        const auto a = random_series(rng, 5, 12);
        const auto b = random_series(rng, 5, 12);
        const auto c = random_series(rng, 5, 12);
        const auto ab = series_mul(a, b), ba = series_mul(b, a);
        const auto l = series_mul(ab, c), r = series_mul(a, series_mul(b, c));
        for (int n = 0; n <= 5; ++n) {
            const double scale = std::max(1.0, l.coeff(n).sup_norm());
            CHECK(max_diff(ab.coeff(n), ba.coeff(n)) <= 1e-13 * std::max(1.0, ab.coeff(n).sup_norm()));
            CHECK(max_diff(l.coeff(n), r.coeff(n)) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("series_compose_poly") {
    SUBCASE("squaring 1 + x^2") {
        const auto r = series_compose_poly(Polynomial({0.0, 0.0, 1.0}), +1, constant_series({1.0, 1.0, 0.0}));
        CHECK(r.coeff(0)[0] == doctest::Approx(1.0));
        CHECK(r.coeff(1)[0] == doctest::Approx(2.0));
        CHECK(r.coeff(2)[0] == doctest::Approx(1.0));
    }
    SUBCASE("constant derivative of a linear density") {
        const Polynomial rho({1.0, -0.1});
        std::mt19937_64 rng(3);
        const auto r = series_compose_poly(rho.derivative(), -1, random_series(rng, 4, 10));
        for (int k = 0; k < 10; ++k) CHECK(r.coeff(0)[k] == doctest::Approx(-0.1).epsilon(1e-15));
        for (int n = 1; n <= 4; ++n) CHECK(r.coeff(n).sup_norm() == 0.0);
    }
    SUBCASE("linear Bernoulli function scales coefficients") {
        std::mt19937_64 rng(5);
        const auto psi = random_series(rng, 4, 10);
        const auto r = series_compose_poly(Polynomial({0.0, -4.0}), +1, psi);
        for (int n = 0; n <= 4; ++n)
            for (int k = 0; k < 10; ++k) CHECK(r.coeff(n)[k] == doctest::Approx(-4.0 * psi.coeff(n)[k]).epsilon(1e-15));
    }
    SUBCASE("composition of a product is the product of compositions") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> fc(5), gc(5);
            for (auto& v : fc) v = u(rng);
            for (auto& v : gc) v = u(rng);
            const Polynomial f(fc), g(gc);
            const auto psi = random_series(rng, 4, 10);
            for (int sign : {-1, +1}) {
                const auto lhs = series_compose_poly(f * g, sign, psi);
                const auto rhs = series_mul(series_compose_poly(f, sign, psi), series_compose_poly(g, sign, psi));
                for (int n = 0; n <= 4; ++n)
                    CHECK(max_diff(lhs.coeff(n), rhs.coeff(n)) <= 1e-12 * std::max(1.0, lhs.coeff(n).sup_norm()));
            }
        }
    }
}

TEST_CASE("nodal_diff2") {
    SUBCASE("y^2 has second derivative 2") {
        for (int m : {4, 8, 33}) {
            const auto r = nodal_diff2(NodalFunction::sample(m, unit, [](double y) { return y * y; }));
            for (int k = 0; k < m; ++k) CHECK(std::abs(r[k] - 2.0) <= 1e-12);
        }
    }
    SUBCASE("constant gives zero") {
        const auto r = nodal_diff2(NodalFunction::constant(16, unit, 3.7));
        CHECK(r.sup_norm() <= 1e-12);
    }
    SUBCASE("sinh(2y) against the closed form") {
        const auto f = NodalFunction::sample(32, unit, [](double y) { return std::sinh(2 * y); });
        const auto r = nodal_diff2(f);
        const auto y = f.nodes();
        double err = 0.0;
        for (int k = 0; k < 32; ++k) err = std::max(err, std::abs(r[k] - 4 * std::sinh(2 * y[k])));
        CHECK(err < 1e-10);
    }
    SUBCASE("polynomials up to degree M-1 are exact and match the dense matrix") {
        const int m = 12;
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> c(m);
        for (auto& v : c) v = u(rng);
        const Polynomial p(c);
        const auto f = NodalFunction::sample(m, unit, [&](double y) { return p(y); });
        const auto r = nodal_diff2(f);
        const auto dense = dense_second_derivative(f);
        const auto y = f.nodes();
        for (int k = 0; k < m; ++k) {
            CHECK(std::abs(r[k] - p.eval(y[k], 2)) <= 1e-11 * std::max(1.0, std::abs(p.eval(y[k], 2))));
            CHECK(std::abs(r[k] - dense[k]) <= 1e-9);
        }
    }
}

TEST_CASE("series_eval") {
    SUBCASE("laminar series is x independent") {
        std::vector<NodalFunction> c{NodalFunction::sample(16, unit, [](double y) { return -y; })};
        for (int n = 0; n < 4; ++n) c.push_back(NodalFunction::constant(16, unit, 0.0));
        const EvenSeries psi(c);
        CHECK(series_eval(psi, 0.3, -0.5) == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("x = 0 gives a0 and evenness is bitwise") {
        std::mt19937_64 rng(9);
        const auto psi = random_series(rng, 6, 16);
        std::uniform_real_distribution<double> ux(0.0, 1.0), uy(-1.0, 0.0);
        for (int i = 0; i < 100; ++i) {
            const double x = ux(rng), y = uy(rng);
            CHECK(series_eval(psi, x, y) == series_eval(psi, -x, y));
            CHECK(series_eval(psi, 0.0, y) == doctest::Approx(psi.coeff(0).at(y)).epsilon(1e-14));
        }
    }
    SUBCASE("outside the y domain") {
        const auto psi = constant_series({1.0, 1.0});
        try {
            series_eval(psi, 0.0, 0.5);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::domain);
        }
    }
}

TEST_CASE("radius_estimate") {
    SUBCASE("laminar series is unbounded") {
        std::vector<NodalFunction> c{NodalFunction::sample(16, unit, [](double y) { return -y; })};
        for (int n = 0; n < 6; ++n) c.push_back(NodalFunction::constant(16, unit, 0.0));
        CHECK(radius_estimate(EvenSeries(c)) == std::numeric_limits<double>::infinity());
    }
    SUBCASE("geometric series with r = 2") {
        std::vector<double> c;
        for (int n = 0; n <= 12; ++n) c.push_back(std::pow(2.0, -2.0 * n));
        const double r = radius_estimate(constant_series(c));
        CHECK(r >= 1.9);
        CHECK(r <= 2.1);
    }
    SUBCASE("too few orders") {
        try {
            radius_estimate(constant_series({1.0, 0.5}));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::insufficient_data);
        }
    }
}
