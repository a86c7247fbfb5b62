#include <doctest.h>

#include <cmath>
#include <random>

#include "stratiwave/errors.hpp"
#include "stratiwave/profiles.hpp"

using namespace stratiwave;

namespace {

const ProfileCheck& find(const ProfileReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST_CASE("poly_eval") {
    CHECK(poly_eval(Polynomial({1.0, -0.1}), 1, 0.0) == -0.1);
    CHECK(poly_eval(Polynomial({1.0, -0.1}), 1, -7.3) == -0.1);
    CHECK(poly_eval(Polynomial({0.0, 0.0, 1.0}), 0, 3.0) == 9.0);
    CHECK(poly_eval(Polynomial({0.0, -2.0, 0.0, 1.0}), 2, 1.5) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(poly_eval(Polynomial({0.0, -2.0, 0.0, 1.0}), 4, 1.5) == 0.0);
    CHECK(poly_eval(Polynomial(), 0, 2.0) == 0.0);
}

TEST_CASE("degree after trimming trailing zeros") {
    CHECK(Polynomial({1.0, 2.0, 0.0, 0.0}).degree() == 1);
    CHECK(Polynomial({0.0, 0.0}).is_zero());
}

TEST_CASE("poly_antiderivative") {
    CHECK(poly_antiderivative(Polynomial()).is_zero());
    CHECK(poly_antiderivative(Polynomial({1.0})) == Polynomial({0.0, 1.0}));
    CHECK(poly_antiderivative(Polynomial({0.0, -4.0})) == Polynomial({0.0, 0.0, -2.0}));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const Polynomial f({0.5, -1.0, 2.0, 0.25});
    const Polynomial big = poly_antiderivative(f);
    for (int i = 0; i < 100; ++i) {
        const double p = u(rng);
        CHECK(poly_eval(big, 1, p) == poly_eval(f, 0, p));
    }
}

TEST_CASE("validate_profiles") {
    SUBCASE("homogeneous still water") {
        const auto r = validate_profiles({Polynomial({1.0})}, {}, -1.0);
        CHECK(r.passed());
    }
    SUBCASE("density negative below p = -1") {
        const auto r = validate_profiles({Polynomial({1.0, 1.0})}, {}, -2.0);
        CHECK_FALSE(r.passed());
        const auto& pos = find(r, "rho_positive");
        CHECK_FALSE(pos.passed);
        CHECK(pos.worst_p == doctest::Approx(-2.0));
        CHECK(pos.worst_value == doctest::Approx(-1.0));
    }
    SUBCASE("quadratic stratification") {
        const DensityProfile rho{Polynomial({1.0, -0.2, 0.01})};
        const auto r = validate_profiles(rho, {}, -1.0);
        CHECK(r.passed());
        const auto& pos = find(r, "rho_positive");
        CHECK(pos.worst_p == 0.0);
        CHECK(pos.worst_value == doctest::Approx(1.0));
        for (double p : {-1.0, -0.5, 0.0}) CHECK(rho.rho.eval(p, 1) == doctest::Approx(-(1.0 - p / 10) / 5));
    }
    SUBCASE("p0 must be negative") {
        CHECK_THROWS_AS(validate_profiles({Polynomial({1.0})}, {}, 0.5), Error);
    }
}
