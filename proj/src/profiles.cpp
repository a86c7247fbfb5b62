#include "stratiwave/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "stratiwave/errors.hpp"

namespace stratiwave {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) fail(ErrorKind::structural, "polynomial coefficient is not finite");
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

int Polynomial::degree() const {
    return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

double Polynomial::eval(double p, int k) const {
    if (k < 0) fail(ErrorKind::structural, "negative derivative order");
    const int n = static_cast<int>(coeffs_.size());
    if (k >= n) return 0.0;
    double acc = 0.0;
    for (int i = n - 1; i >= k; --i) {
        // falling factorial i!/(i-k)!
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= static_cast<double>(i - j);
        acc = acc * p + f * coeffs_[i];
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    if (coeffs_.empty()) return {};
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

bool ProfileReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

ProfileReport validate_profiles(const DensityProfile& rho, const BernoulliFunction& beta, double p0) {
    if (!(p0 < 0.0)) fail(ErrorKind::structural, "pseudo mass flux p0 must be negative");
    constexpr int samples = 1000;

    ProfileCheck positive{"rho_positive", true, 0.0, rho.rho(0.0)};
    ProfileCheck nonincreasing{"rho_nonincreasing", true, 0.0, rho.rho.eval(0.0, 1)};
    ProfileCheck finite{"beta_finite", true, 0.0, beta.beta(0.0)};

    for (int i = 0; i < samples; ++i) {
        const double p = p0 + (0.0 - p0) * i / (samples - 1);
        const double r = rho.rho(p);
        if (r < positive.worst_value) positive = {positive.name, true, p, r};
        const double dr = rho.rho.eval(p, 1);
        if (dr > nonincreasing.worst_value) nonincreasing = {nonincreasing.name, true, p, dr};
        const double b = beta.beta(-p);
        if (!std::isfinite(b)) finite = {finite.name, false, p, b};
    }
    positive.passed = positive.worst_value > 0.0;
    nonincreasing.passed = nonincreasing.worst_value <= 0.0;
    return {{positive, nonincreasing, finite}};
}

}  // namespace stratiwave
