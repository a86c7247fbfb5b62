#pragma once

#include <string>
#include <vector>

namespace stratiwave {

/// Real polynomial in ascending powers, trailing zeros trimmed.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const { return coeffs_; }
    /// Degree of the trimmed polynomial; the zero polynomial reports 0.
    int degree() const;
    bool is_zero() const { return coeffs_.empty(); }

    /// k-th derivative at p (k = 0 evaluates).
    double eval(double p, int k = 0) const;
    double operator()(double p) const { return eval(p, 0); }

    Polynomial derivative() const;
    /// G with G' = F and G(0) = 0.
    Polynomial antiderivative() const;

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

inline double poly_eval(const Polynomial& f, int k, double p) { return f.eval(p, k); }
inline Polynomial poly_antiderivative(const Polynomial& f) { return f.antiderivative(); }

/// Streamline density rho(p) on p in [p0, 0].
struct DensityProfile {
    Polynomial rho;
};

/// Bernoulli function beta, evaluated at the stream-function value psi.
struct BernoulliFunction {
    Polynomial beta;
};

struct ProfileCheck {
    std::string name;
    bool passed = true;
    double worst_p = 0.0;      // witness location in p
    double worst_value = 0.0;  // quantity at the witness
};

struct ProfileReport {
    std::vector<ProfileCheck> checks;
    bool passed() const;
};

/// Dense scan (1000 points) of the profile invariants on [p0, 0].
ProfileReport validate_profiles(const DensityProfile& rho, const BernoulliFunction& beta, double p0);

}  // namespace stratiwave
