#pragma once

#include <functional>
#include <vector>

#include "stratiwave/axis.hpp"
#include "stratiwave/profiles.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

// ---------------------------------------------------------------------------
// Laminar (x-independent) flows

/// Laminar flow with a flat surface at y = 0, parametrised by the vertical
/// coordinate: p(y) = -psi(y) and w(y) = H'(p(y)) on [-d, 0].
class LaminarSolution {
public:
    LaminarSolution(DensityProfile rho, BernoulliFunction beta, double g, double d, double q, NodalFunction p_of_y,
                    NodalFunction hp_of_y);

    double p0() const { return p0_; }
    double d() const { return d_; }
    double g() const { return g_; }
    double head() const { return q_; }
    const NodalFunction& p_of_y() const { return p_of_y_; }
    const NodalFunction& hp_of_y() const { return hp_of_y_; }

    /// Height above the bed H(p) and its derivative, p in [p0, 0].
    double height(double p) const;
    double height_p(double p) const;
    /// Stream function psi(y) = -p(y).
    double stream(double y) const { return -p_of_y_.at(y); }

    /// Horizontal velocity on any vertical, u = c - 1/(sqrt(rho) H').
    AxisData axis(double c, int m, double p_atm = 0.0) const;
    WaveParameters parameters(double c, double p_atm = 0.0) const;

private:
    double y_of_p(double p) const;

    DensityProfile rho_;
    BernoulliFunction beta_;
    double g_, d_, q_, p0_;
    NodalFunction p_of_y_;
    NodalFunction hp_of_y_;
};

/// Solves H'' + [beta(-p) - g (H - d) rho'(p)] H'^3 = 0 with H(p0) = 0,
/// H(0) = d and 1 + H'(0)^2 (2 g rho(0) d - Q) = 0.
LaminarSolution solve_laminar(const DensityProfile& rho, const BernoulliFunction& beta, double d, double q,
                              double g = standard_gravity, int m = 64, int substeps = 16);

// ---------------------------------------------------------------------------
// Manufactured waves for rho = 1, beta(p) = lambda p

/// psi = f(y) + eps cos(x) g(y), f = -sinh(sqrt(-lambda) y),
/// g = cosh(sqrt(1 - lambda)(y + d)). Solves Laplace(psi) = -lambda psi exactly.
class ManufacturedWave {
public:
    ManufacturedWave(double lambda, double epsilon, double d, double c);

    double lambda() const { return lambda_; }
    double epsilon() const { return epsilon_; }
    double d() const { return d_; }
    double c() const { return c_; }
    double eta0() const { return eta0_; }

    SeriesPoint at(double x, double y) const;
    double stream(double x, double y) const { return at(x, y).psi; }
    Polynomial bernoulli() const { return Polynomial({0.0, lambda_}); }

    AxisData axis(int m, double g = standard_gravity, double p_atm = 0.0) const;
    /// The exact even expansion: a_0 = f + eps g, a_2n = (-1)^n eps g / (2n)!.
    EvenSeries series(int order, int m) const;

private:
    double f(double y) const;
    double gfun(double y) const;

    double lambda_, epsilon_, d_, c_;
    double kf_, kg_;
    double eta0_ = 0.0;
};

ManufacturedWave manufacture_linear_wave(double lambda, double epsilon, double d, double c = 0.0);

// ---------------------------------------------------------------------------
// Height-function formulation on the rectangle [-pi, pi) x [p0, 0]

/// h(q, p) on nq uniform q nodes starting at -pi and np uniform p nodes.
/// Row 0 is the bed p = p0, row np-1 the surface p = 0.
struct HeightField {
    int nq = 0;
    int np = 0;
    double p0 = -1.0;
    std::vector<double> h;
    WaveParameters params;

    HeightField() = default;
    HeightField(int nq, int np, double p0, WaveParameters params);

    double dq() const;
    double dp() const;
    double q(int j) const;
    double p(int i) const;
    double& at(int i, int j) { return h[static_cast<std::size_t>(i) * nq + j]; }
    double at(int i, int j) const { return h[static_cast<std::size_t>(i) * nq + j]; }
    int crest_column() const { return nq / 2; }

    static HeightField from_function(int nq, int np, double p0, WaveParameters params,
                                     const std::function<double(double, double)>& h);
};

HeightField height_from_laminar(const LaminarSolution& laminar, int nq, int np, WaveParameters params);
/// Inverts psi(q, y) = -p column by column (manufactured waves are not
/// streamline-bounded at the bed, so row 0 is only zero at q = 0).
HeightField height_from_manufactured(const ManufacturedWave& wave, int nq, int np, WaveParameters params);

/// Circularly shifts columns so that the surface maximum sits at q = 0.
HeightField crest_shift(const HeightField& h);

struct HeightSystem {
    DensityProfile rho;
    BernoulliFunction beta;
    double g = standard_gravity;
    double d = 1.0;
};

struct HeightResidual {
    std::vector<double> values;  // np x nq, bottom row zero
    double sup() const;
};

/// Interior residual of the height equation and the Bernoulli condition on
/// p = 0, second-order differences (periodic in q, one-sided at the top).
HeightResidual height_residual(const HeightField& h, const HeightSystem& sys, double q);

/// Unknown index of h(i, j) for rows 1..np-1.
inline int height_unknown(const HeightField& h, int i, int j) { return (i - 1) * h.nq + j; }

struct HeightLinearization {
    HeightResidual residual;
    std::vector<double> dr_dq;  // derivative of each unknown's equation w.r.t. Q
    // Sparse Jacobian in triplet form over the h unknowns.
    std::vector<int> rows, cols;
    std::vector<double> vals;

    /// y = J x for x over the h unknowns.
    std::vector<double> apply(const std::vector<double>& x) const;
};

HeightLinearization height_residual_and_jacobian(const HeightField& h, const HeightSystem& sys, double q);

struct NewtonStep {
    int iteration = 0;
    double residual = 0.0;
    double step_length = 0.0;
    double head = 0.0;
};

struct NewtonResult {
    HeightField field;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::vector<NewtonStep> log;
};

struct NewtonOptions {
    int max_iter = 15;
    double tolerance = 1e-10;
    /// When set, Q becomes an unknown and the crest-to-trough surface drop
    /// h(0, 0) - h(-pi, 0) is held at its value in the initial field.
    bool pin_amplitude = false;
};

/// Damped Newton with a halving line search on the sup-norm residual.
NewtonResult solve_height_newton(const HeightField& init, const HeightSystem& sys, double q,
                                 const NewtonOptions& options = {});

struct Bifurcation {
    double head = 0.0;           // Q at which the cos(q) mode becomes neutral
    HeightField laminar;         // discrete laminar flow there
    std::vector<double> kernel;  // neutral mode, rows 1..np-1, unit sup norm
};

/// Locates, along the discrete laminar family with p0 fixed, the head where
/// the linearisation acquires a cos(q) kernel. Starts from `laminar` at its
/// head and searches outward for a sign change of the mode determinant.
Bifurcation locate_bifurcation(const HeightField& laminar, const HeightSystem& sys);

/// Determinant sign and log-magnitude of the cos(q) block of the Jacobian
/// at a q-independent field.
std::pair<int, double> cos_mode_determinant(const HeightField& laminar, const HeightSystem& sys, double q);

/// Axis data along the crest column: y = h(0,p) - d, u = c - 1/(sqrt(rho) h_p),
/// evaluated at m Chebyshev nodes on [-d, eta0]. The column is smoothed by a
/// least-squares Chebyshev fit of p as a function of y, so that grid-scale
/// wiggles are not amplified by the continuation off the axis. The field must
/// already be crest-shifted.
AxisData sample_axis_from_height(const HeightField& h, const DensityProfile& rho, double c, int m,
                                 int degree = 12);

}  // namespace stratiwave
