#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratiwave/field.hpp"
#include "stratiwave/reference.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

/// sup |psi(x,y) - psi(-x,y)| / sup |psi| over mirrored pairs inside the fluid.
/// Throws a structural error if the x grid is not mirror-symmetric.
double symmetry_residual(const FluidField& field);

/// sup |h(q,p) - h(-q,p)| / sup |h|, mirror column (nq - j) mod nq. Needs even nq.
double symmetry_residual(const HeightField& h);

struct MonotonicityReport {
    bool passed = true;
    bool degenerate_laminar = false;  // flat surface: trough minimum is not strict
    bool trough_minimum = true;       // h(-pi, p) <= h(q, p) on every row
    bool strict_at_surface = true;    // h(-pi, 0) < h(q, 0) for q != -pi
    bool nondecreasing = true;        // h(., p) nondecreasing on [-pi, 0]
    double worst_violation = 0.0;
    double worst_q = 0.0;
    double worst_p = 0.0;
    std::string status;
};

/// Trough minimum and monotonicity between trough and crest, row by row, on a
/// crest-shifted height field. Violations below `tolerance` are ignored.
MonotonicityReport monotonicity_check(const HeightField& h, double tolerance = 1e-12);

struct MovingPlaneReport {
    double min_omega = 0.0;  // most negative h(2 lambda - q, p) - h(q, p) over q <= lambda
    double lambda = 0.0;     // plane position of the minimum
    double q = 0.0;
    double p = 0.0;
    int planes = 0;
    bool flagged = false;    // min_omega < -threshold
};

/// Sweeps reflection planes lambda in (-pi, 0) through grid points and midpoints.
MovingPlaneReport moving_plane_scan(const HeightField& h, double threshold = 1e-10);

struct TheoremReport {
    bool hypothesis = false;   // monotone streamlines between trough and crest
    bool conclusion = false;   // symmetric about the crest line
    double symmetry = 0.0;
    MonotonicityReport monotonicity;
    std::string verdict;
};

TheoremReport symmetry_theorem_report(const HeightField& h, double symmetry_tolerance = 1e-8);

struct BernoulliReport {
    double sup_mismatch = 0.0;
    int pairs_used = 0;
    int pairs_skipped = 0;
    double witness_x = 0.0;
    double witness_y = 0.0;
};

/// Recomputes E = P + (rho/2)((u-c)^2 + v^2) + g y rho on vertically adjacent
/// fluid points, forms dE/dpsi by a divided difference and compares it with
/// -beta at the midpoint level: |dE/dpsi + beta| / (1 + |beta|). Pairs are
/// drawn with a seeded mt19937_64; pairs with |dpsi| below 1e-10 (1 + |p0|)
/// are skipped and counted.
BernoulliReport bernoulli_residual(const FluidField& field, const DensityProfile& rho,
                                   const BernoulliFunction& beta, std::uint64_t seed = 0, int pairs = 200);

struct AnalyticityReport {
    std::vector<double> norms;   // sup |a_2n|
    std::vector<double> ratios;  // ||a_2n+2|| / ||a_2n|| where both are above the floor
    double decay_slope = 0.0;    // fitted slope of log ||a_2n|| against 2n
    double radius = 0.0;
    bool below_floor = false;    // every a_2n, n >= 1, under 1e-14
    bool monotone_decay = false; // log-norms strictly decrease over the last ceil(N/2) orders
    std::string summary;
};

AnalyticityReport analyticity_report(const EvenSeries& psi);

}  // namespace stratiwave
