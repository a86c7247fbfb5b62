#pragma once

#include <vector>

#include "stratiwave/axis.hpp"
#include "stratiwave/profiles.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

struct Velocity {
    double u = 0.0;
    double v = 0.0;
};

struct PressurePoint {
    double p = 0.0;  // pressure
    double e = 0.0;  // Bernoulli energy E on the streamline through the point
};

struct SurfacePoint {
    double x = 0.0;
    double eta = 0.0;
};

/// Gridded observables. Matrices are row-major with one row per y node; cells
/// above the free surface have inside == 0 and carry zeros.
struct FluidField {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<unsigned char> inside;
    std::vector<double> psi, u, v, p, e;
    std::vector<SurfacePoint> surface;
    WaveParameters params;

    std::size_t nx() const { return x.size(); }
    std::size_t ny() const { return y.size(); }
    std::size_t index(std::size_t iy, std::size_t ix) const { return iy * x.size() + ix; }
};

/// Bernoulli head from the crest data: rho(0)(u(0,eta0) - c)^2 + 2 g rho(0)(eta0 + d).
double compute_head(const AxisData& axis, const DensityProfile& rho);

/// u = c + psi_y / sqrt(rho(-psi)),  v = -psi_x / sqrt(rho(-psi)).
Velocity reconstruct_velocity(const SeriesEvaluator& psi, const DensityProfile& rho, const WaveParameters& params,
                              double x, double y);

/// Pressure from E(psi) = E_surface - B(psi), B' = beta, B(0) = 0.
PressurePoint reconstruct_pressure(const SeriesEvaluator& psi, const DensityProfile& rho,
                                   const BernoulliFunction& beta, const WaveParameters& params, double x, double y);

/// psi(x, .) = 0 on [-d, eta0]: bisection, then secant polish to |psi| <= 1e-12.
std::vector<SurfacePoint> recover_surface(const SeriesEvaluator& psi, const WaveParameters& params,
                                          const std::vector<double>& xs);

/// nx points on [-x_max, x_max], bitwise mirror-symmetric.
std::vector<double> symmetric_grid(int nx, double x_max);

FluidField build_field(const SeriesEvaluator& psi, const DensityProfile& rho, const BernoulliFunction& beta,
                       const WaveParameters& params, const std::vector<double>& xs);

/// F(x) = integral from -d to eta(x) of sqrt(rho)(u - c) dy, Clenshaw-Curtis with m nodes.
double flux_at(const SeriesEvaluator& psi, const DensityProfile& rho, const WaveParameters& params, double x,
               double eta, int m = 48);

struct PdeResidual {
    double sup_residual = 0.0;   // sup |Laplace(psi) - g y rho'(-psi) + beta(psi)|
    double sup_laplacian = 0.0;  // sup |Laplace(psi)|
    double normalized() const { return sup_residual / (1.0 + sup_laplacian); }
};

/// Interior residual on the x grid times the series' own y nodes, counting
/// only points inside the fluid.
PdeResidual pde_residual(const SeriesEvaluator& psi, const DensityProfile& rho, const BernoulliFunction& beta,
                         const WaveParameters& params, const std::vector<double>& xs);

/// sup over the surface points of | |grad psi|^2 + 2 g rho(0)(eta + d) - Q |.
double surface_dynamic_residual(const SeriesEvaluator& psi, const DensityProfile& rho,
                                const WaveParameters& params, const std::vector<SurfacePoint>& surface);

/// Residual of the implicit surface relation
/// eta(x) = ((u(0,eta0) - c)^2 - |grad psi|^2) / (2 g rho(0)) + eta0
/// with the kinetic term rescaled by rho(0); zero for an exact wave.
double surface_relation_residual(const SeriesEvaluator& psi, const DensityProfile& rho, const AxisData& axis,
                                 const std::vector<SurfacePoint>& surface);

}  // namespace stratiwave
