#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratiwave/field.hpp"
#include "stratiwave/profiles.hpp"
#include "stratiwave/reference.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

struct Tolerances {
    double pde = 1e-6;        // sup residual / (1 + sup |Laplace psi|)
    double symmetry = 1e-8;
    double bernoulli = 1e-4;
    double flux = 1e-6;       // relative to |p0|
    double surface = 1e-6;    // dynamic surface residual relative to Q
    double newton = 1e-10;
};

struct GridConfig {
    int nx = 41;
    double x_max = 0.5;
    int nq = 64;
    int np = 40;
};

struct ForwardConfig {
    double q = std::numeric_limits<double>::quiet_NaN();
    double lambda = -4.0;
    double epsilon = 0.01;
    double amplitude = 1e-3;
    int max_iter = 15;
};

struct Config {
    std::string mode;
    DensityProfile rho{Polynomial({1.0})};
    BernoulliFunction beta{};
    double d = 1.0;
    double g = standard_gravity;
    double p_atm = 0.0;
    double c = 0.0;
    std::optional<double> eta0;
    std::vector<std::pair<double, double>> samples;
    int order = 12;
    int nodes = 48;
    GridConfig grid;
    Tolerances tol;
    std::vector<std::string> hard_checks;  // soft checks promoted to hard
    std::uint64_t seed = 0;
    ForwardConfig forward;
};

/// Parses a JSON config. Relative csv paths resolve against the config's
/// directory. Problems raise ErrorKind::schema.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Reads a two-column (y, u) CSV with a header line.
std::vector<std::pair<double, double>> read_axis_csv(const std::filesystem::path& path);

/// A CSV table: header names plus numeric rows.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Table read_csv(const std::filesystem::path& path);
/// Writes floats with 17 significant digits.
void write_csv(const std::filesystem::path& path, const Table& table);

void write_text(const std::filesystem::path& path, const std::string& text);

Table field_table(const FluidField& field);
Table surface_table(const std::vector<SurfacePoint>& surface);
Table height_table(const HeightField& h);
Table axis_table(const AxisData& axis);

/// Rebuilds a FluidField from field.csv; the grid is the set of distinct x and
/// y values in order of first appearance, missing cells are outside the fluid.
FluidField field_from_table(const Table& table, const WaveParameters& params);
HeightField height_from_table(const Table& table, const WaveParameters& params);

std::string series_to_json(const EvenSeries& psi, const WaveParameters& params);
EvenSeries series_from_json(const std::string& text);

}  // namespace stratiwave
