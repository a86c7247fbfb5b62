#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stratiwave/axis.hpp"
#include "stratiwave/errors.hpp"
#include "stratiwave/io.hpp"
#include "stratiwave/reference.hpp"
#include "stratiwave/series.hpp"

namespace stratiwave {

/// Process exit code for a failure class: 2 schema/input, 3 stagnation or
/// profile range, 4 divergence or solver failure.
int exit_code(ErrorKind kind);

inline constexpr int exit_hard_check_failed = 5;

struct Check {
    std::string name;
    bool hard = false;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
};

/// Everything the recovery computes before fields are evaluated.
struct Recovery {
    AxisData axis;
    AxisStreamFunction stream;
    WaveParameters params;
    EvenSeries psi;
    StagnationMargin margin;
};

Recovery recover_from_config(const Config& cfg);

/// Each returns the process exit code; artifacts are written before a hard
/// check failure is reported.
// Near-bifurcation Newton wave seeded from the laminar flow; field is crest-shifted.
struct NewtonWave {
    Bifurcation bifurcation;
    NewtonResult result;
    HeightField field;
};
NewtonWave solve_newton_wave(const Config& cfg);

int run_recover(const Config& cfg, const std::filesystem::path& out_dir);
int run_forward(const Config& cfg, const std::filesystem::path& out_dir);
int run_verify(const Config& cfg, const std::vector<std::filesystem::path>& inputs,
               const std::filesystem::path& out_dir);

}  // namespace stratiwave
