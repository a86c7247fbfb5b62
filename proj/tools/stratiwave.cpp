// Command-line front end: recover, forward and verify pipelines.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "stratiwave/errors.hpp"
#include "stratiwave/io.hpp"
#include "stratiwave/pipeline.hpp"

namespace fs = std::filesystem;
using namespace stratiwave;

int main(int argc, char** argv) {
    CLI::App app{"Reconstruct steady stratified periodic water waves from crest-line velocity data"};
    app.require_subcommand(1);
    std::string out_dir = "out";
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();

    std::string recover_cfg;
    auto* recover = app.add_subcommand("recover", "Recover psi, velocity, pressure and surface from axis data");
    recover->add_option("config", recover_cfg, "JSON config")->required()->check(CLI::ExistingFile);

    std::string forward_cfg;
    auto* forward = app.add_subcommand("forward", "Generate a reference wave (laminar, newton, manufacture)");
    forward->add_option("config", forward_cfg, "JSON config")->required()->check(CLI::ExistingFile);

    std::string verify_cfg;
    std::vector<std::string> verify_inputs;
    auto* verify = app.add_subcommand("verify", "Run diagnostics on field, surface, height or series files");
    verify->add_option("config", verify_cfg, "JSON config")->required()->check(CLI::ExistingFile);
    verify->add_option("fields", verify_inputs, "field.csv, surface.csv, height.csv or psi_series.json")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*recover) return run_recover(load_config(recover_cfg), out_dir);
        if (*forward) return run_forward(load_config(forward_cfg), out_dir);
        std::vector<fs::path> inputs(verify_inputs.begin(), verify_inputs.end());
        return run_verify(load_config(verify_cfg), inputs, out_dir);
    } catch (const StagnationError& e) {
        std::cerr << "stratiwave: " << e.what() << " [y = " << e.y() << "]\n";
        return exit_code(e.kind());
    } catch (const DivergenceError& e) {
        std::cerr << "stratiwave: " << e.what() << " [order " << e.order() << "]\n";
        return exit_code(e.kind());
    } catch (const Error& e) {
        std::cerr << "stratiwave: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "stratiwave: " << e.what() << "\n";
        return 4;
    }
}
