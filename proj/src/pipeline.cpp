#include "stratiwave/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "stratiwave/diagnostics.hpp"
#include "stratiwave/field.hpp"
#include "stratiwave/recovery.hpp"
#include "stratiwave/reference.hpp"

namespace stratiwave {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::schema:
        case ErrorKind::structural:
        case ErrorKind::insufficient_data:
            return 2;
        case ErrorKind::stagnation:
        case ErrorKind::profile_range:
            return 3;
        case ErrorKind::divergence:
        case ErrorKind::convergence:
        case ErrorKind::no_laminar_flow:
        case ErrorKind::surface_escape:
        case ErrorKind::domain:
            return 4;
    }
    return 4;
}

namespace {

// JSON has no infinities; they are written as strings.
ojson number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0.0 ? "inf" : "-inf";
}

class CheckList {
public:
    explicit CheckList(const std::vector<std::string>& promoted) : promoted_(promoted) {}

    void add(const std::string& name, bool hard, double value, double tolerance) {
        const bool is_hard =
            hard || std::find(promoted_.begin(), promoted_.end(), name) != promoted_.end();
        checks_.push_back({name, is_hard, value <= tolerance, value, tolerance});
    }

    /// For quantities that must stay strictly below the bound.
    void add_strict(const std::string& name, bool hard, double value, double bound) {
        add(name, hard, value, bound);
        checks_.back().passed = value < bound;
    }

    bool hard_passed() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return !c.hard || c.passed; });
    }

    ojson to_json() const {
        ojson out = ojson::array();
        for (const auto& c : checks_) {
            out.push_back({{"name", c.name},
                           {"hard", c.hard},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"tolerance", number(c.tolerance)}});
        }
        return out;
    }

private:
    std::vector<std::string> promoted_;
    std::vector<Check> checks_;
};

ojson params_json(const WaveParameters& p) {
    return {{"c", p.c}, {"d", p.d}, {"g", p.g}, {"P_atm", p.p_atm}, {"p0", p.p0}, {"Q", number(p.q)}};
}

ojson analyticity_json(const AnalyticityReport& a) {
    ojson norms = ojson::array();
    for (double v : a.norms) norms.push_back(v);
    return {{"norms", norms},
            {"decay_slope", number(a.decay_slope)},
            {"radius", number(a.radius)},
            {"below_floor", a.below_floor},
            {"monotone_decay", a.monotone_decay},
            {"summary", a.summary}};
}

ojson monotonicity_json(const MonotonicityReport& m) {
    return {{"passed", m.passed},
            {"degenerate_laminar", m.degenerate_laminar},
            {"trough_minimum", m.trough_minimum},
            {"strict_at_surface", m.strict_at_surface},
            {"nondecreasing", m.nondecreasing},
            {"worst_violation", m.worst_violation},
            {"worst_q", m.worst_q},
            {"worst_p", m.worst_p},
            {"status", m.status}};
}

ojson moving_plane_json(const MovingPlaneReport& m) {
    return {{"min_omega", m.min_omega}, {"lambda", m.lambda}, {"q", m.q},
            {"p", m.p},                 {"planes", m.planes}, {"flagged", m.flagged}};
}

ojson theorem_json(const TheoremReport& t) {
    return {{"hypothesis_monotone", t.hypothesis},
            {"conclusion_symmetric", t.conclusion},
            {"symmetry_residual", t.symmetry},
            {"verdict", t.verdict}};
}

void write_json(const fs::path& path, const ojson& j) { write_text(path, j.dump(2) + "\n"); }

ojson config_json(const Config& cfg) {
    return {{"N", cfg.order},
            {"M", cfg.nodes},
            {"grid", {{"nx", cfg.grid.nx}, {"x_max", cfg.grid.x_max}, {"nq", cfg.grid.nq}, {"np", cfg.grid.np}}},
            {"tolerances",
             {{"pde", cfg.tol.pde},
              {"symmetry", cfg.tol.symmetry},
              {"bernoulli", cfg.tol.bernoulli},
              {"flux", cfg.tol.flux},
              {"surface", cfg.tol.surface},
              {"newton", cfg.tol.newton}}},
            {"hard_checks", cfg.hard_checks},
            {"seed", cfg.seed}};
}

// A recover config reading the axis data written next to it.
ojson recover_config(const Config& cfg, const Polynomial& rho, const Polynomial& beta, double c, double eta0) {
    return {{"mode", "recover"},
            {"profiles", {{"rho", rho.coeffs()}, {"beta", beta.coeffs()}}},
            {"geometry", {{"d", cfg.d}, {"g", cfg.g}, {"P_atm", cfg.p_atm}}},
            {"axis", {{"c", c}, {"eta0", eta0}, {"csv_path", "axis.csv"}}},
            {"numerics", config_json(cfg)}};
}

}  // namespace

Recovery recover_from_config(const Config& cfg) {
    if (!cfg.eta0) fail(ErrorKind::schema, "axis.eta0 is required");
    if (cfg.samples.empty()) fail(ErrorKind::schema, "axis: samples or csv_path is required");
    AxisData axis = AxisData::from_samples(cfg.samples, cfg.nodes, *cfg.eta0, cfg.c, cfg.d, cfg.g, cfg.p_atm);
    const StagnationMargin margin = check_no_stagnation(axis);
    AxisStreamFunction stream = solve_axis_streamfunction(axis, cfg.rho);

    const ProfileReport profiles = validate_profiles(cfg.rho, cfg.beta, stream.p0);
    for (const auto& c : profiles.checks) {
        if (!c.passed) {
            std::ostringstream msg;
            msg << "profile check " << c.name << " failed at p = " << c.worst_p << " (value " << c.worst_value << ")";
            fail(ErrorKind::profile_range, msg.str());
        }
    }
    WaveParameters params{cfg.c, cfg.d, cfg.g, cfg.p_atm, stream.p0, compute_head(axis, cfg.rho)};
    EvenSeries psi = recover_series(stream, cfg.rho, cfg.beta, params, cfg.order);
    return {std::move(axis), std::move(stream), params, std::move(psi), margin};
}

int run_recover(const Config& cfg, const fs::path& out_dir) {
    const Recovery rec = recover_from_config(cfg);
    const SeriesEvaluator eval(rec.psi);
    const auto xs = symmetric_grid(cfg.grid.nx, cfg.grid.x_max);
    const FluidField field = build_field(eval, cfg.rho, cfg.beta, rec.params, xs);

    const AnalyticityReport analytic = analyticity_report(rec.psi);
    const double x_pde = std::min(cfg.grid.x_max, 0.5 * analytic.radius);

    CheckList checks(cfg.hard_checks);
    const PdeResidual pde = pde_residual(eval, cfg.rho, cfg.beta, rec.params, symmetric_grid(41, x_pde));
    checks.add("pde_residual", true, pde.normalized(), cfg.tol.pde);
    checks.add("symmetry", true, symmetry_residual(field), cfg.tol.symmetry);
    double worst_u = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < field.u.size(); ++k)
        if (field.inside[k]) worst_u = std::max(worst_u, field.u[k] - rec.params.c);
    checks.add_strict("u_below_c", true, worst_u, 0.0);
    const BernoulliReport bern = bernoulli_residual(field, cfg.rho, cfg.beta, cfg.seed);
    checks.add("bernoulli", true, bern.sup_mismatch, cfg.tol.bernoulli);

    const auto stations = symmetric_grid(9, cfg.grid.x_max);
    const auto station_surface = recover_surface(eval, rec.params, stations);
    double flux_dev = 0.0;
    for (const auto& s : station_surface)
        flux_dev = std::max(flux_dev, std::abs(flux_at(eval, cfg.rho, rec.params, s.x, s.eta) - rec.params.p0));
    checks.add("flux_invariance", false, flux_dev / std::abs(rec.params.p0), cfg.tol.flux);
    const double dyn = surface_dynamic_residual(eval, cfg.rho, rec.params, field.surface);
    checks.add("surface_dynamic", false, dyn / std::max(1.0, std::abs(rec.params.q)), cfg.tol.surface);
    checks.add("analyticity_monotone_decay", false, analytic.monotone_decay ? 0.0 : 1.0, 0.0);

    fs::create_directories(out_dir);
    write_text(out_dir / "psi_series.json", series_to_json(rec.psi, rec.params));
    write_csv(out_dir / "field.csv", field_table(field));
    write_csv(out_dir / "surface.csv", surface_table(field.surface));

    ojson report;
    report["pipeline"] = "recover";
    report["params"] = params_json(rec.params);
    report["series"] = {{"N", rec.psi.order()}, {"M", rec.psi.grid_size()},
                        {"domain", {rec.psi.domain().lo, rec.psi.domain().hi}}};
    report["stagnation_margin"] = {{"min_c_minus_u", rec.margin.margin}, {"y", rec.margin.y}};
    report["pde_residual"] = {{"sup_residual", pde.sup_residual}, {"sup_laplacian", pde.sup_laplacian},
                              {"x_max", x_pde}};
    report["bernoulli"] = {{"sup_mismatch", bern.sup_mismatch},
                           {"pairs_used", bern.pairs_used},
                           {"pairs_skipped", bern.pairs_skipped},
                           {"witness", {bern.witness_x, bern.witness_y}}};
    report["flux"] = {{"stations", stations}, {"max_deviation", flux_dev}};
    report["analyticity"] = analyticity_json(analytic);
    report["checks"] = checks.to_json();
    report["passed"] = checks.hard_passed();
    write_json(out_dir / "report.json", report);
    return checks.hard_passed() ? 0 : exit_hard_check_failed;
}

namespace {

int forward_laminar(const Config& cfg, const fs::path& out_dir) {
    if (!std::isfinite(cfg.forward.q)) fail(ErrorKind::schema, "forward.Q is required for mode laminar");
    const LaminarSolution lam = solve_laminar(cfg.rho, cfg.beta, cfg.d, cfg.forward.q, cfg.g);
    const WaveParameters params = lam.parameters(cfg.c, cfg.p_atm);
    const HeightField h = height_from_laminar(lam, cfg.grid.nq, cfg.grid.np, params);
    const AxisData axis = lam.axis(cfg.c, cfg.nodes, cfg.p_atm);
    const HeightSystem sys{cfg.rho, cfg.beta, cfg.g, cfg.d};

    fs::create_directories(out_dir);
    write_csv(out_dir / "height.csv", height_table(h));
    write_csv(out_dir / "axis.csv", axis_table(axis));
    write_json(out_dir / "recover.json", recover_config(cfg, cfg.rho.rho, cfg.beta.beta, cfg.c, 0.0));
    ojson report;
    report["pipeline"] = "forward";
    report["mode"] = "laminar";
    report["params"] = params_json(params);
    report["height_residual"] = height_residual(h, sys, cfg.forward.q).sup();
    report["passed"] = true;
    write_json(out_dir / "report.json", report);
    return 0;
}

int forward_newton(const Config& cfg, const fs::path& out_dir) {
    const NewtonWave wave = solve_newton_wave(cfg);
    const Bifurcation& bif = wave.bifurcation;
    const NewtonResult& res = wave.result;
    const HeightField& h = wave.field;

    ojson log = ojson::array();
    for (const auto& s : res.log)
        log.push_back({{"iteration", s.iteration}, {"residual", s.residual}, {"step", s.step_length}, {"Q", s.head}});
    ojson report;
    report["pipeline"] = "forward";
    report["mode"] = "newton";
    report["bifurcation_Q"] = bif.head;
    report["newton"] = {{"converged", res.converged}, {"iterations", res.iterations},
                        {"residual", res.residual}, {"log", log}};

    fs::create_directories(out_dir);
    write_csv(out_dir / "height.csv", height_table(h));
    if (!res.converged) {
        report["passed"] = false;
        write_json(out_dir / "report.json", report);
        std::ostringstream msg;
        msg << "Newton did not converge: best residual " << res.residual << " after " << res.iterations
            << " iterations";
        fail(ErrorKind::convergence, msg.str());
    }

    const AxisData axis = sample_axis_from_height(h, cfg.rho, cfg.c, cfg.nodes);
    const TheoremReport theorem = symmetry_theorem_report(h, cfg.tol.symmetry);
    const MovingPlaneReport planes = moving_plane_scan(h);
    double mean = 0.0;
    for (int j = 0; j < h.nq; ++j) mean += h.at(h.np - 1, j) - cfg.d;
    mean /= h.nq;

    CheckList checks(cfg.hard_checks);
    checks.add("newton_residual", true, res.residual, cfg.tol.newton);
    checks.add("symmetry", true, theorem.symmetry, cfg.tol.symmetry);
    checks.add("monotonicity", false, theorem.monotonicity.passed ? 0.0 : theorem.monotonicity.worst_violation,
               0.0);
    checks.add("moving_plane", false, std::max(0.0, -planes.min_omega), 1e-10);

    WaveParameters params = h.params;
    params.c = cfg.c;
    params.p_atm = cfg.p_atm;
    report["params"] = params_json(params);
    report["eta0"] = axis.eta0;
    report["head_from_axis"] = compute_head(axis, cfg.rho);
    report["mean_surface_level"] = mean;
    report["monotonicity"] = monotonicity_json(theorem.monotonicity);
    report["moving_plane"] = moving_plane_json(planes);
    report["symmetry_theorem"] = theorem_json(theorem);
    report["checks"] = checks.to_json();
    report["passed"] = checks.hard_passed();
    write_csv(out_dir / "axis.csv", axis_table(axis));
    write_json(out_dir / "recover.json", recover_config(cfg, cfg.rho.rho, cfg.beta.beta, cfg.c, axis.eta0));
    write_json(out_dir / "report.json", report);
    return checks.hard_passed() ? 0 : exit_hard_check_failed;
}

int forward_manufacture(const Config& cfg, const fs::path& out_dir) {
    const ManufacturedWave wave = manufacture_linear_wave(cfg.forward.lambda, cfg.forward.epsilon, cfg.d, cfg.c);
    const AxisData axis = wave.axis(cfg.nodes, cfg.g, cfg.p_atm);
    const Polynomial rho({1.0});

    Table exact{{"x", "y", "psi", "u", "v"}, {}};
    const auto xs = symmetric_grid(cfg.grid.nx, cfg.grid.x_max);
    const auto ys = cheb::nodes(cfg.nodes, axis.domain());
    for (double y : ys) {
        for (double x : xs) {
            const SeriesPoint pt = wave.at(x, y);
            if (pt.psi < 0.0) continue;
            exact.rows.push_back({x, y, pt.psi, cfg.c + pt.psi_y, -pt.psi_x});
        }
    }

    fs::create_directories(out_dir);
    write_csv(out_dir / "axis.csv", axis_table(axis));
    write_csv(out_dir / "exact_field.csv", exact);
    write_json(out_dir / "recover.json", recover_config(cfg, rho, wave.bernoulli(), cfg.c, wave.eta0()));
    ojson report;
    report["pipeline"] = "forward";
    report["mode"] = "manufacture";
    report["lambda"] = wave.lambda();
    report["epsilon"] = wave.epsilon();
    report["eta0"] = wave.eta0();
    report["p0"] = -wave.stream(0.0, -cfg.d);
    report["passed"] = true;
    write_json(out_dir / "report.json", report);
    return 0;
}

}  // namespace

NewtonWave solve_newton_wave(const Config& cfg) {
    if (!std::isfinite(cfg.forward.q)) fail(ErrorKind::schema, "forward.Q is required for mode newton");
    const LaminarSolution lam = solve_laminar(cfg.rho, cfg.beta, cfg.d, cfg.forward.q, cfg.g);
    const HeightSystem sys{cfg.rho, cfg.beta, cfg.g, cfg.d};
    const HeightField laminar = height_from_laminar(lam, cfg.grid.nq, cfg.grid.np, lam.parameters(cfg.c, cfg.p_atm));
    Bifurcation bif = locate_bifurcation(laminar, sys);

    HeightField seed = bif.laminar;
    for (int i = 0; i < seed.np; ++i)
        for (int j = 0; j < seed.nq; ++j)
            seed.at(i, j) += cfg.forward.amplitude * std::cos(seed.q(j)) * (seed.p(i) - seed.p0) / -seed.p0;
    NewtonOptions opts;
    opts.max_iter = cfg.forward.max_iter;
    opts.tolerance = cfg.tol.newton;
    opts.pin_amplitude = true;
    NewtonResult res = solve_height_newton(seed, sys, bif.head, opts);
    HeightField h = crest_shift(res.field);
    return {std::move(bif), std::move(res), std::move(h)};
}

int run_forward(const Config& cfg, const fs::path& out_dir) {
    if (cfg.mode == "laminar") return forward_laminar(cfg, out_dir);
    if (cfg.mode == "newton") return forward_newton(cfg, out_dir);
    if (cfg.mode == "manufacture") return forward_manufacture(cfg, out_dir);
    fail(ErrorKind::schema, "forward mode must be laminar, newton or manufacture, got '" + cfg.mode + "'");
}

int run_verify(const Config& cfg, const std::vector<fs::path>& inputs, const fs::path& out_dir) {
    if (inputs.empty()) fail(ErrorKind::schema, "verify needs at least one input file");
    CheckList checks(cfg.hard_checks);
    ojson files = ojson::array();
    for (const auto& path : inputs) {
        ojson entry;
        entry["path"] = path.filename().string();
        if (path.extension() == ".json") {
            std::ifstream probe(path);
            if (!probe) fail(ErrorKind::schema, "cannot open " + path.string());
            std::ostringstream text;
            text << probe.rdbuf();
            const EvenSeries psi = series_from_json(text.str());
            const nlohmann::json meta = nlohmann::json::parse(text.str());
            WaveParameters params{cfg.c, cfg.d, cfg.g, cfg.p_atm, -1.0, 0.0};
            if (meta.contains("params")) {
                params.p0 = meta["params"].value("p0", -1.0);
                params.q = meta["params"].value("Q", 0.0);
            }
            const SeriesEvaluator eval(psi);
            const AnalyticityReport analytic = analyticity_report(psi);
            const double x_pde = std::min(cfg.grid.x_max, 0.5 * analytic.radius);
            const PdeResidual pde = pde_residual(eval, cfg.rho, cfg.beta, params, symmetric_grid(41, x_pde));
            checks.add("pde_residual", true, pde.normalized(), cfg.tol.pde);
            entry["kind"] = "series";
            entry["pde_residual"] = pde.normalized();
            entry["analyticity"] = analyticity_json(analytic);
            files.push_back(entry);
            continue;
        }
        const Table table = read_csv(path);
        if (table.columns == std::vector<std::string>{"x", "y", "psi", "u", "v", "P", "E"}) {
            double psi_max = 0.0;
            for (const auto& r : table.rows) psi_max = std::max(psi_max, r[2]);
            const WaveParameters params{cfg.c, cfg.d, cfg.g, cfg.p_atm, -psi_max, 0.0};
            const FluidField field = field_from_table(table, params);
            const double sym = symmetry_residual(field);
            double worst_u = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < field.u.size(); ++k)
                if (field.inside[k]) worst_u = std::max(worst_u, field.u[k] - cfg.c);
            const BernoulliReport bern = bernoulli_residual(field, cfg.rho, cfg.beta, cfg.seed);
            checks.add("symmetry", true, sym, cfg.tol.symmetry);
            checks.add_strict("u_below_c", true, worst_u, 0.0);
            checks.add("bernoulli", true, bern.sup_mismatch, cfg.tol.bernoulli);
            entry["kind"] = "field";
            entry["symmetry_residual"] = sym;
            entry["bernoulli"] = {{"sup_mismatch", bern.sup_mismatch},
                                  {"pairs_used", bern.pairs_used},
                                  {"pairs_skipped", bern.pairs_skipped},
                                  {"witness", {bern.witness_x, bern.witness_y}}};
        } else if (table.columns == std::vector<std::string>{"x", "eta"}) {
            const std::size_t n = table.rows.size();
            double worst = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const auto& a = table.rows[k];
                const auto& b = table.rows[n - 1 - k];
                if (a[0] != -b[0]) fail(ErrorKind::structural, "surface CSV: x grid is not symmetric");
                worst = std::max(worst, std::abs(a[1] - b[1]));
            }
            checks.add("surface_symmetry", false, worst, cfg.tol.symmetry);
            entry["kind"] = "surface";
            entry["symmetry_residual"] = worst;
        } else if (table.columns == std::vector<std::string>{"q", "p", "h"}) {
            const WaveParameters params{cfg.c, cfg.d, cfg.g, cfg.p_atm, -1.0, cfg.forward.q};
            const HeightField h = height_from_table(table, params);
            const TheoremReport theorem = symmetry_theorem_report(h, cfg.tol.symmetry);
            const MovingPlaneReport planes = moving_plane_scan(h);
            checks.add("height_symmetry", true, theorem.symmetry, cfg.tol.symmetry);
            checks.add("monotonicity", false,
                       theorem.monotonicity.passed ? 0.0 : theorem.monotonicity.worst_violation, 0.0);
            checks.add("moving_plane", false, std::max(0.0, -planes.min_omega), 1e-10);
            entry["kind"] = "height";
            entry["monotonicity"] = monotonicity_json(theorem.monotonicity);
            entry["moving_plane"] = moving_plane_json(planes);
            entry["symmetry_theorem"] = theorem_json(theorem);
        } else {
            fail(ErrorKind::schema, path.string() + ": unrecognised CSV columns");
        }
        files.push_back(entry);
    }
    ojson report;
    report["pipeline"] = "verify";
    report["inputs"] = files;
    report["checks"] = checks.to_json();
    report["passed"] = checks.hard_passed();
    fs::create_directories(out_dir);
    write_json(out_dir / "report.json", report);
    return checks.hard_passed() ? 0 : exit_hard_check_failed;
}

}  // namespace stratiwave
