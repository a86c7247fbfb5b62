#include "stratiwave/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "stratiwave/errors.hpp"

namespace stratiwave {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::schema, "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorKind::schema, std::string("config field '") + key + "': " + e.what());
    }
}

const json& section(const json& root, const char* key) {
    static const json empty = json::object();
    if (!root.contains(key)) return empty;
    const json& s = root.at(key);
    if (!s.is_object()) fail(ErrorKind::schema, std::string("config section '") + key + "' must be an object");
    return s;
}

Polynomial polynomial(const json& obj, const char* key, std::vector<double> fallback) {
    auto coeffs = get_or<std::vector<double>>(obj, key, std::move(fallback));
    for (double c : coeffs)
        if (!std::isfinite(c)) fail(ErrorKind::schema, std::string("profile '") + key + "' has non-finite entries");
    return Polynomial(std::move(coeffs));
}

std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Config parse_config(const std::string& text, const fs::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::schema, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(ErrorKind::schema, "config must be a JSON object");

    Config cfg;
    cfg.mode = get_or<std::string>(root, "mode", "recover");

    const json& prof = section(root, "profiles");
    cfg.rho.rho = polynomial(prof, "rho", {1.0});
    cfg.beta.beta = polynomial(prof, "beta", {});

    const json& geo = section(root, "geometry");
    cfg.d = get_or(geo, "d", 1.0);
    cfg.g = get_or(geo, "g", standard_gravity);
    cfg.p_atm = get_or(geo, "P_atm", 0.0);
    if (!(cfg.d > 0.0)) fail(ErrorKind::schema, "geometry.d must be positive");
    if (!(cfg.g > 0.0)) fail(ErrorKind::schema, "geometry.g must be positive");

    const json& axis = section(root, "axis");
    cfg.c = get_or(axis, "c", 0.0);
    if (axis.contains("eta0")) cfg.eta0 = get_or(axis, "eta0", 0.0);
    if (axis.contains("samples") && axis.contains("csv_path"))
        fail(ErrorKind::schema, "axis: give either samples or csv_path, not both");
    if (axis.contains("samples")) {
        const auto pts = get_or<std::vector<std::vector<double>>>(axis, "samples", {});
        for (const auto& pt : pts) {
            if (pt.size() != 2) fail(ErrorKind::schema, "axis.samples entries must be [y, u] pairs");
            cfg.samples.emplace_back(pt[0], pt[1]);
        }
    } else if (axis.contains("csv_path")) {
        fs::path p = get_or<std::string>(axis, "csv_path", "");
        if (p.is_relative()) p = base_dir / p;
        cfg.samples = read_axis_csv(p);
    }

    const json& num = section(root, "numerics");
    cfg.order = get_or(num, "N", 12);
    cfg.nodes = get_or(num, "M", 48);
    cfg.seed = get_or<std::uint64_t>(num, "seed", 0);
    if (cfg.order < 1) fail(ErrorKind::schema, "numerics.N must be at least 1");
    if (cfg.nodes < 4) fail(ErrorKind::schema, "numerics.M must be at least 4");
    const json& grid = section(num, "grid");
    cfg.grid.nx = get_or(grid, "nx", cfg.grid.nx);
    cfg.grid.x_max = get_or(grid, "x_max", cfg.grid.x_max);
    cfg.grid.nq = get_or(grid, "nq", cfg.grid.nq);
    cfg.grid.np = get_or(grid, "np", cfg.grid.np);
    if (cfg.grid.nx < 1 || !(cfg.grid.x_max >= 0.0)) fail(ErrorKind::schema, "numerics.grid: bad x grid");
    if (cfg.grid.nq < 4 || cfg.grid.nq % 2 != 0 || cfg.grid.np < 3)
        fail(ErrorKind::schema, "numerics.grid: nq must be even and >= 4, np >= 3");
    const json& tol = section(num, "tolerances");
    cfg.tol.pde = get_or(tol, "pde", cfg.tol.pde);
    cfg.tol.symmetry = get_or(tol, "symmetry", cfg.tol.symmetry);
    cfg.tol.bernoulli = get_or(tol, "bernoulli", cfg.tol.bernoulli);
    cfg.tol.flux = get_or(tol, "flux", cfg.tol.flux);
    cfg.tol.surface = get_or(tol, "surface", cfg.tol.surface);
    cfg.tol.newton = get_or(tol, "newton", cfg.tol.newton);
    cfg.hard_checks = get_or<std::vector<std::string>>(num, "hard_checks", {});

    const json& fwd = section(root, "forward");
    cfg.forward.q = get_or(fwd, "Q", cfg.forward.q);
    cfg.forward.lambda = get_or(fwd, "lambda", cfg.forward.lambda);
    cfg.forward.epsilon = get_or(fwd, "epsilon", cfg.forward.epsilon);
    cfg.forward.amplitude = get_or(fwd, "amplitude", cfg.forward.amplitude);
    cfg.forward.max_iter = get_or(fwd, "max_iter", cfg.forward.max_iter);
    return cfg;
}

Config load_config(const fs::path& path) { return parse_config(read_text(path), path.parent_path()); }

Table read_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    Table t;
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::schema, path.string() + ": empty CSV");
    {
        std::istringstream hs(line);
        std::string name;
        while (std::getline(hs, name, ',')) {
            name.erase(std::remove_if(name.begin(), name.end(), [](char ch) { return std::isspace(ch); }), name.end());
            t.columns.push_back(name);
        }
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            while (end && std::isspace(static_cast<unsigned char>(*end))) ++end;
            if (end == cell.c_str() || (end && *end != '\0'))
                fail(ErrorKind::schema, path.string() + ":" + std::to_string(lineno) + ": not a number: " + cell);
            row.push_back(v);
        }
        if (row.size() != t.columns.size())
            fail(ErrorKind::schema, path.string() + ":" + std::to_string(lineno) + ": wrong column count");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::schema, "cannot write " + path.string());
    out << text;
}

void write_csv(const fs::path& path, const Table& table) {
    std::string text;
    for (std::size_t k = 0; k < table.columns.size(); ++k) text += (k ? "," : "") + table.columns[k];
    text += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) text += ',';
            text += format(row[k]);
        }
        text += '\n';
    }
    write_text(path, text);
}

std::vector<std::pair<double, double>> read_axis_csv(const fs::path& path) {
    const Table t = read_csv(path);
    if (t.columns.size() != 2) fail(ErrorKind::schema, path.string() + ": axis CSV needs columns y,u");
    std::vector<std::pair<double, double>> out;
    for (const auto& r : t.rows) out.emplace_back(r[0], r[1]);
    return out;
}

Table field_table(const FluidField& f) {
    Table t{{"x", "y", "psi", "u", "v", "P", "E"}, {}};
    for (std::size_t iy = 0; iy < f.ny(); ++iy) {
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            const std::size_t k = f.index(iy, ix);
            if (!f.inside[k]) continue;
            t.rows.push_back({f.x[ix], f.y[iy], f.psi[k], f.u[k], f.v[k], f.p[k], f.e[k]});
        }
    }
    return t;
}

Table surface_table(const std::vector<SurfacePoint>& surface) {
    Table t{{"x", "eta"}, {}};
    for (const auto& s : surface) t.rows.push_back({s.x, s.eta});
    return t;
}

Table height_table(const HeightField& h) {
    Table t{{"q", "p", "h"}, {}};
    for (int i = 0; i < h.np; ++i)
        for (int j = 0; j < h.nq; ++j) t.rows.push_back({h.q(j), h.p(i), h.at(i, j)});
    return t;
}

Table axis_table(const AxisData& axis) {
    Table t{{"y", "u"}, {}};
    const auto y = axis.nodes();
    for (std::size_t k = y.size(); k-- > 0;) t.rows.push_back({y[k], axis.u[k]});
    return t;
}

namespace {

std::vector<double> distinct_in_order(const Table& t, std::size_t col) {
    std::vector<double> out;
    std::map<double, bool> seen;
    for (const auto& r : t.rows) {
        if (seen.emplace(r[col], true).second) out.push_back(r[col]);
    }
    return out;
}

void expect_columns(const Table& t, const std::vector<std::string>& names) {
    if (t.columns != names) {
        std::string want;
        for (const auto& n : names) want += (want.empty() ? "" : ",") + n;
        fail(ErrorKind::schema, "expected CSV columns " + want);
    }
}

}  // namespace

FluidField field_from_table(const Table& t, const WaveParameters& params) {
    expect_columns(t, {"x", "y", "psi", "u", "v", "P", "E"});
    FluidField f;
    f.params = params;
    // Columns near the surface may be partly missing, so x is sorted rather
    // than taken in order of appearance.
    f.x = distinct_in_order(t, 0);
    std::sort(f.x.begin(), f.x.end());
    f.y = distinct_in_order(t, 1);
    std::map<double, std::size_t> xi, yi;
    for (std::size_t k = 0; k < f.x.size(); ++k) xi[f.x[k]] = k;
    for (std::size_t k = 0; k < f.y.size(); ++k) yi[f.y[k]] = k;
    const std::size_t cells = f.nx() * f.ny();
    f.inside.assign(cells, 0);
    f.psi.assign(cells, 0.0);
    f.u.assign(cells, 0.0);
    f.v.assign(cells, 0.0);
    f.p.assign(cells, 0.0);
    f.e.assign(cells, 0.0);
    for (const auto& r : t.rows) {
        const std::size_t k = f.index(yi[r[1]], xi[r[0]]);
        if (f.inside[k]) fail(ErrorKind::schema, "field CSV has duplicate grid points");
        f.inside[k] = 1;
        f.psi[k] = r[2];
        f.u[k] = r[3];
        f.v[k] = r[4];
        f.p[k] = r[5];
        f.e[k] = r[6];
    }
    return f;
}

HeightField height_from_table(const Table& t, const WaveParameters& params) {
    expect_columns(t, {"q", "p", "h"});
    const auto qs = distinct_in_order(t, 0);
    const auto ps = distinct_in_order(t, 1);
    const int nq = static_cast<int>(qs.size()), np = static_cast<int>(ps.size());
    if (t.rows.size() != qs.size() * ps.size()) fail(ErrorKind::schema, "height CSV is not a full q x p grid");
    if (np < 3) fail(ErrorKind::schema, "height CSV needs at least 3 p rows");
    HeightField h(nq, np, ps.front(), params);
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const int i = static_cast<int>(k) / nq, j = static_cast<int>(k) % nq;
        if (t.rows[k][0] != qs[j] || t.rows[k][1] != ps[i]) fail(ErrorKind::schema, "height CSV rows out of order");
        h.at(i, j) = t.rows[k][2];
    }
    return h;
}

std::string series_to_json(const EvenSeries& psi, const WaveParameters& params) {
    nlohmann::ordered_json j;
    j["N"] = psi.order();
    j["M"] = psi.grid_size();
    j["domain"] = {psi.domain().lo, psi.domain().hi};
    j["params"] = {{"c", params.c}, {"d", params.d}, {"g", params.g}, {"P_atm", params.p_atm},
                   {"p0", params.p0}, {"Q", params.q}};
    j["nodes"] = psi.coeff(0).nodes();
    auto coeffs = nlohmann::ordered_json::array();
    for (const auto& a : psi.coeffs()) coeffs.push_back(a.values());
    j["coefficients"] = coeffs;
    return j.dump(1) + "\n";
}

EvenSeries series_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const auto dom = j.at("domain").get<std::vector<double>>();
        if (dom.size() != 2) fail(ErrorKind::schema, "series domain must be [lo, hi]");
        const Interval iv{dom[0], dom[1]};
        std::vector<NodalFunction> coeffs;
        for (const auto& a : j.at("coefficients")) coeffs.emplace_back(a.get<std::vector<double>>(), iv);
        if (coeffs.empty()) fail(ErrorKind::schema, "series has no coefficients");
        return EvenSeries(std::move(coeffs));
    } catch (const json::exception& e) {
        fail(ErrorKind::schema, std::string("bad series JSON: ") + e.what());
    }
}

}  // namespace stratiwave
