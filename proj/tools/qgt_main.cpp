// Command-line front end: compute QGT fields, Chern numbers, fidelity
// susceptibility sweeps and holonomy checks on parameterized two-band and
// four-band lattice models, writing CSV payloads plus a JSON summary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qgt/errors.hpp"
#include "qgt/io.hpp"
#include "qgt/measure.hpp"
#include "qgt/models.hpp"
#include "qgt/qgt.hpp"
#include "qgt/topology.hpp"
#include "qgt/validate.hpp"
#include "qgt/version.hpp"

using json = nlohmann::ordered_json;
using namespace qgt;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
    std::string model = "qwz";
    std::string model_file;
    std::vector<double> ms;
    std::string grid = "48x48";
    std::string grid_offset = "center";
    std::string band_range; // resolved per model when empty
    double gap_tol = kDefaultGapTol;
    double fd_step = kDefaultFdStep;
    std::string sweep;      // start:stop:step
    std::string method;     // command-dependent
    std::string out = "qgt_out";
    std::string format = "csv";
    int workers = 1;
    // holonomy loop spec
    std::string center = "1.0,0.5";
    std::string sides = "1e-1,1e-2,1e-3";
    std::string plane = "kxky";
};

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

double parse_num(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " from '" + s + "'");
    }
}

GridSpec parse_grid(const std::string& s, const std::string& offset) {
    GridSpec g;
    const std::vector<std::string> parts = split(s, 'x');
    if (parts.size() == 1) {
        g.nx = g.ny = static_cast<int>(parse_num(parts[0], "grid size"));
    } else if (parts.size() == 2) {
        g.nx = static_cast<int>(parse_num(parts[0], "grid size"));
        g.ny = static_cast<int>(parse_num(parts[1], "grid size"));
    } else {
        throw UsageError("grid must be N or NxN, got '" + s + "'");
    }
    if (g.nx < 4 || g.ny < 4) throw UsageError("grid sizes must be >= 4");
    if (offset == "center") g.offset = GridOffset::center;
    else if (offset == "node") g.offset = GridOffset::node;
    else throw UsageError("grid offset must be center or node, got '" + offset + "'");
    return g;
}

Subspace parse_band_range(const std::string& s, double gap_tol) {
    const size_t pos = s.find("..");
    if (pos == std::string::npos)
        throw UsageError("band range must be a..b (half-open), got '" + s + "'");
    Subspace sub;
    sub.first = static_cast<int>(parse_num(s.substr(0, pos), "band range"));
    const int last = static_cast<int>(parse_num(s.substr(pos + 2), "band range"));
    sub.count = last - sub.first;
    sub.gap_tol = gap_tol;
    if (sub.first < 0 || sub.count < 1)
        throw UsageError("band range must be non-empty and non-negative: '" + s + "'");
    return sub;
}

SweepSpec parse_sweep(const std::string& s) {
    const std::vector<std::string> parts = split(s, ':');
    if (parts.size() != 3) throw UsageError("sweep must be start:stop:step, got '" + s + "'");
    SweepSpec spec{parse_num(parts[0], "sweep start"), parse_num(parts[1], "sweep stop"),
                   parse_num(parts[2], "sweep step")};
    if (spec.step <= 0.0) throw UsageError("sweep step must be positive");
    if (spec.stop < spec.start) throw UsageError("sweep stop must be >= start");
    return spec;
}

std::vector<double> parse_num_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split(s, ',')) out.push_back(parse_num(tok, what));
    if (out.empty()) throw UsageError(what + " list is empty");
    return out;
}

// Plain key=value config file; '#' starts a comment. CLI flags win.
void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t\"");
            const size_t b = s.find_last_not_of(" \t\"");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "model") cfg.model = val;
        else if (key == "model-file") cfg.model_file = val;
        else if (key == "m") cfg.ms = parse_num_list(val, "m");
        else if (key == "grid") cfg.grid = val;
        else if (key == "grid-offset") cfg.grid_offset = val;
        else if (key == "band-range") cfg.band_range = val;
        else if (key == "gap-tol") cfg.gap_tol = parse_num(val, "gap-tol");
        else if (key == "step") cfg.fd_step = parse_num(val, "step");
        else if (key == "sweep") cfg.sweep = val;
        else if (key == "method") cfg.method = val;
        else if (key == "out") cfg.out = val;
        else if (key == "format") cfg.format = val;
        else if (key == "workers") cfg.workers = static_cast<int>(parse_num(val, "workers"));
        else if (key == "center") cfg.center = val;
        else if (key == "sides") cfg.sides = val;
        else if (key == "plane") cfg.plane = val;
        else throw UsageError("unknown config key '" + key + "'");
    }
}

// ---------------------------------------------------------------- model zoo

HamiltonianFamily make_family(const RunConfig& cfg) {
    if (cfg.model == "qwz") return qwz_family();
    if (cfg.model == "qwz-doubled") return doubled_qwz_family();
    if (cfg.model == "constant") return constant_family(pauli(3), 2, 0);
    if (cfg.model == "table") {
        if (cfg.model_file.empty()) throw UsageError("model 'table' needs --model-file <csv>");
        return tabulated_family_from_csv(cfg.model_file);
    }
    throw UsageError("unknown model '" + cfg.model + "' (qwz, qwz-doubled, constant, table)");
}

std::string resolved_band_range(const RunConfig& cfg) {
    if (!cfg.band_range.empty()) return cfg.band_range;
    return (cfg.model == "qwz-doubled") ? "0..2" : "0..1";
}

Subspace resolve_subspace(const RunConfig& cfg) {
    return parse_band_range(resolved_band_range(cfg), cfg.gap_tol);
}

// Parameter list: the sweep if given, else the explicit m values, else a
// single entry. Models without external parameters get one pseudo entry.
std::vector<double> parameter_list(const RunConfig& cfg, const HamiltonianFamily& family) {
    if (family.n_external == 0) return {0.0};
    if (!cfg.sweep.empty()) return parse_sweep(cfg.sweep).values();
    if (!cfg.ms.empty()) return cfg.ms;
    return {1.0};
}

std::vector<double> external_of(const HamiltonianFamily& family, double m) {
    return family.n_external > 0 ? std::vector<double>{m} : std::vector<double>{};
}

// ---------------------------------------------------------------- output

json config_echo(const RunConfig& cfg) {
    json j;
    j["model"] = cfg.model;
    if (!cfg.model_file.empty()) j["model_file"] = cfg.model_file;
    j["m"] = cfg.ms;
    j["grid"] = cfg.grid;
    j["grid_offset"] = cfg.grid_offset;
    j["band_range"] = resolved_band_range(cfg);
    j["gap_tol"] = cfg.gap_tol;
    j["step"] = cfg.fd_step;
    j["sweep"] = cfg.sweep;
    j["method"] = cfg.method;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    j["workers"] = cfg.workers;
    j["center"] = cfg.center;
    j["sides"] = cfg.sides;
    j["plane"] = cfg.plane;
    return j;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json summary_skeleton(const RunConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["meta"] = {{"code_version", kVersion}, {"timestamp", timestamp_utc()}};
    j["config"] = config_echo(cfg);
    j["results"] = json::object();
    j["critical_points"] = json::array();
    j["warnings"] = json::array();
    return j;
}

std::string with_suffix(const std::string& base, const std::string& suffix,
                        const std::string& ext) {
    std::string stem = base;
    const size_t dot = stem.rfind('.');
    if (dot != std::string::npos && stem.find('/', dot) == std::string::npos)
        stem = stem.substr(0, dot);
    return stem + suffix + ext;
}

std::string compact_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

json rows_to_json(const CsvTable& t) {
    json rows = json::array();
    for (const std::vector<double>& r : t.rows) {
        json row = json::object();
        for (size_t i = 0; i < t.header.size() && i < r.size(); ++i) {
            if (std::isnan(r[i])) row[t.header[i]] = nullptr;
            else row[t.header[i]] = r[i];
        }
        rows.push_back(row);
    }
    return rows;
}

// Writes the payload (CSV file or inline JSON rows) and returns the file name, if any.
std::string emit_payload(const RunConfig& cfg, const std::string& suffix, const CsvTable& table,
                         json& results, const std::string& key) {
    if (cfg.format == "json") {
        results[key] = rows_to_json(table);
        return {};
    }
    const std::string path = with_suffix(cfg.out, suffix, ".csv");
    write_csv(path, table);
    results[key + "_file"] = path;
    return path;
}

void finish_summary(const RunConfig& cfg, json& summary) {
    const std::string path = with_suffix(cfg.out, "", ".json");
    write_text_file(path, summary.dump(2) + "\n");
    std::cout << "summary: " << path << "\n";
}

// ---------------------------------------------------------------- commands

int cmd_field(const RunConfig& cfg) {
    if (!cfg.method.empty() && cfg.method != "projector" && cfg.method != "analytic")
        throw UsageError("field method must be projector or analytic");
    const bool analytic = (cfg.method == "analytic");

    const HamiltonianFamily family = make_family(cfg);
    if (analytic && !family.dvector)
        throw UsageError("analytic method needs a two-band d-vector model (qwz or table)");
    if (analytic && resolved_band_range(cfg) != "0..1")
        throw UsageError("the closed form covers the lower band only (band range 0..1)");
    const Subspace sub = resolve_subspace(cfg);
    const GridSpec grid = parse_grid(cfg.grid, cfg.grid_offset);
    json summary = summary_skeleton(cfg);
    summary["results"]["fields"] = json::array();

    for (double m : parameter_list(cfg, family)) {
        const std::vector<double> ext = external_of(family, m);
        QGTField field;
        if (analytic) {
            field.field = FieldGrid<QGTensor>(grid);
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j) {
                    const ParameterPoint p({grid.kx(i), grid.ky(j)}, ext);
                    try {
                        field.field.at(i, j) = qgt_analytic_point(family, p, sub.gap_tol);
                    } catch (const ChartPoleError&) {
                        field.field.at(i, j) = qgt_point(family, p, sub, cfg.fd_step);
                    } catch (const SingularPointError&) {
                        field.field.mark_singular(i, j);
                    }
                }
            field.singular_cells = field.field.singular_count();
        } else {
            field = qgt_grid(family, grid, ext, sub, cfg.fd_step, cfg.workers);
        }

        CsvTable t;
        t.header = {"kx", "ky", "tr_g", "g_xx", "g_xy", "g_yy", "F_xy", "singular_flag"};
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                if (field.field.is_singular(i, j)) {
                    t.rows.push_back({grid.kx(i), grid.ky(j), kNaN, kNaN, kNaN, kNaN, kNaN, 1.0});
                    continue;
                }
                const QGTensor& q = field.field.at(i, j);
                const double gxx = q.tr_metric(0, 0), gyy = q.tr_metric(1, 1);
                t.rows.push_back({grid.kx(i), grid.ky(j), gxx + gyy, gxx, q.tr_metric(0, 1), gyy,
                                  q.tr_curvature(0, 1), 0.0});
            }

        const std::string suffix = (family.n_external > 0) ? "_m" + compact_num(m) : "";
        json entry;
        entry["m"] = m;
        entry["singular_cells"] = field.singular_cells;
        if (cfg.format == "json") entry["rows"] = rows_to_json(t);
        else {
            const std::string path = with_suffix(cfg.out, suffix, ".csv");
            write_csv(path, t);
            entry["file"] = path;
        }
        summary["results"]["fields"].push_back(entry);
        for (const std::string& w : field.warnings) summary["warnings"].push_back(w);
    }
    finish_summary(cfg, summary);
    return 0;
}

int cmd_chern(const RunConfig& cfg) {
    std::string method = cfg.method.empty() ? "both" : cfg.method;
    if (method != "lattice" && method != "direct" && method != "both")
        throw UsageError("chern method must be lattice, direct or both");
    const HamiltonianFamily family = make_family(cfg);
    if (family.n_external == 0 && !cfg.sweep.empty())
        throw UsageError("model '" + cfg.model + "' has no external parameter to sweep");
    const Subspace sub = resolve_subspace(cfg);
    const GridSpec grid = parse_grid(cfg.grid, cfg.grid_offset);

    CsvTable t;
    t.header = {"m", "c1_lattice", "c1_direct", "singular_cells"};
    json summary = summary_skeleton(cfg);
    std::vector<std::pair<double, double>> lattice_values; // (m, c1) defined entries

    for (double m : parameter_list(cfg, family)) {
        const std::vector<double> ext = external_of(family, m);
        double c_lat = kNaN, c_dir = kNaN;
        int singular = 0;
        try {
            if (min_gap_on_grid(family, grid, ext, sub) < sub.gap_tol) {
                summary["warnings"].push_back(
                    "m=" + compact_num(m) + ": gap closes on the grid; Chern undefined");
                t.rows.push_back({m, kNaN, kNaN, 0.0});
                continue;
            }
            if (method != "direct") {
                const ChernResult r = chern_lattice(frames_grid(family, grid.nx, grid.ny, ext, sub,
                                                                cfg.workers));
                c_lat = r.value;
                lattice_values.emplace_back(m, r.value);
            }
            if (method != "lattice") {
                GridSpec direct_grid = grid;
                direct_grid.offset = GridOffset::center;
                const ChernResult r = chern_direct(qgt_grid(family, direct_grid, ext, sub,
                                                            cfg.fd_step, cfg.workers));
                c_dir = r.value;
                singular = r.singular_cells;
            }
        } catch (const Error& e) {
            summary["warnings"].push_back("m=" + compact_num(m) + ": " + e.what());
        }
        t.rows.push_back({m, c_lat, c_dir, static_cast<double>(singular)});
    }

    emit_payload(cfg, "", t, summary["results"], "sweep");

    // plateau intervals from the lattice integers
    json plateaus = json::array();
    for (size_t i = 0; i < lattice_values.size();) {
        size_t j = i;
        while (j + 1 < lattice_values.size() &&
               lattice_values[j + 1].second == lattice_values[i].second)
            ++j;
        plateaus.push_back({{"m_start", lattice_values[i].first},
                            {"m_end", lattice_values[j].first},
                            {"c1", lattice_values[i].second}});
        i = j + 1;
    }
    summary["results"]["plateaus"] = plateaus;
    finish_summary(cfg, summary);
    return 0;
}

int cmd_fs_sweep(const RunConfig& cfg) {
    if (cfg.sweep.empty()) throw UsageError("fs-sweep needs --sweep start:stop:step");
    const HamiltonianFamily family = make_family(cfg);
    if (family.n_external == 0)
        throw UsageError("model '" + cfg.model + "' has no external parameter to sweep");
    const Subspace sub = resolve_subspace(cfg);
    const GridSpec grid = parse_grid(cfg.grid, cfg.grid_offset);
    const SweepSpec sweep = parse_sweep(cfg.sweep);

    const SweepResult result =
        integrated_metric_sweep(family, sweep, grid, sub, cfg.fd_step, cfg.workers);

    CsvTable t;
    t.header = {"m", "integrated_tr_g", "singular_cells"};
    for (size_t i = 0; i < result.parameter.size(); ++i)
        t.rows.push_back({result.parameter[i], result.observable[i],
                          static_cast<double>(result.singular_cells[i])});

    json summary = summary_skeleton(cfg);
    emit_payload(cfg, "", t, summary["results"], "sweep");
    for (const CriticalPointEstimate& c : detect_critical_points(result))
        summary["critical_points"].push_back({{"location", c.location},
                                              {"peak_value", c.peak_value},
                                              {"resolution", c.resolution}});
    for (size_t i = 0; i < result.notes.size(); ++i)
        if (!result.notes[i].empty())
            summary["warnings"].push_back("m=" + compact_num(result.parameter[i]) + ": " +
                                          result.notes[i]);
    finish_summary(cfg, summary);
    return 0;
}

int cmd_holonomy(const RunConfig& cfg) {
    const HamiltonianFamily family = make_family(cfg);
    const Subspace sub = resolve_subspace(cfg);
    const std::vector<double> center_k = parse_num_list(cfg.center, "center");
    if (center_k.size() != 2) throw UsageError("center must be kx,ky");
    std::vector<double> sides = parse_num_list(cfg.sides, "sides");
    if (sides.size() < 2) throw UsageError("need at least two side lengths");
    std::sort(sides.rbegin(), sides.rend());

    Direction mu = Direction::periodic(0), nu = Direction::periodic(1);
    if (cfg.plane == "kxky") { /* default */ }
    else if (cfg.plane == "kxm" && family.n_external > 0) { nu = Direction::external(0); }
    else if (cfg.plane == "kym" && family.n_external > 0) { mu = Direction::periodic(1); nu = Direction::external(0); }
    else throw UsageError("plane must be kxky, kxm or kym (externals require a parameterized model)");

    const double m = parameter_list(cfg, family).front();
    const ParameterPoint center({center_k[0], center_k[1]}, external_of(family, m));

    CsvTable t;
    t.header = {"side", "residual", "ratio_to_previous"};
    std::vector<double> log_side, log_resid;
    double prev = kNaN;
    for (double side : sides) {
        const double r = small_loop_check(family, center, sub, side * side, mu, nu, cfg.fd_step);
        t.rows.push_back({side, r, std::isnan(prev) ? kNaN : prev / r});
        if (r > 0.0) {
            log_side.push_back(std::log(side));
            log_resid.push_back(std::log(r));
        }
        prev = r;
    }

    // least-squares slope of log(residual) vs log(side)
    double order = kNaN;
    if (log_side.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(log_side.size());
        for (size_t i = 0; i < log_side.size(); ++i) {
            sx += log_side[i];
            sy += log_resid[i];
            sxx += log_side[i] * log_side[i];
            sxy += log_side[i] * log_resid[i];
        }
        order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    json summary = summary_skeleton(cfg);
    emit_payload(cfg, "", t, summary["results"], "holonomy");
    summary["results"]["convergence_order"] = order;
    finish_summary(cfg, summary);
    return 0;
}

int cmd_validate() {
    const std::vector<CheckResult> results = run_validation_suite();
    size_t width = 0;
    for (const CheckResult& r : results) width = std::max(width, r.name.size());
    for (const CheckResult& r : results)
        std::printf("[%s] %-*s  %s\n", r.passed ? "PASS" : "FAIL", static_cast<int>(width),
                    r.name.c_str(), r.detail.c_str());
    if (all_passed(results)) {
        std::printf("all %zu checks passed\n", results.size());
        return 0;
    }
    std::printf("validation FAILED\n");
    return 4;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // config file first; explicit flags override it
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") load_config_file(argv[i + 1], cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"quantum geometric tensor toolkit: metric, curvature, Chern numbers,\n"
                 "fidelity susceptibility and Wilson-loop holonomies on lattice models"};
    app.require_subcommand(1);
    std::string config_path; // consumed above; declared so CLI11 accepts the flag

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file (flags win)");
        sub->add_option("--model", cfg.model, "qwz | qwz-doubled | constant | table")
            ->capture_default_str();
        sub->add_option("--model-file", cfg.model_file, "d-vector CSV for --model table");
        sub->add_option("--m", cfg.ms, "external parameter value(s)");
        sub->add_option("--grid", cfg.grid, "grid as N or NxN")->capture_default_str();
        sub->add_option("--grid-offset", cfg.grid_offset, "center | node")->capture_default_str();
        sub->add_option("--band-range", cfg.band_range,
                        "tracked bands a..b (default 0..1; 0..2 for qwz-doubled)");
        sub->add_option("--gap-tol", cfg.gap_tol, "singular-point gap tolerance")
            ->capture_default_str();
        sub->add_option("--step", cfg.fd_step, "finite-difference step")->capture_default_str();
        sub->add_option("--sweep", cfg.sweep, "parameter sweep start:stop:step");
        sub->add_option("--method", cfg.method, "method selection (command dependent)");
        sub->add_option("--out", cfg.out, "output path base")->capture_default_str();
        sub->add_option("--format", cfg.format, "csv | json")->capture_default_str();
        sub->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
    };

    CLI::App* field = app.add_subcommand("field", "QGT field over the momentum grid");
    add_common(field);
    CLI::App* chern = app.add_subcommand("chern", "Chern numbers (lattice and direct)");
    add_common(chern);
    CLI::App* fs = app.add_subcommand("fs-sweep", "integrated metric vs external parameter");
    add_common(fs);
    CLI::App* hol = app.add_subcommand("holonomy", "small-loop holonomy convergence check");
    add_common(hol);
    hol->add_option("--center", cfg.center, "loop center kx,ky")->capture_default_str();
    hol->add_option("--sides", cfg.sides, "comma-separated side lengths")->capture_default_str();
    hol->add_option("--plane", cfg.plane, "kxky | kxm | kym")->capture_default_str();
    CLI::App* val = app.add_subcommand("validate", "run the built-in invariant suite");
    val->add_option("--config", config_path, "accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cfg.format != "csv" && cfg.format != "json")
            throw UsageError("format must be csv or json");
        if (cfg.workers < 1) throw UsageError("workers must be >= 1");
        if (field->parsed()) return cmd_field(cfg);
        if (chern->parsed()) return cmd_chern(cfg);
        if (fs->parsed()) return cmd_fs_sweep(cfg);
        if (hol->parsed()) return cmd_holonomy(cfg);
        if (val->parsed()) return cmd_validate();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "compute error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
