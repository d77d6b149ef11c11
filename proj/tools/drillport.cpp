// drillport: uncertainty simulation, portfolio optimisation, front metrics
// and representative selection from the command line.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drillport/csv.hpp"
#include "drillport/error.hpp"
#include "drillport/io.hpp"
#include "drillport/metrics.hpp"
#include "drillport/selection.hpp"
#include "drillport/simulation.hpp"
#include "drillport/solver.hpp"
#include "drillport/targets.hpp"

namespace fs = std::filesystem;
using namespace drillport;
using nlohmann::json;

namespace {

constexpr const char* kOutEnv = "DRILLPORT_OUT";

enum ExitCode { kOk = 0, kInternal = 1, kInput = 2, kConfig = 3, kUsage = 64 };

int report_error(const char* kind, const std::string& message, int code) {
    json j = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    std::cerr << j.dump() << '\n';
    return code;
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutEnv); env && *env) return env;
    throw ConfigError(std::string("no output directory: pass --out or set ") + kOutEnv);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fn) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    fn(out);
    if (!out) throw InputError("error writing " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- simulate -------------------------------------------------------------

std::vector<std::string> simulate_into(const RunConfig& cfg, const fs::path& dir) {
    if (!cfg.data.elicitation) throw ConfigError("data.elicitation is required for simulate");
    if (!cfg.simulation_seed_set) throw ConfigError("simulation.seed is required");
    const auto elicitations = load_elicitations(*cfg.data.elicitation);
    std::optional<SampleMatrix> history;
    if (cfg.data.history) history = load_history(*cfg.data.history);
    std::vector<ProspectEconomics> economics;
    if (cfg.data.economics) economics = load_economics(*cfg.data.economics);
    const auto rows = simulate_prospects(elicitations, history, economics, cfg.simulation);
    write_file(dir / "simulation.csv", [&](std::ostream& o) { write_simulation_csv(o, rows); });
    return {"simulation.csv"};
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load_config(config_path);
    const fs::path dir = output_dir(out_flag);
    RunManifest m{"simulate", "", cfg.simulation.seed, 0.0, simulate_into(cfg, dir)};
    m.wall_seconds = seconds_since(t0);
    write_file(dir / "manifest.json", [&](std::ostream& o) { write_manifest(o, cfg, m); });
    return kOk;
}

// ---- optimize -------------------------------------------------------------

Problem make_problem(const RunConfig& cfg) {
    if (!cfg.targets_set) throw ConfigError("targets block is required");
    return Problem(load_config_prospects(cfg), cfg.targets);
}

SolverResult optimize_into(const Problem& problem, const SolverConfig& sc, const fs::path& dir,
                           const std::string& prefix, std::vector<std::string>& outputs) {
    const SolverResult result = run_solver(problem, sc);
    const std::string front = prefix + "front.csv";
    const std::string trace = prefix + "trace.csv";
    const std::string archive = prefix + "archive.csv";
    write_file(dir / front, [&](std::ostream& o) { write_front_csv(o, result.front); });
    write_file(dir / trace, [&](std::ostream& o) { write_trace_csv(o, result); });
    write_file(dir / archive, [&](std::ostream& o) { write_front_csv(o, result.archive); });
    outputs.insert(outputs.end(), {front, trace, archive});
    if (!result.feasible) {
        std::cerr << json{{"warning", {{"message", "no feasible portfolio found; front is "
                                                   "best-effort infeasible"}}}}
                         .dump()
                  << '\n';
    }
    return result;
}

int cmd_optimize(const std::string& config_path, const std::optional<std::string>& variant,
                 const std::optional<std::uint64_t>& seed, const std::string& out_flag) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(config_path);
    const fs::path dir = output_dir(out_flag);
    if (variant) cfg.solver.variant = parse_variant(*variant);
    if (seed) {
        cfg.solver.seed = *seed;
        cfg.solver_seed_set = true;
    }
    if (!cfg.solver_seed_set) throw ConfigError("a seed is required: pass --seed or set solver.seed");
    const Problem problem = make_problem(cfg);
    RunManifest m{"optimize", std::string(variant_name(cfg.solver.variant)), cfg.solver.seed, 0.0, {}};
    optimize_into(problem, cfg.solver, dir, "", m.outputs);
    m.wall_seconds = seconds_since(t0);
    write_file(dir / "manifest.json", [&](std::ostream& o) { write_manifest(o, cfg, m); });
    return kOk;
}

// ---- metrics --------------------------------------------------------------

std::vector<Point2> feasible_points(const std::vector<FrontRow>& rows, const std::string& name) {
    std::vector<Point2> pts;
    for (const auto& r : rows) {
        if (r.feasible) pts.push_back(r.point());
    }
    if (pts.empty()) throw InputError("front '" + name + "' has no feasible rows");
    return pts;
}

std::vector<std::string> unique_names(const std::vector<std::string>& files) {
    std::vector<std::string> names;
    std::map<std::string, int> seen;
    for (const auto& f : files) {
        const fs::path p(f);
        std::string name = p.stem().string();
        if (p.has_parent_path() && !p.parent_path().filename().empty()) {
            name = p.parent_path().filename().string() + "/" + name;
        }
        const int n = ++seen[name];
        names.push_back(n == 1 ? name : name + "#" + std::to_string(n));
    }
    return names;
}

MetricTable metrics_of(const std::vector<std::string>& names,
                       const std::vector<std::vector<Point2>>& fronts, const MetricsConfig& mc) {
    MetricTable t = compute_metric_table(names, fronts, mc.inflate);
    if (mc.reference) {
        t.reference = *mc.reference;
        for (std::size_t i = 0; i < fronts.size(); ++i) t.hv[i] = hypervolume(fronts[i], t.reference);
    }
    return t;
}

int cmd_metrics(const std::vector<std::string>& files, const std::string& out_file,
                const std::optional<std::string>& config_path) {
    if (files.size() < 2) throw InputError("metrics needs at least two front files");
    MetricsConfig mc;
    if (config_path) mc = load_config(*config_path).metrics;
    const auto names = unique_names(files);
    std::vector<std::vector<Point2>> fronts;
    for (std::size_t i = 0; i < files.size(); ++i) {
        fronts.push_back(feasible_points(read_front_csv(files[i]), names[i]));
    }
    const MetricTable t = metrics_of(names, fronts, mc);
    write_file(out_file, [&](std::ostream& o) { write_metric_table_csv(o, t); });
    return kOk;
}

// ---- select ---------------------------------------------------------------

struct SelectionOutput {
    std::vector<std::vector<std::string>> representatives;
    std::vector<std::vector<std::string>> tiers;
};

SelectionOutput select_from(const std::vector<FrontRow>& all_rows,
                            const std::vector<SelectionMethod>& methods, std::size_t n_tiers,
                            bool per_tier) {
    std::vector<FrontRow> rows;
    for (const auto& r : all_rows) {
        if (r.feasible) rows.push_back(r);
    }
    if (rows.empty()) rows = all_rows;
    if (rows.empty()) throw InputError("front is empty");
    const auto pts = front_points(rows);
    const auto tiers = stratify_by_risk(pts, n_tiers);

    SelectionOutput out;
    auto choose = [&](const std::string& scope, const std::vector<std::size_t>& members) {
        std::vector<Point2> sub;
        for (auto i : members) sub.push_back(pts[i]);
        const std::vector<std::vector<Point2>> one = {sub};
        for (auto m : methods) {
            RepresentativeChoice c;
            switch (m) {
            case SelectionMethod::Ideal: c = ideal_point_select(sub); break;
            case SelectionMethod::Knee: c = knee_select(sub); break;
            case SelectionMethod::HvContribution:
                c = hv_contribution_select(sub, reference_point(one));
                break;
            }
            const FrontRow& r = rows[members[c.index]];
            out.representatives.push_back({scope, std::string(selection_method_name(m)),
                                           std::to_string(r.index), format_double(r.emv),
                                           format_double(r.risk), format_double(c.score),
                                           c.fallback ? "1" : "0"});
        }
    };
    std::vector<std::size_t> everyone(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) everyone[i] = i;
    choose("global", everyone);
    if (per_tier) {
        for (std::size_t t = 0; t < tiers.size(); ++t) {
            if (!tiers[t].empty()) choose("tier" + std::to_string(t), tiers[t]);
        }
    }
    for (std::size_t t = 0; t < tiers.size(); ++t) {
        for (auto i : tiers[t]) {
            out.tiers.push_back({std::to_string(rows[i].index), format_double(rows[i].emv),
                                 format_double(rows[i].risk), std::to_string(t)});
        }
    }
    return out;
}

void write_table(std::ostream& o, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    write_csv_row(o, header);
    for (const auto& r : rows) write_csv_row(o, r);
}

const std::vector<std::string> kRepHeader = {"scope", "method", "index", "emv",
                                             "risk",  "score",  "fallback"};
const std::vector<std::string> kTierHeader = {"index", "emv", "risk", "tier"};

int cmd_select(const std::string& front_file, const std::vector<std::string>& method_names,
               std::size_t n_tiers, bool per_tier, const std::string& out_flag) {
    std::vector<SelectionMethod> methods;
    for (const auto& m : method_names) methods.push_back(parse_selection_method(m));
    const auto sel = select_from(read_front_csv(front_file), methods, n_tiers, per_tier);
    std::optional<fs::path> dir;
    if (!out_flag.empty()) {
        dir = out_flag;
    } else if (const char* env = std::getenv(kOutEnv); env && *env) {
        dir = env;
    }
    if (dir) {
        write_file(*dir / "representatives.csv",
                   [&](std::ostream& o) { write_table(o, kRepHeader, sel.representatives); });
        write_file(*dir / "tiers.csv",
                   [&](std::ostream& o) { write_table(o, kTierHeader, sel.tiers); });
    } else {
        std::cout << "# representatives\n";
        write_table(std::cout, kRepHeader, sel.representatives);
        std::cout << "# tiers\n";
        write_table(std::cout, kTierHeader, sel.tiers);
    }
    return kOk;
}

// ---- report ---------------------------------------------------------------

int cmd_report(const std::string& config_path, const std::string& out_flag) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load_config(config_path);
    const fs::path dir = output_dir(out_flag);
    if (!cfg.solver_seed_set) throw ConfigError("solver.seed is required for report");
    const Problem problem = make_problem(cfg);

    RunManifest m{"report", "oe+baseline", cfg.solver.seed, 0.0, {}};
    if (cfg.data.elicitation) {
        for (auto& f : simulate_into(cfg, dir)) m.outputs.push_back(f);
    }
    SolverConfig oe = cfg.solver;
    oe.variant = Variant::OE;
    SolverConfig base = cfg.solver;
    base.variant = Variant::Baseline;
    optimize_into(problem, oe, dir, "oe_", m.outputs);
    optimize_into(problem, base, dir, "baseline_", m.outputs);

    const std::vector<std::string> names = {"oe", "baseline"};
    std::vector<std::vector<Point2>> fronts;
    for (const auto& n : names) {
        fronts.push_back(feasible_points(read_front_csv(dir / (n + "_front.csv")), n));
    }
    const MetricTable t = metrics_of(names, fronts, cfg.metrics);
    write_file(dir / "metrics.csv", [&](std::ostream& o) { write_metric_table_csv(o, t); });
    m.outputs.push_back("metrics.csv");

    const auto sel = select_from(read_front_csv(dir / "oe_front.csv"), cfg.selection.methods,
                                 cfg.selection.tiers, cfg.selection.per_tier);
    write_file(dir / "representatives.csv",
               [&](std::ostream& o) { write_table(o, kRepHeader, sel.representatives); });
    write_file(dir / "tiers.csv", [&](std::ostream& o) { write_table(o, kTierHeader, sel.tiers); });
    m.outputs.insert(m.outputs.end(), {"representatives.csv", "tiers.csv"});

    m.wall_seconds = seconds_since(t0);
    write_file(dir / "manifest.json", [&](std::ostream& o) { write_manifest(o, cfg, m); });
    return kOk;
}

// ---- derive-targets -------------------------------------------------------

int cmd_derive_targets(const std::string& config_path, long tot_wells, double thre_well,
                       std::size_t samples, double percentile, std::uint64_t seed,
                       const std::string& out_file) {
    const RunConfig cfg = load_config(config_path);
    const auto d = derive_targets(load_config_prospects(cfg), tot_wells, thre_well, samples,
                                  percentile, seed);
    RunConfig echo;
    echo.targets = d.targets;
    echo.targets_set = true;
    json j = json::parse(config_to_json(echo));
    json out = {{"targets", j.at("targets")},
                {"derivation",
                 {{"samples", d.samples},
                  {"seed", seed},
                  {"floor_percentile", d.floor_percentile},
                  {"cap_percentile", d.cap_percentile},
                  {"jointly_feasible_samples", d.jointly_feasible}}}};
    if (out_file.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        write_file(out_file, [&](std::ostream& o) { o << out.dump(2) << '\n'; });
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drillport: drilling portfolio uncertainty and optimisation"};
    app.require_subcommand(1);

    std::string config, out;
    std::optional<std::string> variant;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> fronts;
    std::string front;
    std::vector<std::string> methods = {"ideal"};
    std::size_t tiers = 3;
    bool per_tier = false;
    std::optional<std::string> metrics_config;

    auto* sim = app.add_subcommand("simulate", "Monte Carlo GPoS, reserves and EMV per prospect");
    sim->add_option("--config", config, "run configuration (JSON)")->required();
    sim->add_option("--out", out, std::string("output directory (or ") + kOutEnv + ")");

    auto* opt = app.add_subcommand("optimize", "run NSGA-II and write front, trace and manifest");
    opt->add_option("--config", config, "run configuration (JSON)")->required();
    opt->add_option("--variant", variant, "oe or baseline")->check(CLI::IsMember({"oe", "baseline"}));
    opt->add_option("--seed", seed, "master seed");
    opt->add_option("--out", out, std::string("output directory (or ") + kOutEnv + ")");

    auto* met = app.add_subcommand("metrics", "HV, IGD, spacing and set coverage of fronts");
    met->add_option("--fronts", fronts, "front CSV files")->required()->expected(1, -1);
    met->add_option("--out", out, "metric table CSV")->required();
    met->add_option("--config", metrics_config, "configuration supplying metrics settings");

    auto* sel = app.add_subcommand("select", "representative solutions and risk tiers of a front");
    sel->add_option("--front", front, "front CSV file")->required();
    sel->add_option("--method", methods, "ideal, knee or hv (repeatable)")
        ->check(CLI::IsMember({"ideal", "knee", "hv"}))
        ->expected(1, -1);
    sel->add_option("--tiers", tiers, "number of risk tiers")->check(CLI::PositiveNumber);
    sel->add_flag("--per-tier", per_tier, "also select within each tier");
    sel->add_option("--out", out, std::string("output directory (or ") + kOutEnv + ", else stdout)");

    auto* rep = app.add_subcommand("report", "simulate, optimise both variants, compare and select");
    rep->add_option("--config", config, "run configuration (JSON)")->required();
    rep->add_option("--out", out, std::string("output directory (or ") + kOutEnv + ")");

    long tot_wells = 19;
    double thre_well = 0.3;
    std::size_t samples = 20000;
    double percentile = 60.0;
    std::uint64_t derive_seed_value = 2023;
    std::string targets_out;
    auto* der = app.add_subcommand("derive-targets", "targets from random well-feasible portfolios");
    der->add_option("--config", config, "configuration naming the prospect files")->required();
    der->add_option("--tot-wells", tot_wells, "well-count target");
    der->add_option("--thre-well", thre_well, "low-success threshold");
    der->add_option("--samples", samples, "random portfolios");
    der->add_option("--percentile", percentile, "starting percentile");
    der->add_option("--seed", derive_seed_value, "sampling seed");
    der->add_option("--out", targets_out, "output JSON file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), kUsage);
    }

    try {
        if (sim->parsed()) return cmd_simulate(config, out);
        if (opt->parsed()) return cmd_optimize(config, variant, seed, out);
        if (met->parsed()) return cmd_metrics(fronts, out, metrics_config);
        if (sel->parsed()) return cmd_select(front, methods, tiers, per_tier, out);
        if (rep->parsed()) return cmd_report(config, out);
        if (der->parsed()) {
            return cmd_derive_targets(config, tot_wells, thre_well, samples, percentile,
                                      derive_seed_value, targets_out);
        }
    } catch (const ConfigError& e) {
        return report_error("config", e.what(), kConfig);
    } catch (const InputError& e) {
        return report_error("input", e.what(), kInput);
    } catch (const fs::filesystem_error& e) {
        return report_error("input", e.what(), kInput);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), kInternal);
    }
    return kUsage;
}
