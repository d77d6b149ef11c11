#include "drillport/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "drillport/csv.hpp"
#include "drillport/error.hpp"
#include "json.hpp"

namespace drillport {

using nlohmann::json;

namespace {

struct RowIssues {
    std::vector<std::string> lines;

    void check() const {
        if (lines.empty()) return;
        std::string msg = std::to_string(lines.size()) + " invalid row(s):";
        for (const auto& l : lines) msg += "\n  " + l;
        throw InputError(msg);
    }
};

bool parse_mandatory(const CsvTable& t, std::size_t r) {
    const long v = t.integer(r, "mandatory");
    if (v < 0) throw InputError(t.where(r) + ": column 'mandatory' must be non-negative");
    return v >= 1;
}

std::vector<Project> load_kind(const fs::path& path, ProjectKind kind) {
    const CsvTable t = read_csv(path);
    if (t.rows.empty()) throw InputError(t.source + ": no data rows");
    const bool trap = kind == ProjectKind::Trap;
    const std::string_view pos_col = trap ? "gpos" : "epos";
    std::vector<Project> out;
    RowIssues issues;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        try {
            Project p;
            p.kind = kind;
            p.region = t.field(r, "region");
            p.id = t.field(r, "id");
            if (trap) {
                p.pre_or = t.number(r, "pre_or");
                p.pre_gr = t.number(r, "pre_gr");
            } else {
                p.cor = t.number(r, "cor");
                p.cgr = t.number(r, "cgr");
                p.pro_or = t.number(r, "pro_or");
                p.pro_gr = t.number(r, "pro_gr");
            }
            p.cost = t.number(r, "cost");
            p.npv = t.number(r, "npv");
            p.pos = t.number(r, pos_col);
            p.well_count = static_cast<int>(t.integer(r, "wells"));
            p.mandatory = parse_mandatory(t, r);
            if (!(p.pos >= 0.0 && p.pos <= 1.0)) {
                issues.lines.push_back(t.where(r) + ": project " + p.id + ": column '" +
                                       std::string(pos_col) + "' = " + t.field(r, pos_col) +
                                       " outside [0, 1]");
                continue;
            }
            validate_project(p);
            out.push_back(std::move(p));
        } catch (const InputError& e) {
            issues.lines.push_back(e.what());
        }
    }
    issues.check();
    return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    if (path.is_relative()) path = base / path;
    return fs::absolute(path).lexically_normal();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <class T>
void read_opt(const json& obj, const char* key, T& dst) {
    if (obj.contains(key) && !obj.at(key).is_null()) dst = obj.at(key).get<T>();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

std::vector<Project> load_traps(const fs::path& path) { return load_kind(path, ProjectKind::Trap); }

std::vector<Project> load_appraisals(const fs::path& path) {
    return load_kind(path, ProjectKind::Appraisal);
}

std::vector<Project> load_prospects(const fs::path& trap_path,
                                    const std::optional<fs::path>& appraisal_path) {
    std::vector<Project> out;
    RowIssues issues;
    try {
        out = load_traps(trap_path);
    } catch (const InputError& e) {
        issues.lines.push_back(e.what());
    }
    if (appraisal_path) {
        try {
            auto app = load_appraisals(*appraisal_path);
            out.insert(out.end(), app.begin(), app.end());
        } catch (const InputError& e) {
            issues.lines.push_back(e.what());
        }
    }
    if (issues.lines.size() == 1) throw InputError(issues.lines.front());
    issues.check();
    std::set<std::string> ids;
    for (const auto& p : out) {
        if (!ids.insert(p.id).second) throw InputError("duplicate project id '" + p.id + "'");
    }
    return out;
}

std::vector<Elicitation> load_elicitations(const fs::path& path) {
    const CsvTable t = read_csv(path);
    if (t.rows.empty()) throw InputError(t.source + ": no data rows");
    std::vector<Elicitation> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        Elicitation e;
        e.project_id = t.field(r, "project_id");
        e.factor = t.field(r, "factor");
        e.estimate = {t.number(r, "a"), t.number(r, "b"), t.number(r, "c")};
        const bool reserve = e.factor == kPorosityFactor || e.factor == kSaturationFactor;
        auto blank = [&](const char* col) {
            return !t.find_column(col) || t.field(r, col).empty();
        };
        if (!reserve) {
            if (blank("k")) throw InputError(t.where(r) + ": column 'k' is required for " + e.factor);
            e.k = t.number(r, "k");
            e.successes = blank("s") ? 0 : t.integer(r, "s");
            e.failures = blank("f") ? 0 : t.integer(r, "f");
            if (e.successes < 0 || e.failures < 0) {
                throw InputError(t.where(r) + ": success and failure counts must be non-negative");
            }
        }
        try {
            e.estimate.validate();
        } catch (const InputError& err) {
            throw InputError(t.where(r) + ": " + err.what());
        }
        out.push_back(std::move(e));
    }
    return out;
}

SampleMatrix load_history(const fs::path& path) {
    const CsvTable t = read_csv(path);
    SampleMatrix m(static_cast<Eigen::Index>(t.rows.size()),
                   static_cast<Eigen::Index>(kGposFactors.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t j = 0; j < kGposFactors.size(); ++j) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                t.number(r, kGposFactors[j]);
        }
    }
    return m;
}

std::vector<ProspectEconomics> load_economics(const fs::path& path) {
    const CsvTable t = read_csv(path);
    std::vector<ProspectEconomics> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ProspectEconomics e;
        e.project_id = t.field(r, "project_id");
        const auto& fluid = t.field(r, "fluid");
        if (fluid == "oil") {
            e.fluid = Fluid::Oil;
        } else if (fluid == "gas") {
            e.fluid = Fluid::Gas;
        } else {
            throw InputError(t.where(r) + ": fluid must be 'oil' or 'gas', got '" + fluid + "'");
        }
        e.fluid_density = t.number(r, "rho");
        e.volume_factor = t.number(r, "fvf");
        e.area_km2 = t.number(r, "area_km2");
        e.p_mefs = t.number(r, "p_mefs");
        e.cost = t.number(r, "cost");
        e.discount_rate = t.number(r, "discount_rate");
        if (!(e.p_mefs >= 0.0 && e.p_mefs <= 1.0)) {
            throw InputError(t.where(r) + ": p_mefs outside [0, 1]");
        }
        if (!(e.volume_factor > 0.0)) throw InputError(t.where(r) + ": fvf must be positive");
        std::stringstream ss(t.field(r, "flows"));
        std::string item;
        while (std::getline(ss, item, ';')) {
            CsvTable one = parse_csv("v\n" + item + "\n", t.where(r) + " flows");
            e.flows.push_back(one.number(0, "v"));
        }
        if (e.flows.empty()) throw InputError(t.where(r) + ": flows list is empty");
        out.push_back(std::move(e));
    }
    return out;
}

void write_simulation_csv(std::ostream& out, const std::vector<ProspectSummary>& rows) {
    out << "project_id,gpos_mean,gpos_std,gpos_p90,gpos_p50,gpos_p10,epos,"
           "reserves_p90,reserves_p50,reserves_p10,reserves_pmean,npv,emv\n";
    for (const auto& s : rows) {
        std::vector<std::string> f = {s.project_id,
                                      format_double(s.gpos.mean),
                                      format_double(s.gpos.stddev),
                                      format_double(s.gpos.p90),
                                      format_double(s.gpos.p50),
                                      format_double(s.gpos.p10),
                                      format_double(s.epos)};
        if (s.reserves) {
            for (double v : {s.reserves->p90, s.reserves->p50, s.reserves->p10, s.reserves->pmean}) {
                f.push_back(format_double(v));
            }
        } else {
            f.insert(f.end(), 4, "");
        }
        f.push_back(format_double(s.npv));
        f.push_back(format_double(s.emv));
        write_csv_row(out, f);
    }
}

void write_front_csv(std::ostream& out, const std::vector<Individual>& front) {
    std::vector<std::string> header = {"index", "emv", "risk", "feasible", "total_violation"};
    for (std::size_t c = 0; c < kConstraintCount; ++c) {
        header.push_back("slack_" + std::string(constraint_name(static_cast<Constraint>(c))));
    }
    header.push_back("bits");
    write_csv_row(out, header);
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto& ind = front[i];
        std::vector<std::string> f = {std::to_string(i), format_double(ind.eval.emv),
                                      format_double(ind.eval.risk),
                                      ind.eval.feasible() ? "1" : "0",
                                      format_double(ind.eval.violation)};
        for (const auto& e : ind.eval.constraints.entries) f.push_back(format_double(e.slack));
        std::string bits;
        for (auto b : ind.bits) bits += b ? '1' : '0';
        f.push_back(bits);
        write_csv_row(out, f);
    }
}

std::vector<FrontRow> read_front_csv(const fs::path& path) {
    const CsvTable t = read_csv(path);
    std::vector<FrontRow> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        FrontRow row;
        row.index = static_cast<std::size_t>(t.integer(r, "index"));
        row.emv = t.number(r, "emv");
        row.risk = t.number(r, "risk");
        const auto& feas = t.field(r, "feasible");
        if (feas != "0" && feas != "1") {
            throw InputError(t.where(r) + ": column 'feasible' must be 0 or 1");
        }
        row.feasible = feas == "1";
        row.total_violation = t.number(r, "total_violation");
        for (std::size_t c = 0; c < kConstraintCount; ++c) {
            row.slack[c] = t.number(
                r, "slack_" + std::string(constraint_name(static_cast<Constraint>(c))));
        }
        for (char ch : t.field(r, "bits")) {
            if (ch != '0' && ch != '1') throw InputError(t.where(r) + ": bits must be 0/1");
            row.bits.push_back(ch == '1' ? 1 : 0);
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<Point2> front_points(const std::vector<FrontRow>& rows) {
    std::vector<Point2> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) pts.push_back(r.point());
    return pts;
}

void write_trace_csv(std::ostream& out, const SolverResult& result) {
    out << "generation,hv,archive_size\n";
    for (std::size_t g = 0; g < result.hv_trace.size(); ++g) {
        out << g << ',' << format_double(result.hv_trace[g]) << ','
            << result.archive_history[g].size() << '\n';
    }
}

void write_metric_table_csv(std::ostream& out, const MetricTable& t) {
    std::vector<std::string> header = {"front", "hv", "igd", "spacing"};
    for (const auto& n : t.names) header.push_back("sc_vs_" + n);
    write_csv_row(out, header);
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (std::size_t a = 0; a < t.names.size(); ++a) {
        std::vector<std::string> f = {t.names[a], format_double(t.hv[a]), format_double(t.igd[a]),
                                      opt(t.spacing[a])};
        for (std::size_t b = 0; b < t.names.size(); ++b) f.push_back(opt(t.coverage[a][b]));
        write_csv_row(out, f);
    }
    out << "# reference point (-emv, risk): " << format_double(t.reference.f1) << ", "
        << format_double(t.reference.f2) << '\n';
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir, const std::string& source) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": invalid JSON: " + e.what());
    }
    if (root.is_object() && root.contains("config")) root = root.at("config");

    RunConfig cfg;
    cfg.source = source;
    try {
        reject_unknown(root, {"data", "targets", "solver", "simulation", "metrics", "selection"},
                       "configuration");

        if (root.contains("data")) {
            const auto& d = root.at("data");
            reject_unknown(d, {"traps", "appraisals", "elicitation", "history", "economics"}, "data");
            auto path_of = [&](const char* key, std::optional<fs::path>& dst) {
                if (d.contains(key) && !d.at(key).is_null()) {
                    dst = resolve(base_dir, d.at(key).get<std::string>());
                    require(fs::exists(*dst), "data." + std::string(key) + ": file not found: " +
                                                  dst->string());
                }
            };
            path_of("traps", cfg.data.traps);
            path_of("appraisals", cfg.data.appraisals);
            path_of("elicitation", cfg.data.elicitation);
            path_of("history", cfg.data.history);
            path_of("economics", cfg.data.economics);
        }

        if (root.contains("targets")) {
            const auto& t = root.at("targets");
            reject_unknown(t, {"tot_wells", "pred_lb_oi", "pred_lb_ga", "cont_lb_oi", "cont_lb_ga",
                               "prov_lb_oi", "prov_lb_ga", "drill_lb", "thre_well", "l_ub",
                               "cost_ub_tra", "cost_ub_app", "quotas"},
                           "targets");
            auto& p = cfg.targets;
            cfg.targets_set = true;
            require(t.contains("tot_wells"), "targets.tot_wells is required");
            p.tot_wells = t.at("tot_wells").get<long>();
            read_opt(t, "pred_lb_oi", p.pred_lb_oi);
            read_opt(t, "pred_lb_ga", p.pred_lb_ga);
            read_opt(t, "cont_lb_oi", p.cont_lb_oi);
            read_opt(t, "cont_lb_ga", p.cont_lb_ga);
            read_opt(t, "prov_lb_oi", p.prov_lb_oi);
            read_opt(t, "prov_lb_ga", p.prov_lb_ga);
            read_opt(t, "drill_lb", p.drill_lb);
            read_opt(t, "thre_well", p.thre_well);
            read_opt(t, "l_ub", p.l_ub);
            read_opt(t, "cost_ub_tra", p.cost_ub_tra);
            read_opt(t, "cost_ub_app", p.cost_ub_app);
            if (t.contains("quotas")) {
                const auto& q = t.at("quotas");
                require(q.is_object(), "targets.quotas must be an object");
                for (const auto& [region, v] : q.items()) {
                    reject_unknown(v, {"traps", "appraisals"}, "targets.quotas." + region);
                    RegionQuota rq;
                    read_opt(v, "traps", rq.traps);
                    read_opt(v, "appraisals", rq.appraisals);
                    p.quotas[region] = rq;
                }
            }
            try {
                p.validate();
            } catch (const InputError& e) {
                throw ConfigError(std::string("targets: ") + e.what());
            }
        }

        if (root.contains("solver")) {
            const auto& s = root.at("solver");
            reject_unknown(s, {"pop_size", "generations", "seed", "variant", "alpha", "gamma",
                               "k_bias", "beta", "l_min", "crossover_prob", "mutation_prob",
                               "threads"},
                           "solver");
            auto& c = cfg.solver;
            read_opt(s, "pop_size", c.pop_size);
            read_opt(s, "generations", c.generations);
            if (s.contains("seed") && !s.at("seed").is_null()) {
                c.seed = s.at("seed").get<std::uint64_t>();
                cfg.solver_seed_set = true;
            }
            if (s.contains("variant")) c.variant = parse_variant(s.at("variant").get<std::string>());
            read_opt(s, "alpha", c.ops.alpha);
            read_opt(s, "gamma", c.ops.gamma);
            read_opt(s, "k_bias", c.ops.k_bias);
            read_opt(s, "beta", c.ops.beta);
            read_opt(s, "l_min", c.ops.l_min);
            read_opt(s, "crossover_prob", c.baseline.crossover_prob);
            read_opt(s, "mutation_prob", c.baseline.mutation_prob);
            read_opt(s, "threads", c.threads);
            c.validate();
        }

        if (root.contains("simulation")) {
            const auto& s = root.at("simulation");
            reject_unknown(s, {"samples", "eps", "seed"}, "simulation");
            read_opt(s, "samples", cfg.simulation.samples);
            read_opt(s, "eps", cfg.simulation.eps);
            if (s.contains("seed") && !s.at("seed").is_null()) {
                cfg.simulation.seed = s.at("seed").get<std::uint64_t>();
                cfg.simulation_seed_set = true;
            }
            require(cfg.simulation.samples >= 2, "simulation.samples must be at least 2");
            require(cfg.simulation.eps > 0.0 && cfg.simulation.eps < 1.0,
                    "simulation.eps must lie in (0, 1)");
        }

        if (root.contains("metrics")) {
            const auto& m = root.at("metrics");
            reject_unknown(m, {"reference", "inflate"}, "metrics");
            read_opt(m, "inflate", cfg.metrics.inflate);
            require(cfg.metrics.inflate >= 0.0, "metrics.inflate must be non-negative");
            if (m.contains("reference") && !m.at("reference").is_null()) {
                const auto& r = m.at("reference");
                if (r.is_string()) {
                    require(r.get<std::string>() == "union",
                            "metrics.reference must be \"union\" or a [f1, f2] pair");
                } else {
                    require(r.is_array() && r.size() == 2,
                            "metrics.reference must be \"union\" or a [f1, f2] pair");
                    cfg.metrics.reference = Point2{r[0].get<double>(), r[1].get<double>()};
                }
            }
        }

        if (root.contains("selection")) {
            const auto& s = root.at("selection");
            reject_unknown(s, {"methods", "tiers", "per_tier"}, "selection");
            if (s.contains("methods")) {
                cfg.selection.methods.clear();
                for (const auto& m : s.at("methods")) {
                    cfg.selection.methods.push_back(parse_selection_method(m.get<std::string>()));
                }
                require(!cfg.selection.methods.empty(), "selection.methods must not be empty");
            }
            read_opt(s, "tiers", cfg.selection.tiers);
            read_opt(s, "per_tier", cfg.selection.per_tier);
            require(cfg.selection.tiers >= 1, "selection.tiers must be at least 1");
        }
    } catch (const json::exception& e) {
        throw ConfigError(source + ": " + e.what());
    } catch (const InputError& e) {
        throw ConfigError(source + ": " + e.what());
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(source, 0) == 0) throw;
        throw ConfigError(source + ": " + msg);
    }
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open configuration " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const fs::path abs = fs::absolute(path);
    return parse_config(ss.str(), abs.parent_path(), path.string());
}

namespace {

json config_json(const RunConfig& cfg) {
    json j;
    json data = json::object();
    auto put_path = [&](const char* key, const std::optional<fs::path>& p) {
        if (p) data[key] = fs::absolute(*p).lexically_normal().string();
    };
    put_path("traps", cfg.data.traps);
    put_path("appraisals", cfg.data.appraisals);
    put_path("elicitation", cfg.data.elicitation);
    put_path("history", cfg.data.history);
    put_path("economics", cfg.data.economics);
    j["data"] = data;

    const auto& t = cfg.targets;
    if (cfg.targets_set) {
        json tj = {{"tot_wells", t.tot_wells},   {"pred_lb_oi", t.pred_lb_oi},
                   {"pred_lb_ga", t.pred_lb_ga}, {"cont_lb_oi", t.cont_lb_oi},
                   {"cont_lb_ga", t.cont_lb_ga}, {"prov_lb_oi", t.prov_lb_oi},
                   {"prov_lb_ga", t.prov_lb_ga}, {"drill_lb", t.drill_lb},
                   {"thre_well", t.thre_well}};
        if (t.l_ub != std::numeric_limits<long>::max()) tj["l_ub"] = t.l_ub;
        if (std::isfinite(t.cost_ub_tra)) tj["cost_ub_tra"] = t.cost_ub_tra;
        if (std::isfinite(t.cost_ub_app)) tj["cost_ub_app"] = t.cost_ub_app;
        json quotas = json::object();
        for (const auto& [r, q] : t.quotas) quotas[r] = {{"traps", q.traps}, {"appraisals", q.appraisals}};
        tj["quotas"] = quotas;
        j["targets"] = tj;
    }

    const auto& s = cfg.solver;
    json sj = {{"pop_size", s.pop_size},
               {"generations", s.generations},
               {"variant", std::string(variant_name(s.variant))},
               {"alpha", s.ops.alpha},
               {"gamma", s.ops.gamma},
               {"k_bias", s.ops.k_bias},
               {"beta", s.ops.beta},
               {"l_min", s.ops.l_min},
               {"crossover_prob", s.baseline.crossover_prob},
               {"mutation_prob", s.baseline.mutation_prob},
               {"threads", s.threads}};
    if (cfg.solver_seed_set) sj["seed"] = s.seed;
    j["solver"] = sj;

    json sim = {{"samples", cfg.simulation.samples}, {"eps", cfg.simulation.eps}};
    if (cfg.simulation_seed_set) sim["seed"] = cfg.simulation.seed;
    j["simulation"] = sim;

    json mj = {{"inflate", cfg.metrics.inflate}};
    if (cfg.metrics.reference) {
        mj["reference"] = {cfg.metrics.reference->f1, cfg.metrics.reference->f2};
    } else {
        mj["reference"] = "union";
    }
    j["metrics"] = mj;

    json methods = json::array();
    for (auto m : cfg.selection.methods) methods.push_back(std::string(selection_method_name(m)));
    j["selection"] = {{"methods", methods},
                      {"tiers", cfg.selection.tiers},
                      {"per_tier", cfg.selection.per_tier}};
    return j;
}

} // namespace

std::string config_to_json(const RunConfig& cfg, int indent) {
    return config_json(cfg).dump(indent);
}

void write_manifest(std::ostream& out, const RunConfig& cfg, const RunManifest& m) {
    json j = {{"command", m.command},
              {"variant", m.variant},
              {"seed", m.seed},
              {"wall_seconds", m.wall_seconds},
              {"outputs", m.outputs},
              {"config", config_json(cfg)}};
    out << j.dump(2) << '\n';
}

std::vector<Project> load_config_prospects(const RunConfig& cfg) {
    if (!cfg.data.traps) throw ConfigError(cfg.source.string() + ": data.traps is required");
    return load_prospects(*cfg.data.traps, cfg.data.appraisals);
}

} // namespace drillport
