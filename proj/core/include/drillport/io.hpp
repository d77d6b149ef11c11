#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "drillport/metrics.hpp"
#include "drillport/model.hpp"
#include "drillport/selection.hpp"
#include "drillport/simulation.hpp"
#include "drillport/solver.hpp"

namespace drillport {

namespace fs = std::filesystem;

/// Trap list: region,id,pre_or,pre_gr,cost,npv,gpos,wells,mandatory.
std::vector<Project> load_traps(const fs::path& path);
/// Appraisal list: region,id,cor,cgr,pro_or,pro_gr,cost,npv,epos,wells,mandatory.
std::vector<Project> load_appraisals(const fs::path& path);
/// Traps followed by appraisals. Every invalid row is reported in one
/// InputError, one line per row.
std::vector<Project> load_prospects(const fs::path& trap_path,
                                    const std::optional<fs::path>& appraisal_path);

/// project_id,factor,a,b,c,k,s,f (k, s, f may be blank for reserve factors).
std::vector<Elicitation> load_elicitations(const fs::path& path);
/// One column per GPoS factor, named as in kGposFactors.
SampleMatrix load_history(const fs::path& path);
/// project_id,fluid,rho,fvf,area_km2,p_mefs,cost,discount_rate,flows
/// where flows is a ';'-separated list.
std::vector<ProspectEconomics> load_economics(const fs::path& path);

void write_simulation_csv(std::ostream& out, const std::vector<ProspectSummary>& rows);

/// One row of a front file, objectives in natural signs.
struct FrontRow {
    std::size_t index = 0;
    double emv = 0.0;
    double risk = 0.0;
    bool feasible = true;
    double total_violation = 0.0;
    std::array<double, kConstraintCount> slack{};
    Bits bits;

    [[nodiscard]] Point2 point() const { return {-emv, risk}; }
};

void write_front_csv(std::ostream& out, const std::vector<Individual>& front);
std::vector<FrontRow> read_front_csv(const fs::path& path);
std::vector<Point2> front_points(const std::vector<FrontRow>& rows);

void write_trace_csv(std::ostream& out, const SolverResult& result);
void write_metric_table_csv(std::ostream& out, const MetricTable& table);

struct DataPaths {
    std::optional<fs::path> traps;
    std::optional<fs::path> appraisals;
    std::optional<fs::path> elicitation;
    std::optional<fs::path> history;
    std::optional<fs::path> economics;
};

struct MetricsConfig {
    std::optional<Point2> reference; // fixed point instead of the union rule
    double inflate = 0.1;
};

struct SelectionConfig {
    std::vector<SelectionMethod> methods = {SelectionMethod::Ideal, SelectionMethod::Knee,
                                            SelectionMethod::HvContribution};
    std::size_t tiers = 3;
    bool per_tier = false;
};

struct RunConfig {
    fs::path source;
    DataPaths data;
    PlanTargets targets;
    bool targets_set = false;
    SolverConfig solver;
    bool solver_seed_set = false;
    SimulationConfig simulation;
    bool simulation_seed_set = false;
    MetricsConfig metrics;
    SelectionConfig selection;
};

/// Parses a JSON run configuration (comments allowed). Relative paths are
/// resolved against base_dir. A run manifest is accepted too: its "config"
/// member is used. Throws ConfigError on unknown keys or bad values.
RunConfig parse_config(std::string_view text, const fs::path& base_dir, const std::string& source);
RunConfig load_config(const fs::path& path);

/// Canonical JSON of the configuration with absolute paths.
std::string config_to_json(const RunConfig& cfg, int indent = 2);

struct RunManifest {
    std::string command;
    std::string variant;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
};
void write_manifest(std::ostream& out, const RunConfig& cfg, const RunManifest& m);

/// Prospect list of a configuration; requires data.traps.
std::vector<Project> load_config_prospects(const RunConfig& cfg);

} // namespace drillport
