#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drillport/uncertainty.hpp"

namespace drillport {

/// The five geological sub-factors whose product is GPoS, in column order.
inline constexpr std::array<std::string_view, 5> kGposFactors = {
    "source", "reservoir", "preservation", "seal", "migration"};

/// Optional reserve inputs elicited as triangular three-point estimates.
inline constexpr std::string_view kPorosityFactor = "porosity";
inline constexpr std::string_view kSaturationFactor = "saturation";

/// One row of the elicitation table. k, s and f only matter for the GPoS
/// sub-factors; reserve factors are sampled from the triangular estimate.
struct Elicitation {
    std::string project_id;
    std::string factor;
    ThreePointEstimate estimate;
    double k = 2.0;
    long successes = 0;
    long failures = 0;
};

enum class Fluid { Oil, Gas };

/// Per-project economic and volumetric inputs.
struct ProspectEconomics {
    std::string project_id;
    Fluid fluid = Fluid::Oil;
    double fluid_density = 0.0; // g/cm^3 at surface
    double volume_factor = 1.0;
    double area_km2 = 0.0;
    double p_mefs = 1.0;
    double cost = 0.0;
    double discount_rate = 0.0;
    std::vector<double> flows; // CI - CO per year, 10^4 CNY
};

struct SimulationConfig {
    std::size_t samples = 10'000;
    double eps = 1e-6;
    std::uint64_t seed = 0;
};

struct ProspectSummary {
    std::string project_id;
    SimulationSummary gpos;
    double epos = 0.0;
    std::optional<SimulationSummary> reserves;
    double npv = 0.0;
    double emv = 0.0;
};

/// Correlated Monte Carlo for every project in the elicitation table, in
/// order of first appearance. history (columns in kGposFactors order) sets
/// the rank-correlation target; without it the factors are independent.
/// Deterministic in cfg.seed; each project draws from its own sub-stream.
std::vector<ProspectSummary> simulate_prospects(
    const std::vector<Elicitation>& elicitations,
    const std::optional<SampleMatrix>& history,
    const std::vector<ProspectEconomics>& economics,
    const SimulationConfig& cfg);

/// Rank-correlation target used by simulate_prospects.
CorrelationMatrix factor_correlation_target(const std::optional<SampleMatrix>& history, double eps);

/// Independent posterior draws for one project's five GPoS factors.
SampleMatrix draw_factor_posteriors(const std::array<Elicitation, 5>& factors,
                                    std::size_t samples, std::uint64_t seed);

} // namespace drillport
