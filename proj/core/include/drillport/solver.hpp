#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "drillport/metrics.hpp"
#include "drillport/model.hpp"
#include "drillport/operators.hpp"

namespace drillport {

enum class Variant { OE, Baseline };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

/// Uniform crossover and bit-flip settings of the classical variant.
struct BaselineParams {
    double crossover_prob = 0.9;
    double mutation_prob = 0.05;
};

/// How the fixed HV-trace reference point is chosen.
enum class TraceReference {
    History, // worst archive point over the whole run, plus 10% of the range
    Fixed,   // SolverConfig::trace_reference
};

struct SolverConfig {
    std::size_t pop_size = 100;
    std::size_t generations = 500;
    std::uint64_t seed = 0;
    Variant variant = Variant::OE;
    OperatorParams ops;
    BaselineParams baseline;
    TraceReference trace_policy = TraceReference::History;
    Point2 trace_reference;
    unsigned threads = 1;

    void validate() const;
};

/// Objective pair plus feasibility as seen by constrained domination.
struct Fitness {
    Point2 objectives; // (-EMV, risk)
    bool feasible = true;
    double violation = 0.0;
};

/// Feasible beats infeasible; infeasibles compare by violation; feasibles by
/// Pareto dominance.
bool dominates(const Fitness& a, const Fitness& b);

/// Rank-partitioned index lists, rank 0 first.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Fitness> pop);

/// Crowding distance of each point of one front; boundaries are +inf.
std::vector<double> crowding_distance(std::span<const Point2> front);

struct Individual {
    Bits bits;
    Evaluation eval;
    bool repaired = true;

    [[nodiscard]] Fitness fitness() const {
        return {{-eval.emv, eval.risk}, eval.feasible(), eval.violation};
    }
};

struct SolverResult {
    std::vector<Individual> front;       // rank 0 of the final population, by risk
    bool feasible = true;                // front holds feasible solutions
    std::vector<Individual> archive;     // best-so-far feasible non-dominated set
    std::vector<std::vector<Point2>> archive_history; // per generation, 0..G
    Point2 trace_reference;
    std::vector<double> hv_trace;        // per generation, 0..G
    std::size_t evaluations = 0;
};

/// NSGA-II with the configured variant. Deterministic in config.seed for any
/// thread count. Throws ConfigError when the mandatory wells exceed the
/// target or all wells together fall short of it.
SolverResult run_solver(const Problem& problem, const SolverConfig& config);

} // namespace drillport
