#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "drillport/model.hpp"
#include "drillport/rng.hpp"

namespace drillport {

/// Tuning of the directional crossover and structure-aware mutation.
/// Defaults are the settings used for the published experiments.
struct OperatorParams {
    double alpha = 0.7;   // rho ~ Beta(alpha, alpha)
    double gamma = 1.3;   // risk weight
    double k_bias = 0.3;  // regional shortfall bias strength
    double beta = 0.05;   // mutation budget ratio
    std::size_t l_min = 1;
    double eps = 1e-9;    // min-max normalisation guard

    void validate() const;
};

/// (u - min) / (max - min + eps) over the given values.
std::vector<double> minmax_normalize(std::span<const double> u, double eps);

/// k * max(0, quota - count).
double region_bias(long quota, long count, double k_bias);

/// Selected-project counts per (region, kind) group of a chromosome, kept in
/// step with single-bit flips.
class RegionCounts {
public:
    RegionCounts(const Problem& problem, const Bits& bits);

    [[nodiscard]] long count(std::size_t group) const { return counts_[group]; }
    /// Bias of locus i under the current counts.
    [[nodiscard]] double bias(std::size_t i, double k_bias) const;
    void set(std::size_t i, std::uint8_t old_bit, std::uint8_t new_bit);

private:
    const Problem* problem_;
    std::vector<long> counts_;
};

struct DirectionScores {
    double up = 0.0;    // preference for x_i = 1
    double down = 0.0;  // preference for x_i = 0
};

/// up = rho g - (1 - rho) gamma d+ + b,  down = -rho g - (1 - rho) gamma d-.
/// Inputs are already min-max normalised.
DirectionScores direction_scores(double g_hat, double d_plus_hat, double d_minus_hat,
                                 double bias, double rho, double gamma);

/// Flip gain: up when the bit is 0, -down when it is 1.
double flip_gain(std::uint8_t bit, const DirectionScores& s);

/// max(l_min, ceil(beta * n)).
std::size_t mutation_budget(std::size_t n, double beta, std::size_t l_min);

/// Risk-moment deltas per locus against the statistics of bits: d_plus is
/// the change from adding the locus's value, d_minus from removing it. Both
/// are evaluated for every locus whatever its current bit; d_minus is 0 for
/// an empty selection.
struct RiskDeltas {
    std::vector<double> d_plus;
    std::vector<double> d_minus;
};
RiskDeltas risk_deltas(const Bits& bits, std::span<const double> risk_values,
                       std::span<const std::size_t> loci);

struct RepairOutcome {
    bool reached = true;
    long deficit = 0; // target - sum(w x) after repair
};

/// Greedy unit-well repair toward sum(w x) == target using only pool loci.
/// Adds zeros in descending add_benefit / max(1, w) order, removes
/// non-mandatory ones in ascending remove_benefit / max(1, w) order; ties go
/// to the lower index. Candidates that would overshoot are skipped while a
/// fitting one remains. Benefits are parallel to pool.
RepairOutcome greedy_well_repair(Bits& bits, std::span<const int> wells,
                                 std::span<const std::uint8_t> mandatory,
                                 std::span<const std::size_t> pool,
                                 std::span<const double> add_benefit,
                                 std::span<const double> remove_benefit, long target);

struct Offspring {
    Bits bits;
    bool repaired = true; // well-count target met
};

double draw_preference(Rng& rng, double alpha);

/// Directional crossover producing one child from base, recombining only
/// loci where base and other differ. Followed by mandatory enforcement and
/// repair restricted to the differing loci.
Offspring dc_offspring(const Bits& base, const Bits& other, double rho, const Problem& problem,
                       const OperatorParams& params);

/// Both children: the first from a with rho, the second from b with 1 - rho.
std::pair<Offspring, Offspring> dc_crossover(const Bits& a, const Bits& b,
                                             const Problem& problem,
                                             const OperatorParams& params, Rng& rng);

/// Flips the top-L non-mandatory loci by flip gain, then enforces mandatory
/// bits and repairs the well count over all loci with w >= 1.
Offspring sam_mutation(const Bits& x, double rho, const Problem& problem,
                       const OperatorParams& params);
Offspring sam_mutation(const Bits& x, const Problem& problem, const OperatorParams& params,
                       Rng& rng);

/// Mandatory enforcement plus the full-pool greedy repair, as used after
/// random initialisation and the baseline operators.
Offspring repair_chromosome(Bits bits, double rho, const Problem& problem,
                            const OperatorParams& params);

} // namespace drillport
