#include "drillport/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drillport/error.hpp"

namespace drillport {

namespace {

std::vector<double> gather(std::span<const double> v, std::span<const std::size_t> idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

std::vector<std::size_t> well_pool(const Problem& problem, std::span<const std::size_t> loci) {
    std::vector<std::size_t> pool;
    for (auto i : loci) {
        if (problem.wells()[i] >= 1) pool.push_back(i);
    }
    return pool;
}

// Repair over pool with benefits built from the chromosome's current state.
// g_hat is indexed by locus.
bool repair_over(Bits& bits, std::span<const std::size_t> pool, std::span<const double> g_hat,
                 double rho, const Problem& problem, const OperatorParams& params) {
    const long target = problem.targets().tot_wells;
    if (problem.well_sum(bits) == target) return true;
    if (pool.empty()) return false;

    const RiskDeltas deltas = risk_deltas(bits, problem.risk_values(), pool);
    const auto dp = minmax_normalize(deltas.d_plus, params.eps);
    const auto dm = minmax_normalize(deltas.d_minus, params.eps);
    const RegionCounts counts(problem, bits);

    std::vector<double> add(pool.size());
    std::vector<double> remove(pool.size());
    for (std::size_t j = 0; j < pool.size(); ++j) {
        const std::size_t i = pool[j];
        const double b = counts.bias(i, params.k_bias);
        add[j] = rho * g_hat[i] - (1.0 - rho) * params.gamma * dp[j] + b;
        remove[j] = rho * g_hat[i] - (1.0 - rho) * params.gamma * dm[j] + b;
    }
    return greedy_well_repair(bits, problem.wells(), problem.mandatory(), pool, add, remove,
                              target)
        .reached;
}

std::vector<std::size_t> all_loci(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

} // namespace

void OperatorParams::validate() const {
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    if (!(gamma >= 0.0)) throw InputError("gamma must be non-negative");
    if (!(k_bias >= 0.0)) throw InputError("k_bias must be non-negative");
    if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("beta must lie in [0, 1]");
    if (!(eps > 0.0)) throw InputError("eps must be positive");
}

std::vector<double> minmax_normalize(std::span<const double> u, double eps) {
    std::vector<double> out(u.size(), 0.0);
    if (u.empty()) return out;
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    const double range = *hi - *lo + eps;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = (u[i] - *lo) / range;
    return out;
}

double region_bias(long quota, long count, double k_bias) {
    return k_bias * static_cast<double>(std::max(0L, quota - count));
}

RegionCounts::RegionCounts(const Problem& problem, const Bits& bits)
    : problem_(&problem), counts_(problem.group_count(), 0) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) ++counts_[problem.group(i)];
    }
}

double RegionCounts::bias(std::size_t i, double k_bias) const {
    const std::size_t g = problem_->group(i);
    return region_bias(problem_->group_quota(g), counts_[g], k_bias);
}

void RegionCounts::set(std::size_t i, std::uint8_t old_bit, std::uint8_t new_bit) {
    if (old_bit == new_bit) return;
    counts_[problem_->group(i)] += new_bit ? 1 : -1;
}

DirectionScores direction_scores(double g_hat, double d_plus_hat, double d_minus_hat,
                                 double bias, double rho, double gamma) {
    DirectionScores s;
    s.up = rho * g_hat - (1.0 - rho) * gamma * d_plus_hat + bias;
    s.down = -rho * g_hat - (1.0 - rho) * gamma * d_minus_hat;
    return s;
}

double flip_gain(std::uint8_t bit, const DirectionScores& s) {
    return bit ? -s.down : s.up;
}

std::size_t mutation_budget(std::size_t n, double beta, std::size_t l_min) {
    const auto l = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n)));
    return std::max(l_min, l);
}

RiskDeltas risk_deltas(const Bits& bits, std::span<const double> risk_values,
                       std::span<const std::size_t> loci) {
    const RunningStats stats = selection_stats(bits, risk_values);
    RiskDeltas d;
    d.d_plus.assign(loci.size(), 0.0);
    d.d_minus.assign(loci.size(), 0.0);
    for (std::size_t j = 0; j < loci.size(); ++j) {
        const double g = risk_values[loci[j]];
        d.d_plus[j] = delta_m(stats, g, Flip::ZeroToOne);
        if (stats.n > 0) d.d_minus[j] = delta_m(stats, g, Flip::OneToZero);
    }
    return d;
}

RepairOutcome greedy_well_repair(Bits& bits, std::span<const int> wells,
                                 std::span<const std::uint8_t> mandatory,
                                 std::span<const std::size_t> pool,
                                 std::span<const double> add_benefit,
                                 std::span<const double> remove_benefit, long target) {
    if (add_benefit.size() != pool.size() || remove_benefit.size() != pool.size()) {
        throw InputError("repair benefits must be parallel to the pool");
    }
    long sum = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) sum += wells[i];
    }
    long deficit = target - sum;
    std::vector<std::uint8_t> touched(bits.size(), 0);

    auto ratio = [&](std::span<const double> benefit, std::size_t j) {
        return benefit[j] / static_cast<double>(std::max(1, wells[pool[j]]));
    };

    auto run_phase = [&](bool adding) {
        std::vector<std::size_t> cand;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            const std::size_t i = pool[j];
            if (touched[i]) continue;
            if (adding ? bits[i] == 0 : (bits[i] == 1 && !mandatory[i])) cand.push_back(j);
        }
        const auto benefit = adding ? add_benefit : remove_benefit;
        std::stable_sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
            const double rx = ratio(benefit, x);
            const double ry = ratio(benefit, y);
            if (rx != ry) return adding ? rx > ry : rx < ry;
            return pool[x] < pool[y];
        });
        auto need = [&] { return adding ? deficit : -deficit; };
        std::vector<std::uint8_t> used(cand.size(), 0);
        for (std::size_t c = 0; c < cand.size() && need() > 0; ++c) {
            const std::size_t i = pool[cand[c]];
            if (wells[i] > need()) continue;
            bits[i] = adding ? 1 : 0;
            touched[i] = 1;
            used[c] = 1;
            deficit += adding ? -wells[i] : wells[i];
        }
        for (std::size_t c = 0; c < cand.size() && need() > 0; ++c) {
            if (used[c]) continue;
            const std::size_t i = pool[cand[c]];
            bits[i] = adding ? 1 : 0;
            touched[i] = 1;
            deficit += adding ? -wells[i] : wells[i];
        }
    };

    for (int pass = 0; pass < 3 && deficit != 0; ++pass) run_phase(deficit > 0);
    return {deficit == 0, deficit};
}

double draw_preference(Rng& rng, double alpha) { return sample_beta(rng, alpha, alpha); }

Offspring dc_offspring(const Bits& base, const Bits& other, double rho, const Problem& problem,
                       const OperatorParams& params) {
    const std::size_t n = problem.size();
    if (base.size() != n || other.size() != n) {
        throw InputError("crossover parents must match the project count");
    }
    Offspring child{base, true};
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < n; ++i) {
        if (base[i] != other[i]) diff.push_back(i);
    }

    std::vector<double> g_hat(n, 0.0);
    if (!diff.empty()) {
        const auto g_norm = minmax_normalize(gather(problem.emv_values(), diff), params.eps);
        for (std::size_t j = 0; j < diff.size(); ++j) g_hat[diff[j]] = g_norm[j];

        const RiskDeltas deltas = risk_deltas(base, problem.risk_values(), diff);
        const auto dp = minmax_normalize(deltas.d_plus, params.eps);
        const auto dm = minmax_normalize(deltas.d_minus, params.eps);
        RegionCounts counts(problem, child.bits);
        for (std::size_t j = 0; j < diff.size(); ++j) {
            const std::size_t i = diff[j];
            const auto s = direction_scores(g_hat[i], dp[j], dm[j],
                                            counts.bias(i, params.k_bias), rho, params.gamma);
            const std::uint8_t bit = s.up >= s.down ? 1 : 0;
            counts.set(i, child.bits[i], bit);
            child.bits[i] = bit;
        }
    }
    problem.enforce_mandatory(child.bits);
    child.repaired =
        repair_over(child.bits, well_pool(problem, diff), g_hat, rho, problem, params);
    return child;
}

std::pair<Offspring, Offspring> dc_crossover(const Bits& a, const Bits& b,
                                             const Problem& problem,
                                             const OperatorParams& params, Rng& rng) {
    const double rho = draw_preference(rng, params.alpha);
    return {dc_offspring(a, b, rho, problem, params),
            dc_offspring(b, a, 1.0 - rho, problem, params)};
}

Offspring sam_mutation(const Bits& x, double rho, const Problem& problem,
                       const OperatorParams& params) {
    const std::size_t n = problem.size();
    if (x.size() != n) throw InputError("chromosome length does not match project count");
    const auto loci = all_loci(n);
    const auto g_hat = minmax_normalize(problem.emv_values(), params.eps);
    const RiskDeltas deltas = risk_deltas(x, problem.risk_values(), loci);
    const auto dp = minmax_normalize(deltas.d_plus, params.eps);
    const auto dm = minmax_normalize(deltas.d_minus, params.eps);
    const RegionCounts counts(problem, x);

    std::vector<std::size_t> cand;
    std::vector<double> gain(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (problem.mandatory()[i]) continue;
        const auto s = direction_scores(g_hat[i], dp[i], dm[i], counts.bias(i, params.k_bias),
                                        rho, params.gamma);
        gain[i] = flip_gain(x[i], s);
        cand.push_back(i);
    }
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
        if (gain[a] != gain[b]) return gain[a] > gain[b];
        return a < b;
    });

    Offspring child{x, true};
    const std::size_t l = std::min(mutation_budget(n, params.beta, params.l_min), cand.size());
    for (std::size_t c = 0; c < l; ++c) child.bits[cand[c]] ^= 1;
    problem.enforce_mandatory(child.bits);
    child.repaired = repair_over(child.bits, well_pool(problem, loci), g_hat, rho, problem, params);
    return child;
}

Offspring sam_mutation(const Bits& x, const Problem& problem, const OperatorParams& params,
                       Rng& rng) {
    return sam_mutation(x, draw_preference(rng, params.alpha), problem, params);
}

Offspring repair_chromosome(Bits bits, double rho, const Problem& problem,
                            const OperatorParams& params) {
    if (bits.size() != problem.size()) {
        throw InputError("chromosome length does not match project count");
    }
    problem.enforce_mandatory(bits);
    const auto g_hat = minmax_normalize(problem.emv_values(), params.eps);
    const auto pool = well_pool(problem, all_loci(problem.size()));
    Offspring out{std::move(bits), true};
    out.repaired = repair_over(out.bits, pool, g_hat, rho, problem, params);
    return out;
}

} // namespace drillport
