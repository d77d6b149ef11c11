#include "drillport/solver.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "drillport/error.hpp"

namespace drillport {

namespace {

struct Ranked {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

Ranked rank_population(const std::vector<Individual>& pop) {
    std::vector<Fitness> fit;
    fit.reserve(pop.size());
    for (const auto& ind : pop) fit.push_back(ind.fitness());
    Ranked r{std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size())};
    const auto fronts = fast_nondominated_sort(fit);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        std::vector<Point2> pts;
        for (auto i : fronts[k]) pts.push_back(fit[i].objectives);
        const auto cd = crowding_distance(pts);
        for (std::size_t j = 0; j < fronts[k].size(); ++j) {
            r.rank[fronts[k][j]] = k;
            r.crowding[fronts[k][j]] = cd[j];
        }
    }
    return r;
}

// (mu + lambda) truncation by rank then crowding, duplicates dropped first.
std::vector<Individual> environmental_selection(std::vector<Individual> merged,
                                                std::size_t pop_size) {
    std::set<Bits> seen;
    std::vector<Individual> unique;
    std::vector<Individual> dupes;
    for (auto& ind : merged) {
        if (seen.insert(ind.bits).second) {
            unique.push_back(std::move(ind));
        } else {
            dupes.push_back(std::move(ind));
        }
    }
    for (std::size_t i = 0; unique.size() < pop_size && i < dupes.size(); ++i) {
        unique.push_back(std::move(dupes[i]));
    }

    std::vector<Fitness> fit;
    for (const auto& ind : unique) fit.push_back(ind.fitness());
    const auto fronts = fast_nondominated_sort(fit);
    std::vector<Individual> next;
    next.reserve(pop_size);
    for (const auto& front : fronts) {
        if (next.size() + front.size() <= pop_size) {
            for (auto i : front) next.push_back(unique[i]);
            continue;
        }
        std::vector<Point2> pts;
        for (auto i : front) pts.push_back(fit[i].objectives);
        const auto cd = crowding_distance(pts);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        for (std::size_t j = 0; next.size() < pop_size; ++j) next.push_back(unique[front[order[j]]]);
        break;
    }
    return next;
}

void update_archive(std::vector<Individual>& archive, const std::vector<Individual>& candidates) {
    for (const auto& c : candidates) {
        if (!c.eval.feasible()) continue;
        const Point2 p = c.fitness().objectives;
        bool rejected = false;
        for (const auto& a : archive) {
            const Point2 q = a.fitness().objectives;
            if (pareto_dominates(q, p) || q == p) {
                rejected = true;
                break;
            }
        }
        if (rejected) continue;
        std::erase_if(archive, [&](const Individual& a) {
            return pareto_dominates(p, a.fitness().objectives);
        });
        archive.push_back(c);
    }
}

std::vector<Point2> archive_points(const std::vector<Individual>& archive) {
    std::vector<Point2> pts;
    for (const auto& a : archive) pts.push_back(a.fitness().objectives);
    std::sort(pts.begin(), pts.end());
    return pts;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

Individual make_individual(const Problem& problem, Offspring o) {
    Individual ind;
    ind.eval = problem.evaluate(o.bits);
    ind.bits = std::move(o.bits);
    ind.repaired = o.repaired;
    return ind;
}

std::pair<Offspring, Offspring> baseline_variation(const Bits& a, const Bits& b,
                                                   const Problem& problem,
                                                   const SolverConfig& cfg, Rng& rng) {
    Bits c1 = a, c2 = b;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < cfg.baseline.crossover_prob) {
        for (std::size_t i = 0; i < c1.size(); ++i) {
            if (u(rng) < 0.5) std::swap(c1[i], c2[i]);
        }
    }
    for (Bits* c : {&c1, &c2}) {
        for (auto& bit : *c) {
            if (u(rng) < cfg.baseline.mutation_prob) bit ^= 1;
        }
    }
    const double rho1 = draw_preference(rng, cfg.ops.alpha);
    const double rho2 = draw_preference(rng, cfg.ops.alpha);
    return {repair_chromosome(std::move(c1), rho1, problem, cfg.ops),
            repair_chromosome(std::move(c2), rho2, problem, cfg.ops)};
}

std::pair<Offspring, Offspring> oe_variation(const Bits& a, const Bits& b, const Problem& problem,
                                             const SolverConfig& cfg, Rng& rng) {
    auto [c1, c2] = dc_crossover(a, b, problem, cfg.ops, rng);
    return {sam_mutation(c1.bits, problem, cfg.ops, rng),
            sam_mutation(c2.bits, problem, cfg.ops, rng)};
}

} // namespace

std::string_view variant_name(Variant v) { return v == Variant::OE ? "oe" : "baseline"; }

Variant parse_variant(std::string_view name) {
    if (name == "oe") return Variant::OE;
    if (name == "baseline") return Variant::Baseline;
    throw InputError("unknown variant '" + std::string(name) + "' (expected oe or baseline)");
}

void SolverConfig::validate() const {
    if (pop_size < 4 || pop_size % 2 != 0) {
        throw ConfigError("pop_size must be even and at least 4");
    }
    if (generations < 1) throw ConfigError("generations must be at least 1");
    if (!(baseline.crossover_prob >= 0.0 && baseline.crossover_prob <= 1.0) ||
        !(baseline.mutation_prob >= 0.0 && baseline.mutation_prob <= 1.0)) {
        throw ConfigError("baseline probabilities must lie in [0, 1]");
    }
    try {
        ops.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

bool dominates(const Fitness& a, const Fitness& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (!a.feasible) return a.violation < b.violation;
    return pareto_dominates(a.objectives, b.objectives);
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Fitness> pop) {
    if (pop.empty()) throw InputError("fast_nondominated_sort: empty population");
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pop[p], pop[q])) {
                dominated[p].push_back(q);
            } else if (dominates(pop[q], pop[p])) {
                ++count[p];
            }
        }
        if (count[p] == 0) fronts[0].push_back(p);
    }
    for (std::size_t k = 0; !fronts[k].empty(); ++k) {
        std::vector<std::size_t> next;
        for (auto p : fronts[k]) {
            for (auto q : dominated[p]) {
                if (--count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Point2> front) {
    if (front.empty()) throw InputError("crowding_distance: empty front");
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);
    std::vector<std::size_t> order(n);
    for (int obj = 0; obj < 2; ++obj) {
        auto val = [&](std::size_t i) { return obj == 0 ? front[i].f1 : front[i].f2; };
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return val(a) < val(b); });
        d[order.front()] = inf;
        d[order.back()] = inf;
        const double range = val(order.back()) - val(order.front());
        if (range <= 0.0) continue;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            d[order[j]] += (val(order[j + 1]) - val(order[j - 1])) / range;
        }
    }
    return d;
}

SolverResult run_solver(const Problem& problem, const SolverConfig& config) {
    config.validate();
    const long target = problem.targets().tot_wells;
    if (problem.mandatory_wells() > target) {
        throw ConfigError("mandatory projects need " + std::to_string(problem.mandatory_wells()) +
                          " wells, more than tot_wells = " + std::to_string(target));
    }
    if (problem.total_wells_available() < target) {
        throw ConfigError("all projects together offer " +
                          std::to_string(problem.total_wells_available()) +
                          " wells, fewer than tot_wells = " + std::to_string(target));
    }

    const std::size_t n = problem.size();
    const std::size_t mu = config.pop_size;
    SolverResult result;

    std::vector<Individual> pop(mu);
    parallel_for(mu, config.threads, [&](std::size_t i) {
        Rng rng = make_rng(config.seed, {0, i + 1});
        std::bernoulli_distribution coin(0.5);
        Bits bits(n);
        for (auto& b : bits) b = coin(rng) ? 1 : 0;
        const double rho = draw_preference(rng, config.ops.alpha);
        pop[i] = make_individual(problem, repair_chromosome(std::move(bits), rho, problem, config.ops));
    });
    result.evaluations += mu;
    update_archive(result.archive, pop);
    result.archive_history.push_back(archive_points(result.archive));

    for (std::size_t g = 1; g <= config.generations; ++g) {
        const Ranked ranked = rank_population(pop);
        Rng sel = make_rng(config.seed, {g, 0});
        std::uniform_int_distribution<std::size_t> pick(0, mu - 1);
        std::bernoulli_distribution coin(0.5);
        std::vector<std::size_t> parents(mu);
        for (auto& p : parents) {
            const std::size_t a = pick(sel);
            const std::size_t b = pick(sel);
            if (ranked.rank[a] != ranked.rank[b]) {
                p = ranked.rank[a] < ranked.rank[b] ? a : b;
            } else if (ranked.crowding[a] != ranked.crowding[b]) {
                p = ranked.crowding[a] > ranked.crowding[b] ? a : b;
            } else {
                p = coin(sel) ? a : b;
            }
        }

        std::vector<Individual> offspring(mu);
        parallel_for(mu / 2, config.threads, [&](std::size_t k) {
            Rng rng = make_rng(config.seed, {g, k + 1});
            const Bits& a = pop[parents[2 * k]].bits;
            const Bits& b = pop[parents[2 * k + 1]].bits;
            auto kids = config.variant == Variant::OE
                            ? oe_variation(a, b, problem, config, rng)
                            : baseline_variation(a, b, problem, config, rng);
            offspring[2 * k] = make_individual(problem, std::move(kids.first));
            offspring[2 * k + 1] = make_individual(problem, std::move(kids.second));
        });
        result.evaluations += mu;
        update_archive(result.archive, offspring);
        result.archive_history.push_back(archive_points(result.archive));

        std::vector<Individual> merged = std::move(pop);
        merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
        pop = environmental_selection(std::move(merged), mu);
    }

    std::vector<Fitness> fit;
    for (const auto& ind : pop) fit.push_back(ind.fitness());
    const auto fronts = fast_nondominated_sort(fit);
    std::set<Bits> seen;
    for (auto i : fronts[0]) {
        if (seen.insert(pop[i].bits).second) result.front.push_back(pop[i]);
    }
    std::sort(result.front.begin(), result.front.end(), [](const Individual& a, const Individual& b) {
        const auto fa = a.fitness().objectives, fb = b.fitness().objectives;
        if (fa.f2 != fb.f2) return fa.f2 < fb.f2;
        if (fa.f1 != fb.f1) return fa.f1 < fb.f1;
        return a.bits < b.bits;
    });
    result.feasible = !result.front.empty() && result.front.front().eval.feasible();

    std::sort(result.archive.begin(), result.archive.end(), [](const Individual& a, const Individual& b) {
        return a.fitness().objectives < b.fitness().objectives;
    });

    if (config.trace_policy == TraceReference::Fixed) {
        result.trace_reference = config.trace_reference;
    } else {
        bool any = std::any_of(result.archive_history.begin(), result.archive_history.end(),
                               [](const auto& s) { return !s.empty(); });
        result.trace_reference = any ? reference_point(result.archive_history) : Point2{};
    }
    for (const auto& pts : result.archive_history) {
        result.hv_trace.push_back(pts.empty() ? 0.0 : hypervolume(pts, result.trace_reference));
    }
    return result;
}

} // namespace drillport
