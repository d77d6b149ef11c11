#include "drillport/targets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "drillport/error.hpp"
#include "drillport/uncertainty.hpp"

namespace drillport {

namespace {

struct Achieved {
    double pred_oi = 0, pred_ga = 0, cont_oi = 0, cont_ga = 0, prov_oi = 0, prov_ga = 0;
    double mean_pos = 0, low = 0, cost_tra = 0, cost_app = 0;
    std::map<std::string, RegionQuota> counts;
};

Achieved measure(const Bits& z, const std::vector<Project>& projects, double thre_well) {
    Achieved a;
    double wells = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!z[i]) continue;
        const Project& p = projects[i];
        wells += p.well_count;
        weighted += p.pos * p.well_count;
        if (p.pos < thre_well) a.low += 1;
        if (p.kind == ProjectKind::Trap) {
            a.pred_oi += p.pre_or;
            a.pred_ga += p.pre_gr;
            a.cost_tra += p.cost;
            ++a.counts[p.region].traps;
        } else {
            a.cont_oi += p.cor;
            a.cont_ga += p.cgr;
            a.prov_oi += p.pro_or;
            a.prov_ga += p.pro_gr;
            a.cost_app += p.cost;
            ++a.counts[p.region].appraisals;
        }
    }
    a.mean_pos = wells > 0 ? weighted / wells : 0.0;
    return a;
}

PlanTargets targets_at(const std::vector<Achieved>& s, long tot_wells, double thre_well,
                       const std::set<std::string>& regions, double qf, double qc) {
    auto pick = [&](auto get, double q) {
        std::vector<double> v;
        v.reserve(s.size());
        for (const auto& a : s) v.push_back(get(a));
        return empirical_quantile(std::move(v), q / 100.0);
    };
    PlanTargets t;
    t.tot_wells = tot_wells;
    t.thre_well = thre_well;
    t.pred_lb_oi = std::floor(pick([](const Achieved& a) { return a.pred_oi; }, qf));
    t.pred_lb_ga = std::floor(pick([](const Achieved& a) { return a.pred_ga; }, qf));
    t.cont_lb_oi = std::floor(pick([](const Achieved& a) { return a.cont_oi; }, qf));
    t.cont_lb_ga = std::floor(pick([](const Achieved& a) { return a.cont_ga; }, qf));
    t.prov_lb_oi = std::floor(pick([](const Achieved& a) { return a.prov_oi; }, qf));
    t.prov_lb_ga = std::floor(pick([](const Achieved& a) { return a.prov_ga; }, qf));
    t.drill_lb = std::floor(100.0 * pick([](const Achieved& a) { return a.mean_pos; }, qf)) / 100.0;
    t.l_ub = static_cast<long>(std::ceil(pick([](const Achieved& a) { return a.low; }, qc)));
    t.cost_ub_tra = std::ceil(pick([](const Achieved& a) { return a.cost_tra; }, qc));
    t.cost_ub_app = std::ceil(pick([](const Achieved& a) { return a.cost_app; }, qc));
    for (const auto& r : regions) {
        auto count = [&](bool trap) {
            return [&, trap](const Achieved& a) {
                const auto it = a.counts.find(r);
                if (it == a.counts.end()) return 0.0;
                return static_cast<double>(trap ? it->second.traps : it->second.appraisals);
            };
        };
        RegionQuota q;
        q.traps = static_cast<long>(std::floor(pick(count(true), qf)));
        q.appraisals = static_cast<long>(std::floor(pick(count(false), qf)));
        if (q.traps > 0 || q.appraisals > 0) t.quotas[r] = q;
    }
    return t;
}

} // namespace

Bits random_well_portfolio(const std::vector<Project>& projects, long tot_wells, Rng& rng) {
    Bits z(projects.size(), 0);
    long sum = 0;
    for (std::size_t i = 0; i < projects.size(); ++i) {
        if (projects[i].mandatory) {
            z[i] = 1;
            sum += projects[i].well_count;
        }
    }
    std::vector<std::size_t> order(projects.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(0.5);
    for (auto i : order) {
        if (z[i]) continue;
        const long w = projects[i].well_count;
        if (w == 0) {
            z[i] = coin(rng) ? 1 : 0;
        } else if (sum + w <= tot_wells) {
            z[i] = 1;
            sum += w;
        }
    }
    return z;
}

TargetDerivation derive_targets(const std::vector<Project>& projects, long tot_wells,
                                double thre_well, std::size_t samples, double percentile,
                                std::uint64_t seed) {
    if (samples == 0) throw InputError("derive_targets: samples must be positive");
    if (!(percentile >= 0.0 && percentile <= 100.0)) {
        throw InputError("derive_targets: percentile must lie in [0, 100]");
    }
    PlanTargets wells_only;
    wells_only.tot_wells = tot_wells;
    const Problem problem(projects, wells_only);
    if (problem.mandatory_wells() > tot_wells || problem.total_wells_available() < tot_wells) {
        throw ConfigError("derive_targets: tot_wells is unreachable for this project list");
    }
    Rng rng = make_rng(seed, {});
    std::vector<Bits> portfolios;
    std::vector<Achieved> achieved;
    for (std::size_t attempts = 0; portfolios.size() < samples; ++attempts) {
        if (attempts > 100 * samples) {
            throw ConfigError("derive_targets: random portfolios rarely meet tot_wells exactly");
        }
        Bits z = random_well_portfolio(projects, tot_wells, rng);
        if (problem.well_sum(z) != tot_wells) continue;
        achieved.push_back(measure(z, projects, thre_well));
        portfolios.push_back(std::move(z));
    }
    std::set<std::string> regions;
    for (const auto& p : projects) regions.insert(p.region);

    TargetDerivation d;
    d.samples = samples;
    for (double q = percentile;; q = std::min(100.0, q + 5.0)) {
        PlanTargets t = targets_at(achieved, tot_wells, thre_well, regions, 100.0 - q, q);
        const auto ok = static_cast<std::size_t>(std::count_if(
            portfolios.begin(), portfolios.end(),
            [&](const Bits& z) { return is_feasible(z, projects, t); }));
        if (ok > 0 || q >= 100.0) {
            d.targets = std::move(t);
            d.floor_percentile = 100.0 - q;
            d.cap_percentile = q;
            d.jointly_feasible = ok;
            return d;
        }
    }
}

} // namespace drillport
