#include "drillport/model.hpp"

#include <algorithm>
#include <cmath>

#include "drillport/error.hpp"

namespace drillport {

namespace {

double scale_of(double rhs) { return rhs > 0.0 && std::isfinite(rhs) ? rhs : 1.0; }

ConstraintEntry floor_entry(double achieved, double lb) {
    return {achieved - lb, std::max(0.0, lb - achieved), scale_of(lb)};
}

ConstraintEntry cap_entry(double achieved, double ub) {
    return {ub - achieved, std::max(0.0, achieved - ub), scale_of(ub)};
}

void check_length(const Bits& z, std::size_t n) {
    if (z.size() != n) {
        throw InputError("chromosome length " + std::to_string(z.size()) +
                         " does not match project count " + std::to_string(n));
    }
}

} // namespace

double Project::emv_value() const {
    if (kind == ProjectKind::Trap) return npv * pos - cost;
    return npv * pos - npv * (1.0 - pos);
}

void validate_project(const Project& p) {
    const auto where = "project " + (p.id.empty() ? std::string("<unnamed>") : p.id) + ": ";
    if (!(p.pos >= 0.0 && p.pos <= 1.0)) {
        throw InputError(where + "probability of success " + std::to_string(p.pos) +
                         " outside [0, 1]");
    }
    if (!(p.cost >= 0.0)) throw InputError(where + "cost must be non-negative");
    if (p.well_count < 0) throw InputError(where + "well count must be non-negative");
    for (double v : {p.pre_or, p.pre_gr, p.cor, p.cgr, p.pro_or, p.pro_gr, p.npv}) {
        if (!std::isfinite(v)) throw InputError(where + "non-finite field");
    }
}

void PlanTargets::validate() const {
    if (tot_wells < 1) throw InputError("tot_wells must be at least 1");
    for (double v : {pred_lb_oi, pred_lb_ga, cont_lb_oi, cont_lb_ga, prov_lb_oi, prov_lb_ga,
                     drill_lb, thre_well}) {
        if (!(v >= 0.0)) throw InputError("reserve floors and thresholds must be non-negative");
    }
    if (l_ub < 0) throw InputError("l_ub must be non-negative");
    if (!(cost_ub_tra >= 0.0) || !(cost_ub_app >= 0.0)) {
        throw InputError("budgets must be non-negative");
    }
    for (const auto& [region, q] : quotas) {
        if (q.traps < 0 || q.appraisals < 0) {
            throw InputError("region quota for " + region + " must be non-negative");
        }
    }
}

std::string_view constraint_name(Constraint c) {
    static constexpr std::array<std::string_view, kConstraintCount> names = {
        "well_count", "pred_oil", "pred_gas", "cont_oil", "cont_gas", "prov_oil",
        "prov_gas", "mean_pos", "low_success", "trap_budget", "appraisal_budget",
        "region_quota"};
    return names[static_cast<std::size_t>(c)];
}

bool ConstraintReport::feasible() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ConstraintEntry& e) { return e.satisfied(); });
}

double ConstraintReport::total_violation() const {
    double total = 0.0;
    for (const auto& e : entries) total += e.violation / e.scale;
    return total;
}

RunningStats welford_add(const RunningStats& stats, double g) {
    RunningStats out;
    out.n = stats.n + 1;
    out.mu = stats.mu + (g - stats.mu) / static_cast<double>(out.n);
    out.m = out.n <= 1 ? 0.0 : stats.m + (g - stats.mu) * (g - out.mu);
    return out;
}

RunningStats welford_remove(const RunningStats& stats, double g) {
    if (stats.n == 0) throw InputError("welford_remove: no values to remove");
    RunningStats out;
    out.n = stats.n - 1;
    if (out.n == 0) return out;
    out.mu = (static_cast<double>(stats.n) * stats.mu - g) / static_cast<double>(out.n);
    out.m = out.n <= 1 ? 0.0 : std::max(0.0, stats.m - (g - out.mu) * (g - stats.mu));
    return out;
}

double delta_m(const RunningStats& stats, double g, Flip direction) {
    if (direction == Flip::ZeroToOne) return welford_add(stats, g).m - stats.m;
    return welford_remove(stats, g).m - stats.m;
}

RunningStats selection_stats(const Bits& z, std::span<const double> risk_values) {
    RunningStats s;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i]) s = welford_add(s, risk_values[i]);
    }
    return s;
}

double objective_emv(const Bits& z, std::span<const Project> projects) {
    check_length(z, projects.size());
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i]) total += projects[i].emv_value();
    }
    return total;
}

double objective_risk(const Bits& z, std::span<const Project> projects) {
    check_length(z, projects.size());
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i]) {
            sum += projects[i].risk_value();
            ++n;
        }
    }
    if (n < 2) return 0.0;
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i]) {
            const double d = projects[i].risk_value() - mu;
            ss += d * d;
        }
    }
    return std::sqrt(ss);
}

ConstraintReport evaluate_constraints(const Bits& z, std::span<const Project> projects,
                                      const PlanTargets& targets) {
    check_length(z, projects.size());
    double wells = 0.0;
    double pred_oi = 0.0, pred_ga = 0.0, cont_oi = 0.0, cont_ga = 0.0, prov_oi = 0.0,
           prov_ga = 0.0;
    double weighted_pos = 0.0;
    long low_success = 0;
    double cost_tra = 0.0, cost_app = 0.0;
    std::map<std::string, RegionQuota> counts;

    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!z[i]) continue;
        const Project& p = projects[i];
        wells += p.well_count;
        weighted_pos += p.pos * p.well_count;
        if (p.pos < targets.thre_well) ++low_success;
        if (p.kind == ProjectKind::Trap) {
            pred_oi += p.pre_or;
            pred_ga += p.pre_gr;
            cost_tra += p.cost;
            ++counts[p.region].traps;
        } else {
            cont_oi += p.cor;
            cont_ga += p.cgr;
            prov_oi += p.pro_or;
            prov_ga += p.pro_gr;
            cost_app += p.cost;
            ++counts[p.region].appraisals;
        }
    }

    ConstraintReport r;
    auto& e = r.entries;
    const double tot = static_cast<double>(targets.tot_wells);
    e[static_cast<std::size_t>(Constraint::WellCount)] = {wells - tot, std::abs(wells - tot),
                                                          scale_of(tot)};
    e[static_cast<std::size_t>(Constraint::PredOil)] = floor_entry(pred_oi, targets.pred_lb_oi);
    e[static_cast<std::size_t>(Constraint::PredGas)] = floor_entry(pred_ga, targets.pred_lb_ga);
    e[static_cast<std::size_t>(Constraint::ContOil)] = floor_entry(cont_oi, targets.cont_lb_oi);
    e[static_cast<std::size_t>(Constraint::ContGas)] = floor_entry(cont_ga, targets.cont_lb_ga);
    e[static_cast<std::size_t>(Constraint::ProvOil)] = floor_entry(prov_oi, targets.prov_lb_oi);
    e[static_cast<std::size_t>(Constraint::ProvGas)] = floor_entry(prov_ga, targets.prov_lb_ga);
    // An empty well set has no mean; it is scored as 0.
    const double mean_pos = wells > 0.0 ? weighted_pos / wells : 0.0;
    e[static_cast<std::size_t>(Constraint::MeanPos)] = floor_entry(mean_pos, targets.drill_lb);
    e[static_cast<std::size_t>(Constraint::LowSuccess)] =
        cap_entry(static_cast<double>(low_success), static_cast<double>(targets.l_ub));
    e[static_cast<std::size_t>(Constraint::TrapBudget)] = cap_entry(cost_tra, targets.cost_ub_tra);
    e[static_cast<std::size_t>(Constraint::AppraisalBudget)] =
        cap_entry(cost_app, targets.cost_ub_app);

    double shortfall = 0.0;
    double quota_total = 0.0;
    for (const auto& [region, quota] : targets.quotas) {
        const auto it = counts.find(region);
        const RegionQuota have = it == counts.end() ? RegionQuota{} : it->second;
        shortfall += static_cast<double>(std::max(0L, quota.traps - have.traps));
        shortfall += static_cast<double>(std::max(0L, quota.appraisals - have.appraisals));
        quota_total += static_cast<double>(quota.traps + quota.appraisals);
    }
    e[static_cast<std::size_t>(Constraint::RegionQuota)] = {-shortfall, shortfall,
                                                            scale_of(quota_total)};
    return r;
}

bool is_feasible(const Bits& z, std::span<const Project> projects, const PlanTargets& targets) {
    return evaluate_constraints(z, projects, targets).feasible();
}

Problem::Problem(std::vector<Project> projects, PlanTargets targets)
    : projects_(std::move(projects)), targets_(std::move(targets)) {
    if (projects_.empty()) throw InputError("problem has no projects");
    targets_.validate();
    std::map<std::pair<std::string, ProjectKind>, std::size_t> groups;
    for (const auto& p : projects_) {
        validate_project(p);
        emv_values_.push_back(p.emv_value());
        risk_values_.push_back(p.risk_value());
        wells_.push_back(p.well_count);
        mandatory_.push_back(p.mandatory ? 1 : 0);
        const auto key = std::make_pair(p.region, p.kind);
        auto [it, inserted] = groups.try_emplace(key, group_quota_.size());
        if (inserted) {
            const auto q = targets_.quotas.find(p.region);
            long quota = 0;
            if (q != targets_.quotas.end()) {
                quota = p.kind == ProjectKind::Trap ? q->second.traps : q->second.appraisals;
            }
            group_quota_.push_back(quota);
        }
        group_.push_back(it->second);
    }
}

long Problem::mandatory_wells() const {
    long total = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (mandatory_[i]) total += wells_[i];
    }
    return total;
}

long Problem::total_wells_available() const {
    long total = 0;
    for (int w : wells_) total += w;
    return total;
}

Evaluation Problem::evaluate(const Bits& z) const {
    Evaluation ev;
    ev.emv = objective_emv(z, projects_);
    ev.risk = objective_risk(z, projects_);
    ev.constraints = evaluate_constraints(z, projects_, targets_);
    ev.violation = ev.constraints.total_violation();
    return ev;
}

void Problem::enforce_mandatory(Bits& z) const {
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (mandatory_[i]) z[i] = 1;
    }
}

long Problem::well_sum(const Bits& z) const {
    long total = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i]) total += wells_[i];
    }
    return total;
}

} // namespace drillport
