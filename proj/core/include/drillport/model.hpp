#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drillport {

enum class ProjectKind { Trap, Appraisal };

/// One drilling candidate. Traps carry the predicted (pre_*) reserves,
/// appraisals the contingent (c*) and proved (pro_*) ones. pos is GPoS for
/// traps and EPoS for appraisals.
struct Project {
    std::string id;
    std::string region;
    ProjectKind kind = ProjectKind::Trap;
    double pre_or = 0.0;  // 10^4 t
    double pre_gr = 0.0;  // 10^8 m^3
    double cor = 0.0;
    double cgr = 0.0;
    double pro_or = 0.0;
    double pro_gr = 0.0;
    double cost = 0.0;    // 10^4 CNY
    double npv = 0.0;     // 10^4 CNY
    double pos = 0.0;
    int well_count = 0;   // 0 marks a reserve-providing appraisal well
    bool mandatory = false;

    /// Per-project term of the EMV objective: npv*pos - cost for traps,
    /// npv*pos - npv*(1 - pos) for appraisals.
    [[nodiscard]] double emv_value() const;
    /// Per-project term of the risk objective, npv * pos.
    [[nodiscard]] double risk_value() const { return npv * pos; }
};

/// Throws InputError when a project violates its field invariants.
void validate_project(const Project& p);

/// Selection vector over the project list, one byte per locus (0 or 1).
using Bits = std::vector<std::uint8_t>;

struct RegionQuota {
    long traps = 0;
    long appraisals = 0;
};

/// Right-hand sides of every constraint family. Defaults leave each family
/// inactive except the well-count equality.
struct PlanTargets {
    long tot_wells = 1;
    double pred_lb_oi = 0.0;
    double pred_lb_ga = 0.0;
    double cont_lb_oi = 0.0;
    double cont_lb_ga = 0.0;
    double prov_lb_oi = 0.0;
    double prov_lb_ga = 0.0;
    double drill_lb = 0.0;
    double thre_well = 0.0;
    long l_ub = std::numeric_limits<long>::max();
    double cost_ub_tra = std::numeric_limits<double>::infinity();
    double cost_ub_app = std::numeric_limits<double>::infinity();
    std::map<std::string, RegionQuota> quotas;

    void validate() const;
};

/// Constraint families a..l in model order.
enum class Constraint : std::size_t {
    WellCount,       // a: sum w_i z_i == tot_wells
    PredOil,         // b
    PredGas,         // c
    ContOil,         // d
    ContGas,         // e
    ProvOil,         // f
    ProvGas,         // g
    MeanPos,         // h: well-weighted mean pos >= drill_lb
    LowSuccess,      // i: #{pos < thre_well} <= l_ub
    TrapBudget,      // j
    AppraisalBudget, // k
    RegionQuota,     // l: per-region trap and appraisal minimum counts
};
inline constexpr std::size_t kConstraintCount = 12;

std::string_view constraint_name(Constraint c);

/// slack is the signed distance inside the bound (>= 0 satisfied) for
/// inequality families, and sum(w z) - tot_wells for the well-count equality.
/// violation is the non-negative amount by which the constraint fails.
struct ConstraintEntry {
    double slack = 0.0;
    double violation = 0.0;
    double scale = 1.0; // magnitude used to normalise violation

    [[nodiscard]] bool satisfied() const { return violation == 0.0; }
};

struct ConstraintReport {
    std::array<ConstraintEntry, kConstraintCount> entries{};

    [[nodiscard]] const ConstraintEntry& operator[](Constraint c) const {
        return entries[static_cast<std::size_t>(c)];
    }
    [[nodiscard]] bool feasible() const;
    /// Sum of scale-normalised violations; 0 exactly when feasible.
    [[nodiscard]] double total_violation() const;
};

/// Running count, mean and sum of squared deviations (Welford).
struct RunningStats {
    std::size_t n = 0;
    double mu = 0.0;
    double m = 0.0;

    [[nodiscard]] double risk() const { return std::sqrt(m); }
};

RunningStats welford_add(const RunningStats& stats, double g);
/// Exact inverse of welford_add; g must have been added before.
RunningStats welford_remove(const RunningStats& stats, double g);

enum class Flip { ZeroToOne, OneToZero };

/// Change in the second moment M if g were added (ZeroToOne) or removed.
double delta_m(const RunningStats& stats, double g, Flip direction);

/// Folds welford_add over the risk values of the selected projects.
RunningStats selection_stats(const Bits& z, std::span<const double> risk_values);

double objective_emv(const Bits& z, std::span<const Project> projects);
double objective_risk(const Bits& z, std::span<const Project> projects);

ConstraintReport evaluate_constraints(const Bits& z, std::span<const Project> projects,
                                      const PlanTargets& targets);
bool is_feasible(const Bits& z, std::span<const Project> projects, const PlanTargets& targets);

struct Evaluation {
    double emv = 0.0;
    double risk = 0.0;
    ConstraintReport constraints;
    double violation = 0.0;

    [[nodiscard]] bool feasible() const { return violation == 0.0; }
};

/// A validated prospect list plus targets, with the per-locus vectors the
/// operators and the solver read on every evaluation.
class Problem {
public:
    Problem(std::vector<Project> projects, PlanTargets targets);

    [[nodiscard]] std::size_t size() const { return projects_.size(); }
    [[nodiscard]] std::span<const Project> projects() const { return projects_; }
    [[nodiscard]] const Project& project(std::size_t i) const { return projects_[i]; }
    [[nodiscard]] const PlanTargets& targets() const { return targets_; }

    [[nodiscard]] std::span<const double> emv_values() const { return emv_values_; }
    [[nodiscard]] std::span<const double> risk_values() const { return risk_values_; }
    [[nodiscard]] std::span<const int> wells() const { return wells_; }
    [[nodiscard]] std::span<const std::uint8_t> mandatory() const { return mandatory_; }

    /// Group id for (region, kind); quotas are kept per group.
    [[nodiscard]] std::size_t group(std::size_t i) const { return group_[i]; }
    [[nodiscard]] std::size_t group_count() const { return group_quota_.size(); }
    [[nodiscard]] long group_quota(std::size_t g) const { return group_quota_[g]; }

    [[nodiscard]] long mandatory_wells() const;
    [[nodiscard]] long total_wells_available() const;

    [[nodiscard]] Evaluation evaluate(const Bits& z) const;
    /// Sets every mandatory locus to 1.
    void enforce_mandatory(Bits& z) const;
    [[nodiscard]] long well_sum(const Bits& z) const;

private:
    std::vector<Project> projects_;
    PlanTargets targets_;
    std::vector<double> emv_values_;
    std::vector<double> risk_values_;
    std::vector<int> wells_;
    std::vector<std::uint8_t> mandatory_;
    std::vector<std::size_t> group_;
    std::vector<long> group_quota_;
};

} // namespace drillport
