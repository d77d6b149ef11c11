#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "drillport/model.hpp"
#include "drillport/rng.hpp"

namespace drillport {

struct TargetDerivation {
    PlanTargets targets;
    double floor_percentile = 0.0; // percentile used for floors and quotas
    double cap_percentile = 0.0;   // percentile used for budgets and l_ub
    std::size_t samples = 0;
    std::size_t jointly_feasible = 0;
};

/// Random portfolio meeting the well-count equality: mandatory projects
/// first, then the rest in random order while they fit; zero-well projects
/// join with probability 1/2.
Bits random_well_portfolio(const std::vector<Project>& projects, long tot_wells, Rng& rng);

/// Sets every unpublished target from random well-feasible portfolios so
/// that each target on its own is met by `percentile` percent of them:
/// floors and region quotas sit at the (100 - percentile)th percentile of
/// what the samples achieve (rounded down), budgets and the low-success cap
/// at the percentile-th (rounded up). When no sample meets all targets
/// together, percentile is raised in steps of 5 until one does.
TargetDerivation derive_targets(const std::vector<Project>& projects, long tot_wells,
                                double thre_well, std::size_t samples, double percentile,
                                std::uint64_t seed);

} // namespace drillport
