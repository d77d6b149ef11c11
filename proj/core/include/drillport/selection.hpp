#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "drillport/metrics.hpp"

namespace drillport {

enum class SelectionMethod { Ideal, Knee, HvContribution };

std::string_view selection_method_name(SelectionMethod m);
SelectionMethod parse_selection_method(std::string_view name);

struct RepresentativeChoice {
    SelectionMethod method = SelectionMethod::Ideal;
    std::size_t index = 0;    // position in the input front
    Point2 normalized;        // chosen point after min-max normalisation
    double score = 0.0;       // distance, chord distance or HV contribution
    bool fallback = false;    // knee fell back to the ideal point
};

/// Min-max normalisation of each objective over the front. A constant
/// objective maps to 0.
std::vector<Point2> normalize_front(std::span<const Point2> front);

RepresentativeChoice ideal_point_select(std::span<const Point2> front);
RepresentativeChoice knee_select(std::span<const Point2> front);
RepresentativeChoice hv_contribution_select(std::span<const Point2> front, const Point2& r);

/// Leave-one-out HV contribution of every point.
std::vector<double> hv_contributions(std::span<const Point2> front, const Point2& r);

/// Equal-width bands of normalised risk (f2); tiers[t] lists front indices.
std::vector<std::vector<std::size_t>> stratify_by_risk(std::span<const Point2> front,
                                                       std::size_t n_tiers = 3);

} // namespace drillport
