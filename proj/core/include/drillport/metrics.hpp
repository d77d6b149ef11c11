#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drillport {

/// Objective pair in canonical min-min orientation: f1 = -EMV, f2 = risk.
struct Point2 {
    double f1 = 0.0;
    double f2 = 0.0;

    auto operator<=>(const Point2&) const = default;
};

/// a is no worse than b in both objectives and strictly better in one.
bool pareto_dominates(const Point2& a, const Point2& b);

/// Non-dominated subset, duplicates removed, sorted by f1 ascending.
std::vector<Point2> nondominated(std::span<const Point2> points);

/// Exact 2-D dominated area relative to r. Points not strictly better than r
/// in both objectives contribute nothing.
double hypervolume(std::span<const Point2> points, const Point2& r);

/// Mean distance from each reference point to its nearest member of pf.
double igd(std::span<const Point2> pf, std::span<const Point2> pf_star);

/// Sample standard deviation of nearest-neighbour L1 distances.
double spacing(std::span<const Point2> pf);

/// Fraction of b dominated by some member of a; empty when b is empty.
std::optional<double> set_coverage(std::span<const Point2> a, std::span<const Point2> b);

/// Componentwise worst over all sets, pushed out by inflate times the range.
/// A zero range is padded by inflate * max(1, |worst|).
Point2 reference_point(std::span<const std::vector<Point2>> sets, double inflate = 0.1);

/// Non-dominated subset of the union of all sets.
std::vector<Point2> reference_front(std::span<const std::vector<Point2>> sets);

/// Table of HV, IGD and spacing per front plus the pairwise coverage matrix,
/// all against a shared reference point and reference front.
struct MetricTable {
    std::vector<std::string> names;
    Point2 reference;
    std::vector<double> hv;
    std::vector<double> igd;
    std::vector<std::optional<double>> spacing; // absent for fronts of one point
    std::vector<std::vector<std::optional<double>>> coverage; // [a][b], diagonal absent
};

MetricTable compute_metric_table(const std::vector<std::string>& names,
                                 const std::vector<std::vector<Point2>>& fronts,
                                 double inflate = 0.1);

} // namespace drillport
