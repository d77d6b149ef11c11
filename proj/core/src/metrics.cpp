#include "drillport/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drillport/error.hpp"

namespace drillport {

bool pareto_dominates(const Point2& a, const Point2& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

std::vector<Point2> nondominated(std::span<const Point2> points) {
    std::vector<Point2> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Point2> out;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (const auto& p : sorted) {
        if (p.f2 < best_f2) {
            out.push_back(p);
            best_f2 = p.f2;
        }
    }
    return out;
}

double hypervolume(std::span<const Point2> points, const Point2& r) {
    std::vector<Point2> inside;
    for (const auto& p : points) {
        if (!std::isfinite(p.f1) || !std::isfinite(p.f2)) {
            throw InputError("hypervolume: non-finite point");
        }
        if (p.f1 < r.f1 && p.f2 < r.f2) inside.push_back(p);
    }
    const auto front = nondominated(inside);
    double area = 0.0;
    double prev_f2 = r.f2;
    for (const auto& p : front) {
        area += (r.f1 - p.f1) * (prev_f2 - p.f2);
        prev_f2 = p.f2;
    }
    return area;
}

double igd(std::span<const Point2> pf, std::span<const Point2> pf_star) {
    if (pf.empty() || pf_star.empty()) throw InputError("igd: both sets must be nonempty");
    double total = 0.0;
    for (const auto& y : pf_star) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& x : pf) best = std::min(best, std::hypot(y.f1 - x.f1, y.f2 - x.f2));
        total += best;
    }
    return total / static_cast<double>(pf_star.size());
}

double spacing(std::span<const Point2> pf) {
    if (pf.size() < 2) throw InputError("spacing: at least two points required");
    std::vector<double> d(pf.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < pf.size(); ++i) {
        for (std::size_t j = 0; j < pf.size(); ++j) {
            if (i == j) continue;
            d[i] = std::min(d[i], std::abs(pf[i].f1 - pf[j].f1) + std::abs(pf[i].f2 - pf[j].f2));
        }
    }
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(d.size() - 1));
}

std::optional<double> set_coverage(std::span<const Point2> a, std::span<const Point2> b) {
    if (b.empty()) return std::nullopt;
    std::size_t covered = 0;
    for (const auto& y : b) {
        if (std::any_of(a.begin(), a.end(), [&](const Point2& x) { return pareto_dominates(x, y); })) {
            ++covered;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(b.size());
}

Point2 reference_point(std::span<const std::vector<Point2>> sets, double inflate) {
    double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
    double lo2 = lo1, hi2 = hi1;
    std::size_t count = 0;
    for (const auto& s : sets) {
        for (const auto& p : s) {
            lo1 = std::min(lo1, p.f1);
            hi1 = std::max(hi1, p.f1);
            lo2 = std::min(lo2, p.f2);
            hi2 = std::max(hi2, p.f2);
            ++count;
        }
    }
    if (count == 0) throw InputError("reference_point: no points");
    auto pad = [inflate](double lo, double hi) {
        const double range = hi - lo;
        return range > 0.0 ? inflate * range : inflate * std::max(1.0, std::abs(hi));
    };
    return {hi1 + pad(lo1, hi1), hi2 + pad(lo2, hi2)};
}

std::vector<Point2> reference_front(std::span<const std::vector<Point2>> sets) {
    std::vector<Point2> all;
    for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
    return nondominated(all);
}

MetricTable compute_metric_table(const std::vector<std::string>& names,
                                 const std::vector<std::vector<Point2>>& fronts, double inflate) {
    if (names.size() != fronts.size()) throw InputError("metric table: names and fronts differ");
    for (std::size_t i = 0; i < fronts.size(); ++i) {
        if (fronts[i].empty()) throw InputError("metric table: front '" + names[i] + "' is empty");
    }
    MetricTable t;
    t.names = names;
    t.reference = reference_point(fronts, inflate);
    const auto star = reference_front(fronts);
    for (const auto& f : fronts) {
        t.hv.push_back(hypervolume(f, t.reference));
        t.igd.push_back(igd(f, star));
        t.spacing.push_back(f.size() >= 2 ? std::optional<double>(spacing(f)) : std::nullopt);
    }
    t.coverage.assign(fronts.size(), std::vector<std::optional<double>>(fronts.size()));
    for (std::size_t a = 0; a < fronts.size(); ++a) {
        for (std::size_t b = 0; b < fronts.size(); ++b) {
            if (a != b) t.coverage[a][b] = set_coverage(fronts[a], fronts[b]);
        }
    }
    return t;
}

} // namespace drillport
