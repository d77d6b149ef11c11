#include "drillport/selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drillport/error.hpp"

namespace drillport {

namespace {

void require_nonempty(std::span<const Point2> front) {
    if (front.empty()) throw InputError("selection: front is empty");
}

bool near_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Best index under score (higher_better), ties to lower risk then lower index.
std::size_t argbest(std::span<const Point2> front, const std::vector<double>& score,
                    bool higher_better) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < front.size(); ++i) {
        if (!near_equal(score[i], score[best])) {
            if (higher_better ? score[i] > score[best] : score[i] < score[best]) best = i;
        } else if (front[i].f2 < front[best].f2) {
            best = i;
        }
    }
    return best;
}

} // namespace

std::string_view selection_method_name(SelectionMethod m) {
    switch (m) {
    case SelectionMethod::Ideal: return "ideal";
    case SelectionMethod::Knee: return "knee";
    case SelectionMethod::HvContribution: return "hv";
    }
    return "ideal";
}

SelectionMethod parse_selection_method(std::string_view name) {
    if (name == "ideal") return SelectionMethod::Ideal;
    if (name == "knee") return SelectionMethod::Knee;
    if (name == "hv" || name == "hv_contribution") return SelectionMethod::HvContribution;
    throw InputError("unknown selection method '" + std::string(name) + "'");
}

std::vector<Point2> normalize_front(std::span<const Point2> front) {
    std::vector<Point2> out(front.begin(), front.end());
    if (front.empty()) return out;
    auto [lo1, hi1] = std::minmax_element(front.begin(), front.end(),
                                          [](auto& a, auto& b) { return a.f1 < b.f1; });
    auto [lo2, hi2] = std::minmax_element(front.begin(), front.end(),
                                          [](auto& a, auto& b) { return a.f2 < b.f2; });
    const double a1 = lo1->f1, r1 = hi1->f1 - lo1->f1;
    const double a2 = lo2->f2, r2 = hi2->f2 - lo2->f2;
    for (auto& p : out) {
        p.f1 = r1 > 0.0 ? (p.f1 - a1) / r1 : 0.0;
        p.f2 = r2 > 0.0 ? (p.f2 - a2) / r2 : 0.0;
    }
    return out;
}

RepresentativeChoice ideal_point_select(std::span<const Point2> front) {
    require_nonempty(front);
    const auto norm = normalize_front(front);
    std::vector<double> dist(norm.size());
    for (std::size_t i = 0; i < norm.size(); ++i) dist[i] = std::hypot(norm[i].f1, norm[i].f2);
    const std::size_t best = argbest(front, dist, false);
    return {SelectionMethod::Ideal, best, norm[best], dist[best], false};
}

RepresentativeChoice knee_select(std::span<const Point2> front) {
    require_nonempty(front);
    auto fallback = [&] {
        auto c = ideal_point_select(front);
        c.method = SelectionMethod::Knee;
        c.fallback = true;
        return c;
    };
    if (front.size() < 3) return fallback();
    const auto norm = normalize_front(front);
    // Extremes: best f1 (ties lower f2) and best f2 (ties lower f1).
    std::size_t e1 = 0, e2 = 0;
    for (std::size_t i = 1; i < norm.size(); ++i) {
        if (norm[i].f1 < norm[e1].f1 || (norm[i].f1 == norm[e1].f1 && norm[i].f2 < norm[e1].f2)) e1 = i;
        if (norm[i].f2 < norm[e2].f2 || (norm[i].f2 == norm[e2].f2 && norm[i].f1 < norm[e2].f1)) e2 = i;
    }
    const Point2 a = norm[e1], b = norm[e2];
    const double dx = b.f1 - a.f1, dy = b.f2 - a.f2;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) return fallback();
    // Positive on the side of the chord facing the ideal corner.
    const double sign = (dx * (0.0 - a.f2) - dy * (0.0 - a.f1)) >= 0.0 ? 1.0 : -1.0;
    std::vector<double> dist(norm.size());
    for (std::size_t i = 0; i < norm.size(); ++i) {
        dist[i] = sign * (dx * (norm[i].f2 - a.f2) - dy * (norm[i].f1 - a.f1)) / len;
    }
    const std::size_t best = argbest(front, dist, true);
    if (!(dist[best] > 1e-12)) return fallback();
    return {SelectionMethod::Knee, best, norm[best], dist[best], false};
}

std::vector<double> hv_contributions(std::span<const Point2> front, const Point2& r) {
    const double total = hypervolume(front, r);
    std::vector<double> out(front.size());
    std::vector<Point2> rest;
    for (std::size_t i = 0; i < front.size(); ++i) {
        rest.assign(front.begin(), front.end());
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        out[i] = total - hypervolume(rest, r);
    }
    return out;
}

RepresentativeChoice hv_contribution_select(std::span<const Point2> front, const Point2& r) {
    require_nonempty(front);
    const auto contrib = hv_contributions(front, r);
    const std::size_t best = argbest(front, contrib, true);
    return {SelectionMethod::HvContribution, best, normalize_front(front)[best], contrib[best],
            false};
}

std::vector<std::vector<std::size_t>> stratify_by_risk(std::span<const Point2> front,
                                                       std::size_t n_tiers) {
    require_nonempty(front);
    if (n_tiers == 0) throw InputError("stratify_by_risk: n_tiers must be at least 1");
    const auto norm = normalize_front(front);
    std::vector<std::vector<std::size_t>> tiers(n_tiers);
    for (std::size_t i = 0; i < norm.size(); ++i) {
        const auto t = static_cast<std::size_t>(std::floor(norm[i].f2 * static_cast<double>(n_tiers)));
        tiers[std::min(t, n_tiers - 1)].push_back(i);
    }
    return tiers;
}

} // namespace drillport
