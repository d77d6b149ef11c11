#pragma once

// Reference implementations used only by the tests. Each one is written
// independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "drillport/metrics.hpp"
#include "drillport/model.hpp"

namespace oracle {

struct Moments {
    std::size_t n = 0;
    double mu = 0.0;
    double m = 0.0;
};

// Two-pass mean and sum of squared deviations.
inline Moments two_pass(const std::vector<double>& v) {
    Moments r;
    r.n = v.size();
    if (v.empty()) return r;
    double s = 0.0;
    for (double x : v) s += x;
    r.mu = s / static_cast<double>(v.size());
    for (double x : v) r.m += (x - r.mu) * (x - r.mu);
    return r;
}

// Cyclic Jacobi rotations; returns eigenvalues in ascending order.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int sweeps = 100) {
    const auto n = a.rows();
    for (int s = 0; s < sweeps; ++s) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-26) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Spearman coefficient from plain rank sums (no ties expected).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i + 1);
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

inline bool dominates(const drillport::Point2& a, const drillport::Point2& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

// O(n^2) peeling into ranks.
inline std::vector<int> ranks(const std::vector<drillport::Point2>& pts) {
    std::vector<int> rank(pts.size(), -1);
    int r = 0;
    std::size_t done = 0;
    while (done < pts.size()) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (rank[i] >= 0) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                if (j != i && rank[j] < 0 && dominates(pts[j], pts[i])) dominated = true;
            }
            if (!dominated) layer.push_back(i);
        }
        for (auto i : layer) rank[i] = r;
        done += layer.size();
        ++r;
    }
    return rank;
}

// Monte Carlo estimate of the area dominated by pts inside [lo, r].
inline double mc_hypervolume(const std::vector<drillport::Point2>& pts, drillport::Point2 lo,
                             drillport::Point2 r, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.f1, r.f1), uy(lo.f2, r.f2);
    std::size_t hit = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = ux(rng), y = uy(rng);
        for (const auto& p : pts) {
            if (p.f1 <= x && p.f2 <= y) {
                ++hit;
                break;
            }
        }
    }
    return (r.f1 - lo.f1) * (r.f2 - lo.f2) * static_cast<double>(hit) /
           static_cast<double>(samples);
}

// Exhaustive Pareto set of all feasible portfolios that keep every mandatory
// project, as objective points.
inline std::vector<drillport::Point2> brute_force_front(const drillport::Problem& problem) {
    const std::size_t n = problem.size();
    std::vector<drillport::Point2> feasible;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        drillport::Bits z(n);
        bool valid = true;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = (mask >> i) & 1U;
            if (problem.mandatory()[i] && !z[i]) valid = false;
        }
        if (!valid) continue;
        const auto e = problem.evaluate(z);
        if (e.feasible()) feasible.push_back({-e.emv, e.risk});
    }
    std::vector<drillport::Point2> front;
    for (const auto& p : feasible) {
        bool dominated = false;
        for (const auto& q : feasible) {
            if (dominates(q, p)) {
                dominated = true;
                break;
            }
        }
        if (!dominated && std::find(front.begin(), front.end(), p) == front.end()) {
            front.push_back(p);
        }
    }
    std::sort(front.begin(), front.end());
    return front;
}

// Random small prospect list with a reachable well target.
inline std::pair<std::vector<drillport::Project>, drillport::PlanTargets> random_instance(
    std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<drillport::Project> ps;
    long wells = 0;
    for (std::size_t i = 0; i < n; ++i) {
        drillport::Project p;
        p.id = "P" + std::to_string(i);
        p.region = std::string(1, static_cast<char>('A' + i % 3));
        p.kind = i % 4 == 3 ? drillport::ProjectKind::Appraisal : drillport::ProjectKind::Trap;
        p.npv = 1000.0 + 9000.0 * u(rng);
        p.pos = 0.1 + 0.8 * u(rng);
        p.cost = p.kind == drillport::ProjectKind::Trap ? 500.0 + 2000.0 * u(rng) : 0.0;
        if (p.kind == drillport::ProjectKind::Trap) {
            p.pre_or = 50.0 * u(rng);
        } else {
            p.cor = 40.0 * u(rng);
        }
        p.well_count = u(rng) < 0.15 ? 0 : 1 + static_cast<int>(u(rng) * 2.0);
        p.mandatory = i == 0;
        wells += p.well_count;
        ps.push_back(p);
    }
    drillport::PlanTargets t;
    t.tot_wells = std::max<long>(ps[0].well_count + 1, wells / 2);
    return {ps, t};
}

} // namespace oracle
