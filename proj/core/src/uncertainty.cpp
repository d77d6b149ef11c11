#include "drillport/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "drillport/error.hpp"
#include "drillport/rng.hpp"

namespace drillport {

namespace {

constexpr double kMatrixTol = 1e-9;

bool is_finite(double v) { return std::isfinite(v); }

Eigen::VectorXd column_ranks(const SampleMatrix& x, Eigen::Index j) {
    std::vector<double> col(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
    const auto ranks = average_ranks(col);
    return Eigen::Map<const Eigen::VectorXd>(ranks.data(), static_cast<Eigen::Index>(ranks.size()));
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd da = a.array() - a.mean();
    const Eigen::VectorXd db = b.array() - b.mean();
    const double den = std::sqrt(da.squaredNorm() * db.squaredNorm());
    if (den == 0.0) return 0.0;
    return std::clamp(da.dot(db) / den, -1.0, 1.0);
}

Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& s) {
    const Eigen::Index d = s.cols();
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            out(i, j) = out(j, i) = pearson(s.col(i), s.col(j));
        }
    }
    return out;
}

// Fisher-Yates with a plain modulo draw; the bias is < n / 2^64.
void shuffle(std::vector<double>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

// One clip-and-rescale pass.
Eigen::MatrixXd clip_and_rescale(const Eigen::MatrixXd& r, double eps) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    if (es.info() != Eigen::Success) {
        throw InputError("nearest_psd_correlation: eigendecomposition failed");
    }
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(eps);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::MatrixXd b = q * clipped.asDiagonal() * q.transpose();
    const Eigen::VectorXd dinv = b.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd out = dinv.asDiagonal() * b * dinv.asDiagonal();
    out = 0.5 * (out + out.transpose()).eval();
    out.diagonal().setOnes();
    return out;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

void ThreePointEstimate::validate() const {
    if (!is_finite(a) || !is_finite(b) || !is_finite(c)) {
        throw InputError("three-point estimate has non-finite values");
    }
    if (!(a <= b && b <= c)) {
        throw InputError("three-point estimate requires a <= b <= c (got " + std::to_string(a) +
                         ", " + std::to_string(b) + ", " + std::to_string(c) + ")");
    }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols() || values_.rows() == 0) {
        throw InputError("correlation matrix must be square and non-empty");
    }
    const Eigen::Index d = values_.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (std::abs(values_(i, i) - 1.0) > kMatrixTol) {
            throw InputError("correlation matrix diagonal must be 1");
        }
        for (Eigen::Index j = 0; j < d; ++j) {
            const double v = values_(i, j);
            if (!is_finite(v) || std::abs(v) > 1.0 + kMatrixTol) {
                throw InputError("correlation entries must lie in [-1, 1]");
            }
            if (std::abs(v - values_(j, i)) > kMatrixTol) {
                throw InputError("correlation matrix must be symmetric");
            }
        }
    }
    values_ = 0.5 * (values_ + values_.transpose()).eval();
    values_.diagonal().setOnes();
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index dim) {
    return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

double triangular_inv_cdf(double u, const ThreePointEstimate& est) {
    est.validate();
    if (!(u > 0.0 && u < 1.0)) {
        throw InputError("triangular_inv_cdf: u must lie in (0, 1)");
    }
    const double a = est.a;
    const double b = est.b;
    const double c = est.c;
    if (a == c) return a;
    const double split = (b - a) / (c - a);
    if (u < split) {
        return a + std::sqrt(u * (c - a) * (b - a));
    }
    return c - std::sqrt((1.0 - u) * (c - a) * (c - b));
}

double pert_mean(const ThreePointEstimate& est) {
    est.validate();
    return (est.a + 4.0 * est.b + est.c) / 6.0;
}

BetaPosterior beta_prior_from_pert(double mu_pert, double k) {
    if (!(mu_pert > 0.0 && mu_pert < 1.0)) {
        throw InputError("beta_prior_from_pert: PERT mean must lie in (0, 1)");
    }
    if (!(k > 0.0) || !is_finite(k)) {
        throw InputError("beta_prior_from_pert: concentration k must be positive");
    }
    BetaPosterior prior{mu_pert * (k - 2.0) + 1.0, (1.0 - mu_pert) * (k - 2.0) + 1.0};
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) {
        throw InputError("beta_prior_from_pert: concentration too small for this mean "
                         "(prior shape parameters not positive)");
    }
    return prior;
}

BetaPosterior beta_posterior_update(const BetaPosterior& prior, long s, long f) {
    if (s < 0 || f < 0) {
        throw InputError("beta_posterior_update: counts must be non-negative");
    }
    return {prior.alpha + static_cast<double>(s), prior.beta + static_cast<double>(f)};
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 share ranks i+1..j
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

std::vector<Eigen::Index> constant_columns(const SampleMatrix& history) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index j = 0; j < history.cols(); ++j) {
        if (history.rows() == 0 || (history.col(j).array() == history(0, j)).all()) {
            out.push_back(j);
        }
    }
    return out;
}

CorrelationMatrix estimate_spearman(const SampleMatrix& history) {
    if (history.rows() < 3) {
        throw InputError("estimate_spearman: at least 3 rows of history are required");
    }
    if (history.cols() == 0) {
        throw InputError("estimate_spearman: history has no columns");
    }
    if (!history.allFinite()) {
        throw InputError("estimate_spearman: history contains non-finite values");
    }
    const Eigen::Index d = history.cols();
    Eigen::MatrixXd ranks(history.rows(), d);
    for (Eigen::Index j = 0; j < d; ++j) ranks.col(j) = column_ranks(history, j);
    // pearson() yields 0 whenever either rank column is constant
    return CorrelationMatrix(pearson_matrix(ranks));
}

CorrelationMatrix nearest_psd_correlation(const Eigen::MatrixXd& r, double eps) {
    if (!(eps > 0.0)) {
        throw InputError("nearest_psd_correlation: eps must be positive");
    }
    if (r.rows() != r.cols() || r.rows() == 0) {
        throw InputError("nearest_psd_correlation: matrix must be square and non-empty");
    }
    if (!r.allFinite()) {
        throw InputError("nearest_psd_correlation: matrix has non-finite entries");
    }
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InputError("nearest_psd_correlation: matrix must be symmetric");
    }
    const Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
    Eigen::MatrixXd out = clip_and_rescale(sym, eps);
    // Rescaling can pull the clipped eigenvalues slightly below eps; repeat
    // the pass until the floor holds.
    for (int pass = 0; pass < 100 && min_eigenvalue(out) < eps * (1.0 - 1e-6); ++pass) {
        out = clip_and_rescale(out, eps);
    }
    return CorrelationMatrix(std::move(out));
}

SampleMatrix iman_conover(const SampleMatrix& x, const CorrelationMatrix& target,
                          std::uint64_t seed) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (target.dim() != d) {
        throw InputError("iman_conover: target dimension does not match sample columns");
    }
    if (n < 2) {
        throw InputError("iman_conover: at least 2 samples are required");
    }
    Eigen::LLT<Eigen::MatrixXd> target_chol(target.matrix());
    if (target_chol.info() != Eigen::Success || min_eigenvalue(target.matrix()) <= 0.0) {
        throw InputError("iman_conover: target is not positive definite; project it with "
                         "nearest_psd_correlation first");
    }

    // Normal scores carry Pearson correlation; convert the rank target so the
    // induced Spearman matrix matches it.
    Eigen::MatrixXd pearson_target = target.matrix();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i != j) {
                pearson_target(i, j) =
                    2.0 * std::sin(std::numbers::pi * target(i, j) / 6.0);
            }
        }
    }
    Eigen::LLT<Eigen::MatrixXd> chol(pearson_target);
    if (chol.info() != Eigen::Success || min_eigenvalue(pearson_target) <= 0.0) {
        pearson_target = nearest_psd_correlation(pearson_target).matrix();
        chol.compute(pearson_target);
    }
    const Eigen::MatrixXd c_lower = chol.matrixL();

    const boost::math::normal_distribution<double> normal;
    std::vector<double> vdw(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        vdw[static_cast<std::size_t>(i)] = boost::math::quantile(
            normal, static_cast<double>(i + 1) / static_cast<double>(n + 1));
    }
    Rng rng(seed);
    Eigen::MatrixXd scores(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        auto col = vdw;
        shuffle(col, rng);
        for (Eigen::Index i = 0; i < n; ++i) scores(i, j) = col[static_cast<std::size_t>(i)];
    }

    // Remove the accidental correlation of the shuffled scores, then impose
    // the target: T = S * L_E^{-T} * C^T.
    Eigen::MatrixXd induced = scores;
    Eigen::LLT<Eigen::MatrixXd> e_chol(pearson_matrix(scores));
    if (e_chol.info() == Eigen::Success) {
        const Eigen::MatrixXd e_lower = e_chol.matrixL();
        induced = e_lower.triangularView<Eigen::Lower>()
                      .solve(scores.transpose())
                      .transpose();
    }
    induced = (induced * c_lower.transpose()).eval();

    SampleMatrix out(n, d);
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < d; ++j) {
        std::vector<double> sorted(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = x(i, j);
        std::sort(sorted.begin(), sorted.end());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
            return induced(static_cast<Eigen::Index>(l), j) < induced(static_cast<Eigen::Index>(r), j);
        });
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            out(static_cast<Eigen::Index>(order[rank]), j) = sorted[rank];
        }
    }
    return out;
}

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw InputError("empirical_quantile: empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw InputError("empirical_quantile: probability must lie in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SimulationSummary summarize(std::span<const double> values) {
    if (values.empty()) {
        throw InputError("summarize: empty sample");
    }
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    SimulationSummary s;
    s.mean = mean;
    s.pmean = mean;
    s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::vector<double> copy(values.begin(), values.end());
    std::sort(copy.begin(), copy.end());
    s.p90 = empirical_quantile(copy, 0.10);
    s.p50 = empirical_quantile(copy, 0.50);
    s.p10 = empirical_quantile(copy, 0.90);
    return s;
}

GposSamples combine_gpos(const SampleMatrix& x_corr) {
    if (x_corr.rows() == 0 || x_corr.cols() == 0) {
        throw InputError("combine_gpos: empty sample matrix");
    }
    if (!((x_corr.array() >= 0.0).all() && (x_corr.array() <= 1.0).all())) {
        throw InputError("combine_gpos: factor probabilities must lie in [0, 1]");
    }
    GposSamples out;
    out.samples = x_corr.rowwise().prod();
    out.summary = summarize({out.samples.data(), static_cast<std::size_t>(out.samples.size())});
    return out;
}

double oil_reserve_density(double phi, double s_oi, double rho_oi, double beta_oi) {
    if (beta_oi == 0.0) throw InputError("oil_reserve_density: volume factor must be non-zero");
    return 100.0 * phi * s_oi * rho_oi / beta_oi;
}

double gas_reserve_density(double phi, double s_ga, double rho_ga, double beta_ga) {
    if (beta_ga == 0.0) throw InputError("gas_reserve_density: volume factor must be non-zero");
    return 0.01 * phi * s_ga * rho_ga / beta_ga;
}

double epos(double gpos, double p_mefs) {
    if (!(gpos >= 0.0 && gpos <= 1.0) || !(p_mefs >= 0.0 && p_mefs <= 1.0)) {
        throw InputError("epos: probabilities must lie in [0, 1]");
    }
    return gpos * p_mefs;
}

double npv(std::span<const double> flows, double rate) {
    if (!(rate > -1.0)) throw InputError("npv: discount rate must exceed -1");
    double total = 0.0;
    double discount = 1.0;
    for (double flow : flows) {
        total += flow / discount;
        discount *= 1.0 + rate;
    }
    return total;
}

double emv(double npv_value, double pos, double costs) {
    if (!(pos >= 0.0 && pos <= 1.0)) throw InputError("emv: probability must lie in [0, 1]");
    if (costs < 0.0) throw InputError("emv: costs must be non-negative");
    return npv_value * pos - costs * (1.0 - pos);
}

} // namespace drillport
