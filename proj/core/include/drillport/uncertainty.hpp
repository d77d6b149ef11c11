#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace drillport {

/// Expert three-point elicitation (minimum, mode, maximum) of one quantity.
struct ThreePointEstimate {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    /// Throws InputError unless a <= b <= c and all values are finite.
    void validate() const;
    [[nodiscard]] bool degenerate() const { return a == c; }
};

/// Beta(alpha, beta) belief over a factor-level success probability.
struct BetaPosterior {
    double alpha = 1.0;
    double beta = 1.0;

    [[nodiscard]] double mean() const { return alpha / (alpha + beta); }
    /// False for concentrations k <= 2, where the prior loses its interior mode.
    [[nodiscard]] bool unimodal() const { return alpha > 1.0 && beta > 1.0; }
};

/// Symmetric, unit-diagonal matrix with entries in [-1, 1].
class CorrelationMatrix {
public:
    /// Validates the invariants (tolerance 1e-9) and symmetrizes exactly.
    explicit CorrelationMatrix(Eigen::MatrixXd values);

    static CorrelationMatrix identity(Eigen::Index dim);

    [[nodiscard]] const Eigen::MatrixXd& matrix() const { return values_; }
    [[nodiscard]] Eigen::Index dim() const { return values_.rows(); }
    [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

private:
    Eigen::MatrixXd values_;
};

/// Rows are Monte Carlo draws (or historical wells), columns are factors.
using SampleMatrix = Eigen::MatrixXd;

/// Location and spread of a simulated quantity. P90/P50/P10 follow the
/// reserves convention: P90 is the value exceeded with 90% probability.
struct SimulationSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double p90 = 0.0;
    double p50 = 0.0;
    double p10 = 0.0;
    double pmean = 0.0;
};

// --- elicitation and Bayesian fusion -------------------------------------

/// Inverse CDF of the triangular distribution on [a, c] with mode b.
/// Requires 0 < u < 1. A degenerate estimate (a == c) returns a.
double triangular_inv_cdf(double u, const ThreePointEstimate& est);

/// Mode-weighted PERT mean (a + 4b + c) / 6.
double pert_mean(const ThreePointEstimate& est);

/// Beta prior with mean mu_pert and concentration k:
/// alpha = mu (k - 2) + 1, beta = (1 - mu)(k - 2) + 1.
BetaPosterior beta_prior_from_pert(double mu_pert, double k);

/// Conjugate update with s successes and f failures.
BetaPosterior beta_posterior_update(const BetaPosterior& prior, long s, long f);

// --- dependence ----------------------------------------------------------

/// Average ranks (1-based) of a sample; ties share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Pairwise Spearman coefficients with average-rank ties. A pair involving a
/// constant column is defined as 0. Needs at least 3 rows.
CorrelationMatrix estimate_spearman(const SampleMatrix& history);

/// Indices of columns whose values are all equal.
std::vector<Eigen::Index> constant_columns(const SampleMatrix& history);

/// Eigenvalue clipping at eps followed by diagonal rescaling, giving a
/// strictly positive definite correlation matrix. Rejects non-symmetric input.
CorrelationMatrix nearest_psd_correlation(const Eigen::MatrixXd& r, double eps = 1e-6);

/// Reorders each column of x so the joint rank structure follows target while
/// every column keeps exactly its original multiset of values.
SampleMatrix iman_conover(const SampleMatrix& x, const CorrelationMatrix& target,
                          std::uint64_t seed);

// --- combination and summaries --------------------------------------------

struct GposSamples {
    Eigen::VectorXd samples;
    SimulationSummary summary;
};

/// Row-wise product of the factor probabilities plus its summary.
GposSamples combine_gpos(const SampleMatrix& x_corr);

/// Mean, unbiased standard deviation and empirical P90/P50/P10.
SimulationSummary summarize(std::span<const double> values);

/// Linear-interpolated empirical quantile (probability q in [0, 1]).
double empirical_quantile(std::vector<double> values, double q);

// --- reserves and economics -------------------------------------------------

/// Oil reserve abundance in 10^4 t / km^2: 100 * phi * s * rho / fvf.
double oil_reserve_density(double phi, double s_oi, double rho_oi, double beta_oi);

/// Gas reserve abundance in 10^8 m^3 / km^2: 0.01 * phi * s * rho / fvf.
double gas_reserve_density(double phi, double s_ga, double rho_ga, double beta_ga);

double epos(double gpos, double p_mefs);

/// Discounted sum of yearly net flows, flows[t] at year t.
double npv(std::span<const double> flows, double rate);

/// npv * pos - costs * (1 - pos).
double emv(double npv, double pos, double costs);

} // namespace drillport
