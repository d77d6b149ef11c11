#include "drillport/simulation.hpp"

#include <algorithm>

#include "drillport/error.hpp"
#include "drillport/rng.hpp"

namespace drillport {

namespace {

constexpr std::uint64_t kFactorStream = 1;
constexpr std::uint64_t kCopulaStream = 2;
constexpr std::uint64_t kReserveStream = 3;

struct ProjectInputs {
    std::array<std::optional<Elicitation>, 5> factors;
    std::optional<ThreePointEstimate> porosity;
    std::optional<ThreePointEstimate> saturation;
};

std::optional<std::size_t> gpos_factor_index(std::string_view name) {
    for (std::size_t i = 0; i < kGposFactors.size(); ++i) {
        if (kGposFactors[i] == name) return i;
    }
    return std::nullopt;
}

} // namespace

CorrelationMatrix factor_correlation_target(const std::optional<SampleMatrix>& history, double eps) {
    const auto d = static_cast<Eigen::Index>(kGposFactors.size());
    if (!history) return CorrelationMatrix::identity(d);
    if (history->cols() != d) {
        throw InputError("history must have one column per GPoS factor (" +
                         std::to_string(d) + ")");
    }
    return nearest_psd_correlation(estimate_spearman(*history).matrix(), eps);
}

SampleMatrix draw_factor_posteriors(const std::array<Elicitation, 5>& factors,
                                    std::size_t samples, std::uint64_t seed) {
    SampleMatrix x(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(factors.size()));
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const auto& e = factors[j];
        const auto posterior = beta_posterior_update(
            beta_prior_from_pert(pert_mean(e.estimate), e.k), e.successes, e.failures);
        Rng rng = make_rng(seed, {kFactorStream, j});
        for (std::size_t t = 0; t < samples; ++t) {
            x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                sample_beta(rng, posterior.alpha, posterior.beta);
        }
    }
    return x;
}

std::vector<ProspectSummary> simulate_prospects(
    const std::vector<Elicitation>& elicitations,
    const std::optional<SampleMatrix>& history,
    const std::vector<ProspectEconomics>& economics,
    const SimulationConfig& cfg) {
    if (cfg.samples < 2) throw InputError("simulation needs at least 2 samples");

    std::vector<std::string> order;
    std::map<std::string, ProjectInputs> inputs;
    for (const auto& e : elicitations) {
        e.estimate.validate();
        if (!inputs.contains(e.project_id)) order.push_back(e.project_id);
        auto& in = inputs[e.project_id];
        if (auto idx = gpos_factor_index(e.factor)) {
            in.factors[*idx] = e;
        } else if (e.factor == kPorosityFactor) {
            in.porosity = e.estimate;
        } else if (e.factor == kSaturationFactor) {
            in.saturation = e.estimate;
        } else {
            throw InputError("project " + e.project_id + ": unknown factor '" + e.factor + "'");
        }
    }
    std::map<std::string, const ProspectEconomics*> econ;
    for (const auto& p : economics) econ[p.project_id] = &p;

    const CorrelationMatrix target = factor_correlation_target(history, cfg.eps);

    std::vector<ProspectSummary> out;
    out.reserve(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        const auto& id = order[p];
        const auto& in = inputs.at(id);
        std::array<Elicitation, 5> factors;
        for (std::size_t j = 0; j < kGposFactors.size(); ++j) {
            if (!in.factors[j]) {
                throw InputError("project " + id + ": missing elicitation for factor '" +
                                 std::string(kGposFactors[j]) + "'");
            }
            factors[j] = *in.factors[j];
        }
        const std::uint64_t project_seed = derive_seed(cfg.seed, {p});
        const SampleMatrix x_ind = draw_factor_posteriors(factors, cfg.samples, project_seed);
        const SampleMatrix x_corr =
            iman_conover(x_ind, target, derive_seed(project_seed, {kCopulaStream}));
        const GposSamples gpos = combine_gpos(x_corr);

        ProspectSummary summary;
        summary.project_id = id;
        summary.gpos = gpos.summary;

        const ProspectEconomics* e = econ.contains(id) ? econ.at(id) : nullptr;
        const double p_mefs = e ? e->p_mefs : 1.0;
        summary.epos = epos(gpos.summary.mean, p_mefs);

        if (e) {
            summary.npv = npv(e->flows, e->discount_rate);
            std::vector<double> emv_samples(cfg.samples);
            for (std::size_t t = 0; t < cfg.samples; ++t) {
                emv_samples[t] = emv(summary.npv, epos(gpos.samples[static_cast<Eigen::Index>(t)], p_mefs), e->cost);
            }
            summary.emv = summarize(emv_samples).mean;

            if (in.porosity && in.saturation) {
                Rng rng = make_rng(project_seed, {kReserveStream});
                std::vector<double> reserves(cfg.samples);
                for (std::size_t t = 0; t < cfg.samples; ++t) {
                    const double phi = triangular_inv_cdf(open_uniform(rng), *in.porosity);
                    const double sat = triangular_inv_cdf(open_uniform(rng), *in.saturation);
                    const double density =
                        e->fluid == Fluid::Oil
                            ? oil_reserve_density(phi, sat, e->fluid_density, e->volume_factor)
                            : gas_reserve_density(phi, sat, e->fluid_density, e->volume_factor);
                    reserves[t] = density * e->area_km2;
                }
                summary.reserves = summarize(reserves);
            }
        }
        out.push_back(std::move(summary));
    }
    return out;
}

} // namespace drillport
