#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <vector>

#include "drillport/io.hpp"
#include "drillport/metrics.hpp"
#include "drillport/model.hpp"
#include "drillport/operators.hpp"
#include "drillport/solver.hpp"
#include "drillport/uncertainty.hpp"

using namespace drillport;

namespace {

const RunConfig& sample_config() {
    static const RunConfig cfg =
        load_config(std::filesystem::path(DRILLPORT_BENCH_DATA_DIR) / "sample_config.json");
    return cfg;
}

const Problem& sample_problem() {
    static const Problem p(load_config_prospects(sample_config()), sample_config().targets);
    return p;
}

Bits random_bits(const Problem& p, Rng& rng) {
    Bits z(p.size());
    for (auto& b : z) b = rng() & 1U;
    p.enforce_mandatory(z);
    return z;
}

std::vector<Point2> random_front(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u;
    std::vector<Point2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

} // namespace

static void BM_Hypervolume(benchmark::State& state) {
    const auto pts = random_front(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(hypervolume(pts, {1.1, 1.1}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hypervolume)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_NondominatedSort(benchmark::State& state) {
    const auto pts = random_front(static_cast<std::size_t>(state.range(0)), 2);
    std::vector<Fitness> pop;
    for (const auto& p : pts) pop.push_back({p, true, 0.0});
    for (auto _ : state) benchmark::DoNotOptimize(fast_nondominated_sort(pop));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NondominatedSort)->RangeMultiplier(2)->Range(50, 400)->Complexity();

static void BM_Evaluate(benchmark::State& state) {
    const auto& p = sample_problem();
    Rng rng(3);
    const auto z = random_bits(p, rng);
    for (auto _ : state) benchmark::DoNotOptimize(p.evaluate(z));
}
BENCHMARK(BM_Evaluate);

static void BM_DcCrossover(benchmark::State& state) {
    const auto& p = sample_problem();
    Rng rng(4);
    const auto a = random_bits(p, rng), b = random_bits(p, rng);
    for (auto _ : state) benchmark::DoNotOptimize(dc_crossover(a, b, p, {}, rng));
}
BENCHMARK(BM_DcCrossover);

static void BM_SamMutation(benchmark::State& state) {
    const auto& p = sample_problem();
    Rng rng(5);
    const auto x = random_bits(p, rng);
    for (auto _ : state) benchmark::DoNotOptimize(sam_mutation(x, p, {}, rng));
}
BENCHMARK(BM_SamMutation);

static void BM_ImanConover(benchmark::State& state) {
    const auto n = state.range(0);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u;
    SampleMatrix x(n, 5);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = u(rng);
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(5, 5, 0.3);
    m.diagonal().setOnes();
    const CorrelationMatrix r(m);
    for (auto _ : state) benchmark::DoNotOptimize(iman_conover(x, r, 7));
}
BENCHMARK(BM_ImanConover)->Arg(1000)->Arg(10000);

static void BM_SolverGeneration(benchmark::State& state) {
    SolverConfig c = sample_config().solver;
    c.generations = 10;
    c.variant = state.range(0) ? Variant::OE : Variant::Baseline;
    for (auto _ : state) benchmark::DoNotOptimize(run_solver(sample_problem(), c));
}
BENCHMARK(BM_SolverGeneration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
