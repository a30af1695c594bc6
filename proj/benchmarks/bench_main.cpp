#include <benchmark/benchmark.h>

#include "multivenc/encoding.hpp"
#include "multivenc/estimator.hpp"
#include "multivenc/lattice.hpp"
#include "multivenc/simulator.hpp"

using namespace mvenc;

static void BM_EnumerateLatticePoints(benchmark::State& state) {
    const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
    const SearchBox box = compute_search_box(d);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_lattice_points(d, box));
    }
}
BENCHMARK(BM_EnumerateLatticePoints);

static void BM_AmbiguityLattice(benchmark::State& state) {
    const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ambiguity_lattice(d));
    }
}
BENCHMARK(BM_AmbiguityLattice);

static void BM_PhaseDifferences(benchmark::State& state) {
    TrialConfig cfg;
    cfg.scheme = builtin_scheme("balanced5");
    cfg.scheme.noise_std = 0.1;
    cfg.true_velocity = Eigen::Vector3d(15.0, -5.0, 5.0);
    cfg.coils = 8;
    const Measurements y = generate_measurements(cfg, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase_differences(y));
    }
}
BENCHMARK(BM_PhaseDifferences);

static void BM_WrapSearch(benchmark::State& state) {
    TrialConfig cfg;
    cfg.scheme = builtin_scheme("balanced4");
    cfg.scheme.noise_std = 0.2;
    cfg.true_velocity = Eigen::Vector3d(15.0, -5.0, 5.0);
    const DifferenceSystem d = build_difference_system(cfg.scheme);
    const Parallelepiped region = ambiguity_lattice(d).centered();
    const NoiseModel nm = noise_covariance(cfg.scheme, cfg.coils);
    const PhaseDifferences phi = phase_differences(generate_measurements(cfg, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wrap_search(d, phi, nm, region));
    }
}
BENCHMARK(BM_WrapSearch);

static void BM_ExactReduce(benchmark::State& state) {
    const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
    const AmbiguityLattice lat = ambiguity_lattice(d);
    const Rat3 w{Rational(123457, 97), Rational(-987653, 101), Rational(555557, 89)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(lat.reduce_exact(w));
    }
}
BENCHMARK(BM_ExactReduce);

static void BM_Campaign(benchmark::State& state) {
    TrialConfig cfg;
    cfg.scheme = builtin_scheme("balanced4");
    cfg.scheme.noise_std = 0.05;
    cfg.true_velocity = Eigen::Vector3d(15.0, -5.0, 5.0);
    cfg.trials = static_cast<int>(state.range(0));
    cfg.seed = 42;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_campaign(cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_Campaign)->Arg(8)->Arg(64);

static void BM_SlabVolume(benchmark::State& state) {
    const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
    const Preprocessor p = builtin_preprocessor("p10");
    const auto samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(slab_region_volume(p, d, samples, 1234));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_SlabVolume)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
