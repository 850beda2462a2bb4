#include <benchmark/benchmark.h>

#include <cevrp/harness.hpp>
#include <cevrp/neighborhoods.hpp>
#include <cevrp/solver.hpp>

namespace {

cevrp::Instance load(const char* name) {
    return cevrp::load_instance(std::string(CEVRP_DATA_DIR) + "/instances/" + name);
}

void bench_evaluate(benchmark::State& state) {
    const auto inst = load("E-n101-k8.evrp");
    cevrp::Rng rng(7);
    auto tour = cevrp::construct_initial(inst, rng).value();
    for (auto _ : state) {
        tour.cached_fitness.reset();
        benchmark::DoNotOptimize(cevrp::evaluate(tour, inst));
    }
}
BENCHMARK(bench_evaluate);

void bench_generate_repair(benchmark::State& state) {
    const auto inst = load("E-n101-k8.evrp");
    cevrp::Rng rng(7);
    const auto tour = cevrp::construct_initial(inst, rng).value();
    cevrp::CustomerQueue queue;
    cevrp::SolverConfig cfg;
    for (auto _ : state) {
        auto gen = cevrp::generate(tour, cevrp::HeuristicId{static_cast<int>(state.iterations() % 8)},
                                   queue, inst, cfg.r1, cfg.r2, rng);
        auto repaired = cevrp::repair_load(gen.candidate, inst);
        if (repaired) benchmark::DoNotOptimize(*repaired);
    }
}
BENCHMARK(bench_generate_repair);

void bench_adjust_stations(benchmark::State& state) {
    const auto inst = load("E-n101-k8.evrp");
    cevrp::Rng rng(7);
    const auto tour = cevrp::construct_initial(inst, rng).value();
    cevrp::SolverConfig cfg;
    for (auto _ : state) {
        auto adjusted =
            cevrp::adjust_stations(tour, inst, cfg.memory, cfg.p_move, cfg.p_eliminate, rng);
        if (adjusted) benchmark::DoNotOptimize(*adjusted);
    }
}
BENCHMARK(bench_adjust_stations);

void bench_epoch(benchmark::State& state) {
    const auto inst = load("E-n22-k4.evrp");
    for (auto _ : state) {
        cevrp::SolverConfig cfg;
        cfg.seed = 11;
        cfg.budget_scale = 0.001;  // a handful of epochs
        benchmark::DoNotOptimize(cevrp::run(inst, cfg));
    }
}
BENCHMARK(bench_epoch);

}  // namespace

BENCHMARK_MAIN();
