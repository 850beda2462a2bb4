#ifndef CEVRP_SOLVER_HPP
#define CEVRP_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cevrp/bandit.hpp"
#include "cevrp/instance.hpp"
#include "cevrp/neighborhoods.hpp"
#include "cevrp/solution.hpp"

namespace cevrp {

enum class DeltaMode { Raw, Relative };

/// All tunables of one solver run. Defaults reproduce the benchmark setup:
/// alpha 0.99, limit 20, 40*n_c iterations per epoch, 25000*n_c evaluation
/// budget, p_move/p_eliminate 60/40, reheat line (0,0.05)-(90,1),
/// r1 10%, r2 100%, epsilon 0.1.
struct SolverConfig {
    double alpha = 0.99;
    double t0 = 1.0;
    int limit = 20;
    double iters_per_epoch_mult = 40.0;
    double max_acc_mult = 25000.0;
    double budget_scale = 1.0;
    double x_min = 0.0;
    double x_max = 90.0;
    double y_min = 0.05;
    double y_max = 1.0;
    double epsilon = 0.1;
    double memory = 0.5;
    double p_move = 0.60;
    double p_eliminate = 0.40;
    double r1 = 0.10;
    double r2 = 1.0;
    Selector selector = Selector::Thompson;
    std::uint64_t seed = 1;
    DeltaMode delta_mode = DeltaMode::Relative;
    bool ucb_textbook_term = false;
    double reward_magnitude = 1.0;

    long iters_per_epoch(int n_customers) const {
        return static_cast<long>(iters_per_epoch_mult * n_customers);
    }
    long max_evaluations(int n_customers) const {
        return static_cast<long>(max_acc_mult * budget_scale * n_customers);
    }
};

/// Accept improving moves always; worsening ones with probability
/// exp(-delta/T).
bool metropolis_accept(double delta, double temperature, Rng& rng);

/// Reheat increment: linear in the spent budget percentage, through
/// (x_min, y_min) and (x_max, y_max), clamped to [y_min, y_max].
double reheat_beta(long acc, long max_acc, const SolverConfig& cfg);

struct EpochTrace {
    double temperature = 0.0;
    double best_fitness = 0.0;
    int h_up = 0;
    std::array<int, kHeuristicPoolSize> selections{};
    std::array<double, kHeuristicPoolSize> rewards{};
};

struct RunRecord {
    std::string instance;
    Selector selector = Selector::Thompson;
    std::uint64_t seed = 0;
    double best_fitness = 0.0;
    double initial_fitness = 0.0;
    long evaluations = 0;
    long wall_ms = 0;
    Tour best_tour;
    std::vector<EpochTrace> epochs;
    bool failed = false;
    std::string error;
};

std::string to_json(const RunRecord& rec, const Instance& inst);

struct SolverState {
    Tour current;
    Tour best;
    double current_fitness = 0.0;
    double best_fitness = 0.0;
    double temperature = 0.0;
    int h_up = 0;
    long evaluations = 0;
    BanditState bandit;
    CustomerQueue queue;
};

/// One local-search epoch: iters_per_epoch perturbations at constant
/// temperature, bounded by the evaluation budget.
void local_search_epoch(SolverState& state, const Instance& inst, const SolverConfig& cfg,
                        Rng& rng);

/// Full outer loop: initial construction, epochs with cooling and adaptive
/// reheating, terminated by the evaluation budget.
RunRecord run(const Instance& inst, const SolverConfig& cfg);

}  // namespace cevrp

#endif
