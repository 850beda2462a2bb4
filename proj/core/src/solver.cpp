#include "cevrp/solver.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

namespace cevrp {

bool metropolis_accept(double delta, double temperature, Rng& rng) {
    if (delta <= 0.0) return true;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) < std::exp(-delta / temperature);
}

double reheat_beta(long acc, long max_acc, const SolverConfig& cfg) {
    if (cfg.x_max == cfg.x_min) return cfg.y_max;
    const double pct = 100.0 * static_cast<double>(acc) / static_cast<double>(max_acc);
    const double m = (cfg.y_max - cfg.y_min) / (cfg.x_max - cfg.x_min);
    const double beta = m * pct + (cfg.y_max - m * cfg.x_max);
    return std::clamp(beta, cfg.y_min, cfg.y_max);
}

namespace {

int select_arm(SolverState& state, const SolverConfig& cfg, Rng& rng) {
    switch (cfg.selector) {
        case Selector::Random: {
            const int arm = select_random(rng);
            ++state.bandit.selections[static_cast<size_t>(arm)];
            return arm;
        }
        case Selector::EpsilonGreedy: {
            const int arm = select_epsilon_greedy(state.bandit, cfg.epsilon, rng);
            ++state.bandit.selections[static_cast<size_t>(arm)];
            return arm;
        }
        case Selector::Thompson: {
            const int arm = select_thompson(state.bandit, rng);
            ++state.bandit.selections[static_cast<size_t>(arm)];
            return arm;
        }
        case Selector::Ucb1:
            return select_ucb1(state.bandit, cfg.ucb_textbook_term);
    }
    return 0;
}

}  // namespace

void local_search_epoch(SolverState& state, const Instance& inst, const SolverConfig& cfg,
                        Rng& rng) {
    const long iters = cfg.iters_per_epoch(inst.customer_count());
    const long max_acc = cfg.max_evaluations(inst.customer_count());

    for (long it = 0; it < iters && state.evaluations < max_acc; ++it) {
        const int arm = select_arm(state, cfg, rng);
        auto gen = generate(state.current, HeuristicId{arm}, state.queue, inst, cfg.r1, cfg.r2, rng);
        Tour candidate = std::move(gen.candidate);

        bool load_ok = true;
        for (const auto& [b, e] : route_spans(candidate.seq)) {
            if (route_load(candidate.seq, b, e, inst) > inst.max_load() + 1e-9) {
                load_ok = false;
                break;
            }
        }
        if (!load_ok) {
            auto repaired = repair_load(std::move(candidate), inst);
            if (!repaired) {
                state.bandit.count_failure();
                continue;
            }
            candidate = std::move(*repaired);
        }

        auto adjusted =
            adjust_stations(std::move(candidate), inst, cfg.memory, cfg.p_move, cfg.p_eliminate, rng);
        if (!adjusted) {
            state.bandit.count_failure();
            continue;
        }
        candidate = std::move(*adjusted);

        const double fitness = evaluate(candidate, inst);
        ++state.evaluations;

        double delta = fitness - state.current_fitness;
        if (cfg.delta_mode == DeltaMode::Relative) delta /= state.current_fitness;
        const bool improved = delta < 0.0;

        if (fitness < state.best_fitness) {
            state.best = candidate;
            state.best_fitness = fitness;
        }
        if (metropolis_accept(delta, state.temperature, rng)) {
            state.current = std::move(candidate);
            state.current_fitness = fitness;
        }
        state.bandit.record_outcome(arm, improved, cfg.reward_magnitude);
    }
}

RunRecord run(const Instance& inst, const SolverConfig& cfg) {
    RunRecord rec;
    rec.instance = inst.name();
    rec.selector = cfg.selector;
    rec.seed = cfg.seed;

    const auto t_start = std::chrono::steady_clock::now();
    Rng rng(cfg.seed);

    auto initial = construct_initial(inst, rng);
    if (!initial) {
        rec.failed = true;
        rec.error = "initial construction failed: no feasible station assignment";
        return rec;
    }

    SolverState state;
    state.current = std::move(*initial);
    state.current_fitness = evaluate(state.current, inst);
    state.evaluations = 1;
    state.best = state.current;
    state.best_fitness = state.current_fitness;
    state.temperature = cfg.t0;
    rec.initial_fitness = state.current_fitness;

    const long max_acc = cfg.max_evaluations(inst.customer_count());
    while (state.evaluations < max_acc) {
        state.bandit.reset_epoch();
        const double best_before = state.best_fitness;
        local_search_epoch(state, inst, cfg, rng);

        EpochTrace trace;
        trace.temperature = state.temperature;
        trace.best_fitness = state.best_fitness;
        trace.selections = state.bandit.selections;
        trace.rewards = state.bandit.rewards;

        if (state.best_fitness < best_before) {
            state.h_up = 0;
        } else {
            ++state.h_up;
        }
        if (state.h_up < cfg.limit) {
            state.temperature *= cfg.alpha;
        } else {
            state.temperature += reheat_beta(state.evaluations, max_acc, cfg);
            state.h_up = 0;
        }
        trace.h_up = state.h_up;
        rec.epochs.push_back(trace);
    }

    rec.best_tour = state.best;
    rec.best_fitness = state.best_fitness;
    rec.evaluations = state.evaluations;
    rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
    return rec;
}

std::string to_json(const RunRecord& rec, const Instance& inst) {
    nlohmann::json j;
    j["instance"] = rec.instance;
    j["selector"] = to_string(rec.selector);
    j["seed"] = rec.seed;
    j["best_fitness"] = rec.best_fitness;
    j["initial_fitness"] = rec.initial_fitness;
    j["evaluations"] = rec.evaluations;
    j["wall_ms"] = rec.wall_ms;
    j["failed"] = rec.failed;
    if (rec.failed) j["error"] = rec.error;
    if (!rec.best_tour.seq.empty()) j["best_tour"] = to_solution_text(rec.best_tour, inst);
    nlohmann::json epochs = nlohmann::json::array();
    for (const auto& e : rec.epochs) {
        nlohmann::json je;
        je["T"] = e.temperature;
        je["best"] = e.best_fitness;
        je["h_up"] = e.h_up;
        je["selections"] = e.selections;
        je["rewards"] = e.rewards;
        epochs.push_back(std::move(je));
    }
    j["epoch_trace"] = std::move(epochs);
    return j.dump(2);
}

}  // namespace cevrp
