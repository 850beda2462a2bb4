#ifndef CEVRP_BANDIT_HPP
#define CEVRP_BANDIT_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>

#include "cevrp/neighborhoods.hpp"

namespace cevrp {

enum class Selector { Random, EpsilonGreedy, Thompson, Ucb1 };

const char* to_string(Selector s);
Selector selector_from_string(const std::string& s);

/// Per-local-search credit state for the 8-armed heuristic pool.
/// iteration (k) is 1-based within the epoch; reset_epoch() clears all
/// vectors and restarts the counter.
struct BanditState {
    std::array<double, kHeuristicPoolSize> rewards{};
    std::array<int, kHeuristicPoolSize> penalties{};
    std::array<int, kHeuristicPoolSize> selections{};
    long iteration = 1;

    void reset_epoch() {
        rewards.fill(0.0);
        penalties.fill(0);
        selections.fill(0);
        iteration = 1;
    }

    /// Credit the arm for the evaluated candidate and advance k.
    void record_outcome(int arm, bool improved, double magnitude = 1.0) {
        if (improved)
            rewards[static_cast<size_t>(arm)] += magnitude;
        else
            penalties[static_cast<size_t>(arm)] += 1;
        ++iteration;
    }

    /// An unrepairable candidate consumes the iteration without an
    /// objective evaluation.
    void count_failure() { ++iteration; }
};

/// Explore uniformly with probability epsilon, otherwise argmax of rewards
/// with uniform tie-breaking.
int select_epsilon_greedy(const BanditState& state, double epsilon, Rng& rng);

/// Per-arm draw from Beta(R+1, P+1), argmax of the samples.
int select_thompson(const BanditState& state, Rng& rng);

/// Deterministic: round-robin warm-up for the first 8 iterations, then
/// argmax of R_i/S_i + sqrt(2 log k)/S_i (the division-outside form;
/// textbook_term switches to sqrt(2 log k / S_i)). Increments the selection
/// count of the returned arm.
int select_ucb1(BanditState& state, bool textbook_term = false);

int select_random(Rng& rng);

}  // namespace cevrp

#endif
