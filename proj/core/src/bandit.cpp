#include "cevrp/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cevrp {

const char* to_string(Selector s) {
    switch (s) {
        case Selector::Random: return "random";
        case Selector::EpsilonGreedy: return "eg";
        case Selector::Thompson: return "ts";
        case Selector::Ucb1: return "ucb1";
    }
    return "?";
}

Selector selector_from_string(const std::string& s) {
    if (s == "random") return Selector::Random;
    if (s == "eg") return Selector::EpsilonGreedy;
    if (s == "ts") return Selector::Thompson;
    if (s == "ucb1") return Selector::Ucb1;
    throw std::invalid_argument("unknown selector '" + s + "' (random|eg|ts|ucb1)");
}

namespace {

int argmax_random_ties(const std::array<double, kHeuristicPoolSize>& values, Rng& rng) {
    double best = *std::max_element(values.begin(), values.end());
    std::vector<int> ties;
    for (int i = 0; i < kHeuristicPoolSize; ++i)
        if (values[static_cast<size_t>(i)] == best) ties.push_back(i);
    if (ties.size() == 1) return ties.front();
    std::uniform_int_distribution<size_t> pick(0, ties.size() - 1);
    return ties[pick(rng)];
}

double sample_beta(double a, double b, Rng& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

}  // namespace

int select_epsilon_greedy(const BanditState& state, double epsilon, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < epsilon) {
        std::uniform_int_distribution<int> pick(0, kHeuristicPoolSize - 1);
        return pick(rng);
    }
    return argmax_random_ties(state.rewards, rng);
}

int select_thompson(const BanditState& state, Rng& rng) {
    std::array<double, kHeuristicPoolSize> theta{};
    for (int i = 0; i < kHeuristicPoolSize; ++i)
        theta[static_cast<size_t>(i)] =
            sample_beta(state.rewards[static_cast<size_t>(i)] + 1.0,
                        state.penalties[static_cast<size_t>(i)] + 1.0, rng);
    return static_cast<int>(std::max_element(theta.begin(), theta.end()) - theta.begin());
}

int select_ucb1(BanditState& state, bool textbook_term) {
    const long k = state.iteration;
    if (k < 1) throw std::logic_error("select_ucb1 requires k >= 1");
    int arm;
    if (k <= kHeuristicPoolSize) {
        arm = static_cast<int>(k - 1);
    } else {
        double best = -1.0;
        arm = 0;
        for (int i = 0; i < kHeuristicPoolSize; ++i) {
            const double s = state.selections[static_cast<size_t>(i)];
            const double exploit = state.rewards[static_cast<size_t>(i)] / s;
            const double explore = textbook_term
                                       ? std::sqrt(2.0 * std::log(static_cast<double>(k)) / s)
                                       : std::sqrt(2.0 * std::log(static_cast<double>(k))) / s;
            const double phi = exploit + explore;
            if (phi > best) {
                best = phi;
                arm = i;
            }
        }
    }
    ++state.selections[static_cast<size_t>(arm)];
    return arm;
}

int select_random(Rng& rng) {
    std::uniform_int_distribution<int> pick(0, kHeuristicPoolSize - 1);
    return pick(rng);
}

}  // namespace cevrp
