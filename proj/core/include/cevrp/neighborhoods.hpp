#ifndef CEVRP_NEIGHBORHOODS_HPP
#define CEVRP_NEIGHBORHOODS_HPP

#include <deque>
#include <optional>

#include "cevrp/solution.hpp"

namespace cevrp {

/// The 8-heuristic pool, encoded 0..7 in the order
/// Swap_r1, Reversion_r1, 2Opt_r1, Insertion_r1,
/// Swap_r2, Reversion_r2, 2Opt_r2, Insertion_r2.
constexpr int kHeuristicPoolSize = 8;

enum class PerturbationOp { Swap, Reversion, TwoOpt, Insertion };

struct HeuristicId {
    int index = 0;

    PerturbationOp op() const { return static_cast<PerturbationOp>(index % 4); }
    bool uses_r1() const { return index < 4; }
    const char* name() const;
};

/// Remaining random permutation of customers, consumed front-first across
/// generate() calls and refilled when empty.
struct CustomerQueue {
    std::deque<NodeId> cust;
};

/// Applies one perturbation operator at the positions of customers c1 and c2
/// in the full sequence, then normalizes.
Tour apply_heuristic(const Tour& tour, HeuristicId h, NodeId c1, NodeId c2, const Instance& inst);

/// Uniform draw among the r1%/r2% customers closest to c1.
NodeId select_c2(NodeId c1, HeuristicId h, const Instance& inst, double r1, double r2, Rng& rng);

struct GenerateResult {
    Tour candidate;
    NodeId c1;
    NodeId c2;
};

/// Pops c1 from the queue (refilling it first when empty), draws c2 by
/// closeness and applies the heuristic. The candidate is not yet checked for
/// load or energy feasibility.
GenerateResult generate(const Tour& tour, HeuristicId h, CustomerQueue& queue,
                        const Instance& inst, double r1, double r2, Rng& rng);

/// Ejects the customers at which route loads first exceed capacity and
/// reinserts each next to its nearest customer in a route with enough slack.
/// nullopt when some ejected customer fits nowhere.
std::optional<Tour> repair_load(Tour tour, const Instance& inst);

/// Per route: restores energy feasibility where broken; otherwise, with
/// probability 1-memory, moves or eliminates one station visit (roulette
/// wheel over p_move/p_eliminate) and re-repairs if that broke the route.
std::optional<Tour> adjust_stations(Tour tour, const Instance& inst, double memory,
                                    double p_move, double p_eliminate, Rng& rng);

}  // namespace cevrp

#endif
