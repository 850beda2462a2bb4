#ifndef CEVRP_SOLUTION_HPP
#define CEVRP_SOLUTION_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cevrp/instance.hpp"

namespace cevrp {

using Rng = std::mt19937_64;

/// Giant-tour encoding: node sequence starting and ending at depot 0, with
/// intermediate 0s delimiting routes. Stations may repeat, customers may not.
struct Tour {
    std::vector<NodeId> seq;
    mutable std::optional<double> cached_fitness;
};

enum class ViolationKind {
    DuplicateCustomer,
    MissingCustomer,
    LoadExceeded,
    BatteryNegative,
    MalformedDelimiters,
};

struct Violation {
    ViolationKind kind;
    int route = -1;     // 0-based route index, -1 when structural
    int position = -1;  // index into seq, -1 when not applicable
    NodeId node = -1;
};

const char* to_string(ViolationKind kind);

/// Total arc distance of the tour; caches the value on the tour.
double evaluate(const Tour& tour, const Instance& inst);

/// Empty result iff the tour is CEVRP-feasible (all customers once, route
/// loads within capacity, battery never negative with full recharge at
/// stations and the depot).
std::vector<Violation> validate(const Tour& tour, const Instance& inst);

/// Forward-simulates each route and inserts the cheapest reachable station
/// before the first arc that would drain the battery below zero. Returns
/// nullopt when no station assignment makes some route feasible.
std::optional<Tour> insert_stations(Tour tour, const Instance& inst);

/// Single-route variant of insert_stations. path includes the leading and
/// trailing depot 0.
std::optional<std::vector<NodeId>> make_route_energy_feasible(std::vector<NodeId> path,
                                                              const Instance& inst);

bool route_energy_feasible(const std::vector<NodeId>& path, const Instance& inst);

/// Removes adjacent/duplicate station visits, stations directly after a
/// depot departure, and empty routes.
Tour normalize(Tour tour, const Instance& inst);

/// Random permutation split greedily by load, then station insertion.
/// Retries with fresh permutations up to max_attempts.
std::optional<Tour> construct_initial(const Instance& inst, Rng& rng, int max_attempts = 50);

/// Competition-style text: comma-separated file-numbered node ids with the
/// depot between routes, then a "FITNESS: <value>" line.
std::string to_solution_text(const Tour& tour, const Instance& inst);

struct ParsedSolution {
    Tour tour;
    std::optional<double> stated_fitness;
};
ParsedSolution parse_solution_text(const std::string& text, const Instance& inst);

/// Helper for iterating routes: pairs of (begin, end) indices into seq,
/// exclusive of the delimiting depots.
std::vector<std::pair<int, int>> route_spans(const std::vector<NodeId>& seq);

double route_load(const std::vector<NodeId>& seq, int begin, int end, const Instance& inst);

}  // namespace cevrp

#endif
