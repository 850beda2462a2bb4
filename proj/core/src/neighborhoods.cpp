#include "cevrp/neighborhoods.hpp"

#include <algorithm>
#include <numeric>

namespace cevrp {

namespace {
constexpr double kEps = 1e-9;

size_t position_of(const std::vector<NodeId>& seq, NodeId node) {
    auto it = std::find(seq.begin(), seq.end(), node);
    if (it == seq.end())
        throw std::invalid_argument("node " + std::to_string(node) + " not present in tour");
    return static_cast<size_t>(it - seq.begin());
}
}  // namespace

const char* HeuristicId::name() const {
    static const char* names[kHeuristicPoolSize] = {
        "Swap_r1", "Reversion_r1", "2Opt_r1", "Insertion_r1",
        "Swap_r2", "Reversion_r2", "2Opt_r2", "Insertion_r2"};
    return names[index];
}

Tour apply_heuristic(const Tour& tour, HeuristicId h, NodeId c1, NodeId c2, const Instance& inst) {
    Tour result;
    result.seq = tour.seq;
    auto& seq = result.seq;
    size_t p1 = position_of(seq, c1);
    size_t p2 = position_of(seq, c2);

    switch (h.op()) {
        case PerturbationOp::Swap:
            std::swap(seq[p1], seq[p2]);
            break;
        case PerturbationOp::Reversion:
            if (p1 > p2) std::swap(p1, p2);
            std::reverse(seq.begin() + static_cast<long>(p1),
                         seq.begin() + static_cast<long>(p2) + 1);
            break;
        case PerturbationOp::TwoOpt:
            // Reverses the open segment: arcs (p1,p1+1) and (p2,p2+1) are
            // replaced, the endpoints themselves stay put.
            if (p1 > p2) std::swap(p1, p2);
            std::reverse(seq.begin() + static_cast<long>(p1) + 1,
                         seq.begin() + static_cast<long>(p2) + 1);
            break;
        case PerturbationOp::Insertion: {
            seq.erase(seq.begin() + static_cast<long>(p1));
            size_t pos2 = position_of(seq, c2);
            seq.insert(seq.begin() + static_cast<long>(pos2) + 1, c1);
            break;
        }
    }
    return normalize(std::move(result), inst);
}

NodeId select_c2(NodeId c1, HeuristicId h, const Instance& inst, double r1, double r2, Rng& rng) {
    const double r = h.uses_r1() ? r1 : r2;
    auto candidates = inst.closest_customers(c1, r);
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
}

GenerateResult generate(const Tour& tour, HeuristicId h, CustomerQueue& queue,
                        const Instance& inst, double r1, double r2, Rng& rng) {
    if (queue.cust.empty()) {
        std::vector<NodeId> perm(static_cast<size_t>(inst.customer_count()));
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        queue.cust.assign(perm.begin(), perm.end());
    }
    const NodeId c1 = queue.cust.front();
    queue.cust.pop_front();
    const NodeId c2 = select_c2(c1, h, inst, r1, r2, rng);
    return {apply_heuristic(tour, h, c1, c2, inst), c1, c2};
}

std::optional<Tour> repair_load(Tour tour, const Instance& inst) {
    std::vector<std::vector<NodeId>> routes;
    for (const auto& [b, e] : route_spans(tour.seq))
        routes.emplace_back(tour.seq.begin() + b, tour.seq.begin() + e);

    // Eject, per overloaded route, the customer at which the running load
    // first exceeds capacity, until the route fits.
    std::vector<NodeId> ejected;
    for (auto& route : routes) {
        while (route_load(route, 0, static_cast<int>(route.size()), inst) >
               inst.max_load() + kEps) {
            double running = 0.0;
            for (size_t i = 0; i < route.size(); ++i) {
                running += inst.demand(route[i]);
                if (running > inst.max_load() + kEps) {
                    ejected.push_back(route[i]);
                    route.erase(route.begin() + static_cast<long>(i));
                    break;
                }
            }
        }
    }

    for (NodeId c : ejected) {
        int best_route = -1;
        size_t best_pos = 0;
        double best_dist = 0.0;
        double best_added = 0.0;
        for (int r = 0; r < static_cast<int>(routes.size()); ++r) {
            const auto& route = routes[static_cast<size_t>(r)];
            const double slack = inst.max_load() -
                                 route_load(route, 0, static_cast<int>(route.size()), inst);
            if (slack + kEps < inst.demand(c)) continue;
            for (size_t i = 0; i < route.size(); ++i) {
                if (!inst.is_customer(route[i])) continue;
                const double d = inst.distance(c, route[i]);
                if (best_route >= 0 && d >= best_dist) continue;
                const NodeId prev = (i == 0) ? 0 : route[i - 1];
                const NodeId next = (i + 1 == route.size()) ? 0 : route[i + 1];
                const double before = inst.distance(prev, c) + inst.distance(c, route[i]) -
                                      inst.distance(prev, route[i]);
                const double after = inst.distance(route[i], c) + inst.distance(c, next) -
                                     inst.distance(route[i], next);
                best_route = r;
                best_dist = d;
                best_pos = (before <= after) ? i : i + 1;
                best_added = std::min(before, after);
            }
        }
        (void)best_added;
        if (best_route < 0) return std::nullopt;
        auto& target = routes[static_cast<size_t>(best_route)];
        target.insert(target.begin() + static_cast<long>(best_pos), c);
    }

    Tour result;
    result.seq.push_back(0);
    for (const auto& route : routes) {
        if (route.empty()) continue;
        result.seq.insert(result.seq.end(), route.begin(), route.end());
        result.seq.push_back(0);
    }
    if (result.seq.size() == 1) result.seq.push_back(0);
    return normalize(std::move(result), inst);
}

std::optional<Tour> adjust_stations(Tour tour, const Instance& inst, double memory,
                                    double p_move, double p_eliminate, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<NodeId> out;
    out.push_back(0);

    for (const auto& [b, e] : route_spans(tour.seq)) {
        std::vector<NodeId> path;
        path.push_back(0);
        path.insert(path.end(), tour.seq.begin() + b, tour.seq.begin() + e);
        path.push_back(0);

        if (!route_energy_feasible(path, inst)) {
            auto fixed = make_route_energy_feasible(std::move(path), inst);
            if (!fixed) return std::nullopt;
            path = std::move(*fixed);
        } else {
            std::vector<size_t> stations;
            for (size_t i = 1; i + 1 < path.size(); ++i)
                if (inst.is_station(path[i])) stations.push_back(i);
            if (!stations.empty() && unit(rng) > memory) {
                const bool move = unit(rng) < p_move / (p_move + p_eliminate);
                std::uniform_int_distribution<size_t> pick(0, stations.size() - 1);
                const size_t at = stations[pick(rng)];
                const NodeId station = path[at];
                path.erase(path.begin() + static_cast<long>(at));
                if (move) {
                    // Reinsert before a different arc of the same route. Slots
                    // next to another visit of the same station would create a
                    // zero-length arc, so skip them.
                    std::vector<size_t> slots;
                    for (size_t i = 1; i < path.size(); ++i)
                        if (i != at && path[i - 1] != station && path[i] != station)
                            slots.push_back(i);
                    if (!slots.empty()) {
                        std::uniform_int_distribution<size_t> slot(0, slots.size() - 1);
                        path.insert(path.begin() + static_cast<long>(slots[slot(rng)]), station);
                    } else {
                        path.insert(path.begin() + static_cast<long>(at), station);
                    }
                }
                if (!route_energy_feasible(path, inst)) {
                    auto fixed = make_route_energy_feasible(std::move(path), inst);
                    if (!fixed) return std::nullopt;
                    path = std::move(*fixed);
                }
            }
        }
        out.insert(out.end(), path.begin() + 1, path.end());
    }

    tour.seq = std::move(out);
    tour.cached_fitness.reset();
    return tour;
}

}  // namespace cevrp
