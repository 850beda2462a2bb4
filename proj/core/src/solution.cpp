#include "cevrp/solution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cevrp {

namespace {
constexpr double kEps = 1e-9;
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::DuplicateCustomer: return "DuplicateCustomer";
        case ViolationKind::MissingCustomer: return "MissingCustomer";
        case ViolationKind::LoadExceeded: return "LoadExceeded";
        case ViolationKind::BatteryNegative: return "BatteryNegative";
        case ViolationKind::MalformedDelimiters: return "MalformedDelimiters";
    }
    return "?";
}

std::vector<std::pair<int, int>> route_spans(const std::vector<NodeId>& seq) {
    std::vector<std::pair<int, int>> spans;
    int start = -1;
    for (int i = 0; i < static_cast<int>(seq.size()); ++i) {
        if (seq[static_cast<size_t>(i)] == 0) {
            if (start >= 0 && i > start) spans.emplace_back(start, i);
            start = i + 1;
        }
    }
    return spans;
}

double route_load(const std::vector<NodeId>& seq, int begin, int end, const Instance& inst) {
    double load = 0.0;
    for (int i = begin; i < end; ++i) load += inst.demand(seq[static_cast<size_t>(i)]);
    return load;
}

double evaluate(const Tour& tour, const Instance& inst) {
    if (tour.seq.size() < 2 || tour.seq.front() != 0 || tour.seq.back() != 0)
        throw std::invalid_argument("evaluate: tour must start and end at the depot");
    double total = 0.0;
    for (size_t i = 0; i + 1 < tour.seq.size(); ++i)
        total += inst.distance(tour.seq[i], tour.seq[i + 1]);
    tour.cached_fitness = total;
    return total;
}

std::vector<Violation> validate(const Tour& tour, const Instance& inst) {
    std::vector<Violation> out;
    const auto& seq = tour.seq;
    if (seq.size() < 2 || seq.front() != 0 || seq.back() != 0) {
        out.push_back({ViolationKind::MalformedDelimiters, -1, -1, -1});
        return out;
    }

    std::vector<int> seen(static_cast<size_t>(inst.customer_count()) + 1, 0);
    for (size_t i = 0; i < seq.size(); ++i) {
        NodeId n = seq[i];
        if (n < 0 || n >= inst.node_count()) {
            out.push_back({ViolationKind::MalformedDelimiters, -1, static_cast<int>(i), n});
            return out;
        }
        if (inst.is_customer(n) && ++seen[static_cast<size_t>(n)] == 2)
            out.push_back({ViolationKind::DuplicateCustomer, -1, static_cast<int>(i), n});
    }
    for (NodeId c = 1; c <= inst.customer_count(); ++c)
        if (seen[static_cast<size_t>(c)] == 0)
            out.push_back({ViolationKind::MissingCustomer, -1, -1, c});

    const auto spans = route_spans(seq);
    for (int r = 0; r < static_cast<int>(spans.size()); ++r) {
        const auto [b, e] = spans[static_cast<size_t>(r)];
        if (route_load(seq, b, e, inst) > inst.max_load() + kEps)
            out.push_back({ViolationKind::LoadExceeded, r, b, seq[static_cast<size_t>(b)]});

        double battery = inst.max_energy();
        NodeId prev = 0;
        for (int i = b; i <= e; ++i) {
            NodeId node = (i == e) ? 0 : seq[static_cast<size_t>(i)];
            battery -= inst.energy(prev, node);
            if (battery < -kEps) {
                out.push_back({ViolationKind::BatteryNegative, r, i, node});
                break;
            }
            if (node == 0 || inst.is_station(node)) battery = inst.max_energy();
            prev = node;
        }
    }
    return out;
}

bool route_energy_feasible(const std::vector<NodeId>& path, const Instance& inst) {
    double battery = inst.max_energy();
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        battery -= inst.energy(path[i], path[i + 1]);
        if (battery < -kEps) return false;
        if (path[i + 1] == 0 || inst.is_station(path[i + 1])) battery = inst.max_energy();
    }
    return true;
}

std::optional<std::vector<NodeId>> make_route_energy_feasible(std::vector<NodeId> path,
                                                              const Instance& inst) {
    if (inst.station_count() == 0)
        return route_energy_feasible(path, inst) ? std::optional(std::move(path)) : std::nullopt;

    const int insertion_cap = static_cast<int>(path.size()) + 8 * inst.station_count();
    int inserted = 0;

    // Battery on departure from each node (reset rule already applied).
    std::vector<double> depart;
    const auto simulate = [&]() -> long {
        depart.assign(path.size(), 0.0);
        double battery = inst.max_energy();
        depart[0] = battery;
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            const double next = battery - inst.energy(path[i], path[i + 1]);
            if (next < -kEps) return static_cast<long>(i);  // arc (i, i+1) fails
            battery = next;
            const NodeId v = path[i + 1];
            if (v == 0 || inst.is_station(v)) battery = inst.max_energy();
            depart[i + 1] = battery;
        }
        return -1;
    };

    while (true) {
        const long fail = simulate();
        if (fail < 0) return path;
        // Recharge as late as possible: scan backwards from the failing arc
        // for one where a station is still reachable and can pass the battery
        // on to the next node.
        NodeId best = -1;
        long best_arc = -1;
        double best_detour = 0.0;
        for (long j = fail; j >= 0 && best < 0; --j) {
            const NodeId a = path[static_cast<size_t>(j)];
            const NodeId b = path[static_cast<size_t>(j) + 1];
            for (NodeId s = inst.customer_count() + 1; s < inst.node_count(); ++s) {
                if (s == a || s == b) continue;
                if (depart[static_cast<size_t>(j)] - inst.energy(a, s) < -kEps) continue;
                if (inst.energy(s, b) > inst.max_energy() + kEps) continue;
                // must leave b with strictly more charge than the direct arc did
                const double arr_old = depart[static_cast<size_t>(j)] - inst.energy(a, b);
                if (inst.max_energy() - inst.energy(s, b) <= arr_old + kEps) continue;
                const double detour = inst.distance(a, s) + inst.distance(s, b) - inst.distance(a, b);
                if (best < 0 || detour < best_detour) {
                    best = s;
                    best_arc = j;
                    best_detour = detour;
                }
            }
        }
        if (best < 0 || ++inserted > insertion_cap) return std::nullopt;
        path.insert(path.begin() + best_arc + 1, best);
    }
}

std::optional<Tour> insert_stations(Tour tour, const Instance& inst) {
    std::vector<NodeId> out;
    out.reserve(tour.seq.size());
    out.push_back(0);
    for (const auto& [b, e] : route_spans(tour.seq)) {
        std::vector<NodeId> path;
        path.push_back(0);
        path.insert(path.end(), tour.seq.begin() + b, tour.seq.begin() + e);
        path.push_back(0);
        auto fixed = make_route_energy_feasible(std::move(path), inst);
        if (!fixed) return std::nullopt;
        out.insert(out.end(), fixed->begin() + 1, fixed->end());
    }
    tour.seq = std::move(out);
    tour.cached_fitness.reset();
    return tour;
}

Tour normalize(Tour tour, const Instance& inst) {
    std::vector<NodeId> out;
    out.reserve(tour.seq.size());
    out.push_back(0);
    for (NodeId n : tour.seq) {
        if (n == 0) {
            if (out.back() == 0) continue;
            out.push_back(0);
            continue;
        }
        // A station visit directly after a depot departure or another
        // station visit is redundant: the battery is already full there.
        if (inst.is_station(n) && (out.back() == 0 || inst.is_station(out.back()))) continue;
        out.push_back(n);
    }
    // Trailing station visits left dangling by empty-route removal.
    if (out.back() != 0) out.push_back(0);
    tour.seq = std::move(out);
    tour.cached_fitness.reset();
    return tour;
}

std::optional<Tour> construct_initial(const Instance& inst, Rng& rng, int max_attempts) {
    std::vector<NodeId> customers(static_cast<size_t>(inst.customer_count()));
    std::iota(customers.begin(), customers.end(), 1);

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::shuffle(customers.begin(), customers.end(), rng);
        Tour tour;
        tour.seq.push_back(0);
        double load = 0.0;
        for (NodeId c : customers) {
            if (load + inst.demand(c) > inst.max_load() + kEps) {
                tour.seq.push_back(0);
                load = 0.0;
            }
            tour.seq.push_back(c);
            load += inst.demand(c);
        }
        tour.seq.push_back(0);
        auto fixed = insert_stations(std::move(tour), inst);
        if (fixed) return fixed;
    }
    return std::nullopt;
}

std::string to_solution_text(const Tour& tour, const Instance& inst) {
    std::ostringstream out;
    for (size_t i = 0; i < tour.seq.size(); ++i) {
        if (i) out << ',';
        out << inst.file_id(tour.seq[i]);
    }
    out << '\n';
    out.precision(10);
    out << "FITNESS: " << evaluate(tour, inst) << '\n';
    return out.str();
}

ParsedSolution parse_solution_text(const std::string& text, const Instance& inst) {
    ParsedSolution result;
    std::istringstream in(text);
    std::string line;
    bool have_nodes = false;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line.compare(first, 8, "FITNESS:") == 0) {
            result.stated_fitness = std::stod(line.substr(first + 8));
            continue;
        }
        if (have_nodes) throw std::invalid_argument("solution file has more than one node line");
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) {
            const auto b = tok.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            result.tour.seq.push_back(inst.node_from_file_id(std::stoi(tok)));
        }
        have_nodes = true;
    }
    if (!have_nodes) throw std::invalid_argument("solution file has no node line");
    return result;
}

}  // namespace cevrp
