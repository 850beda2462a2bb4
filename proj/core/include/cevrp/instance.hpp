#ifndef CEVRP_INSTANCE_HPP
#define CEVRP_INSTANCE_HPP

#include <cmath>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cevrp {

/// Canonical node numbering: 0 is the depot, 1..n_customers are customers,
/// n_customers+1..n_customers+n_stations are charging stations.
using NodeId = int;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Immutable CEVRP problem definition. Built by parse_instance(); all
/// accessors are const and safe to share across concurrent runs.
class Instance {
public:
    Instance(std::string name,
             int n_customers,
             int n_stations,
             std::vector<Point> coords,
             std::vector<double> demand,
             double max_load,
             double max_energy,
             double consumption_rate,
             int min_routes,
             std::vector<int> file_ids);

    const std::string& name() const { return name_; }
    int customer_count() const { return n_customers_; }
    int station_count() const { return n_stations_; }
    int node_count() const { return static_cast<int>(coords_.size()); }

    double max_load() const { return max_load_; }
    double max_energy() const { return max_energy_; }
    double consumption_rate() const { return consumption_rate_; }
    int min_routes() const { return min_routes_; }

    bool is_depot(NodeId n) const { return n == 0; }
    bool is_customer(NodeId n) const { return n >= 1 && n <= n_customers_; }
    bool is_station(NodeId n) const { return n > n_customers_ && n < node_count(); }

    const Point& coord(NodeId n) const { return coords_[static_cast<size_t>(n)]; }
    double demand(NodeId n) const { return demand_[static_cast<size_t>(n)]; }

    /// Original 1-based id of a canonical node in the instance file.
    int file_id(NodeId n) const { return file_ids_[static_cast<size_t>(n)]; }
    /// Canonical id for a 1-based file id; throws on unknown ids.
    NodeId node_from_file_id(int file_id) const;

    /// Euclidean distance, double precision, no rounding.
    double distance(NodeId a, NodeId b) const {
        const Point& pa = coords_[static_cast<size_t>(a)];
        const Point& pb = coords_[static_cast<size_t>(b)];
        return std::hypot(pa.x - pb.x, pa.y - pb.y);
    }

    double energy(NodeId a, NodeId b) const { return consumption_rate_ * distance(a, b); }

    /// Station s minimizing distance(a,s) + distance(s,b); ties go to the
    /// lowest station index. Requires at least one station.
    NodeId nearest_station(NodeId a, NodeId b) const;

    /// The ceil(r_percent * (n_customers - 1)) customers closest to c, with a
    /// floor of one candidate. r_percent = 1 yields all other customers.
    std::span<const NodeId> closest_customers(NodeId c, double r_percent) const;

private:
    std::string name_;
    int n_customers_;
    int n_stations_;
    std::vector<Point> coords_;
    std::vector<double> demand_;
    double max_load_;
    double max_energy_;
    double consumption_rate_;
    int min_routes_;
    std::vector<int> file_ids_;
    std::vector<NodeId> canonical_of_file_;       // file id -> canonical id
    std::vector<std::vector<NodeId>> proximity_;  // per customer, others by distance
};

Instance parse_instance(std::istream& in);
Instance load_instance(const std::string& path);

}  // namespace cevrp

#endif
