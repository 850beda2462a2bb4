#include "cevrp/instance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace cevrp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, const std::string& context) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("non-numeric value '" + tok + "' in " + context);
    }
}

long parse_int(const std::string& tok, const std::string& context) {
    double v = parse_number(tok, context);
    long i = static_cast<long>(v);
    if (static_cast<double>(i) != v)
        throw ParseError("expected integer, got '" + tok + "' in " + context);
    return i;
}

}  // namespace

Instance::Instance(std::string name,
                   int n_customers,
                   int n_stations,
                   std::vector<Point> coords,
                   std::vector<double> demand,
                   double max_load,
                   double max_energy,
                   double consumption_rate,
                   int min_routes,
                   std::vector<int> file_ids)
    : name_(std::move(name)),
      n_customers_(n_customers),
      n_stations_(n_stations),
      coords_(std::move(coords)),
      demand_(std::move(demand)),
      max_load_(max_load),
      max_energy_(max_energy),
      consumption_rate_(consumption_rate),
      min_routes_(min_routes),
      file_ids_(std::move(file_ids)) {
    if (n_customers_ < 1) throw ParseError("instance has no customers");
    if (max_load_ <= 0 || max_energy_ <= 0 || consumption_rate_ <= 0)
        throw ParseError("CAPACITY, ENERGY_CAPACITY and ENERGY_CONSUMPTION must be positive");
    const size_t n = static_cast<size_t>(1 + n_customers_ + n_stations_);
    if (coords_.size() != n || demand_.size() != n || file_ids_.size() != n)
        throw ParseError("internal size mismatch building instance");
    for (NodeId c = 1; c <= n_customers_; ++c) {
        if (demand_[static_cast<size_t>(c)] <= 0)
            throw ParseError("customer " + std::to_string(file_id(c)) + " has non-positive demand");
        if (demand_[static_cast<size_t>(c)] > max_load_)
            throw ParseError("customer " + std::to_string(file_id(c)) +
                             " demand exceeds vehicle capacity");
    }

    int max_file_id = *std::max_element(file_ids_.begin(), file_ids_.end());
    canonical_of_file_.assign(static_cast<size_t>(max_file_id) + 1, -1);
    for (size_t i = 0; i < file_ids_.size(); ++i)
        canonical_of_file_[static_cast<size_t>(file_ids_[i])] = static_cast<NodeId>(i);

    proximity_.resize(static_cast<size_t>(n_customers_) + 1);
    for (NodeId c = 1; c <= n_customers_; ++c) {
        auto& row = proximity_[static_cast<size_t>(c)];
        row.reserve(static_cast<size_t>(n_customers_) - 1);
        for (NodeId o = 1; o <= n_customers_; ++o)
            if (o != c) row.push_back(o);
        std::stable_sort(row.begin(), row.end(), [&](NodeId a, NodeId b) {
            return distance(c, a) < distance(c, b);
        });
    }
}

NodeId Instance::node_from_file_id(int file_id) const {
    if (file_id < 0 || file_id >= static_cast<int>(canonical_of_file_.size()) ||
        canonical_of_file_[static_cast<size_t>(file_id)] < 0)
        throw std::out_of_range("unknown file node id " + std::to_string(file_id));
    return canonical_of_file_[static_cast<size_t>(file_id)];
}

NodeId Instance::nearest_station(NodeId a, NodeId b) const {
    NodeId best = -1;
    double best_detour = 0.0;
    for (NodeId s = n_customers_ + 1; s < node_count(); ++s) {
        const double detour = distance(a, s) + distance(s, b);
        if (best < 0 || detour < best_detour) {
            best = s;
            best_detour = detour;
        }
    }
    if (best < 0) throw std::logic_error("nearest_station requires at least one station");
    return best;
}

std::span<const NodeId> Instance::closest_customers(NodeId c, double r_percent) const {
    const auto& row = proximity_[static_cast<size_t>(c)];
    if (row.empty()) return {};
    auto k = static_cast<size_t>(std::ceil(r_percent * static_cast<double>(row.size())));
    k = std::clamp<size_t>(k, 1, row.size());
    return {row.data(), k};
}

Instance parse_instance(std::istream& in) {
    std::map<std::string, std::string> header;
    std::string line;
    std::string section;

    // Header: "KEY : VALUE" lines until the first *_SECTION marker.
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "NODE_COORD_SECTION") {
            section = t;
            break;
        }
        auto colon = t.find(':');
        if (colon == std::string::npos)
            throw ParseError("malformed header line '" + t + "'");
        std::string key = trim(t.substr(0, colon));
        std::string value = trim(t.substr(colon + 1));
        static const char* known[] = {"NAME",          "COMMENT",        "TYPE",
                                      "OPTIMAL_VALUE", "VEHICLES",       "DIMENSION",
                                      "STATIONS",      "CAPACITY",       "ENERGY_CAPACITY",
                                      "ENERGY_CONSUMPTION", "EDGE_WEIGHT_FORMAT"};
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw ParseError("unknown header key '" + key + "'");
        header[key] = value;
    }
    if (section != "NODE_COORD_SECTION")
        throw ParseError("missing NODE_COORD_SECTION");

    auto require = [&](const char* key) -> const std::string& {
        auto it = header.find(key);
        if (it == header.end()) throw ParseError(std::string("missing header key ") + key);
        return it->second;
    };

    if (require("TYPE") != "EVRP")
        throw ParseError("TYPE must be EVRP, got '" + header["TYPE"] + "'");
    if (require("EDGE_WEIGHT_FORMAT") != "EUC_2D")
        throw ParseError("EDGE_WEIGHT_FORMAT must be EUC_2D");

    const long dimension = parse_int(require("DIMENSION"), "DIMENSION");
    const long n_stations = parse_int(require("STATIONS"), "STATIONS");
    const double capacity = parse_number(require("CAPACITY"), "CAPACITY");
    const double energy_capacity = parse_number(require("ENERGY_CAPACITY"), "ENERGY_CAPACITY");
    const double consumption = parse_number(require("ENERGY_CONSUMPTION"), "ENERGY_CONSUMPTION");
    const int min_routes =
        header.count("VEHICLES") ? static_cast<int>(parse_int(header["VEHICLES"], "VEHICLES")) : 0;
    std::string name = header.count("NAME") ? header["NAME"] : "unnamed";
    if (dimension < 2) throw ParseError("DIMENSION must be at least 2");
    if (n_stations < 0) throw ParseError("STATIONS must be non-negative");

    const long n_nodes = dimension + n_stations;
    std::map<int, Point> coords;
    std::map<int, double> demands;
    std::vector<int> station_ids;
    int depot_file_id = -1;

    auto next_data_line = [&](const char* what) -> std::string {
        while (std::getline(in, line)) {
            std::string t = trim(line);
            if (!t.empty()) return t;
        }
        throw ParseError(std::string("unexpected end of file while reading ") + what);
    };

    for (long i = 0; i < n_nodes; ++i) {
        std::string t = next_data_line("NODE_COORD_SECTION");
        if (t == "DEMAND_SECTION")
            throw ParseError("dimension mismatch: NODE_COORD_SECTION has fewer lines than DIMENSION+STATIONS");
        std::istringstream ls(t);
        std::string ids, xs, ys, extra;
        if (!(ls >> ids >> xs >> ys) || (ls >> extra))
            throw ParseError("malformed coordinate line '" + t + "'");
        int id = static_cast<int>(parse_int(ids, "NODE_COORD_SECTION"));
        if (coords.count(id)) throw ParseError("duplicate node id " + std::to_string(id));
        coords[id] = {parse_number(xs, "NODE_COORD_SECTION"), parse_number(ys, "NODE_COORD_SECTION")};
    }

    if (next_data_line("DEMAND_SECTION") != "DEMAND_SECTION")
        throw ParseError("dimension mismatch or missing DEMAND_SECTION");
    for (long i = 0; i < dimension; ++i) {
        std::string t = next_data_line("DEMAND_SECTION");
        if (t == "STATIONS_COORD_SECTION")
            throw ParseError("dimension mismatch: DEMAND_SECTION has fewer lines than DIMENSION");
        std::istringstream ls(t);
        std::string ids, qs, extra;
        if (!(ls >> ids >> qs) || (ls >> extra))
            throw ParseError("malformed demand line '" + t + "'");
        int id = static_cast<int>(parse_int(ids, "DEMAND_SECTION"));
        demands[id] = parse_number(qs, "DEMAND_SECTION");
    }

    if (next_data_line("STATIONS_COORD_SECTION") != "STATIONS_COORD_SECTION")
        throw ParseError("dimension mismatch or missing STATIONS_COORD_SECTION");
    for (long i = 0; i < n_stations; ++i) {
        std::string t = next_data_line("STATIONS_COORD_SECTION");
        if (t == "DEPOT_SECTION")
            throw ParseError("dimension mismatch: STATIONS_COORD_SECTION has fewer lines than STATIONS");
        station_ids.push_back(static_cast<int>(parse_int(t, "STATIONS_COORD_SECTION")));
    }

    if (next_data_line("DEPOT_SECTION") != "DEPOT_SECTION")
        throw ParseError("missing DEPOT_SECTION");
    depot_file_id = static_cast<int>(parse_int(next_data_line("DEPOT_SECTION"), "DEPOT_SECTION"));
    if (parse_int(next_data_line("DEPOT_SECTION"), "DEPOT_SECTION") != -1)
        throw ParseError("DEPOT_SECTION must be terminated by -1");
    {
        std::string t = next_data_line("EOF");
        if (t != "EOF") throw ParseError("expected EOF, got '" + t + "'");
    }

    if (!coords.count(depot_file_id))
        throw ParseError("depot id " + std::to_string(depot_file_id) + " has no coordinates");
    for (int sid : station_ids)
        if (!coords.count(sid))
            throw ParseError("station id " + std::to_string(sid) + " has no coordinates");

    // Remap to the canonical depot/customers/stations layout, preserving
    // file order within each group.
    std::vector<Point> out_coords;
    std::vector<double> out_demand;
    std::vector<int> out_file_ids;
    out_coords.push_back(coords[depot_file_id]);
    out_demand.push_back(0.0);
    out_file_ids.push_back(depot_file_id);
    if (demands.count(depot_file_id) && demands[depot_file_id] != 0.0)
        throw ParseError("depot demand must be zero");

    for (const auto& [id, p] : coords) {
        if (id == depot_file_id) continue;
        if (std::find(station_ids.begin(), station_ids.end(), id) != station_ids.end()) continue;
        auto dit = demands.find(id);
        if (dit == demands.end())
            throw ParseError("customer " + std::to_string(id) + " missing from DEMAND_SECTION");
        out_coords.push_back(p);
        out_demand.push_back(dit->second);
        out_file_ids.push_back(id);
    }
    const int n_customers = static_cast<int>(out_coords.size()) - 1;
    if (n_customers != static_cast<int>(dimension) - 1)
        throw ParseError("dimension mismatch between DIMENSION and customer count");

    for (int sid : station_ids) {
        out_coords.push_back(coords[sid]);
        out_demand.push_back(0.0);
        out_file_ids.push_back(sid);
    }

    return Instance(std::move(name), n_customers, static_cast<int>(n_stations),
                    std::move(out_coords), std::move(out_demand), capacity, energy_capacity,
                    consumption, min_routes, std::move(out_file_ids));
}

Instance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open instance file: " + path);
    return parse_instance(f);
}

}  // namespace cevrp
