#ifndef CEVRP_SVG_HPP
#define CEVRP_SVG_HPP

#include <string>

#include "cevrp/solver.hpp"

namespace cevrp {

/// Route map: filled red depot, hollow gray customers, filled black
/// stations, one polyline per route. Deterministic output.
std::string route_map_svg(const Instance& inst, const Tour& tour);

/// Per-epoch selection counts and reward totals of the 8 heuristics as two
/// stacked line charts.
std::string trace_svg(const RunRecord& record);

}  // namespace cevrp

#endif
