// Flat-file dump format for grid functions:
//   CSV  `edge_id,local_s,value`, one row per node of every edge
//   JSON `{"L":..,"m":..,"mass":..,"kinetic":..}` sidecar
// Numbers are printed with 17 significant digits so dump -> load -> dump is
// byte-identical.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gridnls/grid.hpp"

namespace gridnls {

/// Shortest-safe round-trip formatting (17 significant digits, locale-free).
std::string format_double(double v);

void write_function_csv(const GraphFunction& u, std::ostream& out);
std::string function_sidecar_json(const GraphFunction& u);

/// Parses a CSV dump onto an existing graph. Rows must cover every node;
/// vertex values repeated across incident edges must agree exactly and
/// boundary values must be zero. Throws std::runtime_error otherwise.
GraphFunction read_function_csv(const GridPtr& graph, std::istream& in);

/// Writes `<stem>.csv` and `<stem>.json`.
void dump_function(const GraphFunction& u, const std::filesystem::path& stem);
/// Reads the pair written by dump_function, rebuilding the grid from the sidecar.
GraphFunction load_function(const std::filesystem::path& stem);

}  // namespace gridnls
