#include "gridnls/function_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridnls/norms.hpp"

namespace gridnls {
namespace {

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("function csv: bad number '" + std::string(text) + "'");
  }
  return v;
}

long parse_int(std::string_view text) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("function csv: bad integer '" + std::string(text) + "'");
  }
  return v;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* ext) {
  auto p = stem;
  p += ext;
  return p;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buf, ptr};
}

void write_function_csv(const GraphFunction& u, std::ostream& out) {
  const auto& g = u.graph();
  const int m = g.mesh();
  out << "edge_id,local_s,value\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    for (int i = 0; i <= m; ++i) {
      const double s = static_cast<double>(i) / m;
      out << e << ',' << format_double(s) << ',' << format_double(u.at(static_cast<int>(e), i)) << '\n';
    }
  }
}

std::string function_sidecar_json(const GraphFunction& u) {
  // Fixed key order, hand-formatted for byte stability.
  std::ostringstream os;
  os << "{\"L\":" << u.graph().half_width() << ",\"m\":" << u.graph().mesh()
     << ",\"mass\":" << format_double(mass(u)) << ",\"kinetic\":" << format_double(kinetic(u)) << "}\n";
  return os.str();
}

GraphFunction read_function_csv(const GridPtr& graph, std::istream& in) {
  const auto& g = *graph;
  const int m = g.mesh();
  std::string line;
  if (!std::getline(in, line) || line != "edge_id,local_s,value") {
    throw std::runtime_error("function csv: missing header 'edge_id,local_s,value'");
  }
  std::vector<double> values(g.num_dofs(), 0.0);
  std::vector<char> seen(g.num_dofs(), 0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw std::runtime_error("function csv: malformed row");
    const std::string_view view(line);
    const long edge = parse_int(view.substr(0, c1));
    const double s = parse_double(view.substr(c1 + 1, c2 - c1 - 1));
    const double value = parse_double(view.substr(c2 + 1));
    if (edge < 0 || static_cast<std::size_t>(edge) >= g.num_edges()) throw std::runtime_error("function csv: edge out of range");
    const double scaled = s * m;
    const long local = std::lround(scaled);
    if (local < 0 || local > m || std::abs(scaled - static_cast<double>(local)) > 1e-9) {
      throw std::runtime_error("function csv: local_s is not a mesh node");
    }
    if (!std::isfinite(value)) throw std::runtime_error("function csv: non-finite value");
    const int dof = g.node_dof(static_cast<int>(edge), static_cast<int>(local));
    if (dof == GridGraph::kPinned) {
      if (value != 0.0) throw std::runtime_error("function csv: nonzero value on boundary vertex");
    } else if (seen[dof]) {
      if (values[dof] != value) throw std::runtime_error("function csv: vertex values disagree across edges");
    } else {
      values[dof] = value;
      seen[dof] = 1;
    }
    ++rows;
  }
  if (rows != g.num_edges() * (static_cast<std::size_t>(m) + 1)) throw std::runtime_error("function csv: wrong row count");
  return GraphFunction(graph, std::move(values));
}

void dump_function(const GraphFunction& u, const std::filesystem::path& stem) {
  std::ofstream csv(with_suffix(stem, ".csv"), std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + with_suffix(stem, ".csv").string());
  write_function_csv(u, csv);
  std::ofstream json(with_suffix(stem, ".json"), std::ios::binary);
  if (!json) throw std::runtime_error("cannot write " + with_suffix(stem, ".json").string());
  json << function_sidecar_json(u);
}

GraphFunction load_function(const std::filesystem::path& stem) {
  std::ifstream json_in(with_suffix(stem, ".json"));
  if (!json_in) throw std::runtime_error("cannot read " + with_suffix(stem, ".json").string());
  const auto meta = nlohmann::json::parse(json_in);
  auto graph = build_grid({meta.at("L").get<int>(), meta.at("m").get<int>()});
  std::ifstream csv_in(with_suffix(stem, ".csv"));
  if (!csv_in) throw std::runtime_error("cannot read " + with_suffix(stem, ".csv").string());
  return read_function_csv(graph, csv_in);
}

}  // namespace gridnls
