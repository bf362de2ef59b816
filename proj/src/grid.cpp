#include "gridnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gridnls {

GridGraph::GridGraph(GridSpec spec) : spec_(spec) {
  if (spec.half_width < 1) {
    throw std::invalid_argument("GridSpec: half_width must be >= 1 (got " + std::to_string(spec.half_width) + ")");
  }
  if (spec.mesh < 1) {
    throw std::invalid_argument("GridSpec: mesh must be >= 1 (got " + std::to_string(spec.mesh) + ")");
  }
  const int L = spec.half_width;
  const int m = spec.mesh;
  const int side = 2 * L + 1;

  vertices_.reserve(static_cast<std::size_t>(side) * side);
  for (int y = -L; y <= L; ++y) {
    for (int x = -L; x <= L; ++x) vertices_.push_back({x, y});
  }

  // Horizontal edges first, row by row, then vertical edges column by column.
  edges_.reserve(static_cast<std::size_t>(2 * side * 2 * L));
  for (int y = -L; y <= L; ++y) {
    for (int x = -L; x < L; ++x) edges_.push_back({vertex_id(x, y), vertex_id(x + 1, y), Orientation::Horizontal});
  }
  for (int x = -L; x <= L; ++x) {
    for (int y = -L; y < L; ++y) edges_.push_back({vertex_id(x, y), vertex_id(x, y + 1), Orientation::Vertical});
  }

  const double h = 1.0 / m;
  vertex_dof_.assign(vertices_.size(), kPinned);
  int next = 0;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!is_boundary(static_cast<int>(v))) {
      vertex_dof_[v] = next++;
      lumped_.push_back(0.5 * h * degree(static_cast<int>(v)));
    }
  }
  const auto stride = static_cast<std::size_t>(m) + 1;
  node_dof_.resize(edges_.size() * stride);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    int* nodes = node_dof_.data() + e * stride;
    nodes[0] = vertex_dof_[edges_[e].tail];
    nodes[m] = vertex_dof_[edges_[e].head];
    for (int i = 1; i < m; ++i) {
      nodes[i] = next++;
      lumped_.push_back(h);
    }
  }
  num_dofs_ = static_cast<std::size_t>(next);

  dof_location_.assign(num_dofs_, {0, 0});
  for (std::size_t e = edges_.size(); e-- > 0;) {
    const int* nodes = node_dof_.data() + e * stride;
    for (int i = 0; i <= m; ++i) {
      if (nodes[i] != kPinned) dof_location_[nodes[i]] = {static_cast<int>(e), i};
    }
  }
}

int GridGraph::vertex_id(int x, int y) const noexcept {
  const int L = spec_.half_width;
  if (std::abs(x) > L || std::abs(y) > L) return -1;
  return (y + L) * (2 * L + 1) + (x + L);
}

int GridGraph::edge_id(int x, int y, Orientation o) const noexcept {
  const int L = spec_.half_width;
  const int side = 2 * L + 1;
  if (o == Orientation::Horizontal) {
    if (x < -L || x >= L || std::abs(y) > L) return -1;
    return (y + L) * (2 * L) + (x + L);
  }
  if (y < -L || y >= L || std::abs(x) > L) return -1;
  return side * 2 * L + (x + L) * (2 * L) + (y + L);
}

bool GridGraph::is_boundary(int vertex) const noexcept {
  const auto& p = vertices_[vertex];
  return std::abs(p.x) == spec_.half_width || std::abs(p.y) == spec_.half_width;
}

int GridGraph::degree(int vertex) const noexcept {
  const auto& p = vertices_[vertex];
  const int L = spec_.half_width;
  return (p.x > -L) + (p.x < L) + (p.y > -L) + (p.y < L);
}

std::pair<double, double> GridGraph::node_position(int edge, int local) const noexcept {
  const auto& e = edges_[edge];
  const auto& t = vertices_[e.tail];
  const double s = static_cast<double>(local) / spec_.mesh;
  if (e.orientation == Orientation::Horizontal) return {t.x + s, static_cast<double>(t.y)};
  return {static_cast<double>(t.x), t.y + s};
}

GridPtr build_grid(GridSpec spec) { return std::make_shared<const GridGraph>(spec); }

GraphFunction::GraphFunction(GridPtr graph) : graph_(std::move(graph)) {
  if (!graph_) throw std::invalid_argument("GraphFunction: null graph");
  values_.assign(graph_->num_dofs(), 0.0);
}

GraphFunction::GraphFunction(GridPtr graph, std::vector<double> values)
    : graph_(std::move(graph)), values_(std::move(values)) {
  if (!graph_) throw std::invalid_argument("GraphFunction: null graph");
  if (values_.size() != graph_->num_dofs()) {
    throw std::invalid_argument("GraphFunction: expected " + std::to_string(graph_->num_dofs()) + " values, got " +
                                std::to_string(values_.size()));
  }
  if (!all_finite()) throw std::invalid_argument("GraphFunction: non-finite value");
}

GraphFunction& GraphFunction::operator*=(double c) noexcept {
  for (auto& v : values_) v *= c;
  return *this;
}

GraphFunction& GraphFunction::operator+=(const GraphFunction& other) {
  if (other.graph_ != graph_) throw std::invalid_argument("GraphFunction: graphs differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GraphFunction& GraphFunction::operator-=(const GraphFunction& other) {
  if (other.graph_ != graph_) throw std::invalid_argument("GraphFunction: graphs differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

bool GraphFunction::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool GraphFunction::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GraphFunction translate(const GraphFunction& u, int dx, int dy) {
  const auto& g = u.graph();
  GraphFunction out(u.graph_ptr());
  auto dst = out.values();
  const int m = g.mesh();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edges()[e];
    const auto& tail = g.vertices()[edge.tail];
    const int src_edge = g.edge_id(tail.x - dx, tail.y - dy, edge.orientation);
    if (src_edge < 0) continue;
    const auto to = g.edge_nodes(static_cast<int>(e));
    const auto from = g.edge_nodes(src_edge);
    for (int i = 0; i <= m; ++i) {
      if (to[i] != GridGraph::kPinned) dst[to[i]] = u.dof_value(from[i]);
    }
  }
  return out;
}

GraphFunction embed_edge_function(const GridPtr& graph, int edge, std::span<const double> profile) {
  if (edge < 0 || static_cast<std::size_t>(edge) >= graph->num_edges()) {
    throw std::invalid_argument("embed_edge_function: edge id out of range");
  }
  const int m = graph->mesh();
  if (profile.size() != static_cast<std::size_t>(m) + 1) {
    throw std::invalid_argument("embed_edge_function: profile needs mesh+1 samples");
  }
  if (profile.front() != 0.0 || profile.back() != 0.0) {
    throw std::invalid_argument("embed_edge_function: profile endpoints must be 0");
  }
  GraphFunction u(graph);
  const auto nodes = graph->edge_nodes(edge);
  for (int i = 1; i < m; ++i) {
    if (!std::isfinite(profile[i])) throw std::invalid_argument("embed_edge_function: non-finite sample");
    u.values()[nodes[i]] = profile[i];
  }
  return u;
}

bool vertex_values_consistent(const GraphFunction& u) {
  const auto& g = u.graph();
  const int m = g.mesh();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edges()[e];
    if (u.at(static_cast<int>(e), 0) != u.vertex_value(edge.tail)) return false;
    if (u.at(static_cast<int>(e), m) != u.vertex_value(edge.head)) return false;
  }
  return true;
}

}  // namespace gridnls
