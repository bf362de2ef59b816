// Truncated square-grid metric graph and piecewise-linear functions on it.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace gridnls {

/// Truncation window [-L, L]^2 of the unit grid, with `mesh` uniform
/// subintervals on every edge.
struct GridSpec {
  int half_width{1};
  int mesh{1};
};

enum class Orientation : std::uint8_t { Horizontal, Vertical };

struct LatticePoint {
  int x{0};
  int y{0};
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Edges run from the lattice point with the smaller coordinate (`tail`) to
/// the larger one (`head`); local arc length s in [0,1] grows along x or y.
struct Edge {
  int tail{0};
  int head{0};
  Orientation orientation{Orientation::Horizontal};
};

class GridGraph {
 public:
  static constexpr int kPinned = -1;

  explicit GridGraph(GridSpec spec);

  const GridSpec& spec() const noexcept { return spec_; }
  int half_width() const noexcept { return spec_.half_width; }
  int mesh() const noexcept { return spec_.mesh; }
  double cell_length() const noexcept { return 1.0 / spec_.mesh; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_dofs() const noexcept { return num_dofs_; }
  std::size_t num_cells() const noexcept { return edges_.size() * static_cast<std::size_t>(spec_.mesh); }

  const std::vector<LatticePoint>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// -1 when (x, y) lies outside the window.
  int vertex_id(int x, int y) const noexcept;
  /// Edge leaving (x, y) towards +x (Horizontal) or +y (Vertical); -1 if absent.
  int edge_id(int x, int y, Orientation o) const noexcept;

  bool is_boundary(int vertex) const noexcept;
  int degree(int vertex) const noexcept;
  std::size_t num_boundary_vertices() const noexcept { return 8 * static_cast<std::size_t>(spec_.half_width); }

  /// Global DOF of a vertex, or kPinned for boundary vertices.
  int vertex_dof(int vertex) const noexcept { return vertex_dof_[vertex]; }
  /// DOFs of the m+1 nodes of an edge, local index 0 at the tail vertex.
  std::span<const int> edge_nodes(int edge) const noexcept {
    const auto stride = static_cast<std::size_t>(spec_.mesh) + 1;
    return {node_dof_.data() + stride * static_cast<std::size_t>(edge), stride};
  }
  int node_dof(int edge, int local) const noexcept { return edge_nodes(edge)[local]; }

  /// Lumped (row-sum) mass weight of each DOF: h for edge-interior nodes,
  /// deg*h/2 for vertices.
  const std::vector<double>& lumped_weights() const noexcept { return lumped_; }

  /// Inverse map of a DOF back to a representative (edge, local) position.
  struct NodeRef {
    int edge;
    int local;
  };
  NodeRef dof_location(int dof) const noexcept { return dof_location_[dof]; }

  /// Lattice coordinates of the position of a node in the plane.
  std::pair<double, double> node_position(int edge, int local) const noexcept;

 private:
  GridSpec spec_;
  std::vector<LatticePoint> vertices_;
  std::vector<Edge> edges_;
  std::vector<int> vertex_dof_;
  std::vector<int> node_dof_;
  std::vector<NodeRef> dof_location_;
  std::vector<double> lumped_;
  std::size_t num_dofs_{0};
};

using GridPtr = std::shared_ptr<const GridGraph>;

/// Throws std::invalid_argument for half_width < 1 or mesh < 1.
GridPtr build_grid(GridSpec spec);

/// Continuous piecewise-linear function with one value per DOF; boundary
/// vertices are implicitly zero.
class GraphFunction {
 public:
  explicit GraphFunction(GridPtr graph);
  GraphFunction(GridPtr graph, std::vector<double> values);

  const GridGraph& graph() const noexcept { return *graph_; }
  const GridPtr& graph_ptr() const noexcept { return graph_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double dof_value(int dof) const noexcept { return dof == GridGraph::kPinned ? 0.0 : values_[dof]; }
  double at(int edge, int local) const noexcept { return dof_value(graph_->node_dof(edge, local)); }
  double vertex_value(int vertex) const noexcept { return dof_value(graph_->vertex_dof(vertex)); }

  GraphFunction& operator*=(double c) noexcept;
  GraphFunction& operator+=(const GraphFunction& other);
  GraphFunction& operator-=(const GraphFunction& other);
  friend GraphFunction operator*(double c, GraphFunction u) { return u *= c; }
  friend GraphFunction operator+(GraphFunction a, const GraphFunction& b) { return a += b; }
  friend GraphFunction operator-(GraphFunction a, const GraphFunction& b) { return a -= b; }

  bool is_zero() const noexcept;
  bool all_finite() const noexcept;

 private:
  GridPtr graph_;
  std::vector<double> values_;
};

/// Shift by a lattice vector. Values leaving the window are dropped; values
/// entering it are zero.
GraphFunction translate(const GraphFunction& u, int dx, int dy);

/// Embed `profile` (m+1 nodal samples, zero at both ends) on one edge.
GraphFunction embed_edge_function(const GridPtr& graph, int edge, std::span<const double> profile);

/// Evaluates every edge endpoint at every vertex and reports whether all
/// incident edges agree.
bool vertex_values_consistent(const GraphFunction& u);

}  // namespace gridnls
