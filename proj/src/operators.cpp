#include "operators.hpp"

#include <stdexcept>
#include <vector>

namespace gridnls::detail {

Operators assemble_operators(const GridGraph& g) {
  const int m = g.mesh();
  const double h = g.cell_length();
  std::vector<Eigen::Triplet<double>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt.reserve(g.num_cells() * 4);
  mt.reserve(g.num_cells() * 4);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto nodes = g.edge_nodes(static_cast<int>(e));
    for (int i = 0; i < m; ++i) {
      const int a = nodes[i];
      const int b = nodes[i + 1];
      if (a != GridGraph::kPinned) {
        kt.emplace_back(a, a, 1.0 / h);
        mt.emplace_back(a, a, h / 3.0);
      }
      if (b != GridGraph::kPinned) {
        kt.emplace_back(b, b, 1.0 / h);
        mt.emplace_back(b, b, h / 3.0);
      }
      if (a != GridGraph::kPinned && b != GridGraph::kPinned) {
        kt.emplace_back(a, b, -1.0 / h);
        kt.emplace_back(b, a, -1.0 / h);
        mt.emplace_back(a, b, h / 6.0);
        mt.emplace_back(b, a, h / 6.0);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(g.num_dofs());
  Operators ops;
  ops.stiffness.resize(n, n);
  ops.mass.resize(n, n);
  ops.stiffness.setFromTriplets(kt.begin(), kt.end());
  ops.mass.setFromTriplets(mt.begin(), mt.end());
  return ops;
}

ShiftedSolver::ShiftedSolver(const Operators& ops) : ops_(&ops) {
  const SpMat pattern = ops.stiffness + ops.mass;
  ldlt_.analyzePattern(pattern);
}

void ShiftedSolver::update(double sigma) {
  if (sigma_ > 0.0 && sigma < 2.0 * sigma_ && sigma > 0.5 * sigma_) return;
  const SpMat a = ops_->stiffness + sigma * ops_->mass;
  ldlt_.factorize(a);
  if (ldlt_.info() != Eigen::Success) throw std::runtime_error("shifted Laplacian factorization failed");
  sigma_ = sigma;
  ++factorizations_;
}

Vec ShiftedSolver::solve(const Vec& rhs) const { return ldlt_.solve(rhs); }

}  // namespace gridnls::detail
