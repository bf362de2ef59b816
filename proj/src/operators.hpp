// Sparse stiffness / consistent-mass matrices and the shifted-Laplacian
// preconditioner shared by the sphere optimizers.
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "gridnls/grid.hpp"

namespace gridnls::detail {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Operators {
  SpMat stiffness;  ///< u^T K u = \int |u'|^2
  SpMat mass;       ///< u^T M u = \int |u|^2
};

Operators assemble_operators(const GridGraph& g);

/// Factorization of K + sigma M. Refactors only when sigma moves by more
/// than a factor of two; the symbolic analysis is done once.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(const Operators& ops);
  void update(double sigma);
  Vec solve(const Vec& rhs) const;
  double sigma() const noexcept { return sigma_; }
  int factorizations() const noexcept { return factorizations_; }

 private:
  const Operators* ops_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  double sigma_{-1.0};
  int factorizations_{0};
};

}  // namespace gridnls::detail
