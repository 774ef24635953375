#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdpal/symmat.hpp"

namespace sdpal {

// One stored coefficient of a constraint matrix, upper triangle (row <= col).
struct SparseEntry {
  int row;
  int col;
  double value;
};

// Sparse symmetric constraint matrix A_i. Only the upper triangle is stored;
// <A, X> and y*A accumulation account for the mirrored entries.
class ConstraintMatrix {
 public:
  ConstraintMatrix(int index, int order, std::vector<SparseEntry> entries);

  int index() const { return index_; }
  int order() const { return order_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }

  // <A, X>
  double dot(const Matrix& x) const;

  // m += weight * A
  void add_scaled(double weight, Matrix& m) const;

  // <A, A>
  double self_inner() const;

  Matrix to_dense() const;

 private:
  int index_;
  int order_;
  std::vector<SparseEntry> entries_;
};

// The linear map A: S_n -> R^m together with its adjoint and a prepared
// solver for the Gram system (A A^T) u = rhs. When all pairwise inner
// products <A_i, A_j>, i != j, vanish the Gram matrix is diagonal and solves
// are elementwise divisions; otherwise a sparse Cholesky factor is computed
// once at construction and reused for every solve.
class ConstraintOperator {
 public:
  ConstraintOperator(int order, std::vector<ConstraintMatrix> constraints);

  int order() const { return n_; }
  int constraint_count() const { return m_; }
  const std::vector<ConstraintMatrix>& constraints() const {
    return constraints_;
  }

  // (A X)_i = <A_i, X>
  Vector apply(const Matrix& x) const;

  // A^T y = sum_i y_i A_i
  Matrix apply_adjoint(const Vector& y) const;

  // Solves (A A^T) u = rhs.
  Vector solve_gram(const Vector& rhs) const;

  bool gram_is_diagonal() const { return diagonal_; }
  const Vector& gram_diagonal() const { return gram_diag_; }

  // (A A^T) v, for residual checks.
  Vector gram_multiply(const Vector& v) const;

 private:
  void prepare_gram();

  int n_ = 0;
  int m_ = 0;
  std::vector<ConstraintMatrix> constraints_;
  bool diagonal_ = false;
  Vector gram_diag_;
  Eigen::SparseMatrix<double> gram_;
  std::shared_ptr<const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>
      llt_;
};

// Standard-form pair: min <C, X> s.t. A X = b, X PSD, with dual
// max b^T y s.t. C - A^T y = Z PSD.
struct SdpProblem {
  SdpProblem(Matrix c, ConstraintOperator op, Vector b, std::string name = "");

  int n;
  Matrix C;
  ConstraintOperator op;
  Vector b;
  std::string name;

  std::optional<double> known_optimal_value;

  // Generators that flip max problems into the engine's min form set these so
  // reported objectives come back in the family's natural orientation:
  // reported = report_scale * objective + report_offset.
  double report_scale = 1.0;
  double report_offset = 0.0;

  double reported(double objective) const {
    return report_scale * objective + report_offset;
  }
};

// Scaled infeasibilities and objectives at a triple (X, y, Z).
struct ResidualReport {
  double r_p = 0.0;    // ||A X - b|| / (1 + ||b||)
  double r_d = 0.0;    // ||C - Z - A^T y|| / (1 + ||C||)
  double delta = 0.0;  // max(r_p, r_d)
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double compl_norm = 0.0;  // ||Z X||_F
};

ResidualReport residuals(const SdpProblem& p, const Matrix& x, const Vector& y,
                         const Matrix& z);

// Certified weak-duality bound from an approximate dual point: shifts y along
// a multiplier direction w with A^T w = I until C - A^T y is exactly PSD, and
// returns the shifted b^T y (a true lower bound on the primal optimum).
// Returns nothing when the identity is not in the range of A^T.
std::optional<double> certified_dual_bound(const SdpProblem& p,
                                           const Vector& y);

}  // namespace sdpal
