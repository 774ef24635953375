#include "sdpal/problem.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "sdpal/errors.hpp"

namespace sdpal {

ConstraintMatrix::ConstraintMatrix(int index, int order,
                                   std::vector<SparseEntry> entries)
    : index_(index), order_(order), entries_(std::move(entries)) {
  if (order_ < 1) {
    throw DimensionError("ConstraintMatrix: order must be >= 1");
  }
  for (auto& e : entries_) {
    if (e.row > e.col) std::swap(e.row, e.col);
    if (e.row < 0 || e.col >= order_) {
      throw DimensionError("ConstraintMatrix " + std::to_string(index_) +
                           ": entry (" + std::to_string(e.row) + "," +
                           std::to_string(e.col) + ") out of range");
    }
    if (!std::isfinite(e.value)) {
      throw NumericError("ConstraintMatrix " + std::to_string(index_) +
                         ": non-finite value");
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return std::tie(a.row, a.col) < std::tie(b.row, b.col);
            });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i - 1].row == entries_[i].row &&
        entries_[i - 1].col == entries_[i].col) {
      throw DimensionError("ConstraintMatrix " + std::to_string(index_) +
                           ": duplicate entry (" +
                           std::to_string(entries_[i].row) + "," +
                           std::to_string(entries_[i].col) + ")");
    }
  }
}

double ConstraintMatrix::dot(const Matrix& x) const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    sum += (e.row == e.col ? 1.0 : 2.0) * e.value * x(e.row, e.col);
  }
  return sum;
}

void ConstraintMatrix::add_scaled(double weight, Matrix& m) const {
  for (const auto& e : entries_) {
    m(e.row, e.col) += weight * e.value;
    if (e.row != e.col) m(e.col, e.row) += weight * e.value;
  }
}

double ConstraintMatrix::self_inner() const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    sum += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
  }
  return sum;
}

Matrix ConstraintMatrix::to_dense() const {
  Matrix m = Matrix::Zero(order_, order_);
  add_scaled(1.0, m);
  return m;
}

ConstraintOperator::ConstraintOperator(
    int order, std::vector<ConstraintMatrix> constraints)
    : n_(order),
      m_(static_cast<int>(constraints.size())),
      constraints_(std::move(constraints)) {
  if (n_ < 1) throw DimensionError("ConstraintOperator: order must be >= 1");
  if (m_ < 1) {
    throw DimensionError("ConstraintOperator: at least one constraint");
  }
  for (const auto& a : constraints_) {
    if (a.order() != n_) {
      throw DimensionError("ConstraintOperator: constraint order mismatch");
    }
  }
  prepare_gram();
}

void ConstraintOperator::prepare_gram() {
  // Group stored positions across constraints; entries of A_i and A_j meeting
  // at a position contribute to the Gram entry (i, j).
  std::unordered_map<std::int64_t, std::vector<std::pair<int, double>>> slots;
  for (int k = 0; k < m_; ++k) {
    for (const auto& e : constraints_[k].entries()) {
      slots[static_cast<std::int64_t>(e.row) * n_ + e.col].push_back(
          {k, e.value});
    }
  }

  gram_diag_ = Vector::Zero(m_);
  std::unordered_map<std::int64_t, double> off_diag;
  for (const auto& [pos, hits] : slots) {
    const int row = static_cast<int>(pos / n_);
    const int col = static_cast<int>(pos % n_);
    const double weight = (row == col) ? 1.0 : 2.0;
    for (std::size_t a = 0; a < hits.size(); ++a) {
      gram_diag_[hits[a].first] += weight * hits[a].second * hits[a].second;
      for (std::size_t b = a + 1; b < hits.size(); ++b) {
        const auto [i, vi] = hits[a];
        const auto [j, vj] = hits[b];
        const std::int64_t key = static_cast<std::int64_t>(std::min(i, j)) * m_ +
                                 std::max(i, j);
        off_diag[key] += weight * vi * vj;
      }
    }
  }

  bool all_zero = true;
  for (const auto& [key, value] : off_diag) {
    if (value != 0.0) {
      all_zero = false;
      break;
    }
  }

  if (all_zero) {
    diagonal_ = true;
    for (int k = 0; k < m_; ++k) {
      if (gram_diag_[k] <= 0.0) {
        throw RankError("ConstraintOperator: constraint " + std::to_string(k) +
                        " is zero, A A^T is singular");
      }
    }
    return;
  }

  diagonal_ = false;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(off_diag.size() * 2 + m_);
  for (int k = 0; k < m_; ++k) {
    triplets.emplace_back(k, k, gram_diag_[k]);
  }
  for (const auto& [key, value] : off_diag) {
    if (value == 0.0) continue;
    const int i = static_cast<int>(key / m_);
    const int j = static_cast<int>(key % m_);
    triplets.emplace_back(i, j, value);
    triplets.emplace_back(j, i, value);
  }
  gram_.resize(m_, m_);
  gram_.setFromTriplets(triplets.begin(), triplets.end());

  auto llt =
      std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
  llt->compute(gram_);
  if (llt->info() != Eigen::Success) {
    throw RankError("ConstraintOperator: Cholesky of A A^T failed, operator "
                    "is rank deficient");
  }
  // Pivots of the factorization are the squared diagonal of L.
  const Vector ldiag = llt->matrixL().toDense().diagonal();
  const double max_pivot = ldiag.maxCoeff() * ldiag.maxCoeff();
  const double min_pivot = ldiag.minCoeff() * ldiag.minCoeff();
  if (!(min_pivot > 1e-12 * max_pivot)) {
    throw RankError("ConstraintOperator: A A^T pivot " +
                    std::to_string(min_pivot) + " below 1e-12 * " +
                    std::to_string(max_pivot) + ", operator is rank deficient");
  }
  llt_ = std::move(llt);
}

Vector ConstraintOperator::apply(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) {
    throw DimensionError("apply: matrix order " + std::to_string(x.rows()) +
                         ", expected " + std::to_string(n_));
  }
  Vector out(m_);
  for (int k = 0; k < m_; ++k) {
    out[k] = constraints_[k].dot(x);
  }
  return out;
}

Matrix ConstraintOperator::apply_adjoint(const Vector& y) const {
  if (y.size() != m_) {
    throw DimensionError("apply_adjoint: vector length " +
                         std::to_string(y.size()) + ", expected " +
                         std::to_string(m_));
  }
  Matrix out = Matrix::Zero(n_, n_);
  for (int k = 0; k < m_; ++k) {
    constraints_[k].add_scaled(y[k], out);
  }
  return out;
}

Vector ConstraintOperator::solve_gram(const Vector& rhs) const {
  if (rhs.size() != m_) {
    throw DimensionError("solve_gram: vector length " +
                         std::to_string(rhs.size()) + ", expected " +
                         std::to_string(m_));
  }
  if (diagonal_) {
    return rhs.cwiseQuotient(gram_diag_);
  }
  return llt_->solve(rhs);
}

Vector ConstraintOperator::gram_multiply(const Vector& v) const {
  if (v.size() != m_) {
    throw DimensionError("gram_multiply: vector length mismatch");
  }
  if (diagonal_) {
    return gram_diag_.cwiseProduct(v);
  }
  return gram_ * v;
}

SdpProblem::SdpProblem(Matrix c, ConstraintOperator op_in, Vector b_in,
                       std::string name_in)
    : n(op_in.order()),
      C(std::move(c)),
      op(std::move(op_in)),
      b(std::move(b_in)),
      name(std::move(name_in)) {
  if (C.rows() != n || C.cols() != n) {
    throw DimensionError("SdpProblem: cost matrix order mismatch");
  }
  if (b.size() != op.constraint_count()) {
    throw DimensionError("SdpProblem: rhs length mismatch");
  }
  if (!C.allFinite() || !b.allFinite()) {
    throw NumericError("SdpProblem: non-finite data");
  }
  C = symmetrized(C);
}

std::optional<double> certified_dual_bound(const SdpProblem& p,
                                           const Vector& y) {
  if (y.size() != p.op.constraint_count()) {
    throw DimensionError("certified_dual_bound: multiplier length mismatch");
  }
  // w with A^T w = I, when the identity lies in the operator's range.
  const Vector w = p.op.solve_gram(p.op.apply(Matrix::Identity(p.n, p.n)));
  const Matrix range_check =
      p.op.apply_adjoint(w) - Matrix::Identity(p.n, p.n);
  if (range_check.norm() > 1e-8 * p.n) return std::nullopt;

  const Matrix slack = p.C - p.op.apply_adjoint(y);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(slack),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericError("certified_dual_bound: eigensolver failed");
  }
  const double shift = std::min(0.0, es.eigenvalues().minCoeff());
  return p.b.dot(y) + shift * p.b.dot(w);
}

ResidualReport residuals(const SdpProblem& p, const Matrix& x, const Vector& y,
                         const Matrix& z) {
  if (x.rows() != p.n || z.rows() != p.n || y.size() != p.b.size()) {
    throw DimensionError("residuals: dimension mismatch");
  }
  ResidualReport r;
  r.r_p = (p.op.apply(x) - p.b).norm() / (1.0 + p.b.norm());
  r.r_d = (p.C - z - p.op.apply_adjoint(y)).norm() / (1.0 + p.C.norm());
  r.delta = std::max(r.r_p, r.r_d);
  r.primal_obj = inner(p.C, x);
  r.dual_obj = p.b.dot(y);
  r.compl_norm = (z * x).norm();
  return r;
}

}  // namespace sdpal
