#include "sdpal/symmat.hpp"

#include <cmath>
#include <string>

#include "sdpal/errors.hpp"
#include "sdpal/rng.hpp"

namespace sdpal {

namespace {

void require_square(const Matrix& s, const char* who) {
  if (s.rows() != s.cols()) {
    throw DimensionError(std::string(who) + ": matrix is " +
                         std::to_string(s.rows()) + "x" +
                         std::to_string(s.cols()) + ", expected square");
  }
}

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& sym,
                                                 const char* who) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericError(std::string(who) + ": eigensolver failed on order-" +
                       std::to_string(sym.rows()) + " matrix, norm " +
                       std::to_string(sym.norm()));
  }
  return es;
}

}  // namespace

double inner(const Matrix& a, const Matrix& b) {
  require_square(a, "inner");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("inner: orders " + std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  return (a.array() * b.array()).sum();
}

Matrix symmetrized(const Matrix& s) {
  require_square(s, "symmetrized");
  return 0.5 * (s + s.transpose());
}

SpectralDecomposition spectral_decomposition(const Matrix& s) {
  require_square(s, "spectral_decomposition");
  auto es = eigensolve(symmetrized(s), "spectral_decomposition");
  return {es.eigenvalues(), es.eigenvectors()};
}

ConeSplit project_cone_split(const Matrix& s) {
  require_square(s, "project_cone_split");
  const Eigen::Index n = s.rows();
  auto es = eigensolve(symmetrized(s), "project_cone_split");
  const Vector& lam = es.eigenvalues();  // ascending
  const Matrix& q = es.eigenvectors();

  Eigen::Index neg = 0;
  while (neg < n && lam[neg] < 0.0) ++neg;
  const Eigen::Index pos = n - neg;

  ConeSplit split;
  split.negative_count = static_cast<int>(neg);
  split.positive_count = static_cast<int>(pos);
  if (pos == 0) {
    split.positive = Matrix::Zero(n, n);
  } else {
    const auto qp = q.rightCols(pos);
    split.positive =
        symmetrized(qp * lam.tail(pos).asDiagonal() * qp.transpose());
  }
  if (neg == 0) {
    split.negative = Matrix::Zero(n, n);
  } else {
    const auto qn = q.leftCols(neg);
    split.negative =
        symmetrized(qn * lam.head(neg).asDiagonal() * qn.transpose());
  }
  return split;
}

Factor factorize_psd(const Matrix& z, double rank_tol) {
  require_square(z, "factorize_psd");
  const Eigen::Index n = z.rows();
  auto es = eigensolve(symmetrized(z), "factorize_psd");
  const Vector& lam = es.eigenvalues();
  const Matrix& q = es.eigenvectors();

  const double scale = std::max(1.0, lam[n - 1]);
  if (lam[0] < -10.0 * rank_tol * scale) {
    throw NotPsdError("factorize_psd: eigenvalue " + std::to_string(lam[0]) +
                      " below -10*rank_tol*scale = " +
                      std::to_string(-10.0 * rank_tol * scale));
  }

  const double threshold = rank_tol * scale;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam[i] > threshold) ++r;
  }

  Factor f;
  if (r == 0) {
    // Z is numerically zero. A zero factor would pin the gradient flow at the
    // all-zero saddle, so seed one tiny column instead. The direction is
    // pseudorandom but fixed per order, keeping runs reproducible.
    Rng rng(0x5d2a1f3bu + static_cast<std::uint64_t>(n));
    Vector col(n);
    for (Eigen::Index i = 0; i < n; ++i) col[i] = rng.normal();
    f.v = (1e-8 / col.norm()) * col;
    return f;
  }

  // Dominant eigenvalue first; columns are sqrt(lambda)-scaled eigenvectors.
  f.v.resize(n, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::Index idx = n - 1 - j;
    f.v.col(j) = q.col(idx) * std::sqrt(lam[idx]);
  }
  return f;
}

}  // namespace sdpal
