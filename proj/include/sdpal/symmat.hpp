#pragma once

#include <Eigen/Dense>

namespace sdpal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerance used by the spectral kernels for reconstruction checks.
inline constexpr double kEigTol = 1e-10;

// <A, B> = trace(A*B) for symmetric A, B.
double inner(const Matrix& a, const Matrix& b);

// (S + S^T) / 2. Absorbs asymmetry accumulated by matrix products.
Matrix symmetrized(const Matrix& s);

// Eigenvalues in ascending order, eigenvectors column-matched.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

SpectralDecomposition spectral_decomposition(const Matrix& s);

// S = positive + negative with positive PSD and negative NSD.
// positive collects the eigenpairs with lambda >= 0, negative the rest.
struct ConeSplit {
  Matrix positive;
  Matrix negative;
  int positive_count = 0;  // eigenvalues >= 0
  int negative_count = 0;  // eigenvalues < 0
};

ConeSplit project_cone_split(const Matrix& s);

// Tall factor V of a PSD matrix, Z = V V^T, one column per retained eigenvalue.
struct Factor {
  Matrix v;  // n x r

  int rows() const { return static_cast<int>(v.rows()); }
  int rank() const { return static_cast<int>(v.cols()); }
  Matrix to_matrix() const { return v * v.transpose(); }
};

// Factors Z into V V^T keeping eigenvalues above rank_tol * max(1, lambda_max).
// A numerically zero Z yields a single pseudorandom column of norm 1e-8 so the
// factor never consists of all-zero columns. Throws NotPsdError when Z has an
// eigenvalue below -10 * rank_tol * max(1, lambda_max).
Factor factorize_psd(const Matrix& z, double rank_tol = 1e-8);

}  // namespace sdpal
