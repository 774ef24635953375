#pragma once

#include <array>

#include "sdpal/problem.hpp"

namespace sdpal {

// Augmented Lagrangian of the dual problem with the PSD variable factored as
// Z = V V^T:
//
//   L_sigma(y, V; X) = b^T y - <V V^T - C + A^T y, X>
//                      - (sigma/2) ||V V^T - C + A^T y||^2
//
// X is a fixed multiplier while (y, V) are the free variables. The state
// carries the caches needed by the subsolver: Z = V V^T, A^T y, and
// M = X + sigma (A^T y - C).
struct AugLagState {
  const SdpProblem* problem = nullptr;
  Matrix X;
  double sigma = 1.0;
  Vector y;
  Matrix V;    // n x r
  Matrix Z;    // V V^T (or an externally supplied matrix equal to it)
  Matrix AtY;  // A^T y
  Matrix M;    // X + sigma (A^T y - C)
  double value = 0.0;

  static AugLagState make(const SdpProblem& p, Matrix x, double sigma,
                          Vector y, Matrix v);

  // Same, but seeds the Z cache with a known matrix instead of forming
  // V V^T. Used by the outer solver, where the iterate's Z and its factor
  // agree up to factorization tolerance.
  static AugLagState make_with_z(const SdpProblem& p, Matrix x, double sigma,
                                 Vector y, Matrix v, Matrix z);

  void set_y(Vector new_y);
  void apply_step(double alpha, const Matrix& dv, const struct YTrack& ys);

 private:
  void refresh();
};

// Quadratic-in-alpha expansion of the y that keeps grad_y L = 0 while V moves
// along a direction D: y(V + alpha D) = y0 + alpha y1 + alpha^2 y2.
struct YTrack {
  Vector y0;
  Vector y1;
  Vector y2;

  Vector at(double alpha) const { return y0 + alpha * y1 + alpha * alpha * y2; }
};

// Coefficients of the quartic phi(alpha) = L(y(V + alpha D), V + alpha D; X).
struct LineCoefficients {
  std::array<double, 5> c{};  // c[k] multiplies alpha^k

  double at(double alpha) const {
    return c[0] + alpha * (c[1] + alpha * (c[2] + alpha * (c[3] + alpha * c[4])));
  }
  // phi(alpha) - phi(0), evaluated without the absolute offset so that
  // improvements far below |phi(0)| * eps remain resolvable.
  double improvement(double alpha) const {
    return alpha * (c[1] + alpha * (c[2] + alpha * (c[3] + alpha * c[4])));
  }
  double slope(double alpha) const {
    return c[1] + alpha * (2.0 * c[2] + alpha * (3.0 * c[3] + alpha * 4.0 * c[4]));
  }
};

enum class DirectionMode { PlainGradient, Scaled };
enum class StepStrategy { Analytic, Grid };

double eval_auglag(const AugLagState& s);

// grad_V L = -2 (M + sigma V V^T) V
Matrix grad_v(const AugLagState& s);

// grad_y L = b - A(X + sigma (V V^T - C + A^T y)). Verification probe; the
// solver keeps y optimal analytically.
Vector grad_y(const AugLagState& s);

// Unique maximizer of L over y for fixed V, via one Gram solve.
Vector solve_y_opt(const AugLagState& s);

// Shared y update: argmax_y L_sigma(y, Z; X) for any Z-like matrix.
Vector optimal_y(const SdpProblem& p, const Matrix& x, double sigma,
                 const Matrix& z_like);

// Diagonal of the Hessian in the V entries:
// d^2 L / d v_st^2 = -2 m_ss - 2 sigma (V_st^2 + ||row_s V||^2 + ||col_t V||^2)
Matrix hessian_diag(const AugLagState& s);

// Positive scaling H_st = 2 max(0, m_ss) + 2 sigma (...), floored at 1e-12.
Matrix scaling_matrix(const AugLagState& s);

Matrix build_direction(const AugLagState& s, DirectionMode mode);

// The scaled direction is preferred once the gradient is small.
inline DirectionMode select_direction_mode(double grad_norm) {
  return grad_norm < 1e-3 ? DirectionMode::Scaled : DirectionMode::PlainGradient;
}

// Three Gram solves giving the exact y(V + alpha D) expansion.
YTrack track_y(const AugLagState& s, const Matrix& dv);

// Interpolates phi at alpha in {0, 1, -1, 2, -2}; c0 is pinned to phi(0).
LineCoefficients line_coeffs(const AugLagState& s, const Matrix& dv,
                             const YTrack& ys);

// Maximizing step length, never negative; 0 means no ascent along the line.
// Analytic mode takes the best nonnegative real root of phi' (closed-form
// cubic); the grid evaluates phi on equispaced points in (0, 10].
double best_step(const LineCoefficients& lc, StepStrategy strategy,
                 int grid_points = 4000, double grid_upper = 10.0);

struct InnerStats {
  int steps = 0;
  double grad_norm = 0.0;
};

// Ascent iterations on (y, V): direction, y tracking, exact linesearch. The
// y-optimality condition is established on entry and preserved by every step,
// so the L values are nondecreasing. Stops when ||grad_V L|| < eps_inner, the
// linesearch returns 0, or max_iters steps were taken.
InnerStats inner_solve(AugLagState& s, int max_iters, double eps_inner,
                       StepStrategy strategy = StepStrategy::Analytic);

}  // namespace sdpal
