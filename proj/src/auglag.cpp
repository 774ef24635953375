#include "sdpal/auglag.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sdpal/errors.hpp"

namespace sdpal {

namespace {

double auglag_value(const SdpProblem& p, const Matrix& x, double sigma,
                    const Vector& y, const Matrix& z, const Matrix& aty) {
  const Matrix resid = z - p.C + aty;
  return p.b.dot(y) - inner(resid, x) - 0.5 * sigma * resid.squaredNorm();
}

// Real roots of a*t^3 + b*t^2 + c*t + d = 0 with a != 0, by the closed-form
// (Cardano / trigonometric) solution, each polished with one Newton step.
std::vector<double> cubic_real_roots(double a, double b, double c, double d) {
  b /= a;
  c /= a;
  d /= a;
  const double shift = -b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

  std::vector<double> roots;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s));
  } else if (p == 0.0) {
    roots.push_back(std::cbrt(-q));
  } else if (disc == 0.0) {
    roots.push_back(3.0 * q / p);
    roots.push_back(-1.5 * q / p);
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
      roots.push_back(r * std::cos((phi - 2.0 * M_PI * k) / 3.0));
    }
  }

  for (double& t : roots) {
    const double f = t * t * t + p * t + q;
    const double df = 3.0 * t * t + p;
    if (df != 0.0) t -= f / df;
    t += shift;
  }
  return roots;
}

double grid_step(const LineCoefficients& lc, int points, double upper) {
  const double h = upper / points;
  double best_alpha = 0.0;
  double best_gain = 0.0;
  for (int k = 1; k <= points; ++k) {
    const double alpha = k * h;
    const double gain = lc.improvement(alpha);
    if (gain > best_gain) {
      best_gain = gain;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

}  // namespace

AugLagState AugLagState::make(const SdpProblem& p, Matrix x, double sigma,
                              Vector y, Matrix v) {
  Matrix z = v * v.transpose();
  return make_with_z(p, std::move(x), sigma, std::move(y), std::move(v),
                     std::move(z));
}

AugLagState AugLagState::make_with_z(const SdpProblem& p, Matrix x,
                                     double sigma, Vector y, Matrix v,
                                     Matrix z) {
  if (x.rows() != p.n || v.rows() != p.n || z.rows() != p.n ||
      y.size() != p.b.size()) {
    throw DimensionError("AugLagState: dimension mismatch");
  }
  if (sigma < 0.0) {
    throw NumericError("AugLagState: sigma must be nonnegative");
  }
  AugLagState s;
  s.problem = &p;
  s.X = std::move(x);
  s.sigma = sigma;
  s.y = std::move(y);
  s.V = std::move(v);
  s.Z = std::move(z);
  s.refresh();
  return s;
}

void AugLagState::refresh() {
  const SdpProblem& p = *problem;
  AtY = p.op.apply_adjoint(y);
  M = X + sigma * (AtY - p.C);
  value = auglag_value(p, X, sigma, y, Z, AtY);
}

void AugLagState::set_y(Vector new_y) {
  y = std::move(new_y);
  refresh();
}

void AugLagState::apply_step(double alpha, const Matrix& dv, const YTrack& ys) {
  V += alpha * dv;
  Z = V * V.transpose();
  y = ys.at(alpha);
  refresh();
}

double eval_auglag(const AugLagState& s) {
  return auglag_value(*s.problem, s.X, s.sigma, s.y, s.Z, s.AtY);
}

Matrix grad_v(const AugLagState& s) {
  // -2 (M + sigma V V^T) V, associated as M V + sigma V (V^T V).
  return -2.0 * (s.M * s.V + s.sigma * (s.V * (s.V.transpose() * s.V)));
}

Vector grad_y(const AugLagState& s) {
  return s.problem->b - s.problem->op.apply(s.M + s.sigma * s.Z);
}

Vector optimal_y(const SdpProblem& p, const Matrix& x, double sigma,
                 const Matrix& z_like) {
  const Vector rhs = p.b / sigma - p.op.apply(x / sigma - p.C + z_like);
  return p.op.solve_gram(rhs);
}

Vector solve_y_opt(const AugLagState& s) {
  return optimal_y(*s.problem, s.X, s.sigma, s.Z);
}

Matrix hessian_diag(const AugLagState& s) {
  const Eigen::Index n = s.V.rows();
  const Eigen::Index r = s.V.cols();
  const Vector row_sq = s.V.rowwise().squaredNorm();
  const Vector col_sq = s.V.colwise().squaredNorm();
  Matrix h(n, r);
  for (Eigen::Index t = 0; t < r; ++t) {
    for (Eigen::Index ss = 0; ss < n; ++ss) {
      h(ss, t) = -2.0 * s.M(ss, ss) -
                 2.0 * s.sigma *
                     (s.V(ss, t) * s.V(ss, t) + row_sq[ss] + col_sq[t]);
    }
  }
  return h;
}

Matrix scaling_matrix(const AugLagState& s) {
  const Eigen::Index n = s.V.rows();
  const Eigen::Index r = s.V.cols();
  const Vector row_sq = s.V.rowwise().squaredNorm();
  const Vector col_sq = s.V.colwise().squaredNorm();
  Matrix h(n, r);
  for (Eigen::Index t = 0; t < r; ++t) {
    for (Eigen::Index ss = 0; ss < n; ++ss) {
      h(ss, t) = 2.0 * std::max(0.0, s.M(ss, ss)) +
                 2.0 * s.sigma *
                     (s.V(ss, t) * s.V(ss, t) + row_sq[ss] + col_sq[t]);
      h(ss, t) = std::max(h(ss, t), 1e-12);
    }
  }
  return h;
}

Matrix build_direction(const AugLagState& s, DirectionMode mode) {
  Matrix g = grad_v(s);
  if (mode == DirectionMode::PlainGradient) return g;
  return g.cwiseQuotient(scaling_matrix(s));
}

YTrack track_y(const AugLagState& s, const Matrix& dv) {
  const SdpProblem& p = *s.problem;
  YTrack t;
  t.y0 = optimal_y(p, s.X, s.sigma, s.Z);
  Matrix cross = dv * s.V.transpose();
  cross += cross.transpose().eval();
  t.y1 = p.op.solve_gram(-p.op.apply(cross));
  t.y2 = p.op.solve_gram(-p.op.apply(dv * dv.transpose()));
  return t;
}

LineCoefficients line_coeffs(const AugLagState& s, const Matrix& dv,
                             const YTrack& ys) {
  const SdpProblem& p = *s.problem;

  // The dual residual along the line is quadratic in alpha:
  //   R(alpha) = R0 + alpha R1 + alpha^2 R2.
  Matrix cross = dv * s.V.transpose();
  cross += cross.transpose().eval();
  const Matrix r0 = s.Z - p.C + p.op.apply_adjoint(ys.y0);
  const Matrix r1 = cross + p.op.apply_adjoint(ys.y1);
  const Matrix r2 = dv * dv.transpose() + p.op.apply_adjoint(ys.y2);

  auto phi = [&](double alpha) {
    const Matrix r = r0 + alpha * r1 + alpha * alpha * r2;
    return p.b.dot(ys.at(alpha)) - inner(r, s.X) -
           0.5 * s.sigma * r.squaredNorm();
  };

  constexpr std::array<double, 5> nodes = {0.0, 1.0, -1.0, 2.0, -2.0};
  Eigen::Matrix<double, 5, 5> vand;
  Eigen::Matrix<double, 5, 1> values;
  for (int i = 0; i < 5; ++i) {
    double pw = 1.0;
    for (int j = 0; j < 5; ++j) {
      vand(i, j) = pw;
      pw *= nodes[i];
    }
    values[i] = phi(nodes[i]);
  }
  const auto lu = vand.fullPivLu();
  if (!lu.isInvertible()) {
    throw NumericError("line_coeffs: interpolation system singular");
  }
  const Eigen::Matrix<double, 5, 1> sol = lu.solve(values);

  LineCoefficients lc;
  for (int j = 0; j < 5; ++j) lc.c[j] = sol[j];
  lc.c[0] = values[0];  // pin to the exact value at alpha = 0
  return lc;
}

double best_step(const LineCoefficients& lc, StepStrategy strategy,
                 int grid_points, double grid_upper) {
  if (strategy == StepStrategy::Grid) {
    return grid_step(lc, grid_points, grid_upper);
  }

  const double cmax = std::max({std::abs(lc.c[1]), std::abs(lc.c[2]),
                                std::abs(lc.c[3]), std::abs(lc.c[4])});
  if (cmax == 0.0) return 0.0;
  if (std::abs(lc.c[4]) < 1e-14 * cmax) {
    // Degenerate quartic; the cubic root formulas are unreliable here.
    return grid_step(lc, grid_points, grid_upper);
  }

  const auto roots =
      cubic_real_roots(4.0 * lc.c[4], 3.0 * lc.c[3], 2.0 * lc.c[2], lc.c[1]);
  double best_alpha = 0.0;
  double best_gain = 0.0;
  for (double root : roots) {
    if (!std::isfinite(root) || root <= 0.0) continue;
    const double gain = lc.improvement(root);
    if (gain > best_gain) {
      best_gain = gain;
      best_alpha = root;
    }
  }
  return best_alpha;
}

InnerStats inner_solve(AugLagState& s, int max_iters, double eps_inner,
                       StepStrategy strategy) {
  InnerStats stats;
  s.set_y(solve_y_opt(s));
  for (int it = 0; it < max_iters; ++it) {
    const Matrix g = grad_v(s);
    stats.grad_norm = g.norm();
    if (stats.grad_norm < eps_inner) return stats;
    Matrix dv = build_direction(s, select_direction_mode(stats.grad_norm));
    // The exact linesearch is invariant under positive rescaling of the
    // direction, but the interpolation nodes sit at |alpha| <= 2; a unit
    // direction keeps phi's variation across them above roundoff even when
    // the gradient is tiny.
    const double dv_norm = dv.norm();
    if (dv_norm == 0.0) return stats;
    dv /= dv_norm;
    const YTrack ys = track_y(s, dv);
    const LineCoefficients lc = line_coeffs(s, dv, ys);
    const double alpha = best_step(lc, strategy);
    if (alpha <= 0.0) return stats;
    s.apply_step(alpha, dv, ys);
    ++stats.steps;
  }
  stats.grad_norm = grad_v(s).norm();
  return stats;
}

}  // namespace sdpal
