#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdpal/auglag.hpp"
#include "sdpal/problem.hpp"

namespace sdpal {

enum class Method { Adal, Dadal };
enum class SolveStatus { Converged, IterationLimit, TimeLimit, NumericFailure };

const char* to_string(Method m);
const char* to_string(SolveStatus s);

struct Iterate;

struct SolverConfig {
  Method method = Method::Dadal;
  double eps = 1e-5;
  int max_outer_iters = 20000;
  double time_limit_s = 3600.0;

  // Dual ascent steps per outer iteration (DADAL only).
  int inner_iters = 2;
  // Inner gradient tolerance; defaults to 1e-8 * (1 + ||C||) when unset.
  std::optional<double> eps_inner;

  // Starting penalty; computed from the initial residual balance when unset.
  std::optional<double> sigma0;
  // Use the plain r_P / r_D ratio for sigma0 instead of the default formula
  // that additionally multiplies by the unscaled-norm ratio.
  bool sigma0_simple_ratio = false;
  bool sigma_fixed = false;
  double sigma_min = 1e-4;
  double sigma_max = 1e4;
  double sigma_factor = 1.3;
  int sigma_patience = 10;

  StepStrategy step_strategy = StepStrategy::Analytic;
  double rank_tol = 1e-8;
  unsigned seed = 0;
  double x0_scale = 1.0;  // X_0 = x0_scale * I

  // Invoked after every recorded iteration (including iteration 0) with the
  // current iterate. Used by invariant monitors; must not mutate.
  std::function<void(const Iterate&)> iterate_callback;
};

// Full solver state at one outer iteration.
struct Iterate {
  Matrix X;
  Vector y;
  Matrix Z;
  Factor V;  // V V^T = Z; empty for ADAL
  double sigma = 1.0;
  int k = 0;
  int rank = 0;
};

struct IterationRecord {
  int k;
  double r_p;
  double r_d;
  double delta;
  double sigma;
  int rank;
  double primal_obj;
  double dual_obj;
  double wall_ms;
};

struct SolveReport {
  SolveStatus status = SolveStatus::NumericFailure;
  int iterations = 0;
  std::vector<IterationRecord> history;
  ResidualReport final;
  Matrix X;
  Vector y;
  Matrix Z;
  std::string message;

  bool converged() const { return status == SolveStatus::Converged; }
};

// Starting penalty balancing the primal and dual infeasibilities:
//   sigma0 = (r_P / r_D) * ||A X0 - b|| / ||C - Z0 - A^T y0||,
// clamped to [lo, hi]. Falls back to 1 when either side is already feasible.
// With simple_ratio the second factor is dropped.
double sigma_init(const SdpProblem& p, const Matrix& x0, const Vector& y0,
                  const Matrix& z0, double lo, double hi,
                  bool simple_ratio = false);

// Penalty update: sigma shrinks by `factor` after `patience` consecutive
// iterations with 100 r_D < r_P, grows by `factor` after `patience`
// consecutive iterations with 2 r_D > r_P. A hit of one condition resets the
// other counter. Results are clamped to [lo, hi].
class SigmaManager {
 public:
  SigmaManager(double sigma0, double factor, int patience, double lo,
               double hi)
      : sigma_(sigma0), factor_(factor), patience_(patience), lo_(lo),
        hi_(hi) {}

  double update(double r_p, double r_d);
  double value() const { return sigma_; }
  int decrease_streak() const { return decrease_streak_; }
  int increase_streak() const { return increase_streak_; }

 private:
  double sigma_;
  double factor_;
  int patience_;
  double lo_;
  double hi_;
  int decrease_streak_ = 0;
  int increase_streak_ = 0;
};

// One outer iteration:
//   y <- argmax_y L_sigma(y, Z; X)
//   W <- X/sigma - C + A^T y
//   Z <- -(W)_-,  X <- sigma (W)_+        (one shared eigendecomposition)
void adal_step(const SdpProblem& p, Iterate& it);

// ADAL iteration preceded by inner ascent steps on (y, V); afterwards the
// factor is refreshed so V V^T matches the new Z.
void dadal_step(const SdpProblem& p, Iterate& it, const SolverConfig& cfg,
                double eps_inner);

SolveReport solve(const SdpProblem& p, const SolverConfig& cfg = {});

// Checks that the distance of (Z_k, X_k/sigma) to (z_star, x_star/sigma) is
// nonincreasing along a fixed-sigma trajectory, up to `slack` per step.
bool nonexpansiveness_monitor(
    const std::vector<std::pair<Matrix, Matrix>>& zx_history, double sigma,
    const Matrix& z_star, const Matrix& x_star, double slack = 1e-9);

}  // namespace sdpal
