#include "sdpal/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sdpal/errors.hpp"

namespace sdpal {

namespace {

double clamp_sigma(double sigma, double lo, double hi) {
  return std::clamp(sigma, lo, hi);
}

// Projection step shared by both methods so that DADAL with zero inner
// iterations reproduces ADAL bit for bit.
void project_update(const SdpProblem& p, Iterate& it, Vector y,
                    const Matrix& aty) {
  const Matrix w = it.X / it.sigma - p.C + aty;
  const ConeSplit split = project_cone_split(w);
  it.Z = -split.negative;
  it.X = it.sigma * split.positive;
  it.y = std::move(y);
  it.rank = split.negative_count;
  ++it.k;
}

void validate(const SolverConfig& cfg) {
  if (cfg.eps <= 0.0) throw NumericError("SolverConfig: eps must be positive");
  if (cfg.sigma_factor <= 1.0) {
    throw NumericError("SolverConfig: sigma_factor must exceed 1");
  }
  if (cfg.sigma_min >= cfg.sigma_max) {
    throw NumericError("SolverConfig: sigma bounds out of order");
  }
  if (cfg.max_outer_iters < 0 || cfg.inner_iters < 0 ||
      cfg.sigma_patience < 1) {
    throw NumericError("SolverConfig: negative iteration budget");
  }
}

}  // namespace

const char* to_string(Method m) {
  return m == Method::Adal ? "adal" : "dadal";
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NumericFailure: return "numeric_failure";
  }
  return "unknown";
}

double sigma_init(const SdpProblem& p, const Matrix& x0, const Vector& y0,
                  const Matrix& z0, double lo, double hi, bool simple_ratio) {
  const double primal_norm = (p.op.apply(x0) - p.b).norm();
  const double dual_norm = (p.C - z0 - p.op.apply_adjoint(y0)).norm();
  if (primal_norm < 1e-14 || dual_norm < 1e-14) {
    return clamp_sigma(1.0, lo, hi);
  }
  const double r_p = primal_norm / (1.0 + p.b.norm());
  const double r_d = dual_norm / (1.0 + p.C.norm());
  double sigma = r_p / r_d;
  if (!simple_ratio) sigma *= primal_norm / dual_norm;
  return clamp_sigma(sigma, lo, hi);
}

double SigmaManager::update(double r_p, double r_d) {
  if (100.0 * r_d < r_p) {
    ++decrease_streak_;
    increase_streak_ = 0;
  } else if (2.0 * r_d > r_p) {
    ++increase_streak_;
    decrease_streak_ = 0;
  } else {
    decrease_streak_ = 0;
    increase_streak_ = 0;
  }
  if (decrease_streak_ >= patience_) {
    sigma_ = clamp_sigma(sigma_ / factor_, lo_, hi_);
    decrease_streak_ = 0;
  }
  if (increase_streak_ >= patience_) {
    sigma_ = clamp_sigma(sigma_ * factor_, lo_, hi_);
    increase_streak_ = 0;
  }
  return sigma_;
}

void adal_step(const SdpProblem& p, Iterate& it) {
  Vector y = optimal_y(p, it.X, it.sigma, it.Z);
  const Matrix aty = p.op.apply_adjoint(y);
  project_update(p, it, std::move(y), aty);
}

void dadal_step(const SdpProblem& p, Iterate& it, const SolverConfig& cfg,
                double eps_inner) {
  AugLagState state =
      AugLagState::make_with_z(p, it.X, it.sigma, it.y, it.V.v, it.Z);
  inner_solve(state, cfg.inner_iters, eps_inner, cfg.step_strategy);
  project_update(p, it, std::move(state.y), state.AtY);
  it.V = factorize_psd(it.Z, cfg.rank_tol);
  it.rank = it.V.rank();
}

SolveReport solve(const SdpProblem& p, const SolverConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  const int n = p.n;
  Iterate it;
  it.X = cfg.x0_scale * Matrix::Identity(n, n);
  it.y = Vector::Zero(p.b.size());
  it.Z = Matrix::Zero(n, n);
  if (cfg.method == Method::Dadal) {
    it.V = factorize_psd(it.Z, cfg.rank_tol);
    it.rank = it.V.rank();
  }
  it.sigma = cfg.sigma0
                 ? clamp_sigma(*cfg.sigma0, cfg.sigma_min, cfg.sigma_max)
                 : sigma_init(p, it.X, it.y, it.Z, cfg.sigma_min,
                              cfg.sigma_max, cfg.sigma0_simple_ratio);
  // A loose inner tolerance mutes the dual ascent exactly where it pays off,
  // in the convergence tail where ||grad_V L|| is already small.
  const double eps_inner = cfg.eps_inner.value_or(1e-8 * (1.0 + p.C.norm()));

  SigmaManager manager(it.sigma, cfg.sigma_factor, cfg.sigma_patience,
                       cfg.sigma_min, cfg.sigma_max);

  SolveReport report;
  auto record = [&](const ResidualReport& rr) {
    report.history.push_back({it.k, rr.r_p, rr.r_d, rr.delta, it.sigma,
                              it.rank, rr.primal_obj, rr.dual_obj,
                              elapsed_ms()});
    if (cfg.iterate_callback) cfg.iterate_callback(it);
  };

  ResidualReport rr = residuals(p, it.X, it.y, it.Z);
  record(rr);

  while (true) {
    if (rr.delta < cfg.eps) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (it.k >= cfg.max_outer_iters) {
      report.status = SolveStatus::IterationLimit;
      break;
    }
    if (elapsed_ms() > cfg.time_limit_s * 1000.0) {
      report.status = SolveStatus::TimeLimit;
      break;
    }
    try {
      if (cfg.method == Method::Adal) {
        adal_step(p, it);
      } else {
        dadal_step(p, it, cfg, eps_inner);
      }
    } catch (const Error& e) {
      report.status = SolveStatus::NumericFailure;
      report.message =
          "iteration " + std::to_string(it.k + 1) + ": " + e.what();
      break;
    }
    rr = residuals(p, it.X, it.y, it.Z);
    record(rr);
    if (!cfg.sigma_fixed) it.sigma = manager.update(rr.r_p, rr.r_d);
  }

  report.iterations = it.k;
  report.final = rr;
  report.X = std::move(it.X);
  report.y = std::move(it.y);
  report.Z = std::move(it.Z);
  return report;
}

bool nonexpansiveness_monitor(
    const std::vector<std::pair<Matrix, Matrix>>& zx_history, double sigma,
    const Matrix& z_star, const Matrix& x_star, double slack) {
  if (zx_history.empty()) return true;
  auto distance = [&](const std::pair<Matrix, Matrix>& zx) {
    const double dz = (zx.first - z_star).squaredNorm();
    const double dx = (zx.second / sigma - x_star / sigma).squaredNorm();
    return std::sqrt(dz + dx);
  };
  double prev = distance(zx_history.front());
  for (std::size_t k = 1; k < zx_history.size(); ++k) {
    const double cur = distance(zx_history[k]);
    if (cur > prev + slack) return false;
    prev = cur;
  }
  return true;
}

}  // namespace sdpal
