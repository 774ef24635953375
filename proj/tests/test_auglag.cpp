#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sdpal/auglag.hpp"
#include "sdpal/instances.hpp"

using namespace sdpal;
using sdpal::testing::make_random_state;
using sdpal::testing::StateFixture;

namespace {

// Central finite difference of L in one V coordinate.
double fd_grad_v(const AugLagState& s, int row, int col, double h) {
  Matrix vp = s.V;
  vp(row, col) += h;
  Matrix vm = s.V;
  vm(row, col) -= h;
  const AugLagState sp =
      AugLagState::make(*s.problem, s.X, s.sigma, s.y, vp);
  const AugLagState sm =
      AugLagState::make(*s.problem, s.X, s.sigma, s.y, vm);
  return (eval_auglag(sp) - eval_auglag(sm)) / (2.0 * h);
}

double fd_hess_v(const AugLagState& s, int row, int col, double h) {
  Matrix vp = s.V;
  vp(row, col) += h;
  Matrix vm = s.V;
  vm(row, col) -= h;
  const AugLagState sp =
      AugLagState::make(*s.problem, s.X, s.sigma, s.y, vp);
  const AugLagState sm =
      AugLagState::make(*s.problem, s.X, s.sigma, s.y, vm);
  return (eval_auglag(sp) - 2.0 * eval_auglag(s) + eval_auglag(sm)) / (h * h);
}

}  // namespace

TEST_CASE("eval_auglag plug-in values") {
  StateFixture fx = make_random_state(1);
  const SdpProblem& p = *fx.problem;
  const int n = p.n;
  const int m = p.op.constraint_count();

  SUBCASE("V = 0, y = 0") {
    const AugLagState s = AugLagState::make(p, fx.state.X, fx.state.sigma,
                                            Vector::Zero(m), Matrix::Zero(n, 1));
    const double expected =
        inner(p.C, fx.state.X) - 0.5 * fx.state.sigma * p.C.squaredNorm();
    CHECK(eval_auglag(s) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("vanishing penalty leaves b^T y") {
    // Build V V^T - C + A^T y = 0 by cooking C := V V^T + A^T y.
    Rng rng(7);
    Vector y(m);
    for (int k = 0; k < m; ++k) y[k] = rng.normal();
    const Matrix v = testing::random_gaussian(8, n, 2);
    SdpProblem cooked(v * v.transpose() + p.op.apply_adjoint(y), p.op,
                      p.b);
    const AugLagState s =
        AugLagState::make(cooked, fx.state.X, fx.state.sigma, y, v);
    CHECK(eval_auglag(s) ==
          doctest::Approx(cooked.b.dot(y)).epsilon(1e-12));
  }

  SUBCASE("matches term-by-term recomputation") {
    for (unsigned seed = 2; seed < 8; ++seed) {
      StateFixture g = make_random_state(seed, 4, 3, 2);
      const double reference = testing::auglag_reference(
          *g.problem, g.state.X, g.state.sigma, g.state.y, g.state.V);
      CHECK(eval_auglag(g.state) ==
            doctest::Approx(reference).epsilon(1e-11));
    }
  }
}

TEST_CASE("grad_v at special points") {
  StateFixture fx = make_random_state(3);
  const SdpProblem& p = *fx.problem;

  // Linear in V at V = 0.
  const AugLagState zero = AugLagState::make(
      p, fx.state.X, fx.state.sigma, fx.state.y, Matrix::Zero(p.n, 2));
  CHECK(grad_v(zero).norm() == 0.0);

  // V = 0 with optimal y is a stationary pair.
  AugLagState stat = zero;
  stat.set_y(solve_y_opt(stat));
  CHECK(grad_v(stat).norm() == 0.0);
  CHECK(grad_y(stat).norm() <= 1e-8 * (1.0 + p.b.norm()));
}

TEST_CASE("grad_v matches finite differences") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    StateFixture fx = make_random_state(seed + 40, 5, 4, 3);
    const Matrix g = grad_v(fx.state);
    Matrix fd(g.rows(), g.cols());
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.cols(); ++j) {
        fd(i, j) = fd_grad_v(fx.state, i, j, 1e-5);
      }
    }
    CHECK((fd - g).norm() <= 1e-6 * (1.0 + g.norm()));
  }
}

TEST_CASE("grad_y probe and finite differences") {
  StateFixture fx = make_random_state(51, 5, 4, 3);
  AugLagState& s = fx.state;
  const SdpProblem& p = *fx.problem;

  SUBCASE("zero after solve_y_opt") {
    s.set_y(solve_y_opt(s));
    CHECK(grad_y(s).norm() <= 1e-8 * (1.0 + p.b.norm()));
  }

  SUBCASE("matches finite differences in y") {
    const Vector g = grad_y(s);
    Vector fd(g.size());
    const double h = 1e-5;
    for (int k = 0; k < g.size(); ++k) {
      Vector yp = s.y;
      yp[k] += h;
      Vector ym = s.y;
      ym[k] -= h;
      const AugLagState sp = AugLagState::make(p, s.X, s.sigma, yp, s.V);
      const AugLagState sm = AugLagState::make(p, s.X, s.sigma, ym, s.V);
      fd[k] = (eval_auglag(sp) - eval_auglag(sm)) / (2.0 * h);
    }
    CHECK((fd - g).norm() <= 1e-6 * (1.0 + g.norm()));
  }

  SUBCASE("sigma doubling changes only the sigma term") {
    const Vector g1 = grad_y(s);
    const AugLagState s2 =
        AugLagState::make(p, s.X, 2.0 * s.sigma, s.y, s.V);
    const Vector g2 = grad_y(s2);
    const Matrix resid = s.Z - p.C + s.AtY;
    const Vector expected = g1 - s.sigma * p.op.apply(resid);
    CHECK((g2 - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
  }
}

TEST_CASE("solve_y_opt special cases") {
  SUBCASE("rhs vanishes when X = sigma (C - V V^T) and b = 0") {
    StateFixture fx = make_random_state(61, 5, 4, 2);
    const SdpProblem& p = *fx.problem;
    SdpProblem zero_b(p.C, p.op, Vector::Zero(p.op.constraint_count()));
    const double sigma = 1.7;
    const Matrix x = sigma * (p.C - fx.state.Z);
    const AugLagState s =
        AugLagState::make_with_z(zero_b, x, sigma, fx.state.y, fx.state.V,
                                 fx.state.Z);
    CHECK(solve_y_opt(s).norm() <= 1e-12);
  }

  SUBCASE("diagonal gram path gives elementwise result") {
    const SdpProblem p = theta_sdp(cycle_graph(5));
    const Matrix x = Matrix::Identity(5, 5);
    const double sigma = 0.9;
    const AugLagState s = AugLagState::make(p, x, sigma,
                                            Vector::Zero(6),
                                            Matrix::Zero(5, 1));
    const Vector rhs =
        p.b / sigma - p.op.apply(x / sigma - p.C + Matrix::Zero(5, 5));
    const Vector expected = rhs.cwiseQuotient(p.op.gram_diagonal());
    CHECK((solve_y_opt(s) - expected).norm() == 0.0);
  }

  SUBCASE("probe on random states") {
    for (unsigned seed = 0; seed < 6; ++seed) {
      StateFixture fx = make_random_state(seed + 70, 6, 5, 3);
      fx.state.set_y(solve_y_opt(fx.state));
      CHECK(grad_y(fx.state).norm() <=
            1e-8 * (1.0 + fx.problem->b.norm()));
    }
  }
}

TEST_CASE("hessian_diag formula") {
  SUBCASE("V = 0, M = I gives -2 everywhere") {
    // X = I, C = 0, y = 0 makes M = I.
    std::vector<ConstraintMatrix> cons;
    cons.emplace_back(0, 3,
                      std::vector<SparseEntry>{{0, 0, 1.0}, {1, 1, 1.0},
                                               {2, 2, 1.0}});
    SdpProblem p(Matrix::Zero(3, 3), ConstraintOperator(3, std::move(cons)),
                 Vector::Ones(1));
    const AugLagState s = AugLagState::make(p, Matrix::Identity(3, 3), 1.3,
                                            Vector::Zero(1), Matrix::Zero(3, 2));
    const Matrix h = hessian_diag(s);
    CHECK((h.array() + 2.0).abs().maxCoeff() <= 1e-14);
  }

  SUBCASE("scalar case -2m - 6 sigma v^2") {
    std::vector<ConstraintMatrix> cons;
    cons.emplace_back(0, 1, std::vector<SparseEntry>{{0, 0, 1.0}});
    SdpProblem p(Matrix::Zero(1, 1), ConstraintOperator(1, std::move(cons)),
                 Vector::Ones(1));
    const double sigma = 0.8;
    const double v = -1.4;
    Matrix x(1, 1);
    x << 2.5;  // M = X here (C = 0, y = 0)
    Matrix vm(1, 1);
    vm << v;
    const AugLagState s =
        AugLagState::make(p, x, sigma, Vector::Zero(1), vm);
    CHECK(hessian_diag(s)(0, 0) ==
          doctest::Approx(-2.0 * 2.5 - 6.0 * sigma * v * v).epsilon(1e-13));
  }

  SUBCASE("matches second differences") {
    for (unsigned seed = 0; seed < 8; ++seed) {
      StateFixture fx = make_random_state(seed + 90, 5, 4, 2);
      const Matrix h = hessian_diag(fx.state);
      Matrix fd(h.rows(), h.cols());
      for (int i = 0; i < h.rows(); ++i) {
        for (int j = 0; j < h.cols(); ++j) {
          fd(i, j) = fd_hess_v(fx.state, i, j, 1e-4);
        }
      }
      CHECK((fd - h).norm() <= 1e-5 * (1.0 + h.norm()));
    }
  }
}

TEST_CASE("build_direction") {
  SUBCASE("uniform H halves the gradient") {
    // V = 0 and M = I give H = 2 exactly.
    std::vector<ConstraintMatrix> cons;
    cons.emplace_back(0, 2,
                      std::vector<SparseEntry>{{0, 0, 1.0}, {1, 1, 1.0}});
    SdpProblem p(Matrix::Zero(2, 2), ConstraintOperator(2, std::move(cons)),
                 Vector::Ones(1));
    AugLagState s = AugLagState::make(p, Matrix::Identity(2, 2), 1.0,
                                      Vector::Zero(1), Matrix::Zero(2, 2));
    // Zero V makes the gradient zero too; check the scaling matrix directly.
    CHECK((scaling_matrix(s).array() - 2.0).abs().maxCoeff() <= 1e-14);
  }

  SUBCASE("negative diagonal of M contributes nothing to H") {
    std::vector<ConstraintMatrix> cons;
    cons.emplace_back(0, 2,
                      std::vector<SparseEntry>{{0, 0, 1.0}, {1, 1, 1.0}});
    SdpProblem p(Matrix::Zero(2, 2), ConstraintOperator(2, std::move(cons)),
                 Vector::Ones(1));
    const double sigma = 0.6;
    Matrix v(2, 1);
    v << 0.5, -0.25;
    const AugLagState s = AugLagState::make(p, -Matrix::Identity(2, 2),
                                            sigma, Vector::Zero(1), v);
    // M = -I: max(0, m_ss) = 0, only the sigma terms remain.
    const Matrix h = scaling_matrix(s);
    const double col = v.squaredNorm();
    for (int i = 0; i < 2; ++i) {
      const double expected =
          2.0 * sigma * (v(i, 0) * v(i, 0) + v(i, 0) * v(i, 0) + col);
      CHECK(h(i, 0) == doctest::Approx(expected).epsilon(1e-13));
    }
  }

  SUBCASE("scaled direction is an ascent direction") {
    for (unsigned seed = 0; seed < 10; ++seed) {
      StateFixture fx = make_random_state(seed + 110, 6, 4, 3);
      const Matrix g = grad_v(fx.state);
      REQUIRE(g.norm() > 0.0);
      const Matrix d = build_direction(fx.state, DirectionMode::Scaled);
      CHECK((g.array() * d.array()).sum() > 0.0);
      const Matrix plain =
          build_direction(fx.state, DirectionMode::PlainGradient);
      CHECK((plain - g).norm() == 0.0);
    }
  }

  SUBCASE("mode selection threshold") {
    CHECK(select_direction_mode(1e-4) == DirectionMode::Scaled);
    CHECK(select_direction_mode(1e-2) == DirectionMode::PlainGradient);
  }
}

TEST_CASE("track_y") {
  SUBCASE("zero direction reduces to solve_y_opt") {
    StateFixture fx = make_random_state(130, 5, 4, 2);
    const YTrack t = track_y(fx.state, Matrix::Zero(5, 2));
    CHECK(t.y1.norm() == 0.0);
    CHECK(t.y2.norm() == 0.0);
    CHECK((t.y0 - solve_y_opt(fx.state)).norm() == 0.0);
  }

  SUBCASE("tracked y keeps grad_y zero along the line") {
    StateFixture fx = make_random_state(131, 5, 4, 3);
    const SdpProblem& p = *fx.problem;
    const Matrix dv = testing::random_gaussian(132, 5, 3);
    const YTrack t = track_y(fx.state, dv);
    for (double alpha : {-1.0, 0.37, 2.0}) {
      const AugLagState moved = AugLagState::make(
          p, fx.state.X, fx.state.sigma, t.at(alpha), fx.state.V + alpha * dv);
      CHECK(grad_y(moved).norm() <= 1e-8 * (1.0 + p.b.norm()));
    }
  }

  SUBCASE("homogeneity in the direction") {
    StateFixture fx = make_random_state(133, 5, 4, 3);
    const Matrix dv = testing::random_gaussian(134, 5, 3);
    const YTrack t1 = track_y(fx.state, dv);
    const YTrack t2 = track_y(fx.state, 2.0 * dv);
    CHECK((t2.y1 - 2.0 * t1.y1).norm() <= 1e-12 * (1.0 + t1.y1.norm()));
    CHECK((t2.y2 - 4.0 * t1.y2).norm() <= 1e-12 * (1.0 + t1.y2.norm()));
    CHECK((t2.y0 - t1.y0).norm() == 0.0);
  }
}

TEST_CASE("line_coeffs") {
  SUBCASE("zero direction gives a constant line") {
    StateFixture fx = make_random_state(150, 5, 4, 2, /*optimal_y=*/true);
    const Matrix dv = Matrix::Zero(5, 2);
    const YTrack t = track_y(fx.state, dv);
    const LineCoefficients lc = line_coeffs(fx.state, dv, t);
    CHECK(lc.c[0] == doctest::Approx(fx.state.value).epsilon(1e-10));
    for (int k = 1; k < 5; ++k) {
      CHECK(std::abs(lc.c[k]) <= 1e-9 * (1.0 + std::abs(lc.c[0])));
    }
  }

  SUBCASE("sigma = 0 degenerates to a quadratic") {
    StateFixture fx = make_random_state(151, 5, 4, 3);
    const AugLagState s = AugLagState::make(*fx.problem, fx.state.X, 0.0,
                                            fx.state.y, fx.state.V);
    const Matrix dv = testing::random_gaussian(152, 5, 3);
    // sigma = 0 breaks the y0 formula, so supply an arbitrary fixed track.
    YTrack t;
    t.y0 = fx.state.y;
    t.y1 = 0.5 * Vector::Ones(4);
    t.y2 = -0.25 * Vector::Ones(4);
    const LineCoefficients lc = line_coeffs(s, dv, t);
    const double scale =
        1.0 + std::max({std::abs(lc.c[0]), std::abs(lc.c[1]),
                        std::abs(lc.c[2])});
    CHECK(std::abs(lc.c[3]) <= 1e-9 * scale);
    CHECK(std::abs(lc.c[4]) <= 1e-9 * scale);
  }

  SUBCASE("reproduces direct evaluation at held-out points") {
    for (unsigned seed = 0; seed < 8; ++seed) {
      StateFixture fx =
          make_random_state(seed + 160, 5, 4, 3, /*optimal_y=*/true);
      const SdpProblem& p = *fx.problem;
      const Matrix dv = build_direction(
          fx.state, select_direction_mode(grad_v(fx.state).norm()));
      const YTrack t = track_y(fx.state, dv);
      const LineCoefficients lc = line_coeffs(fx.state, dv, t);
      Rng rng(seed + 7);
      for (int trial = 0; trial < 20; ++trial) {
        const double alpha = -3.0 + 6.0 * rng.uniform01();
        const AugLagState moved =
            AugLagState::make(p, fx.state.X, fx.state.sigma, t.at(alpha),
                              fx.state.V + alpha * dv);
        const double direct = eval_auglag(moved);
        CHECK(lc.at(alpha) ==
              doctest::Approx(direct).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("best_step") {
  SUBCASE("quadratic vertex") {
    LineCoefficients lc;
    lc.c = {0.0, 2.0, -1.0, 0.0, 0.0};  // -(alpha - 1)^2 shifted
    CHECK(best_step(lc, StepStrategy::Analytic) == doctest::Approx(1.0));
    CHECK(best_step(lc, StepStrategy::Grid) == doctest::Approx(1.0));
  }

  SUBCASE("quartic with unit maximizer") {
    LineCoefficients lc;
    lc.c = {0.0, 1.0, 0.0, 0.0, -0.25};  // alpha - alpha^4/4
    CHECK(best_step(lc, StepStrategy::Analytic) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(best_step(lc, StepStrategy::Grid) ==
          doctest::Approx(1.0).epsilon(1e-3));
  }

  SUBCASE("no ascent returns zero") {
    LineCoefficients lc;
    lc.c = {3.0, -1.0, 0.0, 0.0, -0.1};  // decreasing for alpha > 0
    CHECK(best_step(lc, StepStrategy::Analytic) == 0.0);
    CHECK(best_step(lc, StepStrategy::Grid) == 0.0);
  }

  SUBCASE("strategies agree on gentle random quartics") {
    Rng rng(471);
    for (int trial = 0; trial < 50; ++trial) {
      LineCoefficients lc;
      lc.c[0] = rng.normal();
      lc.c[1] = 0.2 * std::abs(rng.normal()) + 0.02;
      lc.c[2] = 0.05 * rng.normal();
      lc.c[3] = 0.02 * rng.normal();
      lc.c[4] = -0.02 - 0.05 * rng.uniform01();
      const double a_analytic = best_step(lc, StepStrategy::Analytic);
      const double a_grid = best_step(lc, StepStrategy::Grid);
      CHECK(std::abs(a_analytic - a_grid) <= 10.0 / 4000.0 + 1e-12);
      CHECK(std::abs(lc.at(a_analytic) - lc.at(a_grid)) <=
            1e-6 * (1.0 + std::abs(lc.at(a_analytic))));
      CHECK(lc.at(a_analytic) >= lc.at(0.0));
    }
  }
}

TEST_CASE("inner_solve") {
  SUBCASE("stationary start returns immediately") {
    StateFixture fx = make_random_state(200, 5, 4, 2);
    AugLagState& s = fx.state;
    s.V.setZero();
    s.Z.setZero();
    s.set_y(solve_y_opt(s));
    const Matrix v_before = s.V;
    const Vector y_before = s.y;
    const InnerStats stats = inner_solve(s, 50, 1e-9);
    CHECK(stats.steps == 0);
    CHECK((s.V - v_before).norm() == 0.0);
    CHECK((s.y - y_before).norm() <= 1e-12 * (1.0 + y_before.norm()));
  }

  SUBCASE("respects the iteration budget") {
    StateFixture fx = make_random_state(201, 6, 4, 3);
    const InnerStats stats = inner_solve(fx.state, 2, 1e-14);
    CHECK(stats.steps <= 2);
  }

  SUBCASE("monotone ascent and y optimality maintained") {
    StateFixture fx = make_random_state(202, 6, 4, 4);
    AugLagState& s = fx.state;
    s.set_y(solve_y_opt(s));
    double previous = s.value;
    for (int it = 0; it < 25; ++it) {
      const InnerStats stats = inner_solve(s, 1, 1e-12);
      if (stats.steps == 0) break;
      CHECK(s.value >= previous - 1e-9 * (1.0 + std::abs(previous)));
      CHECK(grad_y(s).norm() <= 1e-8 * (1.0 + fx.problem->b.norm()));
      previous = s.value;
    }
  }

  SUBCASE("matches an independent maximizer") {
    StateFixture fx = make_random_state(203, 6, 4, 6);
    AugLagState& s = fx.state;
    const Vector y_start = s.y;
    const Matrix v_start = s.V;

    const InnerStats stats = inner_solve(s, 3000, 1e-9);
    CHECK(stats.grad_norm < 1e-9);

    const double reference = testing::gradient_ascent_reference(
        *fx.problem, s.X, s.sigma, y_start, v_start, 1e-10, 200000);
    CHECK(s.value == doctest::Approx(reference).epsilon(1e-6));
  }
}

TEST_CASE("tracked y invariant over random triples") {
  Rng rng(999);
  for (unsigned seed = 0; seed < 25; ++seed) {
    StateFixture fx = make_random_state(seed + 500, 5, 4, 3);
    const SdpProblem& p = *fx.problem;
    const Matrix dv = testing::random_gaussian(seed + 600, 5, 3);
    const YTrack t = track_y(fx.state, dv);
    const double alpha = -3.0 + 6.0 * rng.uniform01();
    const AugLagState moved = AugLagState::make(
        p, fx.state.X, fx.state.sigma, t.at(alpha), fx.state.V + alpha * dv);
    CHECK(grad_y(moved).norm() <= 1e-8 * (1.0 + p.b.norm()));
  }
}
