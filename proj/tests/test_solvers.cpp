#include "doctest.h"

#include "helpers.hpp"
#include "warpopt/kkt.hpp"
#include "warpopt/problems.hpp"
#include "warpopt/solvers.hpp"

using namespace warpopt;
using Eigen::VectorXd;

namespace {

MeritFunction interior_merit(double sigma = 1.0) {
  return MeritFunction::sigmoidal(
      testing::diag_quadratic(BoundBox::unit(3), (VectorXd(3) << 1.0, 5.0, 20.0).finished(),
                              (VectorXd(3) << 0.3, 0.6, 0.8).finished()),
      SigmoidalWarp::uniform(3, sigma));
}

const VectorXd kInteriorOpt = (VectorXd(3) << 0.3, 0.6, 0.8).finished();

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.delta = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SolverConfig{};
  c.fixed_step = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("every smooth solver finds the interior optimum") {
  const MeritFunction m = interior_merit();
  SolverConfig cfg;
  cfg.delta = 1e-10;
  cfg.max_iters = 100000;
  const VectorXd x0 = VectorXd::Zero(3);
  const SolveResult rs[] = {lbfgs(m, x0, cfg), gradient_descent(m, x0, cfg),
                            steepest_descent_sigmoidal(m, x0, cfg), hybrid_descent(m, x0, cfg, 0.5)};
  for (const SolveResult& r : rs) {
    CHECK(r.status == SolveStatus::GradientTolMet);
    CHECK(r.final_grad_norm <= 1e-10);
    CHECK((m.to_unit(r.x_star) - kInteriorOpt).norm() < 1e-6);
  }
}

TEST_CASE("L-BFGS counts its evaluations exactly") {
  const MeritFunction m = interior_merit();
  const long before = m.objective().eval_count();
  SolverConfig cfg;
  cfg.delta = 1e-8;
  const SolveResult r = lbfgs(m, VectorXd::Zero(3), cfg);
  CHECK(r.f_evals == m.objective().eval_count() - before);
  CHECK(r.f_evals > 0);
}

TEST_CASE("constant-step gradient descent with 1 / L_tilde decreases monotonically") {
  const Problem p = find_problem("sep_quad_5").value();
  const MeritFunction m = MeritFunction::sigmoidal(p.objective, SigmoidalWarp::uniform(5, 2.0));
  SolverConfig cfg;
  cfg.delta = 1e-6;
  cfg.max_iters = 200000;
  cfg.fixed_step = 1.0 / lipschitz_bound(m.warp(), *p.objective.unit_lipschitz_grad(),
                                         *p.objective.unit_lipschitz_fun());
  double last = INFINITY;
  bool monotone = true;
  const SolveResult r = gradient_descent(m, VectorXd::Zero(5), cfg, [&](const IterationInfo& i) {
    monotone = monotone && i.point->value <= last;
    last = i.point->value;
    return true;
  });
  CHECK(r.status == SolveStatus::GradientTolMet);
  CHECK(monotone);
}

TEST_CASE("callback sees every iterate and can interrupt") {
  const MeritFunction m = interior_merit();
  SolverConfig cfg;
  cfg.delta = 1e-12;
  int calls = 0;
  const SolveResult r = lbfgs(m, VectorXd::Zero(3), cfg, [&](const IterationInfo& info) {
    CHECK(info.k == calls);
    ++calls;
    return calls < 3;
  });
  CHECK(r.status == SolveStatus::Interrupted);
  CHECK(calls == 3);
}

TEST_CASE("evaluation budget stops the solve") {
  const MeritFunction m = interior_merit();
  SolverConfig cfg;
  cfg.delta = 1e-14;
  cfg.max_evals = 7;
  const SolveResult r = gradient_descent(m, VectorXd::Zero(3), cfg);
  CHECK(r.status == SolveStatus::EvalBudget);
  CHECK(m.objective().eval_count() <= 7);
}

TEST_CASE("warm start reuses the supplied point") {
  const MeritFunction m = interior_merit();
  const VectorXd x0 = (VectorXd(3) << 2.0, -1.0, 0.5).finished();
  const MeritPoint p0 = m.evaluate(x0, true);
  SolverConfig cfg;
  cfg.delta = 1e3;  // already satisfied at x0
  const long before = m.objective().eval_count();
  const SolveResult r = lbfgs(m, x0, cfg, {}, p0);
  CHECK(r.status == SolveStatus::GradientTolMet);
  CHECK(m.objective().eval_count() == before);
  CHECK(r.f_evals == 0);
}

TEST_CASE("steepest descent reports the orthogonality metric") {
  const MeritFunction m = interior_merit(3.0);
  SolverConfig cfg;
  cfg.delta = 1e-8;
  bool seen = false;
  steepest_descent_sigmoidal(m, VectorXd::Zero(3), cfg, [&](const IterationInfo& i) {
    if (i.orthogonality) {
      seen = true;
      CHECK(*i.orthogonality >= 0.0);
    }
    return true;
  });
  CHECK(seen);
}

TEST_CASE("hybrid threshold selects the step type") {
  const MeritFunction m = interior_merit(3.0);
  SolverConfig cfg;
  cfg.delta = 1e-8;
  for (double thr : {-1.0, 1.0}) {
    int steepest = 0, plain = 0;
    hybrid_descent(m, VectorXd::Zero(3), cfg, thr, [&](const IterationInfo& i) {
      if (i.steepest_step) (*i.steepest_step ? steepest : plain)++;
      return true;
    });
    if (thr < 0.0) CHECK(plain == 0);
    else CHECK(steepest == 0);
  }
}

TEST_CASE("nonsmooth PPM quasi-Newton reaches a boundary KKT point") {
  const Objective f = testing::diag_quadratic(BoundBox::unit(2), VectorXd::Constant(2, 2.0),
                                              (VectorXd(2) << 1.4, 0.5).finished());
  const MeritFunction m = MeritFunction::projection_penalty(f);
  SolverConfig cfg;
  cfg.delta = 1e-9;
  cfg.max_iters = 2000;
  const SolveResult r = nonsmooth_qn_ppm(m, (VectorXd(2) << 0.2, 0.9).finished(), cfg);
  CHECK(epsilon_stationarity(r.final_point.y, r.final_point.objective_gradient).epsilon < 1e-6);
  CHECK(r.final_point.y[0] == doctest::Approx(1.0));
  CHECK(f.violation_count() == 0);
}

TEST_CASE("projected-gradient baseline solves an active-bound problem") {
  const Problem p = find_problem("active_quad_10").value();
  SolverConfig cfg;
  cfg.delta = 1e-10;
  cfg.max_iters = 100000;
  const SolveResult r = projected_gradient_baseline(p.objective, p.start, cfg);
  CHECK(r.status == SolveStatus::GradientTolMet);
  CHECK((r.x_star - p.optimum->y).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(p.objective.violation_count() == 0);
}

TEST_CASE("solvers reject a start of the wrong size") {
  const MeritFunction m = interior_merit();
  CHECK_THROWS_AS(lbfgs(m, VectorXd::Zero(2), SolverConfig{}), DimensionMismatch);
}
