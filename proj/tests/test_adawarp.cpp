#include "doctest.h"

#include "helpers.hpp"
#include "warpopt/adawarp.hpp"
#include "warpopt/problems.hpp"

using namespace warpopt;
using Eigen::VectorXd;

TEST_CASE("uprule worked example") {
  const VectorXd sigma = VectorXd::Ones(2);
  const VectorXd eta = (VectorXd(2) << 1.0 / 16.0, 0.25).finished();
  const VectorXd want = (VectorXd(2) << 4.0, 2.0).finished();
  CHECK((uprule(sigma, eta, 1.0, 0.1, UpruleMode::Simplified) - want).norm() < 1e-14);
  CHECK((uprule(sigma, eta, 1.0, 0.1, UpruleMode::Full) - want).norm() < 1e-14);
  CHECK((uprule(sigma, eta, 2.0, 0.1, UpruleMode::Simplified) - 2.0 * want).norm() < 1e-14);
}

TEST_CASE("full uprule with a tight kappa") {
  const VectorXd eta = (VectorXd(2) << 0.01, 0.25).finished();
  const VectorXd next = uprule(VectorXd::Ones(2), eta, 1.0, 0.5, UpruleMode::Full);
  CHECK(next[0] == doctest::Approx(4.0));
  CHECK(next[1] == doctest::Approx(2.0));
}

TEST_CASE("full uprule applies the kappa floor") {
  const VectorXd sigma = VectorXd::Ones(2);
  const VectorXd eta = (VectorXd(2) << 1e-6, 0.25).finished();
  // raw = (1000, 2); 1000 exceeds 2 / 0.1 so it is held at 20
  const VectorXd next = uprule(sigma, eta, 1.0, 0.1, UpruleMode::Full);
  CHECK(next[0] == doctest::Approx(20.0));
  CHECK(next[1] == doctest::Approx(2.0));
  CHECK(next.minCoeff() / next.maxCoeff() >= 0.1 - 1e-15);
}

TEST_CASE("uprule never decreases a kappa-feasible sigma and respects the cap") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    VectorXd sigma(4), eta(4);
    const double base = std::exp(10.0 * u(rng));
    for (int i = 0; i < 4; ++i) {
      sigma[i] = base * (1.0 + 9.0 * u(rng));  // ratio >= 0.1
      eta[i] = 1e-15 + 0.5 * u(rng);
    }
    for (UpruleMode mode : {UpruleMode::Simplified, UpruleMode::Full}) {
      const VectorXd next = uprule(sigma, eta, 1.0 + u(rng), 0.1, mode);
      CHECK((next.array() >= sigma.array().min(kSigmaCap)).all());
      CHECK((next.array() <= kSigmaCap).all());
      if (mode == UpruleMode::Full && next.maxCoeff() < kSigmaCap) {
        CHECK(next.minCoeff() / next.maxCoeff() >= 0.1 * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("iteration_bound reference value and edge cases") {
  CHECK(iteration_bound(1e-6, 1e-6, 1.0, 1e-8) == 54);
  CHECK(iteration_bound(1e-6, 1e-12, 1.0, 0.25) == 0);
  CHECK(iteration_bound(1e-6, 1e-6, 1.0, 1e-8, 0.5, 1e6) >= 54);
  CHECK_THROWS_AS(iteration_bound(1e-6, 1e-6, 1.0, std::nullopt), InvalidArgument);
  CHECK_THROWS_AS(iteration_bound(1e-6, 1e-6, 0.5, 1e-8), InvalidArgument);
  CHECK_THROWS_AS(iteration_bound(1e-6, 1e-6, 1.0, 0.7), InvalidArgument);
}

TEST_CASE("sigma0 heuristic makes the first Jacobian the identity") {
  const VectorXd x = (VectorXd(3) << -2.0, 0.0, 1.5).finished();
  const VectorXd s = sigma0_heuristic(x);
  CHECK(s[1] == doctest::Approx(4.0));
  const VectorXd y = sigmoid_forward(x, SigmoidalWarp::uniform(3, 1.0));
  CHECK((s.cwiseProduct(y).cwiseProduct(VectorXd::Ones(3) - y) - VectorXd::Ones(3)).norm() < 1e-12);
  CHECK((sigma0_from_unit(y) - s).norm() < 1e-9);
}

TEST_CASE("boundary_distances") {
  const VectorXd y = (VectorXd(3) << 0.1, 0.5, 0.95).finished();
  CHECK((boundary_distances(y) - (VectorXd(3) << 0.1, 0.5, 0.05).finished()).norm() < 1e-15);
}

TEST_CASE("config parsing and validation") {
  CHECK(parse_inner_solver("gd-constant") == InnerSolver::ConstantStepGD);
  CHECK(parse_uprule_mode("full") == UpruleMode::Full);
  CHECK_THROWS_AS(parse_inner_solver("newton"), InvalidArgument);
  AdaWarpConfig c;
  CHECK(c.inner_delta() == c.epsilon);
  c.boundary_optimum = true;
  CHECK(c.inner_delta() == c.epsilon * c.epsilon);
  c.gamma = 0.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("AdaWarp reaches an interior optimum") {
  const Problem p = find_problem("shifted_quad_3").value();
  AdaWarpConfig cfg;
  cfg.epsilon = 1e-8;
  const AdaWarpTrace t = adawarp(p.objective, p.start, cfg);
  CHECK(t.converged());
  CHECK((t.y_final_box - p.optimum->y).norm() < 1e-6);
  CHECK(t.total_evals == p.objective.eval_count());
}

TEST_CASE("AdaWarp reaches boundary optima with growing sigma") {
  for (const char* name : {"fig2_quadratic", "active_quad_10"}) {
    const Problem p = find_problem(name).value();
    AdaWarpConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.sigma0 = VectorXd::Constant(1, 1e-3);
    const AdaWarpTrace t = adawarp(p.objective, p.start, cfg);
    CHECK(t.status == AdaWarpStatus::EpsilonStationary);
    CHECK(t.iterations.back().kkt.epsilon <= 1e-6);
    CHECK(t.iterations.back().sigma.maxCoeff() > t.iterations.front().sigma.maxCoeff());
    CHECK(p.objective.violation_count() == 0);
  }
}

TEST_CASE("outer iterations after the first are warm started for free") {
  const Problem p = fig2_quadratic();
  AdaWarpConfig cfg;
  cfg.epsilon = 1e-6;
  cfg.sigma0 = VectorXd::Constant(1, 1e-3);
  long last_evals = 0;
  int last_outer = -1;
  bool free_starts = true;
  adawarp(p.objective, p.start, cfg, [&](int outer, const IterationInfo& info) {
    if (outer != last_outer) {
      if (outer > 0) free_starts = free_starts && info.evals == last_evals;
      last_outer = outer;
    }
    last_evals = info.evals;
    return true;
  });
  CHECK(last_outer > 0);
  CHECK(free_starts);
}

TEST_CASE("AdaWarp stops on tau, budget and callback") {
  const Problem p = find_problem("active_quad_5").value();
  AdaWarpConfig cfg;
  cfg.epsilon = 1e-14;
  cfg.delta = 1e-8;
  cfg.tau = 1e-2;
  CHECK(adawarp(p.objective.clone(), p.start, cfg).status == AdaWarpStatus::RelativeKKT);

  cfg.tau.reset();
  cfg.max_evals = 5;
  const Objective budgeted = p.objective.clone();
  CHECK(adawarp(budgeted, p.start, cfg).status == AdaWarpStatus::EvalBudget);
  CHECK(budgeted.eval_count() <= 5);

  cfg.max_evals = 0;
  const auto stop = [](int, const IterationInfo&) { return false; };
  CHECK(adawarp(p.objective.clone(), p.start, cfg, stop).status == AdaWarpStatus::Interrupted);
}

TEST_CASE("constant-step inner solver needs Lipschitz constants") {
  const Problem p = find_problem("rosenbrock_2").value();
  AdaWarpConfig cfg;
  cfg.inner = InnerSolver::ConstantStepGD;
  CHECK_THROWS_AS(adawarp(p.objective, p.start, cfg), MissingOracle);
}

TEST_CASE("AdaWarp rejects starts outside the open box") {
  const Problem p = fig2_quadratic();
  CHECK_THROWS(adawarp(p.objective, VectorXd::Zero(2), AdaWarpConfig{}));
  CHECK(p.objective.violation_count() == 0);
}
