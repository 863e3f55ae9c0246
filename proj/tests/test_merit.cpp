#include "doctest.h"

#include "helpers.hpp"
#include "warpopt/merit.hpp"
#include "warpopt/problems.hpp"

using namespace warpopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Objective shifted_box_quadratic() {
  const BoundBox box((VectorXd(3) << -1.0, 0.0, 2.0).finished(), (VectorXd(3) << 1.0, 4.0, 2.5).finished());
  return testing::diag_quadratic(box, (VectorXd(3) << 3.0, 0.5, 10.0).finished(),
                                 (VectorXd(3) << 0.3, 5.0, 2.1).finished());
}

}  // namespace

TEST_CASE("objective refuses queries outside its box and counts them") {
  const Objective f = shifted_box_quadratic();
  const long before = global_violation_count();
  CHECK_THROWS_AS(f.value((VectorXd(3) << 2.0, 1.0, 2.2).finished()), UnrelaxableViolation);
  CHECK_THROWS_AS(f.gradient((VectorXd(3) << 0.0, -1e-9, 2.2).finished()), UnrelaxableViolation);
  CHECK(f.violation_count() == 2);
  CHECK(global_violation_count() - before == 2);
  CHECK(f.eval_count() == 0);
  CHECK(f.clone().violation_count() == 0);
}

TEST_CASE("objective copies share counters and clones do not") {
  const Objective f = shifted_box_quadratic();
  const Objective g = f;
  const Objective h = f.clone();
  const VectorXd y = (VectorXd(3) << 0.0, 1.0, 2.2).finished();
  g.value(y);
  h.gradient(y);
  CHECK(f.eval_count() == 1);
  CHECK(f.grad_count() == 0);
  CHECK(h.grad_count() == 1);
}

TEST_CASE("unit-coordinate oracles apply the chain rule through the box") {
  const Objective f = shifted_box_quadratic();
  const VectorXd u = (VectorXd(3) << 0.2, 0.7, 0.4).finished();
  const VectorXd fd = testing::central_diff([&](const VectorXd& v) { return f.unit_value(v); }, u);
  CHECK((f.unit_gradient(u) - fd).norm() < 1e-6);
  const MatrixXd h = f.unit_hessian(u);
  CHECK(h(0, 0) == doctest::Approx(3.0 * 4.0));
  CHECK(h(2, 2) == doctest::Approx(10.0 * 0.25));
}

TEST_CASE("sigmoidal merit gradient and Hessian match finite differences") {
  const Objective f = shifted_box_quadratic();
  const MeritFunction m = MeritFunction::sigmoidal(f, SigmoidalWarp((VectorXd(3) << 0.7, 1.5, 4.0).finished()));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const VectorXd x = testing::uniform_vec(rng, 3, -2.0, 2.0);
    const VectorXd g = m.gradient(x);
    const VectorXd fd = testing::central_diff([&](const VectorXd& v) { return m.value(v); }, x);
    CHECK((g - fd).lpNorm<Eigen::Infinity>() < 1e-6 * std::max(1.0, g.lpNorm<Eigen::Infinity>()));
    MatrixXd hd(3, 3);
    for (int i = 0; i < 3; ++i) {
      VectorXd a = x, b = x;
      a[i] += 1e-6;
      b[i] -= 1e-6;
      hd.col(i) = (m.gradient(a) - m.gradient(b)) / 2e-6;
    }
    CHECK((m.hessian(x) - hd).lpNorm<Eigen::Infinity>() < 1e-5);
  }
}

TEST_CASE("sigmoidal merit is flat and has zero gradient where saturated") {
  const MeritFunction m = MeritFunction::sigmoidal(fig2_quadratic().objective, SigmoidalWarp::uniform(2, 1e10));
  const VectorXd x = (VectorXd(2) << 1.0, 1e-3).finished();
  const VectorXd g = m.gradient(x);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(m.to_unit(x)[0] == 1.0 - kFeasEps);
}

TEST_CASE("every merit evaluates the objective only inside the box") {
  const Objective f = shifted_box_quadratic();
  const MeritFunction kinds[] = {MeritFunction::sigmoidal(f, SigmoidalWarp::uniform(3, 50.0)),
                                 MeritFunction::projection_penalty(f), MeritFunction::reflection(f)};
  std::mt19937_64 rng(13);
  for (const auto& m : kinds) {
    for (int k = 0; k < 200; ++k) {
      const VectorXd x = testing::uniform_vec(rng, 3, -1e3, 1e3);
      const MeritPoint p = m.evaluate(x, true);
      CHECK(p.gradient.allFinite());
      CHECK(f.box().contains(m.to_box(x)));
    }
  }
  CHECK(f.violation_count() == 0);
}

TEST_CASE("evaluate then complete_gradient costs one value and one gradient") {
  const Objective f = shifted_box_quadratic();
  const MeritFunction m = MeritFunction::sigmoidal(f, SigmoidalWarp::uniform(3, 1.0));
  const VectorXd x = VectorXd::Constant(3, 0.4);
  MeritPoint p = m.evaluate(x, false);
  CHECK(!p.has_gradient());
  m.complete_gradient(p);
  CHECK(f.eval_count() == 1);
  CHECK(f.grad_count() == 1);
  CHECK((p.gradient - m.gradient(x)).norm() < 1e-15);
  CHECK((m.sigmoidal_gradient_from(x, p.objective_gradient) - p.gradient).norm() == 0.0);
}

TEST_CASE("projection-penalty merit classifies and picks the case direction") {
  const Objective f = testing::diag_quadratic(BoundBox::unit(2), VectorXd::Constant(2, 2.0),
                                              (VectorXd(2) << 2.0, -1.0).finished());
  const MeritFunction m = MeritFunction::projection_penalty(f);
  const VectorXd interior = (VectorXd(2) << 0.5, 0.5).finished();
  const VectorXd boundary = (VectorXd(2) << 1.0, 0.5).finished();
  const VectorXd exterior = (VectorXd(2) << 1.5, 0.5).finished();
  CHECK(m.classify(interior) == PpmRegion::Interior);
  CHECK(m.classify(boundary) == PpmRegion::Boundary);
  CHECK(m.classify(exterior) == PpmRegion::Exterior);

  CHECK((m.ppm_direction(interior) - f.unit_gradient(interior)).norm() < 1e-15);
  // at x1 = 1 the gradient points outward, so the projected gradient drops it
  const VectorXd db = m.ppm_direction(boundary);
  CHECK(db[0] == 0.0);
  CHECK(db[1] == doctest::Approx(0.5));
  // outside: the distance term is a unit vector; x1 is not strictly inside
  const VectorXd de = m.ppm_direction(exterior);
  CHECK(de[0] == doctest::Approx(1.0));
  CHECK(de[1] == doctest::Approx(3.0));
  CHECK(m.value(exterior) == doctest::Approx(f.unit_value(boundary) + 0.5));
  CHECK_THROWS_AS(m.gradient(boundary), NonsmoothPoint);
  CHECK_THROWS_AS(m.ppm_direction(VectorXd::Zero(3)), DimensionMismatch);
}

TEST_CASE("projection-penalty and reflection gradients match finite differences off kinks") {
  const Objective f = shifted_box_quadratic();
  const MeritFunction ppm = MeritFunction::projection_penalty(f);
  const MeritFunction refl = MeritFunction::reflection(f);
  const VectorXd xp = (VectorXd(3) << -0.3, 0.4, 1.7).finished();
  const VectorXd xr = (VectorXd(3) << -0.3, 1.4, 2.7).finished();
  const VectorXd fdp = testing::central_diff([&](const VectorXd& v) { return ppm.value(v); }, xp);
  const VectorXd fdr = testing::central_diff([&](const VectorXd& v) { return refl.value(v); }, xr);
  CHECK((ppm.gradient(xp) - fdp).norm() < 1e-6);
  CHECK((refl.gradient(xr) - fdr).norm() < 1e-6);
  CHECK_THROWS_AS(refl.gradient(VectorXd::Constant(3, 2.0)), NonsmoothPoint);
}

TEST_CASE("merit kinds reject misuse") {
  const Objective f = shifted_box_quadratic();
  CHECK_THROWS_AS(MeritFunction::sigmoidal(f, SigmoidalWarp::uniform(2, 1.0)), DimensionMismatch);
  CHECK_THROWS_AS(MeritFunction::reflection(f).hessian(VectorXd::Zero(3)), InvalidArgument);
  CHECK_THROWS_AS(MeritFunction::reflection(f).with_warp(SigmoidalWarp::uniform(3, 1.0)), InvalidArgument);
  const Objective nohess(BoundBox::unit(1), [](const VectorXd& y) { return y[0]; },
                         [](const VectorXd&) -> VectorXd { return VectorXd::Ones(1); });
  CHECK_THROWS_AS(MeritFunction::sigmoidal(nohess, SigmoidalWarp::uniform(1, 1.0)).hessian(VectorXd::Zero(1)),
                  MissingOracle);
}

TEST_CASE("lipschitz_bound formula") {
  CHECK(lipschitz_bound(SigmoidalWarp::uniform(2, 2.0), 3.0, 5.0) == doctest::Approx(0.5 * (4.0 * 5.0 + 2.0 * 3.0)));
  CHECK(lipschitz_bound(SigmoidalWarp((VectorXd(2) << 0.5, 4.0).finished()), 1.0, 1.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(lipschitz_bound(SigmoidalWarp::uniform(1, 1.0), -1.0, 0.0), InvalidArgument);
}

TEST_CASE("secant slopes of the sigmoidal merit gradient respect lipschitz_bound") {
  const Problem p = find_problem("sep_quad_5").value();
  const double L = *p.objective.unit_lipschitz_grad();
  const double Lh = *p.objective.unit_lipschitz_fun();
  std::mt19937_64 rng(17);
  for (double s : {0.5, 1.0, 4.0}) {
    const MeritFunction m = MeritFunction::sigmoidal(p.objective, SigmoidalWarp::uniform(5, s));
    const double bound = lipschitz_bound(m.warp(), L, Lh);
    for (int k = 0; k < 200; ++k) {
      const VectorXd a = testing::uniform_vec(rng, 5, -6.0, 6.0);
      const VectorXd b = testing::uniform_vec(rng, 5, -6.0, 6.0);
      CHECK((m.gradient(a) - m.gradient(b)).norm() <= bound * (a - b).norm());
    }
  }
}
