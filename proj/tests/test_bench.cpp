#include "doctest.h"

#include "warpopt/bench.hpp"

using namespace warpopt;

namespace {

RunRecord rec(const std::string& problem, const std::string& solver, Eigen::Index n, double tau,
              std::optional<long> t_pa) {
  RunRecord r;
  r.problem = problem;
  r.solver = solver;
  r.n = n;
  r.tau = tau;
  r.t_pa = t_pa;
  return r;
}

}  // namespace

TEST_CASE("data profile hand-computed oracle") {
  // budgets in units of n + 1: a -> 1, 5, unsolved; b -> 2, 2, 20
  const std::vector<RunRecord> rs = {
      rec("p1", "a", 1, 1e-2, 2),  rec("p1", "b", 1, 1e-2, 4),
      rec("p2", "a", 4, 1e-2, 25), rec("p2", "b", 4, 1e-2, 10),
      rec("p3", "a", 9, 1e-2, {}), rec("p3", "b", 9, 1e-2, 200),
  };
  const DataProfile prof = data_profile(rs, {1.0, 2.0, 5.0, 10.0, 100.0});
  REQUIRE(prof.curves.size() == 2);
  CHECK(prof.curves[0].solver == "a");
  const std::vector<double> a = {1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3, 2.0 / 3};
  const std::vector<double> b = {0.0, 2.0 / 3, 2.0 / 3, 2.0 / 3, 1.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(prof.curves[0].fractions[i] == doctest::Approx(a[i]));
    CHECK(prof.curves[1].fractions[i] == doctest::Approx(b[i]));
  }
}

TEST_CASE("data profile rejects mismatched problem sets and unsorted alphas") {
  const std::vector<RunRecord> rs = {rec("p1", "a", 1, 1e-2, 2), rec("p2", "b", 1, 1e-2, 4)};
  CHECK_THROWS_AS(data_profile(rs, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(data_profile({rec("p1", "a", 1, 1e-2, 2)}, {2.0, 1.0}), InvalidArgument);
}

TEST_CASE("default alphas span three decades") {
  const auto a = default_alphas();
  CHECK(a.size() == 31);
  CHECK(a.front() == 1.0);
  CHECK(a.back() == doctest::Approx(1000.0));
}

TEST_CASE("profile CSV layout") {
  const DataProfile prof = data_profile({rec("p1", "a", 1, 1e-2, 2)}, {1.0, 10.0});
  CHECK(profile_csv(prof) == "solver,tau,alpha,fraction\na,0.01,1,1.000000\na,0.01,10,1.000000\n");
}

TEST_CASE("run record JSON round trip") {
  RunRecord r = rec("p", "fixed-sigma:10", 3, 1e-4, 17);
  r.f_evals = 40;
  r.history = {{1, 0.5, 1.0}, {17, 1e-5, 2e-5}};
  const RunRecord back = record_from_json(to_json(r));
  CHECK(back.t_pa == r.t_pa);
  CHECK(back.solver == r.solver);
  CHECK(back.history.size() == 2);
  CHECK(back.history[1].ratio == 2e-5);
  CHECK(!record_from_json(to_json(rec("p", "a", 1, 1e-2, {}))).t_pa);
}

TEST_CASE("solver names") {
  CHECK_NOTHROW(validate_solver_name("adawarp"));
  CHECK_NOTHROW(validate_solver_name("fixed-sigma:0.001"));
  CHECK_THROWS_AS(validate_solver_name("fixed-sigma:"), InvalidArgument);
  CHECK_THROWS_AS(validate_solver_name("fixed-sigma:-1"), InvalidArgument);
  CHECK_THROWS_AS(validate_solver_name("fixed-sigma:2x"), InvalidArgument);
  CHECK_THROWS_AS(validate_solver_name("newton"), InvalidArgument);
}

TEST_CASE("run_cell records the history and t_pa counts evaluations") {
  const Problem p = fig2_quadratic();
  for (const std::string solver : {"adawarp", "ppm", "projgrad-baseline", "fixed-sigma:10"}) {
    CAPTURE(solver);
    const auto rs = run_cell(p, solver, {1e-2, 1e-4}, 1000);
    REQUIRE(rs.size() == 2);
    REQUIRE(rs[0].t_pa);
    REQUIRE(rs[1].t_pa);
    CHECK(*rs[0].t_pa <= *rs[1].t_pa);
    CHECK(*rs[1].t_pa <= rs[1].f_evals);
    CHECK(rs[0].history.front().evals >= 1);
    CHECK(rs[0].history.front().ratio > 1e-2);
    CHECK(rs[0].violations == 0);
    CHECK(p.objective.eval_count() == 0);
  }
}

TEST_CASE("campaign order and results do not depend on the thread count") {
  std::vector<Problem> ps = {fig2_quadratic(), find_problem("sep_quad_5").value(),
                             find_problem("rosenbrock_2").value()};
  CampaignConfig cfg;
  cfg.solvers = {"adawarp", "projgrad-baseline"};
  cfg.jobs = 1;
  const auto serial = run_campaign(ps, cfg);
  cfg.jobs = 4;
  const auto parallel = run_campaign(ps, cfg);
  REQUIRE(serial.size() == 12);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(to_json(serial[i]) == to_json(parallel[i]));
  }
  CHECK(serial[0].problem == "fig2_quadratic");
  CHECK(serial[2].solver == "projgrad-baseline");
}

TEST_CASE("campaign rejects empty inputs") {
  CampaignConfig cfg;
  CHECK_THROWS_AS(run_campaign({fig2_quadratic()}, cfg), InvalidArgument);
  cfg.solvers = {"adawarp"};
  CHECK_THROWS_AS(run_campaign({}, cfg), InvalidArgument);
}
