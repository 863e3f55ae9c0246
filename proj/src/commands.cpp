#include "warpopt/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "warpopt/bench.hpp"
#include "warpopt/kkt.hpp"
#include "warpopt/solvers.hpp"

namespace warpopt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json vec_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string jsonl(const std::vector<json>& records) {
  std::string out;
  for (const json& r : records) out += r.dump() + "\n";
  return out;
}

VectorXd start_point(const RunConfig& cfg, const Problem& p) {
  const BoundBox& box = p.box();
  if (!cfg.start.empty()) {
    if (static_cast<Eigen::Index>(cfg.start.size()) != p.dim()) {
      throw ConfigError("start has length " + std::to_string(cfg.start.size()) + ", problem has n = " +
                        std::to_string(p.dim()));
    }
    const VectorXd y = Eigen::Map<const VectorXd>(cfg.start.data(), p.dim());
    if (!box.contains(y)) throw ConfigError("start lies outside the problem's box");
    return condition_start(y, box);
  }
  if (cfg.random_start) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    VectorXd unit(p.dim());
    for (Eigen::Index i = 0; i < unit.size(); ++i) unit[i] = u(rng);
    return condition_start(affine_to_box(unit, box), box);
  }
  return p.start;
}

// Five-point central difference of a scalar function along coordinate i.
template <typename F>
double central_diff(const F& f, const VectorXd& x, Eigen::Index i, double h) {
  VectorXd p = x;
  auto at = [&](double t) {
    p[i] = x[i] + t;
    return f(p);
  };
  return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
}

template <typename F>
double rel_error(const F& f, const VectorXd& x, const VectorXd& g, const VectorXd& step) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(g[i] - central_diff(f, x, i, step[i])));
  }
  return worst / std::max(1.0, g.cwiseAbs().maxCoeff());
}

// Moves coordinates within `gap` of an integer (the kinks of both the
// reflection and the projection penalty) away from it.
VectorXd avoid_kinks(VectorXd x, double gap) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - std::round(x[i])) < gap) x[i] += 2.0 * gap;
  }
  return x;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

Problem resolve_problem(const std::string& name) {
  auto p = find_problem(name);
  if (!p) throw ConfigError("unknown problem '" + name + "'");
  return std::move(*p);
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const Problem problem = resolve_problem(cfg.problem);
  const Objective& obj = problem.objective;
  const BoundBox& box = problem.box();
  const VectorXd y0 = start_point(cfg, problem);
  const long base_violations = obj.violation_count();

  std::vector<json> records;
  json summary;
  bool met = false;

  if (cfg.solver == "adawarp") {
    const AdaWarpTrace trace = adawarp(obj, y0, cfg.adawarp_config());
    long evals = 0;
    for (const OuterIteration& it : trace.iterations) {
      evals += it.inner_evals;
      records.push_back({{"k", it.k},
                         {"sigma", vec_json(it.sigma)},
                         {"y", vec_json(it.y_star_box)},
                         {"f", it.f_star},
                         {"epsilon", it.kkt.epsilon},
                         {"relative_kkt", it.relative_kkt ? json(*it.relative_kkt) : json(nullptr)},
                         {"merit_grad_norm", it.merit_grad_norm},
                         {"inner_iterations", it.inner_iterations},
                         {"inner_status", to_string(it.inner_status)},
                         {"evals", evals}});
    }
    met = trace.converged();
    const OuterIteration* last = trace.iterations.empty() ? nullptr : &trace.iterations.back();
    summary = {{"summary", true},
               {"status", to_string(trace.status)},
               {"epsilon", last ? json(last->kkt.epsilon) : json(nullptr)},
               {"f", last ? json(last->f_star) : json(nullptr)},
               {"y", vec_json(trace.y_final_box)},
               {"outer_iterations", trace.iterations.size()},
               {"total_evals", trace.total_evals},
               {"total_grad_evals", trace.total_grad_evals}};
  } else {
    const SolverConfig scfg = cfg.solver_config();
    const long base_f = obj.eval_count();
    const double g0_norm = obj.clone().unit_gradient(affine_from_box(y0, box)).norm();
    double last_eps = std::numeric_limits<double>::infinity();
    const IterationCallback cb = [&](const IterationInfo& info) {
      const MeritPoint& p = *info.point;
      last_eps = epsilon_stationarity(p.y, p.objective_gradient).epsilon;
      records.push_back({{"k", info.k},
                         {"y", vec_json(affine_to_box(p.y, box))},
                         {"f", p.objective_value},
                         {"epsilon", last_eps},
                         {"grad_norm", info.grad_norm},
                         {"evals", obj.eval_count() - base_f}});
      return true;
    };

    SolveResult r;
    if (cfg.solver == "projgrad-baseline") {
      r = projected_gradient_baseline(obj, y0, scfg, cb);
    } else if (cfg.solver == "ppm") {
      const MeritFunction m = MeritFunction::projection_penalty(obj);
      r = nonsmooth_qn_ppm(m, affine_from_box(y0, box), scfg, cb);
    } else {
      const AdaWarpConfig a = cfg.adawarp_config();
      const VectorXd sigma = a.sigma0.size() == 1 ? VectorXd::Constant(problem.dim(), a.sigma0[0])
                                                  : a.sigma0;
      if (sigma.size() != problem.dim()) throw ConfigError("sigma0 must have length 1 or n");
      const MeritFunction m = MeritFunction::sigmoidal(obj, SigmoidalWarp(sigma));
      const VectorXd x0 = m.from_unit(affine_from_box(y0, box));
      if (cfg.solver == "lbfgs") r = lbfgs(m, x0, scfg, cb);
      else if (cfg.solver == "gd") r = gradient_descent(m, x0, scfg, cb);
      else if (cfg.solver == "steepest") r = steepest_descent_sigmoidal(m, x0, scfg, cb);
      else r = hybrid_descent(m, x0, scfg, cfg.hybrid_threshold, cb);
    }
    const double final_eps = epsilon_stationarity(r.final_point.y, r.final_point.objective_gradient).epsilon;
    met = final_eps <= cfg.epsilon || (cfg.tau && g0_norm > 0.0 && final_eps / g0_norm <= *cfg.tau);
    summary = {{"summary", true},
               {"status", to_string(r.status)},
               {"epsilon", final_eps},
               {"f", r.final_point.objective_value},
               {"y", vec_json(affine_to_box(r.final_point.y, box))},
               {"iterations", r.iterations},
               {"total_evals", r.f_evals},
               {"total_grad_evals", r.grad_evals}};
  }
  summary["tolerance_met"] = met;
  summary["violations"] = obj.violation_count() - base_violations;
  records.push_back(summary);

  write_file_atomic((fs::path(out_dir) / "trace.jsonl").string(), jsonl(records));
  std::cout << summary.dump() << '\n';
  return met ? kExitOk : kExitUnmet;
}

double GradcheckReport::max() const {
  return std::max({objective, sigmoidal, reflection, projection_penalty});
}

GradcheckReport gradcheck(const Objective& objective, int points, std::uint64_t seed) {
  const Eigen::Index n = objective.dim();
  const BoundBox& box = objective.box();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw = [&](double lo, double hi) {
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = lo + (hi - lo) * u01(rng);
    return v;
  };
  auto step_for = [](const VectorXd& x) -> VectorXd { return 1e-3 * x.cwiseAbs().cwiseMax(1.0); };

  const MeritFunction sig = MeritFunction::sigmoidal(objective, SigmoidalWarp::uniform(n, 1.0));
  const MeritFunction refl = MeritFunction::reflection(objective);
  const MeritFunction ppm = MeritFunction::projection_penalty(objective);

  GradcheckReport rep;
  for (int k = 0; k < points; ++k) {
    const VectorXd y = affine_to_box(draw(0.05, 0.95), box);
    rep.objective = std::max(rep.objective,
                             rel_error([&](const VectorXd& v) { return objective.value(v); }, y,
                                       objective.gradient(y), 1e-3 * box.width()));

    const VectorXd xs = draw(-4.0, 4.0);
    rep.sigmoidal = std::max(rep.sigmoidal,
                             rel_error([&](const VectorXd& v) { return sig.value(v); }, xs,
                                       sig.gradient(xs), step_for(xs)));

    const VectorXd xr = avoid_kinks(draw(-3.0, 3.0), 0.02);
    rep.reflection = std::max(rep.reflection,
                              rel_error([&](const VectorXd& v) { return refl.value(v); }, xr,
                                        refl.gradient(xr), step_for(xr)));

    const VectorXd xp = avoid_kinks(draw(-0.5, 1.5), 0.02);
    rep.projection_penalty = std::max(
        rep.projection_penalty, rel_error([&](const VectorXd& v) { return ppm.value(v); }, xp,
                                          ppm.evaluate(xp, true).gradient, step_for(xp)));
  }
  return rep;
}

int cmd_gradcheck(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const Problem problem = resolve_problem(cfg.problem);
  const GradcheckReport rep = gradcheck(problem.objective.clone(), cfg.gradcheck_points, cfg.seed);
  const bool ok = rep.max() < 1e-5;
  const json report = {{"problem", problem.name},
                       {"points", cfg.gradcheck_points},
                       {"objective", rep.objective},
                       {"sigmoidal", rep.sigmoidal},
                       {"reflection", rep.reflection},
                       {"projection_penalty", rep.projection_penalty},
                       {"max", rep.max()},
                       {"pass", ok}};
  write_file_atomic((fs::path(out_dir) / "gradcheck.json").string(), report.dump(2) + "\n");
  std::cout << report.dump() << '\n';
  return ok ? kExitOk : kExitUnmet;
}

int cmd_bench(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.solvers.empty()) {
    std::cerr << "bench: the solver list is empty\n";
    return kExitConfig;
  }
  cfg.validate();
  std::vector<Problem> problems;
  if (cfg.problems.empty()) {
    problems = registry();
  } else {
    for (const auto& name : cfg.problems) problems.push_back(resolve_problem(name));
  }

  CampaignConfig camp;
  camp.solvers = cfg.solvers;
  camp.taus = cfg.taus;
  camp.budget = cfg.budget;
  camp.jobs = cfg.jobs;
  const std::vector<RunRecord> records = run_campaign(problems, camp);

  std::vector<json> lines;
  long violations = 0;
  for (const RunRecord& r : records) {
    lines.push_back(to_json(r));
    violations += r.violations;
  }
  const DataProfile prof = data_profile(records, default_alphas());
  write_file_atomic((fs::path(out_dir) / "runs.jsonl").string(), jsonl(lines));
  write_file_atomic((fs::path(out_dir) / "profile.csv").string(), profile_csv(prof));

  for (const ProfileCurve& c : prof.curves) {
    std::printf("%-22s tau=%-8g solved=%.3f\n", c.solver.c_str(), c.tau, c.fractions.back());
  }
  if (violations != 0) {
    spdlog::error("bench: {} infeasible evaluations", violations);
    return kExitUnmet;
  }
  return kExitOk;
}

int cmd_profile(const std::string& runs_path, const std::string& out_dir) {
  std::ifstream in(runs_path);
  if (!in) throw ConfigError("cannot open '" + runs_path + "'");
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ConfigError("bad run record in '" + runs_path + "': " + e.what());
    }
  }
  const DataProfile prof = data_profile(records, default_alphas());
  write_file_atomic((fs::path(out_dir) / "profile.csv").string(), profile_csv(prof));
  return kExitOk;
}

}  // namespace warpopt
