#include "warpopt/adawarp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace warpopt {

const char* to_string(UpruleMode mode) {
  return mode == UpruleMode::Full ? "full" : "simplified";
}

const char* to_string(InnerSolver solver) {
  switch (solver) {
    case InnerSolver::LBFGS: return "lbfgs";
    case InnerSolver::GradientDescent: return "gd";
    case InnerSolver::ConstantStepGD: return "gd-constant";
    case InnerSolver::SteepestDescent: return "steepest";
    case InnerSolver::Hybrid: return "hybrid";
  }
  return "unknown";
}

UpruleMode parse_uprule_mode(const std::string& name) {
  if (name == "simplified") return UpruleMode::Simplified;
  if (name == "full") return UpruleMode::Full;
  throw InvalidArgument("unknown uprule mode '" + name + "'");
}

InnerSolver parse_inner_solver(const std::string& name) {
  for (InnerSolver s : {InnerSolver::LBFGS, InnerSolver::GradientDescent, InnerSolver::ConstantStepGD,
                        InnerSolver::SteepestDescent, InnerSolver::Hybrid}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidArgument("unknown inner solver '" + name + "'");
}

const char* to_string(AdaWarpStatus status) {
  switch (status) {
    case AdaWarpStatus::EpsilonStationary: return "epsilon-stationary";
    case AdaWarpStatus::RelativeKKT: return "relative-kkt";
    case AdaWarpStatus::MaxOuterIters: return "max-outer-iters";
    case AdaWarpStatus::InnerFailure: return "inner-failure";
    case AdaWarpStatus::SigmaCap: return "sigma-cap";
    case AdaWarpStatus::EvalBudget: return "eval-budget";
    case AdaWarpStatus::Interrupted: return "interrupted";
  }
  return "unknown";
}

double AdaWarpConfig::inner_delta() const {
  if (delta) return *delta;
  return boundary_optimum ? epsilon * epsilon : epsilon;
}

void AdaWarpConfig::validate() const {
  if (sigma0.size() == 0) throw InvalidArgument("adawarp: sigma0 is empty");
  if (!((sigma0.array() > 0.0).all() && (sigma0.array() <= kSigmaCap).all())) {
    throw InvalidArgument("adawarp: sigma0 entries must lie in (0, sigma cap]");
  }
  if (!(gamma >= 1.0)) throw InvalidArgument("adawarp: gamma must be >= 1");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw InvalidArgument("adawarp: kappa must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw InvalidArgument("adawarp: epsilon must be positive");
  if (delta && !(*delta > 0.0)) throw InvalidArgument("adawarp: delta must be positive");
  if (tau && !(*tau > 0.0)) throw InvalidArgument("adawarp: tau must be positive");
  if (max_outer_iters < 1) throw InvalidArgument("adawarp: max_outer_iters must be >= 1");
  if (max_evals < 0) throw InvalidArgument("adawarp: max_evals must be >= 0");
  solver.validate();
}

VectorXd boundary_distances(const VectorXd& y) {
  return y.cwiseMin(VectorXd::Ones(y.size()) - y);
}

VectorXd uprule(const VectorXd& sigma, const VectorXd& eta, double gamma, double kappa,
                UpruleMode mode) {
  detail::require_same_size(sigma.size(), eta.size(), "uprule");
  const VectorXd raw = sigma.cwiseQuotient(eta.cwiseSqrt());
  VectorXd next(sigma.size());
  if (mode == UpruleMode::Simplified) {
    next = gamma * raw;
  } else {
    const double floor = raw.minCoeff() / kappa;
    for (Eigen::Index j = 0; j < raw.size(); ++j) {
      next[j] = raw[j] <= floor ? gamma * raw[j] : gamma * floor;
    }
  }
  return next.cwiseMin(kSigmaCap);
}

VectorXd sigma0_heuristic(const VectorXd& x) {
  return sigma0_from_unit(sigmoid_forward(x, SigmoidalWarp::uniform(x.size(), 1.0)));
}

VectorXd sigma0_from_unit(const VectorXd& y) {
  const VectorXd y_c = y.cwiseMax(kFeasEps).cwiseMin(1.0 - kFeasEps);
  return y_c.cwiseProduct(VectorXd::Ones(y.size()) - y_c).cwiseInverse().cwiseMin(kSigmaCap);
}

int iteration_bound(double epsilon, double delta, double gamma, std::optional<double> nu,
                    std::optional<double> xi, std::optional<double> l_bar) {
  if (!(epsilon > 0.0 && delta > 0.0)) throw InvalidArgument("iteration_bound: epsilon, delta > 0");
  const double rate = std::log(std::sqrt(2.0) * gamma);
  if (!(rate > 0.0)) throw InvalidArgument("iteration_bound: need sqrt(2) gamma > 1");
  if (!nu && !xi) throw InvalidArgument("iteration_bound: provide nu, xi or both");

  double n = 0.0;
  if (nu) {
    if (!(*nu > 0.0 && *nu < 0.5)) throw InvalidArgument("iteration_bound: nu must lie in (0, 1/2)");
    n = std::max(n, std::log(delta / (epsilon * *nu * (1.0 - *nu))) / rate);
  }
  if (xi) {
    if (!(*xi > 0.0 && *xi < 1.0)) throw InvalidArgument("iteration_bound: xi must lie in (0, 1)");
    if (!l_bar || !(*l_bar > 0.0)) throw InvalidArgument("iteration_bound: xi needs a positive l_bar");
    n = std::max(n, std::log(*l_bar * delta / (*xi * epsilon * epsilon)) / rate);
  }
  // guard against log(1) landing a hair above an integer
  return static_cast<int>(std::ceil(n - 1e-12));
}

namespace {

SolveResult run_inner(const AdaWarpConfig& cfg, const MeritFunction& merit, const VectorXd& x0,
                      const SolverConfig& scfg, const IterationCallback& cb, const StartPoint& start) {
  switch (cfg.inner) {
    case InnerSolver::LBFGS: return lbfgs(merit, x0, scfg, cb, start);
    case InnerSolver::GradientDescent: return gradient_descent(merit, x0, scfg, cb, start);
    case InnerSolver::ConstantStepGD: {
      const auto& obj = merit.objective();
      const auto lg = obj.unit_lipschitz_grad();
      const auto lf = obj.unit_lipschitz_fun();
      if (!lg || !lf) throw MissingOracle("constant-step inner solver needs Lipschitz constants");
      SolverConfig fixed = scfg;
      fixed.fixed_step = 1.0 / lipschitz_bound(merit.warp(), *lg, *lf);
      return gradient_descent(merit, x0, fixed, cb, start);
    }
    case InnerSolver::SteepestDescent: return steepest_descent_sigmoidal(merit, x0, scfg, cb, start);
    case InnerSolver::Hybrid: return hybrid_descent(merit, x0, scfg, cfg.hybrid_threshold, cb, start);
  }
  throw InvalidArgument("adawarp: unknown inner solver");
}

}  // namespace

AdaWarpTrace adawarp(const Objective& objective, const VectorXd& y0, const AdaWarpConfig& cfg,
                     const AdaWarpCallback& callback) {
  cfg.validate();
  const Eigen::Index n = objective.dim();
  detail::require_same_size(y0.size(), n, "adawarp");
  const BoundBox& box = objective.box();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(y0[i] > box.lower()[i] && y0[i] < box.upper()[i])) {
      throw InfeasibleInput("adawarp: start point must be strictly inside the box");
    }
  }
  if (cfg.sigma0.size() != 1 && cfg.sigma0.size() != n) {
    throw DimensionMismatch("adawarp: sigma0 must have length 1 or n");
  }

  VectorXd y = affine_from_box(y0, box);
  VectorXd sigma = cfg.sigma0_heuristic ? sigma0_from_unit(y)
                   : cfg.sigma0.size() == 1 ? VectorXd::Constant(n, cfg.sigma0[0])
                                            : cfg.sigma0;

  const long base_f = objective.eval_count();
  const long base_g = objective.grad_count();
  AdaWarpTrace trace;
  std::optional<VectorXd> g0;
  // f and grad f at y, carried over from the previous inner solve
  std::optional<std::pair<double, VectorXd>> cached;

  SolverConfig scfg = cfg.solver;
  scfg.delta = cfg.inner_delta();

  auto finish = [&](AdaWarpStatus status) {
    trace.status = status;
    trace.total_evals = objective.eval_count() - base_f;
    trace.total_grad_evals = objective.grad_count() - base_g;
    trace.y_final_box = affine_to_box(y, box);
    return trace;
  };

  for (int k = 0; k < cfg.max_outer_iters; ++k) {
    const long used = objective.eval_count() - base_f;
    if (cfg.max_evals > 0) {
      if (used >= cfg.max_evals) return finish(AdaWarpStatus::EvalBudget);
      scfg.max_evals = cfg.max_evals - used;
    }

    const SigmoidalWarp warp(sigma);
    const MeritFunction merit = MeritFunction::sigmoidal(objective, warp);
    const VectorXd x_start = sigmoid_inverse(y, warp);

    StartPoint start;
    if (cached) {
      MeritPoint p;
      p.x = x_start;
      p.y = y;
      p.objective_value = cached->first;
      p.value = cached->first;
      p.objective_gradient = cached->second;
      p.gradient = merit.sigmoidal_gradient_from(x_start, cached->second);
      start = std::move(p);
    }

    double seen_start = std::numeric_limits<double>::quiet_NaN();
    const IterationCallback inner_cb = [&](const IterationInfo& info) {
      if (info.k == 0) seen_start = info.point->value;
      if (!g0) g0 = info.point->objective_gradient;
      if (!callback) return true;
      IterationInfo shifted = info;
      shifted.evals = objective.eval_count() - base_f;
      shifted.grad_evals = objective.grad_count() - base_g;
      return callback(k, shifted);
    };

    SolveResult res = run_inner(cfg, merit, x_start, scfg, inner_cb, start);

    OuterIteration rec;
    rec.k = k;
    rec.sigma = sigma;
    rec.x_start = x_start;
    rec.merit_start = start ? start->value : seen_start;
    rec.inner_iterations = res.iterations;
    rec.inner_evals = res.f_evals;
    rec.inner_grad_evals = res.grad_evals;
    rec.inner_status = res.status;

    MeritPoint star = std::move(res.final_point);
    if (start && star.value > start->value) {
      star = *start;
      rec.inner_rejected = true;
    }
    if (!g0) g0 = star.objective_gradient;
    trace.start_grad_norm = g0->norm();

    y = star.y;
    rec.x_star = star.x;
    rec.y_star = star.y;
    rec.y_star_box = affine_to_box(star.y, box);
    rec.f_star = star.objective_value;
    rec.merit_star = star.value;
    rec.merit_grad_norm = star.gradient.norm();
    rec.kkt = epsilon_stationarity(star.y, star.objective_gradient);
    if (trace.start_grad_norm > 0.0) rec.relative_kkt = rec.kkt.epsilon / trace.start_grad_norm;
    rec.eta = boundary_distances(star.y);
    rec.sigma_ratio = sigma.minCoeff() / sigma.maxCoeff();
    cached.emplace(star.objective_value, star.objective_gradient);

    const bool stationary = rec.kkt.epsilon <= cfg.epsilon;
    const bool relative = cfg.tau && rec.relative_kkt && *rec.relative_kkt <= *cfg.tau;
    const SolveStatus inner_status = res.status;
    trace.iterations.push_back(std::move(rec));

    if (stationary) return finish(AdaWarpStatus::EpsilonStationary);
    if (relative) return finish(AdaWarpStatus::RelativeKKT);
    if (inner_status == SolveStatus::EvalBudget) return finish(AdaWarpStatus::EvalBudget);
    if (inner_status == SolveStatus::Interrupted) return finish(AdaWarpStatus::Interrupted);
    if (inner_status != SolveStatus::GradientTolMet) return finish(AdaWarpStatus::InnerFailure);

    const VectorXd next = uprule(sigma, trace.iterations.back().eta, cfg.gamma, cfg.kappa, cfg.mode);
    if ((next.array() <= sigma.array()).all()) return finish(AdaWarpStatus::SigmaCap);
    sigma = next;
  }
  return finish(AdaWarpStatus::MaxOuterIters);
}

}  // namespace warpopt
