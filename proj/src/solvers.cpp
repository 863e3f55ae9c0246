#include "warpopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace warpopt {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::GradientTolMet: return "gradient-tol-met";
    case SolveStatus::MaxIter: return "max-iter";
    case SolveStatus::EvalBudget: return "eval-budget";
    case SolveStatus::LineSearchFailure: return "line-search-failure";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::Interrupted: return "interrupted";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(delta > 0.0)) throw InvalidArgument("solver: delta must be positive");
  if (max_iters < 0) throw InvalidArgument("solver: max_iters must be >= 0");
  if (max_evals < 0) throw InvalidArgument("solver: max_evals must be >= 0");
  if (!(initial_step > 0.0)) throw InvalidArgument("solver: initial_step must be positive");
  if (lbfgs_memory < 1) throw InvalidArgument("solver: lbfgs_memory must be >= 1");
  if (fixed_step && !(*fixed_step > 0.0)) throw InvalidArgument("solver: fixed_step must be positive");
  line_search.validate();
}

namespace {

struct BudgetExhausted {};
struct StopRequested {};

// Evaluation bookkeeping shared by all solvers: budget, counters, callback.
class Session {
 public:
  Session(const Objective& objective, const SolverConfig& cfg, const IterationCallback& callback)
      : objective_(objective),
        cfg_(cfg),
        callback_(callback),
        base_f_(objective.eval_count()),
        base_g_(objective.grad_count()) {
    cfg.validate();
  }

  long evals() const { return objective_.eval_count() - base_f_; }
  long grad_evals() const { return objective_.grad_count() - base_g_; }

  void charge() const {
    if (cfg_.max_evals > 0 && evals() >= cfg_.max_evals) throw BudgetExhausted{};
  }

  MeritPoint eval(const MeritFunction& m, const VectorXd& x, bool with_gradient) const {
    charge();
    return m.evaluate(x, with_gradient);
  }

  void notify(int k, const MeritPoint& p, double grad_norm, std::optional<double> orth = {},
              std::optional<bool> steepest = {}) const {
    if (!callback_) return;
    IterationInfo info;
    info.k = k;
    info.point = &p;
    info.grad_norm = grad_norm;
    info.evals = evals();
    info.grad_evals = grad_evals();
    info.orthogonality = orth;
    info.steepest_step = steepest;
    if (!callback_(info)) throw StopRequested{};
  }

  SolveResult finish(const MeritPoint& p, int iterations, SolveStatus status,
                     double grad_norm) const {
    SolveResult r;
    r.x_star = p.x;
    r.final_point = p;
    r.iterations = iterations;
    r.f_evals = evals();
    r.grad_evals = grad_evals();
    r.final_grad_norm = grad_norm;
    r.status = status;
    return r;
  }

 private:
  const Objective& objective_;
  const SolverConfig& cfg_;
  const IterationCallback& callback_;
  long base_f_;
  long base_g_;
};

bool finite_point(const MeritPoint& p) {
  return std::isfinite(p.value) && p.gradient.allFinite();
}

// Runs body(); converts budget exhaustion and callback stops into a result
// at the last accepted point.
template <typename Body>
SolveResult guarded(const Session& s, const MeritPoint* const& current, const int& iterations,
                    Body&& body) {
  try {
    return body();
  } catch (const BudgetExhausted&) {
    if (!current) throw Error("solver: evaluation budget too small to evaluate the start point");
    return s.finish(*current, iterations, SolveStatus::EvalBudget,
                    current->has_gradient() ? current->gradient.norm() : 0.0);
  } catch (const StopRequested&) {
    return s.finish(*current, iterations, SolveStatus::Interrupted,
                    current->has_gradient() ? current->gradient.norm() : 0.0);
  }
}

// diag(sigma y (1 - y))^{-1}, with zeros where the warp is saturated.
VectorXd inverse_slope(const MeritFunction& merit, const VectorXd& x) {
  const VectorXd j = merit.sigmoidal_slope(x);
  return (j.array() > 0.0).select(j.cwiseInverse(), 0.0);
}

enum class DirectionRule { Gradient, Steepest, Hybrid };

SolveResult first_order_descent(const MeritFunction& merit, const VectorXd& x0,
                                const SolverConfig& cfg, const IterationCallback& callback,
                                const StartPoint& start, DirectionRule rule, double threshold) {
  if (rule != DirectionRule::Gradient && merit.kind() != WarpKind::Sigmoidal) {
    throw InvalidArgument("sigmoidal steepest descent needs a sigmoidal merit");
  }
  Session s(merit.objective(), cfg, callback);
  MeritPoint cur;
  const MeritPoint* cur_ptr = nullptr;
  int k = 0;

  return guarded(s, cur_ptr, k, [&]() -> SolveResult {
    cur = start ? *start : s.eval(merit, x0, true);
    cur_ptr = &cur;
    auto orthogonality = [&](const MeritPoint& p) -> std::optional<double> {
      if (rule == DirectionRule::Gradient) return std::nullopt;
      const VectorXd g = p.objective_gradient;
      return g.dot(inverse_slope(merit, p.x).cwiseProduct(g));
    };
    s.notify(0, cur, cur.gradient.norm(), orthogonality(cur));

    for (; k < cfg.max_iters;) {
      const double gnorm = cur.gradient.norm();
      if (!finite_point(cur)) return s.finish(cur, k, SolveStatus::Diverged, gnorm);
      if (gnorm <= cfg.delta) return s.finish(cur, k, SolveStatus::GradientTolMet, gnorm);

      VectorXd d = -cur.gradient;
      bool steepest = false;
      if (rule != DirectionRule::Gradient) {
        VectorXd d_sd = -inverse_slope(merit, cur.x).cwiseProduct(cur.objective_gradient);
        bool take = rule == DirectionRule::Steepest;
        if (rule == DirectionRule::Hybrid) {
          const double cosine = std::min(1.0, -cur.gradient.dot(d_sd) / (gnorm * d_sd.norm()));
          take = cosine > threshold;
        }
        if (take) {
          d = std::move(d_sd);
          steepest = true;
        }
      }
      const double dphi = cur.gradient.dot(d);

      MeritPoint next;
      if (cfg.fixed_step && rule == DirectionRule::Gradient) {
        next = s.eval(merit, cur.x + *cfg.fixed_step * d, true);
        if (!finite_point(next)) return s.finish(cur, k, SolveStatus::Diverged, gnorm);
      } else {
        const StepEvaluator step = [&](double a, bool g) { return s.eval(merit, cur.x + a * d, g); };
        LineSearchResult ls = armijo_backtracking(step, cur.value, dphi, cfg.initial_step, cfg.line_search);
        if (!ls.ok) return s.finish(cur, k, SolveStatus::LineSearchFailure, gnorm);
        next = std::move(ls.point);
        s.charge();
        merit.complete_gradient(next);
      }
      if (next.x == cur.x) return s.finish(cur, k, SolveStatus::Stalled, gnorm);
      cur = std::move(next);
      ++k;
      s.notify(k, cur, cur.gradient.norm(), orthogonality(cur),
               rule == DirectionRule::Hybrid ? std::optional<bool>(steepest) : std::nullopt);
    }
    const double gnorm = cur.gradient.norm();
    return s.finish(cur, k, gnorm <= cfg.delta ? SolveStatus::GradientTolMet : SolveStatus::MaxIter,
                    gnorm);
  });
}

struct CurvaturePair {
  VectorXd s;
  VectorXd y;
  double rho;
};

// H * v for the limited-memory inverse Hessian approximation.
VectorXd two_loop(const std::deque<CurvaturePair>& mem, const VectorXd& v) {
  VectorXd q = v;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return q;
}

enum class QuasiNewtonSearch { StrongWolfe, WeakWolfe };

SolveResult quasi_newton(const MeritFunction& merit, const VectorXd& x0, const SolverConfig& cfg,
                         const IterationCallback& callback, const StartPoint& start,
                         QuasiNewtonSearch search) {
  Session s(merit.objective(), cfg, callback);
  MeritPoint cur;
  const MeritPoint* cur_ptr = nullptr;
  int k = 0;

  return guarded(s, cur_ptr, k, [&]() -> SolveResult {
    cur = start ? *start : s.eval(merit, x0, true);
    cur_ptr = &cur;
    s.notify(0, cur, cur.gradient.norm());
    std::deque<CurvaturePair> mem;

    while (k < cfg.max_iters) {
      const double gnorm = cur.gradient.norm();
      if (!finite_point(cur)) return s.finish(cur, k, SolveStatus::Diverged, gnorm);
      if (gnorm <= cfg.delta) return s.finish(cur, k, SolveStatus::GradientTolMet, gnorm);

      VectorXd d = -two_loop(mem, cur.gradient);
      double dphi = cur.gradient.dot(d);
      if (!(dphi < 0.0) || !d.allFinite()) {
        mem.clear();
        d = -cur.gradient;
        dphi = -gnorm * gnorm;
      }
      const double alpha0 = mem.empty() ? 1.0 / gnorm : 1.0;

      const StepEvaluator step = [&](double a, bool g) { return s.eval(merit, cur.x + a * d, g); };
      LineSearchResult ls = search == QuasiNewtonSearch::StrongWolfe
                                ? strong_wolfe(step, d, cur.value, dphi, alpha0, cfg.line_search)
                                : weak_wolfe(step, d, cur.value, dphi, alpha0, cfg.line_search);
      if (!ls.ok) {
        // an Armijo point is still progress; otherwise retry once from steepest descent
        if (!(ls.has_point && ls.point.value < cur.value)) {
          if (!mem.empty()) {
            mem.clear();
            continue;
          }
          return s.finish(cur, k, SolveStatus::LineSearchFailure, gnorm);
        }
      }
      MeritPoint next = std::move(ls.point);
      if (next.x == cur.x) return s.finish(cur, k, SolveStatus::Stalled, gnorm);

      const VectorXd sv = next.x - cur.x;
      const VectorXd yv = next.gradient - cur.gradient;
      const double sy = sv.dot(yv);
      if (sy > 1e-10 * sv.norm() * yv.norm()) {
        mem.push_back({sv, yv, 1.0 / sy});
        if (static_cast<int>(mem.size()) > cfg.lbfgs_memory) mem.pop_front();
      }
      cur = std::move(next);
      ++k;
      s.notify(k, cur, cur.gradient.norm());
    }
    const double gnorm = cur.gradient.norm();
    return s.finish(cur, k, gnorm <= cfg.delta ? SolveStatus::GradientTolMet : SolveStatus::MaxIter,
                    gnorm);
  });
}

}  // namespace

SolveResult gradient_descent(const MeritFunction& merit, const VectorXd& x0,
                             const SolverConfig& cfg, const IterationCallback& callback,
                             const StartPoint& start) {
  return first_order_descent(merit, x0, cfg, callback, start, DirectionRule::Gradient, 0.0);
}

SolveResult steepest_descent_sigmoidal(const MeritFunction& merit, const VectorXd& x0,
                                       const SolverConfig& cfg,
                                       const IterationCallback& callback,
                                       const StartPoint& start) {
  return first_order_descent(merit, x0, cfg, callback, start, DirectionRule::Steepest, 0.0);
}

SolveResult hybrid_descent(const MeritFunction& merit, const VectorXd& x0,
                           const SolverConfig& cfg, double switch_threshold,
                           const IterationCallback& callback, const StartPoint& start) {
  return first_order_descent(merit, x0, cfg, callback, start, DirectionRule::Hybrid,
                             switch_threshold);
}

SolveResult lbfgs(const MeritFunction& merit, const VectorXd& x0, const SolverConfig& cfg,
                  const IterationCallback& callback, const StartPoint& start) {
  return quasi_newton(merit, x0, cfg, callback, start, QuasiNewtonSearch::StrongWolfe);
}

SolveResult nonsmooth_qn_ppm(const MeritFunction& merit, const VectorXd& x0,
                             const SolverConfig& cfg, const IterationCallback& callback) {
  if (merit.kind() != WarpKind::ProjectionPenalty) {
    throw InvalidArgument("nonsmooth_qn_ppm: merit must be projection-penalty");
  }
  return quasi_newton(merit, x0, cfg, callback, std::nullopt, QuasiNewtonSearch::WeakWolfe);
}

SolveResult projected_gradient_baseline(const Objective& objective, const VectorXd& y0,
                                        const SolverConfig& cfg,
                                        const IterationCallback& callback) {
  detail::require_same_size(y0.size(), objective.dim(), "projected_gradient_baseline");
  if (!objective.box().contains(y0)) {
    throw InfeasibleInput("projected_gradient_baseline: start point is outside the box");
  }
  Session s(objective, cfg, callback);
  const BoundBox& box = objective.box();
  auto project = [](const VectorXd& u) -> VectorXd { return u.cwiseMax(0.0).cwiseMin(1.0); };
  auto point_at = [&](const VectorXd& u, bool with_gradient) {
    s.charge();
    MeritPoint p;
    p.x = u;
    p.y = u;
    p.objective_value = objective.unit_value(u);
    p.value = p.objective_value;
    if (with_gradient) {
      p.objective_gradient = objective.unit_gradient(u);
      p.gradient = p.objective_gradient;
    }
    return p;
  };
  auto pg_norm = [&](const MeritPoint& p) { return (project(p.y - p.objective_gradient) - p.y).norm(); };
  auto to_box_result = [&](SolveResult r) {
    r.x_star = affine_to_box(r.final_point.y, box);
    return r;
  };

  MeritPoint cur;
  const MeritPoint* cur_ptr = nullptr;
  int k = 0;
  return to_box_result(guarded(s, cur_ptr, k, [&]() -> SolveResult {
    cur = point_at(affine_from_box(y0, box), true);
    cur_ptr = &cur;
    s.notify(0, cur, pg_norm(cur));
    double alpha0 = cfg.initial_step;
    while (k < cfg.max_iters) {
      const double pg = pg_norm(cur);
      if (!std::isfinite(cur.value) || !cur.gradient.allFinite()) {
        return s.finish(cur, k, SolveStatus::Diverged, pg);
      }
      if (pg <= cfg.delta) return s.finish(cur, k, SolveStatus::GradientTolMet, pg);

      double alpha = alpha0;
      bool accepted = false;
      MeritPoint next;
      for (int t = 0; t < cfg.line_search.max_steps; ++t) {
        const VectorXd trial = project(cur.y - alpha * cur.gradient);
        next = point_at(trial, false);
        if (std::isfinite(next.value) &&
            next.value <= cur.value + cfg.line_search.c1 * cur.gradient.dot(trial - cur.y)) {
          accepted = true;
          break;
        }
        alpha *= cfg.line_search.backtrack;
      }
      if (!accepted) return s.finish(cur, k, SolveStatus::LineSearchFailure, pg);
      if (next.x == cur.x) return s.finish(cur, k, SolveStatus::Stalled, pg);
      s.charge();
      next.objective_gradient = objective.unit_gradient(next.y);
      next.gradient = next.objective_gradient;

      // Barzilai-Borwein guess for the next trial step
      const VectorXd sv = next.y - cur.y;
      const VectorXd yv = next.gradient - cur.gradient;
      const double sy = sv.dot(yv);
      alpha0 = sy > 0.0 ? std::clamp(sv.squaredNorm() / sy, 1e-12, 1e12) : cfg.initial_step;

      cur = std::move(next);
      ++k;
      s.notify(k, cur, pg_norm(cur));
    }
    const double pg = pg_norm(cur);
    return s.finish(cur, k, pg <= cfg.delta ? SolveStatus::GradientTolMet : SolveStatus::MaxIter, pg);
  }));
}

}  // namespace warpopt
