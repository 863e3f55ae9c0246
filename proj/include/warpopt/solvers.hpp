#pragma once

#include <functional>
#include <optional>

#include "warpopt/line_search.hpp"
#include "warpopt/merit.hpp"

namespace warpopt {

enum class SolveStatus {
  GradientTolMet,
  MaxIter,
  EvalBudget,  ///< objective-evaluation cap reached
  LineSearchFailure,
  Stalled,
  Diverged,
  Interrupted,  ///< the iteration callback asked to stop
};

const char* to_string(SolveStatus status);

struct SolverConfig {
  double delta = 1e-6;  ///< gradient tolerance on the merit
  int max_iters = 10000;
  long max_evals = 0;  ///< cap on objective value evaluations, 0 = none
  LineSearchConfig line_search;
  double initial_step = 1.0;
  int lbfgs_memory = 10;
  /// Constant step, e.g. 1 / L_tilde; when unset gradient descent backtracks.
  std::optional<double> fixed_step;

  void validate() const;
};

/// Snapshot handed to the iteration callback after the start point and after
/// every accepted iterate.
struct IterationInfo {
  int k = 0;
  const MeritPoint* point = nullptr;  ///< x_k, merit value/gradient, y_k, f and grad f at y_k
  double grad_norm = 0.0;
  long evals = 0;       ///< objective value evaluations so far in this solve
  long grad_evals = 0;  ///< objective gradient evaluations so far in this solve
  /// grad f^T diag(sigma y (1-y))^{-1} grad f for sigmoidal steepest descent.
  std::optional<double> orthogonality;
  /// Whether the step leading here was a steepest-descent step (hybrid only).
  std::optional<bool> steepest_step;
};

/// Return false to stop the solve (status Interrupted).
using IterationCallback = std::function<bool(const IterationInfo&)>;

struct SolveResult {
  VectorXd x_star;
  MeritPoint final_point;  ///< evaluation at x_star, with gradient
  int iterations = 0;
  long f_evals = 0;
  long grad_evals = 0;
  double final_grad_norm = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
};

/// Optional pre-evaluated start point (value and gradient at x0); lets a warm
/// start skip re-evaluating the objective.
using StartPoint = std::optional<MeritPoint>;

/// x_{m+1} = x_m - alpha grad, with alpha = fixed_step or Armijo backtracking.
SolveResult gradient_descent(const MeritFunction& merit, const VectorXd& x0,
                             const SolverConfig& cfg, const IterationCallback& callback = {},
                             const StartPoint& start = std::nullopt);

/// Limited-memory BFGS with a strong Wolfe line search.
SolveResult lbfgs(const MeritFunction& merit, const VectorXd& x0, const SolverConfig& cfg,
                  const IterationCallback& callback = {}, const StartPoint& start = std::nullopt);

/// Steepest descent in the sigmoidal norm:
/// x_{k+1} = x_k - alpha diag(sigma y (1 - y))^{-1} grad f(y_k).
SolveResult steepest_descent_sigmoidal(const MeritFunction& merit, const VectorXd& x0,
                                       const SolverConfig& cfg,
                                       const IterationCallback& callback = {},
                                       const StartPoint& start = std::nullopt);

/// Takes the sigmoidal steepest-descent step while its cosine with
/// -grad f_sigma exceeds switch_threshold, else a gradient step.
SolveResult hybrid_descent(const MeritFunction& merit, const VectorXd& x0,
                           const SolverConfig& cfg, double switch_threshold,
                           const IterationCallback& callback = {},
                           const StartPoint& start = std::nullopt);

/// Quasi-Newton on the projected-penalty merit, driven by ppm_direction with
/// a weak Wolfe line search. x_star is the raw iterate; final_point.y is its
/// projection.
SolveResult nonsmooth_qn_ppm(const MeritFunction& merit, const VectorXd& x0,
                             const SolverConfig& cfg, const IterationCallback& callback = {});

/// Projected gradient on the box, y_{k+1} = pi(y_k - alpha grad f(y_k)), with
/// backtracking along the projection arc. y0 is in box coordinates and so is
/// x_star; stops when the projected-gradient norm (unit coordinates) <= delta.
SolveResult projected_gradient_baseline(const Objective& objective, const VectorXd& y0,
                                        const SolverConfig& cfg,
                                        const IterationCallback& callback = {});

}  // namespace warpopt
