#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warpopt/kkt.hpp"
#include "warpopt/merit.hpp"
#include "warpopt/solvers.hpp"

namespace warpopt {

enum class UpruleMode { Simplified, Full };

enum class InnerSolver { LBFGS, GradientDescent, ConstantStepGD, SteepestDescent, Hybrid };

const char* to_string(UpruleMode mode);
const char* to_string(InnerSolver solver);
UpruleMode parse_uprule_mode(const std::string& name);
InnerSolver parse_inner_solver(const std::string& name);

struct AdaWarpConfig {
  /// Length 1 is broadcast to every coordinate.
  VectorXd sigma0 = VectorXd::Constant(1, 1.0);
  /// Replace sigma0 by 1 / (y0 (1 - y0)), which makes the first Jacobian the identity.
  bool sigma0_heuristic = false;
  double gamma = 1.0;
  double kappa = 0.1;
  double epsilon = 1e-6;
  /// Inner gradient tolerance; defaults to epsilon, or epsilon^2 with boundary_optimum.
  std::optional<double> delta;
  bool boundary_optimum = false;
  std::optional<double> tau;
  int max_outer_iters = 100;
  /// Cap on objective value evaluations over the whole run, 0 = none.
  long max_evals = 0;
  InnerSolver inner = InnerSolver::LBFGS;
  SolverConfig solver;
  UpruleMode mode = UpruleMode::Simplified;
  double hybrid_threshold = 0.5;

  double inner_delta() const;
  void validate() const;
};

enum class AdaWarpStatus {
  EpsilonStationary,
  RelativeKKT,
  MaxOuterIters,
  InnerFailure,
  SigmaCap,
  EvalBudget,
  Interrupted,
};

const char* to_string(AdaWarpStatus status);

struct OuterIteration {
  int k = 0;
  VectorXd sigma;
  VectorXd x_start;
  VectorXd x_star;
  VectorXd y_star;      ///< unit coordinates
  VectorXd y_star_box;  ///< A(y_star)
  double f_star = 0.0;
  double merit_start = 0.0;
  double merit_star = 0.0;
  double merit_grad_norm = 0.0;
  int inner_iterations = 0;
  long inner_evals = 0;
  long inner_grad_evals = 0;
  SolveStatus inner_status = SolveStatus::MaxIter;
  /// The inner result increased the merit and was replaced by the start point.
  bool inner_rejected = false;
  KKTReport kkt;
  std::optional<double> relative_kkt;
  VectorXd eta;
  /// min_i sigma_i / max_i sigma_i.
  double sigma_ratio = 1.0;
};

struct AdaWarpTrace {
  std::vector<OuterIteration> iterations;
  AdaWarpStatus status = AdaWarpStatus::MaxOuterIters;
  long total_evals = 0;
  long total_grad_evals = 0;
  /// ||grad f(y0)|| in unit coordinates, used for the relative KKT ratio.
  double start_grad_norm = 0.0;
  VectorXd y_final_box;

  bool converged() const {
    return status == AdaWarpStatus::EpsilonStationary || status == AdaWarpStatus::RelativeKKT;
  }
};

/// Called on every accepted inner iterate; IterationInfo::evals counts from the
/// start of the AdaWarp run. Return false to stop.
using AdaWarpCallback = std::function<bool(int outer, const IterationInfo& info)>;

/// eta_i = min(y_i, 1 - y_i).
VectorXd boundary_distances(const VectorXd& y);

VectorXd uprule(const VectorXd& sigma, const VectorXd& eta, double gamma, double kappa,
                UpruleMode mode);

/// (S_1(x) (1 - S_1(x)))^{-1} with the unit-slope sigmoid.
VectorXd sigma0_heuristic(const VectorXd& x);
/// Same heuristic expressed through the unit point y = S_1(x).
VectorXd sigma0_from_unit(const VectorXd& y);

/// Outer-iteration bound. With nu only: ceil(log(delta / (eps nu (1 - nu))) / log(sqrt(2) gamma)).
/// With xi and l_bar only: ceil(log(l_bar delta / (xi eps^2)) / log(sqrt(2) gamma)). With
/// both, the larger. Negative logs clamp to zero.
int iteration_bound(double epsilon, double delta, double gamma, std::optional<double> nu,
                    std::optional<double> xi = std::nullopt,
                    std::optional<double> l_bar = std::nullopt);

/// Runs the adaptive warping outer loop from y0, a point strictly inside the
/// objective's box (box coordinates).
AdaWarpTrace adawarp(const Objective& objective, const VectorXd& y0, const AdaWarpConfig& cfg,
                     const AdaWarpCallback& callback = {});

}  // namespace warpopt
