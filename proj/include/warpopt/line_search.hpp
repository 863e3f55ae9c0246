#pragma once

#include <functional>

#include "warpopt/merit.hpp"

namespace warpopt {

struct LineSearchConfig {
  double c1 = 1e-4;        ///< sufficient decrease (Armijo)
  double c2 = 0.9;         ///< curvature (Wolfe)
  double backtrack = 0.5;  ///< shrink factor for backtracking
  int max_steps = 50;      ///< trial points per search

  void validate() const;
};

/// Evaluates the merit at x + alpha d.
using StepEvaluator = std::function<MeritPoint(double alpha, bool with_gradient)>;

struct LineSearchResult {
  bool ok = false;
  double step = 0.0;
  /// Accepted point (or the best sufficient-decrease point seen when !ok).
  MeritPoint point;
  bool has_point = false;
  int trials = 0;
};

/// Backtracking from alpha0 until f(alpha) <= f0 + c1 alpha dphi0.
/// Trial points are evaluated without gradients.
LineSearchResult armijo_backtracking(const StepEvaluator& eval, double f0, double dphi0,
                                     double alpha0, const LineSearchConfig& cfg);

/// Strong Wolfe search (bracketing + safeguarded cubic zoom). Trial points
/// carry gradients.
LineSearchResult strong_wolfe(const StepEvaluator& eval, const VectorXd& direction, double f0,
                              double dphi0, double alpha0, const LineSearchConfig& cfg);

/// Weak Wolfe bracketing/bisection, tolerant of kinks in the merit.
LineSearchResult weak_wolfe(const StepEvaluator& eval, const VectorXd& direction, double f0,
                            double dphi0, double alpha0, const LineSearchConfig& cfg);

}  // namespace warpopt
