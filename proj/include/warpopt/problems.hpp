#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warpopt/objective.hpp"

namespace warpopt {

/// Problem class codes: quadratic, sum of squares, other.
enum class ProblemType { Quadratic, SumOfSquares, Other };

char type_code(ProblemType type);

struct KnownOptimum {
  VectorXd y;  ///< box coordinates
  double f = 0.0;
  std::vector<int> active;
  /// Multipliers of f(A(.)) on the unit cube, lambda, mu <= 0.
  VectorXd lambda;
  VectorXd mu;
};

struct Problem {
  std::string name;
  ProblemType type = ProblemType::Other;
  Objective objective;
  VectorXd start;  ///< conditioned nominal start, box coordinates
  std::optional<KnownOptimum> optimum;

  Eigen::Index dim() const { return objective.dim(); }
  const BoundBox& box() const { return objective.box(); }
  bool interior_optimum() const { return optimum && optimum->active.empty(); }

  /// Same description with fresh evaluation counters.
  Problem clone() const;
};

/// Moves components on or outside a bound inward by margin times the width.
VectorXd condition_start(const VectorXd& y, const BoundBox& box, double margin = 1e-3);

/// The built-in problem set, in a fixed order.
std::vector<Problem> registry();

/// Looks a problem up by name; nullopt if unknown.
std::optional<Problem> find_problem(const std::string& name);

/// One line per problem: name, type code, n, number of active bounds at the optimum.
std::string registry_table(const std::vector<Problem>& problems);

/// 0.5 (y - c)^T diag(h) (y - c) on the box, with analytic optimum, multipliers
/// and Lipschitz constants.
Problem separable_quadratic(std::string name, BoundBox box, VectorXd h, VectorXd c,
                            VectorXd start_raw);

/// The two-dimensional axis-aligned quadratic with Hessian eigenvalues {100, 2}
/// and unconstrained minimiser (1.1, 1.1) on the unit square.
Problem fig2_quadratic();

}  // namespace warpopt
