#pragma once

#include <optional>

#include "warpopt/objective.hpp"
#include "warpopt/warps.hpp"

namespace warpopt {

/// Interior/boundary/exterior tolerance (unit coordinates) for the
/// projected-penalty merit.
inline constexpr double kBoundaryTol = 1e-12;

enum class WarpKind { Sigmoidal, ProjectionPenalty, Reflection };

const char* to_string(WarpKind kind);

enum class PpmRegion { Interior, Boundary, Exterior };

/// Everything known after one merit evaluation at x.
struct MeritPoint {
  VectorXd x;
  double value = 0.0;
  /// Merit gradient; empty when not requested or not defined at x.
  VectorXd gradient;
  /// Unit-cube point where f was evaluated, e.g. S(x) or pi(x).
  VectorXd y;
  double objective_value = 0.0;
  /// Gradient of f(A(.)) at y, unit coordinates; empty if not requested.
  VectorXd objective_gradient;

  bool has_gradient() const { return gradient.size() > 0; }
};

/// Merit function f(A(Phi(x))) over R^n for a warp Phi onto the unit cube and
/// the affine map A onto the objective's box. The projected-penalty kind adds
/// the Euclidean distance from x to the unit cube.
///
/// The objective is only ever evaluated at Phi(x), which lies in the cube for
/// every x, so all x in R^n are legal queries.
class MeritFunction {
 public:
  static MeritFunction sigmoidal(Objective objective, SigmoidalWarp warp);
  static MeritFunction projection_penalty(Objective objective);
  static MeritFunction reflection(Objective objective);

  WarpKind kind() const { return kind_; }
  Eigen::Index dim() const { return objective_.dim(); }
  const Objective& objective() const { return objective_; }
  /// Only meaningful for the sigmoidal kind.
  const SigmoidalWarp& warp() const { return warp_; }

  MeritFunction with_warp(SigmoidalWarp warp) const;

  double value(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;
  /// Requires an objective Hessian oracle; sigmoidal kind only.
  MatrixXd hessian(const VectorXd& x) const;

  /// One evaluation of f (and of its gradient when requested). For the
  /// projected-penalty kind the returned gradient is the case-selected
  /// direction of ppm_direction, which coincides with the true gradient off
  /// the nonsmooth set.
  MeritPoint evaluate(const VectorXd& x, bool with_gradient) const;
  /// Adds the gradient to a point produced by evaluate(x, false); costs one
  /// objective gradient evaluation and no value evaluation.
  void complete_gradient(MeritPoint& p) const;

  /// Phi(x) in unit coordinates.
  VectorXd to_unit(const VectorXd& x) const;
  /// A(Phi(x)) in box coordinates.
  VectorXd to_box(const VectorXd& x) const;
  /// A preimage of a unit point: S^{-1}(y) for the sigmoidal kind, y otherwise.
  VectorXd from_unit(const VectorXd& y) const;

  PpmRegion classify(const VectorXd& x) const;
  /// Subgradient-type direction of the projected-penalty merit.
  VectorXd ppm_direction(const VectorXd& x) const;

  /// d S(x) / dx as seen by the merit: the Jacobian diagonal, zeroed where the
  /// warp is saturated and the merit is locally constant. Sigmoidal kind only.
  VectorXd sigmoidal_slope(const VectorXd& x) const;

  /// Merit gradient rebuilt from an already known objective gradient at the
  /// unit point y = Phi(x); sigmoidal kind only.
  VectorXd sigmoidal_gradient_from(const VectorXd& x, const VectorXd& objective_gradient) const;

 private:
  MeritFunction(WarpKind kind, Objective objective, SigmoidalWarp warp);

  VectorXd ppm_direction_impl(const VectorXd& x, const VectorXd& pi, double dist,
                              double* f_out, VectorXd* g_out) const;

  WarpKind kind_;
  Objective objective_;
  SigmoidalWarp warp_;
};

/// Gradient Lipschitz bound of the sigmoidal merit: (sigma_max^2 L_hat + sigma_max L) / 2.
double lipschitz_bound(const SigmoidalWarp& w, double grad_lipschitz, double fun_lipschitz);

}  // namespace warpopt
