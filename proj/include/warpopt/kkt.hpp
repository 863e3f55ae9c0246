#pragma once

#include <vector>

#include <Eigen/Core>

#include "warpopt/warps.hpp"

namespace warpopt {

using Eigen::VectorXd;

/// Approximate KKT certificate for the unit cube.
///
/// Sign convention: lambda, mu <= 0 with stationarity residual
/// grad + lambda - mu, slackness residuals lambda * y and mu * (1 - y).
struct KKTReport {
  double epsilon = 0.0;
  VectorXd lambda;
  VectorXd mu;
  VectorXd stationarity_violation;
  VectorXd slackness_violation;
};

/// Smallest epsilon for which y (unit coordinates, 0 <= y <= 1) is
/// epsilon-stationary given grad = gradient of f at y.
///
/// Coordinates decouple, so each (lambda_i, mu_i) is chosen to minimise
/// max(|stationarity_i|, |slackness_i|) exactly. For g = grad_i > 0 that is
/// lambda_i = -g / (1 + y_i) with violation g y_i / (1 + y_i); for g < 0 it is
/// mu_i = g / (2 - y_i) with violation |g| (1 - y_i) / (2 - y_i).
KKTReport epsilon_stationarity(const VectorXd& y, const VectorXd& grad);

/// ||pi(y - grad) - y|| on the given box.
double projected_gradient_norm(const VectorXd& y, const VectorXd& grad, const BoundBox& box);

/// epsilon <= tau * ||grad_at_start||.
bool relative_kkt_satisfied(const KKTReport& report, const VectorXd& grad_at_start, double tau);

/// epsilon / ||grad_at_start||.
double relative_kkt_ratio(double epsilon, const VectorXd& grad_at_start);

/// Bound on |d_i f(y)| when the merit partial satisfies |d_i f_sigma(x)| <= delta:
/// delta / (sigma y (1 - y)).
double interior_stationarity_bound(double delta, double sigma, double y);

/// Bound on |d_i f(y) + lambda_i*| at a boundary-lying KKT coordinate:
/// L_i delta / (|d_i f(y)| sigma Delta_i), Delta_i = |1 - y_i - y_i*|.
double boundary_stationarity_bound(double delta, double sigma, double grad_lipschitz,
                                   double grad, double distance);

/// Indices whose distance to a bound is below rel_tol times the box width.
std::vector<int> active_set(const VectorXd& y, const BoundBox& box, double rel_tol = 1e-3);

}  // namespace warpopt
