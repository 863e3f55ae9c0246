#include "warpopt/kkt.hpp"

#include <algorithm>
#include <cmath>

#include "warpopt/errors.hpp"

namespace warpopt {

KKTReport epsilon_stationarity(const VectorXd& y, const VectorXd& grad) {
  detail::require_same_size(grad.size(), y.size(), "epsilon_stationarity");
  if ((y.array() < 0.0).any() || (y.array() > 1.0).any() || !y.allFinite()) {
    throw InfeasibleInput("epsilon_stationarity: y is outside the unit cube");
  }
  const auto n = y.size();
  KKTReport r;
  r.lambda = VectorXd::Zero(n);
  r.mu = VectorXd::Zero(n);
  r.stationarity_violation = VectorXd::Zero(n);
  r.slackness_violation = VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double g = grad[i];
    if (g > 0.0) {
      r.lambda[i] = -g / (1.0 + y[i]);
    } else if (g < 0.0) {
      r.mu[i] = g / (2.0 - y[i]);
    }
    r.stationarity_violation[i] = std::abs(g + r.lambda[i] - r.mu[i]);
    r.slackness_violation[i] =
        std::max(std::abs(r.lambda[i] * y[i]), std::abs(r.mu[i] * (1.0 - y[i])));
  }
  r.epsilon = n == 0 ? 0.0
                     : std::max(r.stationarity_violation.maxCoeff(),
                                r.slackness_violation.maxCoeff());
  return r;
}

double projected_gradient_norm(const VectorXd& y, const VectorXd& grad, const BoundBox& box) {
  detail::require_same_size(y.size(), box.dim(), "projected_gradient_norm");
  detail::require_same_size(grad.size(), box.dim(), "projected_gradient_norm");
  if (!box.contains(y)) throw InfeasibleInput("projected_gradient_norm: y is outside the box");
  return (project_box(VectorXd(y - grad), box).projected - y).norm();
}

double relative_kkt_ratio(double epsilon, const VectorXd& grad_at_start) {
  const double scale = grad_at_start.norm();
  if (!(scale > 0.0)) {
    throw DegenerateNormalization("relative KKT: gradient at the starting point is zero");
  }
  return epsilon / scale;
}

bool relative_kkt_satisfied(const KKTReport& report, const VectorXd& grad_at_start, double tau) {
  const double scale = grad_at_start.norm();
  if (!(scale > 0.0)) {
    throw DegenerateNormalization("relative KKT: gradient at the starting point is zero");
  }
  return report.epsilon <= tau * scale;
}

double interior_stationarity_bound(double delta, double sigma, double y) {
  if (!(sigma > 0.0)) throw InvalidArgument("interior_stationarity_bound: sigma must be positive");
  if (!(y > 0.0 && y < 1.0)) throw InvalidArgument("interior_stationarity_bound: y must lie in (0, 1)");
  return delta / (sigma * y * (1.0 - y));
}

double boundary_stationarity_bound(double delta, double sigma, double grad_lipschitz, double grad,
                                   double distance) {
  if (!(sigma > 0.0)) throw InvalidArgument("boundary_stationarity_bound: sigma must be positive");
  if (!(std::abs(grad) > 0.0)) throw InvalidArgument("boundary_stationarity_bound: zero gradient");
  if (!(distance > 0.0)) throw InvalidArgument("boundary_stationarity_bound: zero distance");
  return grad_lipschitz * delta / (std::abs(grad) * sigma * distance);
}

std::vector<int> active_set(const VectorXd& y, const BoundBox& box, double rel_tol) {
  detail::require_same_size(y.size(), box.dim(), "active_set");
  std::vector<int> out;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double gap = std::min(y[i] - box.lower()[i], box.upper()[i] - y[i]);
    if (gap < rel_tol * (box.upper()[i] - box.lower()[i])) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace warpopt
