#include "warpopt/objective.hpp"

#include <cmath>
#include <string>

namespace warpopt {

namespace {
std::atomic<long> g_violations{0};
}

long global_violation_count() { return g_violations.load(); }

Objective::Objective(BoundBox box, ValueFn value, GradientFn gradient, HessianFn hessian)
    : box_(std::move(box)),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      counters_(std::make_shared<Counters>()) {
  if (!value_ || !gradient_) throw MissingOracle("Objective: value and gradient oracles are required");
}

void Objective::require_feasible(const VectorXd& y, const char* oracle) const {
  detail::require_same_size(y.size(), dim(), oracle);
  if (!box_.contains(y) || !y.allFinite()) {
    counters_->violations.fetch_add(1);
    g_violations.fetch_add(1);
    throw UnrelaxableViolation(std::string(oracle) + ": query outside the feasible box");
  }
}

double Objective::value(const VectorXd& y) const {
  require_feasible(y, "Objective::value");
  counters_->values.fetch_add(1);
  return value_(y);
}

VectorXd Objective::gradient(const VectorXd& y) const {
  require_feasible(y, "Objective::gradient");
  counters_->gradients.fetch_add(1);
  return gradient_(y);
}

MatrixXd Objective::hessian(const VectorXd& y) const {
  if (!hessian_) throw MissingOracle("Objective::hessian: no Hessian oracle");
  require_feasible(y, "Objective::hessian");
  counters_->hessians.fetch_add(1);
  return hessian_(y);
}

double Objective::unit_value(const VectorXd& u) const { return value(affine_to_box(u, box_)); }

VectorXd Objective::unit_gradient(const VectorXd& u) const {
  return box_.width().cwiseProduct(gradient(affine_to_box(u, box_)));
}

MatrixXd Objective::unit_hessian(const VectorXd& u) const {
  const VectorXd w = box_.width();
  return w.asDiagonal() * hessian(affine_to_box(u, box_)) * w.asDiagonal();
}

Objective& Objective::set_lipschitz_grad(VectorXd per_coordinate) {
  detail::require_same_size(per_coordinate.size(), dim(), "set_lipschitz_grad");
  if ((per_coordinate.array() < 0.0).any()) throw InvalidArgument("Lipschitz constants must be >= 0");
  lipschitz_grad_ = std::move(per_coordinate);
  return *this;
}

Objective& Objective::set_lipschitz_fun(double l_hat) {
  if (!(l_hat >= 0.0)) throw InvalidArgument("Lipschitz constant must be >= 0");
  lipschitz_fun_ = l_hat;
  return *this;
}

std::optional<double> Objective::lipschitz_grad_aggregate() const {
  if (!lipschitz_grad_) return std::nullopt;
  return lipschitz_grad_->norm();
}

std::optional<double> Objective::unit_lipschitz_grad() const {
  if (!lipschitz_grad_) return std::nullopt;
  const VectorXd w = box_.width();
  // d_i (f o A) = w_i d_i f(A u), and A stretches distances by at most max w
  return (w.array() * lipschitz_grad_->array()).matrix().norm() * w.maxCoeff();
}

std::optional<double> Objective::unit_lipschitz_fun() const {
  if (!lipschitz_fun_) return std::nullopt;
  return *lipschitz_fun_ * box_.width().maxCoeff();
}

Objective Objective::clone() const {
  Objective copy = *this;
  copy.counters_ = std::make_shared<Counters>();
  return copy;
}

}  // namespace warpopt
