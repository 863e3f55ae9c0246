#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>

#include <Eigen/Core>

#include "warpopt/warps.hpp"

namespace warpopt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Objective f over a box whose bounds are unrelaxable: the oracles refuse any
/// query outside the box.
///
/// Copies share evaluation counters; clone() hands out an independent set.
/// Every oracle call increments exactly one counter. A refused query raises
/// UnrelaxableViolation and increments both this objective's violation
/// counter and the process-wide one returned by global_violation_count().
class Objective {
 public:
  using ValueFn = std::function<double(const VectorXd&)>;
  using GradientFn = std::function<VectorXd(const VectorXd&)>;
  using HessianFn = std::function<MatrixXd(const VectorXd&)>;

  Objective(BoundBox box, ValueFn value, GradientFn gradient, HessianFn hessian = {});

  Eigen::Index dim() const { return box_.dim(); }
  const BoundBox& box() const { return box_; }

  double value(const VectorXd& y) const;
  VectorXd gradient(const VectorXd& y) const;
  MatrixXd hessian(const VectorXd& y) const;
  bool has_hessian() const { return static_cast<bool>(hessian_); }

  // f(A(u)) and its derivatives with respect to the unit-cube variable u.
  double unit_value(const VectorXd& u) const;
  VectorXd unit_gradient(const VectorXd& u) const;
  MatrixXd unit_hessian(const VectorXd& u) const;

  /// Per-coordinate Lipschitz constants L_i of the partial derivatives.
  Objective& set_lipschitz_grad(VectorXd per_coordinate);
  /// Lipschitz constant of f itself over the box.
  Objective& set_lipschitz_fun(double l_hat);

  const std::optional<VectorXd>& lipschitz_grad() const { return lipschitz_grad_; }
  const std::optional<double>& lipschitz_fun() const { return lipschitz_fun_; }
  /// sqrt(sum L_i^2).
  std::optional<double> lipschitz_grad_aggregate() const;

  /// Constants of f(A(.)) on the unit cube, derived from the box widths.
  std::optional<double> unit_lipschitz_grad() const;
  std::optional<double> unit_lipschitz_fun() const;

  long eval_count() const { return counters_->values.load(); }
  long grad_count() const { return counters_->gradients.load(); }
  long hess_count() const { return counters_->hessians.load(); }
  long violation_count() const { return counters_->violations.load(); }

  Objective clone() const;

 private:
  struct Counters {
    std::atomic<long> values{0};
    std::atomic<long> gradients{0};
    std::atomic<long> hessians{0};
    std::atomic<long> violations{0};
  };

  void require_feasible(const VectorXd& y, const char* oracle) const;

  BoundBox box_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::optional<VectorXd> lipschitz_grad_;
  std::optional<double> lipschitz_fun_;
  std::shared_ptr<Counters> counters_;
};

/// Infeasible queries refused by any objective in this process.
long global_violation_count();

}  // namespace warpopt
