#pragma once

#include <functional>
#include <random>

#include "warpopt/objective.hpp"

namespace testing {

using warpopt::BoundBox;
using warpopt::Objective;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Central difference of f at x, step h per coordinate.
inline VectorXd central_diff(const std::function<double(const VectorXd&)>& f, const VectorXd& x,
                             double h = 1e-6) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

// 0.5 (y - c)^T diag(h) (y - c) on the given box.
inline Objective diag_quadratic(const BoundBox& box, const VectorXd& h, const VectorXd& c) {
  return Objective(
      box, [=](const VectorXd& y) { return 0.5 * (y - c).cwiseProduct(h).dot(y - c); },
      [=](const VectorXd& y) -> VectorXd { return h.cwiseProduct(y - c); },
      [=](const VectorXd&) -> MatrixXd { return h.asDiagonal(); });
}

inline VectorXd uniform_vec(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace testing
