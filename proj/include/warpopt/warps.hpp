#pragma once

// Domain warpings R^n -> Omega and their companion maps.
//
// Everything here is a pure function of its arguments. The maps accept any
// Eigen vector expression and return a dense column vector of the same scalar.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "warpopt/errors.hpp"

namespace warpopt {

/// Sigmoid outputs are clamped into [kFeasEps, 1 - kFeasEps].
inline constexpr double kFeasEps = 1e-15;
/// Largest admissible warp parameter.
inline constexpr double kSigmaCap = 1e12;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Finite box [lower, upper] with lower < upper componentwise.
template <typename Scalar>
class BasicBoundBox {
 public:
  BasicBoundBox() = default;

  BasicBoundBox(Vec<Scalar> lower, Vec<Scalar> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    detail::require_same_size(upper_.size(), lower_.size(), "BoundBox upper");
    if (lower_.size() == 0) throw InvalidArgument("BoundBox: dimension must be positive");
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
      if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
        throw InvalidArgument("BoundBox: bounds must be finite");
      }
      if (!(lower_[i] < upper_[i])) {
        throw InvalidArgument("BoundBox: lower[" + std::to_string(i) +
                              "] must be strictly below upper");
      }
    }
  }

  static BasicBoundBox unit(Eigen::Index n) {
    return BasicBoundBox(Vec<Scalar>::Zero(n), Vec<Scalar>::Ones(n));
  }

  static BasicBoundBox uniform(Eigen::Index n, Scalar lo, Scalar hi) {
    return BasicBoundBox(Vec<Scalar>::Constant(n, lo), Vec<Scalar>::Constant(n, hi));
  }

  Eigen::Index dim() const { return lower_.size(); }
  const Vec<Scalar>& lower() const { return lower_; }
  const Vec<Scalar>& upper() const { return upper_; }
  Vec<Scalar> width() const { return upper_ - lower_; }

  bool is_unit() const {
    return (lower_.array() == Scalar(0)).all() && (upper_.array() == Scalar(1)).all();
  }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& y) const {
    return y.size() == dim() && (y.array() >= lower_.array()).all() &&
           (y.array() <= upper_.array()).all();
  }

 private:
  Vec<Scalar> lower_;
  Vec<Scalar> upper_;
};

/// Per-coordinate steepness sigma of the sigmoidal warping, 0 < sigma <= kSigmaCap.
template <typename Scalar>
class BasicSigmoidalWarp {
 public:
  BasicSigmoidalWarp() = default;

  explicit BasicSigmoidalWarp(Vec<Scalar> sigma) : sigma_(std::move(sigma)) {
    if (sigma_.size() == 0) throw InvalidArgument("SigmoidalWarp: empty sigma");
    for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
      if (!(sigma_[i] > Scalar(0)) || !std::isfinite(sigma_[i])) {
        throw InvalidArgument("SigmoidalWarp: sigma must be positive and finite");
      }
      if (sigma_[i] > Scalar(kSigmaCap)) {
        throw InvalidArgument("SigmoidalWarp: sigma exceeds the cap");
      }
    }
  }

  static BasicSigmoidalWarp uniform(Eigen::Index n, Scalar s) {
    return BasicSigmoidalWarp(Vec<Scalar>::Constant(n, s));
  }

  Eigen::Index dim() const { return sigma_.size(); }
  const Vec<Scalar>& sigma() const { return sigma_; }
  Scalar max() const { return sigma_.maxCoeff(); }
  Scalar min() const { return sigma_.minCoeff(); }

 private:
  Vec<Scalar> sigma_;
};

using BoundBox = BasicBoundBox<double>;
using SigmoidalWarp = BasicSigmoidalWarp<double>;

namespace detail {

// 1 / (1 + exp(-z)) without ever exponentiating a large positive argument.
template <typename Scalar>
Scalar logistic(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
Scalar clamp_open_unit(Scalar y) {
  return std::clamp(y, Scalar(kFeasEps), Scalar(1) - Scalar(kFeasEps));
}

}  // namespace detail

/// y_i = 1 / (1 + exp(-sigma_i x_i)), clamped strictly inside (0, 1).
template <typename Derived>
Vec<typename Derived::Scalar> sigmoid_forward(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(x.size(), w.dim(), "sigmoid_forward");
  Vec<Scalar> y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = detail::clamp_open_unit(detail::logistic(w.sigma()[i] * x[i]));
  }
  return y;
}

/// Complement 1 - S(x), computed as S(-x) so it keeps full relative accuracy
/// when S(x) is close to 1.
template <typename Derived>
Vec<typename Derived::Scalar> sigmoid_complement(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(x.size(), w.dim(), "sigmoid_complement");
  Vec<Scalar> c(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    c[i] = detail::clamp_open_unit(detail::logistic(-w.sigma()[i] * x[i]));
  }
  return c;
}

/// x_i = log(y_i / (1 - y_i)) / sigma_i for y strictly inside (0, 1).
template <typename Derived>
Vec<typename Derived::Scalar> sigmoid_inverse(
    const Eigen::MatrixBase<Derived>& y,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(y.size(), w.dim(), "sigmoid_inverse");
  Vec<Scalar> x(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Scalar yi = y[i];
    if (!(yi > Scalar(0) && yi < Scalar(1))) {
      throw InfeasibleInput("sigmoid_inverse: y[" + std::to_string(i) +
                            "] is not strictly inside (0, 1)");
    }
    x[i] = (std::log(yi) - std::log1p(-yi)) / w.sigma()[i];
  }
  return x;
}

/// Diagonal of the warp Jacobian, sigma_i y_i (1 - y_i).
template <typename Derived>
Vec<typename Derived::Scalar> sigmoid_jacobian_diag(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  const auto y = sigmoid_forward(x, w);
  const auto c = sigmoid_complement(x, w);
  return (w.sigma().array() * y.array() * c.array()).matrix();
}

/// True where the unclamped sigmoid falls outside [kFeasEps, 1 - kFeasEps];
/// there sigmoid_forward is locally constant.
template <typename Derived>
Eigen::Array<bool, Eigen::Dynamic, 1> sigmoid_saturated(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(x.size(), w.dim(), "sigmoid_saturated");
  Eigen::Array<bool, Eigen::Dynamic, 1> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar lo = detail::logistic(-std::abs(w.sigma()[i] * x[i]));
    out[i] = lo < Scalar(kFeasEps);
  }
  return out;
}

/// Diagonal of the second derivative, sigma_i^2 y_i (1 - y_i)(1 - 2 y_i).
template <typename Derived>
Vec<typename Derived::Scalar> sigmoid_second_deriv_diag(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  const auto y = sigmoid_forward(x, w);
  const auto c = sigmoid_complement(x, w);
  // 1 - 2y = c - y, exact zero at the midpoint
  return (w.sigma().array().square() * y.array() * c.array() * (c.array() - y.array()))
      .matrix();
}

/// Bound on ||S^{-1}(y)||_inf over [a, 1 - a]^n for unit sigma: log((1 - a) / a).
inline double inverse_norm_bound(double a) {
  if (!(a > 0.0 && a < 0.5)) {
    throw InvalidArgument("inverse_norm_bound: a must lie in (0, 1/2)");
  }
  return std::log1p(-a) - std::log(a);
}

template <typename Scalar>
struct Projection {
  Vec<Scalar> projected;
  Scalar distance;
};

/// Euclidean projection onto the box together with the distance moved.
template <typename Derived>
Projection<typename Derived::Scalar> project_box(
    const Eigen::MatrixBase<Derived>& x,
    const BasicBoundBox<typename Derived::Scalar>& box) {
  detail::require_same_size(x.size(), box.dim(), "project_box");
  Vec<typename Derived::Scalar> p = x.cwiseMax(box.lower()).cwiseMin(box.upper());
  const auto d = (x - p).norm();
  return {std::move(p), d};
}

/// Triangle wave of period two: identity on [0, 1], even, 2-periodic.
template <typename Derived>
Vec<typename Derived::Scalar> reflect(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Vec<Scalar> r(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar h = x[i] / Scalar(2);
    r[i] = Scalar(2) * std::abs(h - std::floor(h + Scalar(0.5)));
  }
  return r;
}

/// Slope of the triangle wave (+1 or -1). At kinks the right-hand slope is returned.
template <typename Derived>
Vec<typename Derived::Scalar> reflect_slope(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Vec<Scalar> s(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar h = x[i] / Scalar(2);
    s[i] = (h - std::floor(h + Scalar(0.5))) >= Scalar(0) ? Scalar(1) : Scalar(-1);
  }
  return s;
}

/// A(y) = y (u - l) + l, mapping the closed unit cube onto the box.
template <typename Derived>
Vec<typename Derived::Scalar> affine_to_box(
    const Eigen::MatrixBase<Derived>& y_unit,
    const BasicBoundBox<typename Derived::Scalar>& box) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(y_unit.size(), box.dim(), "affine_to_box");
  if ((y_unit.array() < Scalar(0)).any() || (y_unit.array() > Scalar(1)).any()) {
    throw InfeasibleInput("affine_to_box: point is outside the unit cube");
  }
  Vec<Scalar> z = (y_unit.array() * box.width().array() + box.lower().array()).matrix();
  // rounding in the affine map must never leave the box
  return z.cwiseMax(box.lower()).cwiseMin(box.upper());
}

/// Inverse of affine_to_box.
template <typename Derived>
Vec<typename Derived::Scalar> affine_from_box(
    const Eigen::MatrixBase<Derived>& z,
    const BasicBoundBox<typename Derived::Scalar>& box) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(z.size(), box.dim(), "affine_from_box");
  Vec<Scalar> y = ((z - box.lower()).array() / box.width().array()).matrix();
  return y.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

namespace detail {
// |sigma x| beyond which exp-based warps saturate; e^{-34} is about 1.7e-15.
inline constexpr double kExpArgCap = 34.0;
inline constexpr double kExpOverflowCap = 700.0;
}  // namespace detail

/// Warping onto the open nonnegative orthant, exp(sigma x).
template <typename Derived>
Vec<typename Derived::Scalar> exp_warp(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(x.size(), w.dim(), "exp_warp");
  Vec<Scalar> y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar z = std::clamp(w.sigma()[i] * x[i], Scalar(-detail::kExpOverflowCap),
                                Scalar(detail::kExpOverflowCap));
    y[i] = std::exp(z);
  }
  return y;
}

/// Warping onto the open simplex {y > 0, a^T y < b}:
/// b exp(sigma x) / (1 + a^T exp(sigma x)).
template <typename Derived, typename DerivedA>
Vec<typename Derived::Scalar> simplex_warp(
    const Eigen::MatrixBase<Derived>& x,
    const BasicSigmoidalWarp<typename Derived::Scalar>& w,
    const Eigen::MatrixBase<DerivedA>& a, typename Derived::Scalar b) {
  using Scalar = typename Derived::Scalar;
  detail::require_same_size(x.size(), w.dim(), "simplex_warp");
  detail::require_same_size(a.size(), w.dim(), "simplex_warp weights");
  if (!(b > Scalar(0)) || !(a.array() > Scalar(0)).all()) {
    throw InvalidArgument("simplex_warp: a and b must be positive");
  }
  Vec<Scalar> z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    z[i] = std::clamp(w.sigma()[i] * x[i], Scalar(-detail::kExpArgCap),
                      Scalar(detail::kExpArgCap));
  }
  // scale by exp(-m) so no exponential exceeds one
  const Scalar m = std::max(Scalar(0), z.maxCoeff());
  const Vec<Scalar> e = (z.array() - m).exp().matrix();
  const Scalar denom = std::exp(-m) + a.dot(e);
  return (b / denom) * e;
}

}  // namespace warpopt
