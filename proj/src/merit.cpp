#include "warpopt/merit.hpp"

namespace warpopt {

const char* to_string(WarpKind kind) {
  switch (kind) {
    case WarpKind::Sigmoidal: return "sigmoidal";
    case WarpKind::ProjectionPenalty: return "projection-penalty";
    case WarpKind::Reflection: return "reflection";
  }
  return "unknown";
}

MeritFunction::MeritFunction(WarpKind kind, Objective objective, SigmoidalWarp warp)
    : kind_(kind), objective_(std::move(objective)), warp_(std::move(warp)) {}

MeritFunction MeritFunction::sigmoidal(Objective objective, SigmoidalWarp warp) {
  detail::require_same_size(warp.dim(), objective.dim(), "MeritFunction::sigmoidal");
  return MeritFunction(WarpKind::Sigmoidal, std::move(objective), std::move(warp));
}

MeritFunction MeritFunction::projection_penalty(Objective objective) {
  const auto n = objective.dim();
  return MeritFunction(WarpKind::ProjectionPenalty, std::move(objective),
                       SigmoidalWarp::uniform(n, 1.0));
}

MeritFunction MeritFunction::reflection(Objective objective) {
  const auto n = objective.dim();
  return MeritFunction(WarpKind::Reflection, std::move(objective), SigmoidalWarp::uniform(n, 1.0));
}

MeritFunction MeritFunction::with_warp(SigmoidalWarp warp) const {
  if (kind_ != WarpKind::Sigmoidal) throw InvalidArgument("with_warp: not a sigmoidal merit");
  return sigmoidal(objective_, std::move(warp));
}

VectorXd MeritFunction::to_unit(const VectorXd& x) const {
  detail::require_same_size(x.size(), dim(), "MeritFunction::to_unit");
  switch (kind_) {
    case WarpKind::Sigmoidal: return sigmoid_forward(x, warp_);
    case WarpKind::ProjectionPenalty: return x.cwiseMax(0.0).cwiseMin(1.0);
    case WarpKind::Reflection: return reflect(x);
  }
  return {};
}

VectorXd MeritFunction::to_box(const VectorXd& x) const {
  return affine_to_box(to_unit(x), objective_.box());
}

VectorXd MeritFunction::from_unit(const VectorXd& y) const {
  if (kind_ == WarpKind::Sigmoidal) return sigmoid_inverse(y, warp_);
  detail::require_same_size(y.size(), dim(), "MeritFunction::from_unit");
  return y;
}

VectorXd MeritFunction::sigmoidal_gradient_from(const VectorXd& x,
                                                const VectorXd& objective_gradient) const {
  if (kind_ != WarpKind::Sigmoidal) throw InvalidArgument("sigmoidal_gradient_from: wrong kind");
  VectorXd g = sigmoidal_slope(x).cwiseProduct(objective_gradient);
  // On the clamp edge the merit is flat outward; drop components whose
  // descent step would only push further out.
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] * x[i] < 0.0 &&
        detail::logistic(-std::abs(warp_.sigma()[i] * x[i])) <= 4.0 * kFeasEps) {
      g[i] = 0.0;
    }
  }
  return g;
}

VectorXd MeritFunction::sigmoidal_slope(const VectorXd& x) const {
  if (kind_ != WarpKind::Sigmoidal) throw InvalidArgument("sigmoidal_slope: wrong kind");
  VectorXd j = sigmoid_jacobian_diag(x, warp_);
  const auto flat = sigmoid_saturated(x, warp_);
  for (Eigen::Index i = 0; i < j.size(); ++i) {
    if (flat[i]) j[i] = 0.0;
  }
  return j;
}

PpmRegion MeritFunction::classify(const VectorXd& x) const {
  detail::require_same_size(x.size(), dim(), "MeritFunction::classify");
  bool boundary = false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < -kBoundaryTol || x[i] > 1.0 + kBoundaryTol) return PpmRegion::Exterior;
    if (x[i] <= kBoundaryTol || x[i] >= 1.0 - kBoundaryTol) boundary = true;
  }
  return boundary ? PpmRegion::Boundary : PpmRegion::Interior;
}

VectorXd MeritFunction::ppm_direction_impl(const VectorXd& x, const VectorXd& pi, double dist,
                                           double* f_out, VectorXd* g_out) const {
  const Objective& f = objective_;
  VectorXd g = f.unit_gradient(pi);
  if (f_out) *f_out = f.unit_value(pi);
  VectorXd d;
  switch (classify(x)) {
    case PpmRegion::Interior:
      d = g;
      break;
    case PpmRegion::Boundary:
      // negative projected gradient
      d = x - (x - g).cwiseMax(0.0).cwiseMin(1.0);
      break;
    case PpmRegion::Exterior: {
      // generalized Jacobian of pi keeps only the coordinates strictly inside
      d = VectorXd::Zero(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] > kBoundaryTol && x[i] < 1.0 - kBoundaryTol) d[i] = g[i];
      }
      d += (x - pi) / dist;
      break;
    }
  }
  if (g_out) *g_out = std::move(g);
  return d;
}

VectorXd MeritFunction::ppm_direction(const VectorXd& x) const {
  if (kind_ != WarpKind::ProjectionPenalty) {
    throw InvalidArgument("ppm_direction: merit is not projection-penalty");
  }
  detail::require_same_size(x.size(), dim(), "ppm_direction");
  const auto [pi, dist] = project_box(x, BoundBox::unit(dim()));
  return ppm_direction_impl(x, pi, dist, nullptr, nullptr);
}

MeritPoint MeritFunction::evaluate(const VectorXd& x, bool with_gradient) const {
  detail::require_same_size(x.size(), dim(), "MeritFunction::evaluate");
  MeritPoint p;
  p.x = x;
  switch (kind_) {
    case WarpKind::Sigmoidal: {
      p.y = sigmoid_forward(x, warp_);
      p.objective_value = objective_.unit_value(p.y);
      p.value = p.objective_value;
      if (with_gradient) {
        p.objective_gradient = objective_.unit_gradient(p.y);
        p.gradient = sigmoidal_gradient_from(x, p.objective_gradient);
      }
      break;
    }
    case WarpKind::Reflection: {
      p.y = reflect(x);
      p.objective_value = objective_.unit_value(p.y);
      p.value = p.objective_value;
      if (with_gradient) {
        p.objective_gradient = objective_.unit_gradient(p.y);
        p.gradient = reflect_slope(x).cwiseProduct(p.objective_gradient);
      }
      break;
    }
    case WarpKind::ProjectionPenalty: {
      auto [pi, dist] = project_box(x, BoundBox::unit(dim()));
      p.y = std::move(pi);
      if (with_gradient) {
        p.gradient = ppm_direction_impl(x, p.y, dist, &p.objective_value, &p.objective_gradient);
      } else {
        p.objective_value = objective_.unit_value(p.y);
      }
      p.value = p.objective_value + dist;
      break;
    }
  }
  return p;
}

void MeritFunction::complete_gradient(MeritPoint& p) const {
  if (p.has_gradient()) return;
  switch (kind_) {
    case WarpKind::Sigmoidal:
      p.objective_gradient = objective_.unit_gradient(p.y);
      p.gradient = sigmoidal_gradient_from(p.x, p.objective_gradient);
      break;
    case WarpKind::Reflection:
      p.objective_gradient = objective_.unit_gradient(p.y);
      p.gradient = reflect_slope(p.x).cwiseProduct(p.objective_gradient);
      break;
    case WarpKind::ProjectionPenalty: {
      const double dist = (p.x - p.y).norm();
      p.gradient = ppm_direction_impl(p.x, p.y, dist, nullptr, &p.objective_gradient);
      break;
    }
  }
}

double MeritFunction::value(const VectorXd& x) const { return evaluate(x, false).value; }

VectorXd MeritFunction::gradient(const VectorXd& x) const {
  detail::require_same_size(x.size(), dim(), "MeritFunction::gradient");
  if (kind_ == WarpKind::ProjectionPenalty) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) <= kBoundaryTol || std::abs(x[i] - 1.0) <= kBoundaryTol) {
        throw NonsmoothPoint("projection-penalty merit is not differentiable here; use ppm_direction");
      }
    }
  }
  if (kind_ == WarpKind::Reflection) {
    const VectorXd r = reflect(x);
    if ((r.array() <= kBoundaryTol).any() || (r.array() >= 1.0 - kBoundaryTol).any()) {
      throw NonsmoothPoint("reflection merit has a kink here");
    }
  }
  return evaluate(x, true).gradient;
}

MatrixXd MeritFunction::hessian(const VectorXd& x) const {
  if (kind_ != WarpKind::Sigmoidal) throw InvalidArgument("hessian: sigmoidal merit only");
  if (!objective_.has_hessian()) throw MissingOracle("hessian: objective has no Hessian oracle");
  const VectorXd y = sigmoid_forward(x, warp_);
  const VectorXd g = objective_.unit_gradient(y);
  const VectorXd j = sigmoidal_slope(x);
  VectorXd h = sigmoid_second_deriv_diag(x, warp_);
  h = (j.array() > 0.0).select(h, 0.0);
  MatrixXd out = j.asDiagonal() * objective_.unit_hessian(y) * j.asDiagonal();
  out.diagonal() += h.cwiseProduct(g);
  return out;
}

double lipschitz_bound(const SigmoidalWarp& w, double grad_lipschitz, double fun_lipschitz) {
  if (grad_lipschitz < 0.0 || fun_lipschitz < 0.0) {
    throw InvalidArgument("lipschitz_bound: constants must be nonnegative");
  }
  const double s = w.max();
  return 0.5 * (s * s * fun_lipschitz + s * grad_lipschitz);
}

}  // namespace warpopt
