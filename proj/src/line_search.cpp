#include "warpopt/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace warpopt {

void LineSearchConfig::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
    throw InvalidArgument("line search: need 0 < c1 < c2 < 1");
  }
  if (!(0.0 < backtrack && backtrack < 1.0)) throw InvalidArgument("line search: backtrack in (0, 1)");
  if (max_steps < 1) throw InvalidArgument("line search: max_steps >= 1");
}

namespace {

bool finite_point(const MeritPoint& p) {
  return std::isfinite(p.value) && (!p.has_gradient() || p.gradient.allFinite());
}

void remember_best(LineSearchResult& r, const MeritPoint& p, double alpha) {
  if (!r.has_point || p.value < r.point.value) {
    r.point = p;
    r.step = alpha;
    r.has_point = true;
  }
}

// Minimiser of the cubic interpolating (a, fa, da) and (b, fb, db); NaN when
// the cubic has no usable minimiser.
double cubic_min(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  return b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
}

}  // namespace

LineSearchResult armijo_backtracking(const StepEvaluator& eval, double f0, double dphi0,
                                     double alpha0, const LineSearchConfig& cfg) {
  LineSearchResult r;
  double alpha = alpha0;
  for (int i = 0; i < cfg.max_steps; ++i) {
    MeritPoint p = eval(alpha, false);
    ++r.trials;
    if (std::isfinite(p.value) && p.value <= f0 + cfg.c1 * alpha * dphi0) {
      r.ok = true;
      r.step = alpha;
      r.point = std::move(p);
      r.has_point = true;
      return r;
    }
    alpha *= cfg.backtrack;
  }
  return r;
}

LineSearchResult strong_wolfe(const StepEvaluator& eval, const VectorXd& direction, double f0,
                              double dphi0, double alpha0, const LineSearchConfig& cfg) {
  LineSearchResult r;
  const double armijo_slope = cfg.c1 * dphi0;
  const double curvature = -cfg.c2 * dphi0;

  double lo = 0.0, f_lo = f0, d_lo = dphi0;
  double hi = 0.0, f_hi = 0.0, d_hi = 0.0;
  bool bracketed = false;
  double alpha = alpha0;

  auto accept = [&](MeritPoint p, double a) {
    r.ok = true;
    r.step = a;
    r.point = std::move(p);
    r.has_point = true;
    return r;
  };

  // bracketing phase
  while (r.trials < cfg.max_steps) {
    MeritPoint p = eval(alpha, true);
    ++r.trials;
    if (!finite_point(p)) {
      hi = alpha;
      f_hi = std::numeric_limits<double>::infinity();
      d_hi = std::numeric_limits<double>::quiet_NaN();
      bracketed = true;
      break;
    }
    const double d = p.gradient.dot(direction);
    if (p.value > f0 + armijo_slope * alpha || (r.trials > 1 && p.value >= f_lo)) {
      hi = alpha, f_hi = p.value, d_hi = d;
      bracketed = true;
      break;
    }
    remember_best(r, p, alpha);
    if (std::abs(d) <= curvature) return accept(std::move(p), alpha);
    if (d >= 0.0) {
      hi = lo, f_hi = f_lo, d_hi = d_lo;
      lo = alpha, f_lo = p.value, d_lo = d;
      bracketed = true;
      break;
    }
    lo = alpha, f_lo = p.value, d_lo = d;
    alpha *= 2.0;
  }
  if (!bracketed) return r;

  // zoom phase
  while (r.trials < cfg.max_steps) {
    const double width = hi - lo;
    double trial = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(f_hi) && std::isfinite(d_hi)) trial = cubic_min(lo, f_lo, d_lo, hi, f_hi, d_hi);
    const double a_min = std::min(lo, hi) + 0.1 * std::abs(width);
    const double a_max = std::max(lo, hi) - 0.1 * std::abs(width);
    if (!std::isfinite(trial) || trial < a_min || trial > a_max) trial = 0.5 * (lo + hi);
    if (std::abs(width) <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo))) break;

    MeritPoint p = eval(trial, true);
    ++r.trials;
    if (!finite_point(p)) {
      hi = trial, f_hi = std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = p.gradient.dot(direction);
    if (p.value > f0 + armijo_slope * trial || p.value >= f_lo) {
      hi = trial, f_hi = p.value, d_hi = d;
      continue;
    }
    remember_best(r, p, trial);
    if (std::abs(d) <= curvature) return accept(std::move(p), trial);
    if (d * (hi - lo) >= 0.0) {
      hi = lo, f_hi = f_lo, d_hi = d_lo;
    }
    lo = trial, f_lo = p.value, d_lo = d;
  }
  return r;
}

LineSearchResult weak_wolfe(const StepEvaluator& eval, const VectorXd& direction, double f0,
                            double dphi0, double alpha0, const LineSearchConfig& cfg) {
  LineSearchResult r;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double alpha = alpha0;
  while (r.trials < cfg.max_steps) {
    MeritPoint p = eval(alpha, true);
    ++r.trials;
    if (!finite_point(p) || p.value > f0 + cfg.c1 * alpha * dphi0) {
      hi = alpha;
    } else {
      remember_best(r, p, alpha);
      if (p.gradient.dot(direction) < cfg.c2 * dphi0) {
        lo = alpha;
      } else {
        r.ok = true;
        r.step = alpha;
        r.point = std::move(p);
        r.has_point = true;
        return r;
      }
    }
    alpha = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lo;
  }
  return r;
}

}  // namespace warpopt
