#include "warpopt/problems.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace warpopt {

char type_code(ProblemType type) {
  switch (type) {
    case ProblemType::Quadratic: return 'Q';
    case ProblemType::SumOfSquares: return 'S';
    case ProblemType::Other: return 'O';
  }
  return '?';
}

Problem Problem::clone() const {
  Problem p = *this;
  p.objective = objective.clone();
  return p;
}

VectorXd condition_start(const VectorXd& y, const BoundBox& box, double margin) {
  detail::require_same_size(y.size(), box.dim(), "condition_start");
  if (!(margin > 0.0 && margin < 0.5)) throw InvalidArgument("condition_start: margin in (0, 1/2)");
  VectorXd out = y;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double w = box.upper()[i] - box.lower()[i];
    if (y[i] <= box.lower()[i]) out[i] = box.lower()[i] + margin * w;
    else if (y[i] >= box.upper()[i]) out[i] = box.upper()[i] - margin * w;
  }
  return out;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Multipliers of f(A(.)) at a known optimum from its unit-coordinate gradient.
void fill_multipliers(KnownOptimum& opt, const BoundBox& box, const VectorXd& grad_box) {
  const VectorXd g = box.width().cwiseProduct(grad_box);
  const Eigen::Index n = g.size();
  opt.lambda = VectorXd::Zero(n);
  opt.mu = VectorXd::Zero(n);
  opt.active.clear();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (opt.y[i] == box.lower()[i]) {
      opt.lambda[i] = -g[i];
      opt.active.push_back(static_cast<int>(i));
    } else if (opt.y[i] == box.upper()[i]) {
      opt.mu[i] = g[i];
      opt.active.push_back(static_cast<int>(i));
    }
  }
}

VectorXd log_spaced(Eigen::Index n, double lo, double hi) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = lo * std::pow(hi / lo, t);
  }
  return v;
}

Problem rosenbrock() {
  const BoundBox box = BoundBox::uniform(2, -2.0, 2.0);
  auto value = [](const VectorXd& y) {
    return 100.0 * std::pow(y[1] - y[0] * y[0], 2) + std::pow(1.0 - y[0], 2);
  };
  auto gradient = [](const VectorXd& y) {
    VectorXd g(2);
    g[0] = -400.0 * y[0] * (y[1] - y[0] * y[0]) - 2.0 * (1.0 - y[0]);
    g[1] = 200.0 * (y[1] - y[0] * y[0]);
    return g;
  };
  auto hessian = [](const VectorXd& y) {
    MatrixXd h(2, 2);
    h << 1200.0 * y[0] * y[0] - 400.0 * y[1] + 2.0, -400.0 * y[0], -400.0 * y[0], 200.0;
    return h;
  };
  Problem p{"rosenbrock_2", ProblemType::SumOfSquares, Objective(box, value, gradient, hessian),
            condition_start((VectorXd(2) << -1.2, 1.0).finished(), box), std::nullopt};
  KnownOptimum opt;
  opt.y = VectorXd::Ones(2);
  opt.f = 0.0;
  fill_multipliers(opt, box, VectorXd::Zero(2));
  p.optimum = opt;
  return p;
}

Problem cosine(Eigen::Index n) {
  const BoundBox box = BoundBox::unit(n);
  VectorXd c(n), start(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c[i] = 0.35 + 0.3 * static_cast<double>(i) / static_cast<double>(n - 1);
    start[i] = c[i] + (i % 2 == 0 ? 0.3 : -0.3);
  }
  auto value = [c](const VectorXd& y) { return -((kTwoPi * (y - c)).array().cos().sum()); };
  auto gradient = [c](const VectorXd& y) -> VectorXd {
    return kTwoPi * (kTwoPi * (y - c)).array().sin().matrix();
  };
  auto hessian = [c](const VectorXd& y) -> MatrixXd {
    return (kTwoPi * kTwoPi * (kTwoPi * (y - c)).array().cos()).matrix().asDiagonal();
  };
  Objective obj(box, value, gradient, hessian);
  obj.set_lipschitz_grad(VectorXd::Constant(n, kTwoPi * kTwoPi));
  obj.set_lipschitz_fun(kTwoPi * std::sqrt(static_cast<double>(n)));
  Problem p{"cosine_" + std::to_string(n), ProblemType::Other, std::move(obj),
            condition_start(start, box), std::nullopt};
  KnownOptimum opt;
  opt.y = c;
  opt.f = -static_cast<double>(n);
  fill_multipliers(opt, box, VectorXd::Zero(n));
  p.optimum = opt;
  return p;
}

Problem exp_least_squares() {
  const Eigen::Index n = 6;
  const BoundBox box = BoundBox::unit(n);
  VectorXd c(n);
  c << 1.5, 2.0, 3.5, 4.0, 1.2, 2.5;
  auto residual = [c](const VectorXd& y) -> VectorXd { return y.array().exp().matrix() - c; };
  auto value = [residual](const VectorXd& y) { return 0.5 * residual(y).squaredNorm(); };
  auto gradient = [residual](const VectorXd& y) -> VectorXd {
    return residual(y).cwiseProduct(y.array().exp().matrix());
  };
  auto hessian = [c](const VectorXd& y) -> MatrixXd {
    const VectorXd e = y.array().exp().matrix();
    return (2.0 * e.cwiseProduct(e) - c.cwiseProduct(e)).asDiagonal();
  };
  Problem p{"exp_lsq_6", ProblemType::SumOfSquares, Objective(box, value, gradient, hessian),
            condition_start(VectorXd::Zero(n), box), std::nullopt};
  KnownOptimum opt;
  opt.y = c.array().log().matrix().cwiseMax(0.0).cwiseMin(1.0);
  opt.f = value(opt.y);
  fill_multipliers(opt, box, gradient(opt.y));
  p.optimum = opt;
  return p;
}

Problem coupled_quadratic() {
  const Eigen::Index n = 4;
  const BoundBox box = BoundBox::unit(n);
  MatrixXd q = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i, i) = 2.5;
    if (i + 1 < n) q(i, i + 1) = q(i + 1, i) = -1.0;
  }
  VectorXd c(n);
  c << 0.3, 0.6, 0.4, 0.7;
  auto value = [q, c](const VectorXd& y) { return 0.5 * (y - c).dot(q * (y - c)); };
  auto gradient = [q, c](const VectorXd& y) -> VectorXd { return q * (y - c); };
  auto hessian = [q](const VectorXd&) -> MatrixXd { return q; };
  Objective obj(box, value, gradient, hessian);
  obj.set_lipschitz_grad(q.rowwise().norm());
  // ||Q|| <= max row sum; ||y - c|| over the cube at most its farthest corner
  const double far = c.cwiseMax(VectorXd::Ones(n) - c).norm();
  obj.set_lipschitz_fun(q.cwiseAbs().rowwise().sum().maxCoeff() * far);
  Problem p{"coupled_quad_4", ProblemType::Quadratic, std::move(obj),
            condition_start(VectorXd::Ones(n), box), std::nullopt};
  KnownOptimum opt;
  opt.y = c;
  opt.f = 0.0;
  fill_multipliers(opt, box, VectorXd::Zero(n));
  p.optimum = opt;
  return p;
}

}  // namespace

Problem separable_quadratic(std::string name, BoundBox box, VectorXd h, VectorXd c,
                            VectorXd start_raw) {
  const Eigen::Index n = box.dim();
  detail::require_same_size(h.size(), n, "separable_quadratic h");
  detail::require_same_size(c.size(), n, "separable_quadratic c");
  if (!(h.array() > 0.0).all()) throw InvalidArgument("separable_quadratic: h must be positive");
  auto value = [h, c](const VectorXd& y) { return 0.5 * (y - c).cwiseAbs2().dot(h); };
  auto gradient = [h, c](const VectorXd& y) -> VectorXd { return h.cwiseProduct(y - c); };
  auto hessian = [h](const VectorXd&) -> MatrixXd { return h.asDiagonal(); };
  Objective obj(box, value, gradient, hessian);
  obj.set_lipschitz_grad(h);
  const VectorXd reach = (box.lower() - c).cwiseAbs().cwiseMax((box.upper() - c).cwiseAbs());
  obj.set_lipschitz_fun(h.cwiseProduct(reach).norm());

  KnownOptimum opt;
  opt.y = c.cwiseMax(box.lower()).cwiseMin(box.upper());
  opt.f = value(opt.y);
  fill_multipliers(opt, box, gradient(opt.y));

  return Problem{std::move(name), ProblemType::Quadratic, std::move(obj),
                 condition_start(start_raw, box), std::move(opt)};
}

Problem fig2_quadratic() {
  return separable_quadratic("fig2_quadratic", BoundBox::unit(2), (VectorXd(2) << 100.0, 2.0).finished(),
                             VectorXd::Constant(2, 1.1), (VectorXd(2) << 0.2, 0.3).finished());
}

std::vector<Problem> registry() {
  std::vector<Problem> out;
  out.push_back(fig2_quadratic());
  out.push_back(rosenbrock());
  for (Eigen::Index n : {2, 5, 10, 50, 200}) {
    out.push_back(separable_quadratic("sep_quad_" + std::to_string(n), BoundBox::unit(n),
                                      log_spaced(n, 1.0, 10.0), VectorXd::Constant(n, 0.5),
                                      VectorXd::Zero(n)));
  }
  {
    VectorXd c(5);
    c << -0.3, 0.4, 0.6, 1.2, 0.5;
    out.push_back(separable_quadratic("active_quad_5", BoundBox::unit(5),
                                      (VectorXd(5) << 1.0, 2.0, 3.0, 4.0, 5.0).finished(), c,
                                      (VectorXd(5) << 1.0, 1.0, 0.0, 0.0, 1.0).finished()));
  }
  {
    const Eigen::Index n = 10;
    VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = static_cast<double>(i);
      if (i % 2 == 1) c[i] = 0.3 + 0.04 * t;
      else c[i] = i % 4 == 0 ? -0.2 - 0.05 * t : 1.2 + 0.05 * t;
    }
    out.push_back(separable_quadratic("active_quad_10", BoundBox::unit(n), log_spaced(n, 1.0, 10.0),
                                      c, VectorXd::Constant(n, 0.5)));
  }
  {
    const Eigen::Index n = 50;
    VectorXd h(n), c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = static_cast<double>(i);
      h[i] = 1.0 + 0.1 * t;
      c[i] = i % 2 == 0 ? -1.5 - 0.01 * t : 3.5 + 0.01 * t;
    }
    out.push_back(separable_quadratic("active_quad_50", BoundBox::uniform(n, -1.0, 3.0), h, c,
                                      VectorXd::Constant(n, 1.0)));
  }
  out.push_back(separable_quadratic(
      "shifted_quad_3",
      BoundBox((VectorXd(3) << -5.0, 0.0, 10.0).finished(), (VectorXd(3) << 5.0, 2.0, 20.0).finished()),
      (VectorXd(3) << 1.0, 3.0, 0.5).finished(), (VectorXd(3) << 1.0, 0.5, 14.0).finished(),
      (VectorXd(3) << -5.0, 0.0, 10.0).finished()));
  out.push_back(coupled_quadratic());
  out.push_back(cosine(10));
  out.push_back(exp_least_squares());
  return out;
}

std::optional<Problem> find_problem(const std::string& name) {
  for (Problem& p : registry()) {
    if (p.name == name) return std::move(p);
  }
  return std::nullopt;
}

std::string registry_table(const std::vector<Problem>& problems) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "problem" << std::setw(6) << "type" << std::setw(6) << "n"
     << "active\n";
  for (const Problem& p : problems) {
    os << std::left << std::setw(18) << p.name << std::setw(6) << type_code(p.type) << std::setw(6)
       << p.dim();
    if (p.optimum) os << p.optimum->active.size();
    else os << "?";
    os << '\n';
  }
  return os.str();
}

}  // namespace warpopt
