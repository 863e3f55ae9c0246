#include "warpopt/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>

#include "warpopt/bench.hpp"

namespace warpopt {

using nlohmann::json;

namespace {

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> get_optional(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  return get_as<T>(v, key);
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

template <typename T>
Setter set(T RunConfig::*field) {
  return [field](RunConfig& c, const json& v, const std::string& key) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
    }
    c.*field = get_as<T>(v, key);
  };
}

template <typename T>
Setter set(std::optional<T> RunConfig::*field) {
  return [field](RunConfig& c, const json& v, const std::string& key) {
    if (!v.is_null() && !v.is_number()) throw ConfigError("config key '" + key + "' must be a number or null");
    c.*field = get_optional<T>(v, key);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"problem", set(&RunConfig::problem)},
      {"solver", set(&RunConfig::solver)},
      {"sigma0",
       [](RunConfig& c, const json& v, const std::string& key) {
         c.sigma0 = v.is_number() ? std::vector<double>{v.get<double>()}
                                  : get_as<std::vector<double>>(v, key);
       }},
      {"sigma0_heuristic", set(&RunConfig::sigma0_heuristic)},
      {"gamma", set(&RunConfig::gamma)},
      {"kappa", set(&RunConfig::kappa)},
      {"epsilon", set(&RunConfig::epsilon)},
      {"delta", set(&RunConfig::delta)},
      {"boundary_optimum", set(&RunConfig::boundary_optimum)},
      {"tau", set(&RunConfig::tau)},
      {"max_outer_iters", set(&RunConfig::max_outer_iters)},
      {"max_evals", set(&RunConfig::max_evals)},
      {"inner_solver", set(&RunConfig::inner_solver)},
      {"uprule_mode", set(&RunConfig::uprule_mode)},
      {"hybrid_threshold", set(&RunConfig::hybrid_threshold)},
      {"max_iters", set(&RunConfig::max_iters)},
      {"lbfgs_memory", set(&RunConfig::lbfgs_memory)},
      {"c1", set(&RunConfig::c1)},
      {"c2", set(&RunConfig::c2)},
      {"backtrack", set(&RunConfig::backtrack)},
      {"max_line_search", set(&RunConfig::max_line_search)},
      {"start", set(&RunConfig::start)},
      {"random_start", set(&RunConfig::random_start)},
      {"seed", set(&RunConfig::seed)},
      {"problems", set(&RunConfig::problems)},
      {"solvers", set(&RunConfig::solvers)},
      {"taus", set(&RunConfig::taus)},
      {"budget", set(&RunConfig::budget)},
      {"jobs", set(&RunConfig::jobs)},
      {"gradcheck_points", set(&RunConfig::gradcheck_points)},
  };
  return table;
}

}  // namespace

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.delta = delta.value_or(epsilon);
  s.max_iters = max_iters;
  s.max_evals = max_evals;
  s.lbfgs_memory = lbfgs_memory;
  s.line_search.c1 = c1;
  s.line_search.c2 = c2;
  s.line_search.backtrack = backtrack;
  s.line_search.max_steps = max_line_search;
  return s;
}

AdaWarpConfig RunConfig::adawarp_config() const {
  AdaWarpConfig a;
  a.sigma0 = Eigen::Map<const VectorXd>(sigma0.data(), static_cast<Eigen::Index>(sigma0.size()));
  a.sigma0_heuristic = sigma0_heuristic;
  a.gamma = gamma;
  a.kappa = kappa;
  a.epsilon = epsilon;
  a.delta = delta;
  a.boundary_optimum = boundary_optimum;
  a.tau = tau;
  a.max_outer_iters = max_outer_iters;
  a.max_evals = max_evals;
  a.inner = parse_inner_solver(inner_solver);
  a.solver = solver_config();
  a.mode = parse_uprule_mode(uprule_mode);
  a.hybrid_threshold = hybrid_threshold;
  return a;
}

void RunConfig::validate() const {
  static const std::vector<std::string> single = {"adawarp", "lbfgs", "gd", "steepest",
                                                  "hybrid", "ppm", "projgrad-baseline"};
  if (std::find(single.begin(), single.end(), solver) == single.end()) {
    throw ConfigError("unknown solver '" + solver + "'");
  }
  try {
    adawarp_config().validate();
    for (const auto& s : solvers) validate_solver_name(s);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (taus.empty()) throw ConfigError("taus must not be empty");
  for (double t : taus) {
    if (!(t > 0.0)) throw ConfigError("taus must be positive");
  }
  if (budget <= 0) throw ConfigError("budget must be positive");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (gradcheck_points < 1) throw ConfigError("gradcheck_points must be >= 1");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(c, value, key);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  return {
      {"problem", c.problem},
      {"solver", c.solver},
      {"sigma0", c.sigma0},
      {"sigma0_heuristic", c.sigma0_heuristic},
      {"gamma", c.gamma},
      {"kappa", c.kappa},
      {"epsilon", c.epsilon},
      {"delta", optional_json(c.delta)},
      {"boundary_optimum", c.boundary_optimum},
      {"tau", optional_json(c.tau)},
      {"max_outer_iters", c.max_outer_iters},
      {"max_evals", c.max_evals},
      {"inner_solver", c.inner_solver},
      {"uprule_mode", c.uprule_mode},
      {"hybrid_threshold", c.hybrid_threshold},
      {"max_iters", c.max_iters},
      {"lbfgs_memory", c.lbfgs_memory},
      {"c1", c.c1},
      {"c2", c.c2},
      {"backtrack", c.backtrack},
      {"max_line_search", c.max_line_search},
      {"start", c.start},
      {"random_start", c.random_start},
      {"seed", c.seed},
      {"problems", c.problems},
      {"solvers", c.solvers},
      {"taus", c.taus},
      {"budget", c.budget},
      {"jobs", c.jobs},
      {"gradcheck_points", c.gradcheck_points},
  };
}

}  // namespace warpopt
