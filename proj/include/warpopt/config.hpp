#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "warpopt/adawarp.hpp"

namespace warpopt {

/// Raised for unreadable or invalid configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat configuration document shared by every command. Keys mirror the
/// AdaWarpConfig and SolverConfig field names.
struct RunConfig {
  std::string problem = "fig2_quadratic";
  /// adawarp, lbfgs, gd, steepest, hybrid, ppm or projgrad-baseline.
  std::string solver = "adawarp";

  std::vector<double> sigma0{1.0};
  bool sigma0_heuristic = false;
  double gamma = 1.0;
  double kappa = 0.1;
  double epsilon = 1e-6;
  std::optional<double> delta;
  bool boundary_optimum = false;
  std::optional<double> tau;
  int max_outer_iters = 100;
  long max_evals = 0;
  std::string inner_solver = "lbfgs";
  std::string uprule_mode = "simplified";
  double hybrid_threshold = 0.5;

  int max_iters = 10000;
  int lbfgs_memory = 10;
  double c1 = 1e-4;
  double c2 = 0.9;
  double backtrack = 0.5;
  int max_line_search = 50;

  /// Start point in box coordinates; the problem's nominal start when empty.
  std::vector<double> start;
  /// Draw the start uniformly inside the box instead, seeded by seed.
  bool random_start = false;
  std::uint64_t seed = 0;

  std::vector<std::string> problems;  ///< bench: empty means the whole registry
  std::vector<std::string> solvers{"adawarp", "projgrad-baseline"};
  std::vector<double> taus{1e-2, 1e-4};
  long budget = 1000;
  int jobs = 1;
  int gradcheck_points = 50;

  AdaWarpConfig adawarp_config() const;
  SolverConfig solver_config() const;
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Rejects unknown keys and ill-typed values with ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
/// Every key, in canonical form; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace warpopt
