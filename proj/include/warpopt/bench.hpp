#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "warpopt/problems.hpp"

namespace warpopt {

/// Solver names understood by the campaign runner: "adawarp",
/// "fixed-sigma:<s>", "ppm" and "projgrad-baseline".
void validate_solver_name(const std::string& name);

struct HistoryEntry {
  long evals = 0;  ///< objective value evaluations so far in the run
  double epsilon = 0.0;
  double ratio = 0.0;  ///< epsilon / ||grad f(y0)||
};

struct RunRecord {
  std::string problem;
  std::string solver;
  Eigen::Index n = 0;
  double tau = 0.0;
  /// Evaluations up to the first iterate meeting tau; nullopt if never.
  std::optional<long> t_pa;
  long f_evals = 0;
  long grad_evals = 0;
  long violations = 0;
  std::string status;
  std::vector<HistoryEntry> history;
};

struct CampaignConfig {
  std::vector<std::string> solvers;
  std::vector<double> taus{1e-2, 1e-4};
  long budget = 1000;  ///< evaluations per run are budget * (n + 1)
  int jobs = 1;
};

/// One run per (problem, solver), reported as one record per tau. Order is
/// problems-major, then solvers, then taus, independent of jobs.
std::vector<RunRecord> run_campaign(const std::vector<Problem>& problems, const CampaignConfig& cfg);

/// Single (problem, solver) run; exposed for tests.
std::vector<RunRecord> run_cell(const Problem& problem, const std::string& solver,
                                const std::vector<double>& taus, long budget);

struct ProfileCurve {
  std::string solver;
  double tau = 0.0;
  std::vector<double> fractions;  ///< one per alpha
};

struct DataProfile {
  std::vector<double> alphas;
  std::vector<ProfileCurve> curves;
};

/// d(alpha) = |{p : t_pa / (n_p + 1) <= alpha}| / |P| per (solver, tau).
/// Throws if solvers at the same tau cover different problem sets.
DataProfile data_profile(const std::vector<RunRecord>& records, const std::vector<double>& alphas);

/// 10^(j/10) for j = 0..10 * decades.
std::vector<double> default_alphas(int decades = 3);

/// Header "solver,tau,alpha,fraction" then one row per curve point.
std::string profile_csv(const DataProfile& profile);

nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

}  // namespace warpopt
