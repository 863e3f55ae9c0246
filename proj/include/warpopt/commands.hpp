#pragma once

#include <cstdint>
#include <string>

#include "warpopt/config.hpp"
#include "warpopt/problems.hpp"

namespace warpopt {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUnmet = 1, kExitConfig = 2 };

/// Writes content to path through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Runs one solve and writes trace.jsonl into out_dir: one record per outer
/// iteration (one per iterate for plain solvers) and a final summary record.
int cmd_solve(const RunConfig& cfg, const std::string& out_dir);

struct GradcheckReport {
  double objective = 0.0;
  double sigmoidal = 0.0;
  double reflection = 0.0;
  double projection_penalty = 0.0;

  double max() const;
};

/// Largest relative error max|g - fd| / max(1, ||g||) of the objective
/// gradient and of each merit gradient against a five-point central stencil.
/// Reflection and penalty samples closer than the stencil reach to a kink are
/// skipped.
GradcheckReport gradcheck(const Objective& objective, int points, std::uint64_t seed);

int cmd_gradcheck(const RunConfig& cfg, const std::string& out_dir);

/// Writes profile.csv and runs.jsonl into out_dir.
int cmd_bench(const RunConfig& cfg, const std::string& out_dir);

/// Recomputes profile.csv in out_dir from an existing runs.jsonl.
int cmd_profile(const std::string& runs_path, const std::string& out_dir);

/// Looks up cfg.problem; throws ConfigError if unknown.
Problem resolve_problem(const std::string& name);

}  // namespace warpopt
