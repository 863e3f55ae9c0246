#include "warpopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "warpopt/adawarp.hpp"
#include "warpopt/kkt.hpp"
#include "warpopt/solvers.hpp"

namespace warpopt {

namespace {

constexpr const char* kFixedPrefix = "fixed-sigma:";

double parse_fixed_sigma(const std::string& name) {
  const std::string arg = name.substr(std::string(kFixedPrefix).size());
  std::size_t used = 0;
  double s = 0.0;
  try {
    s = std::stod(arg, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("bad fixed-sigma value in '" + name + "'");
  }
  if (used != arg.size() || !(s > 0.0) || s > kSigmaCap) {
    throw InvalidArgument("bad fixed-sigma value in '" + name + "'");
  }
  return s;
}

bool is_fixed_sigma(const std::string& name) { return name.rfind(kFixedPrefix, 0) == 0; }

// Tracks the (evals, epsilon) history of one run and stops it once the
// tightest tau is met.
struct Recorder {
  const Objective& objective;
  long base;
  double g0_norm;
  double tau_min;
  std::vector<HistoryEntry> history;
  bool done = false;

  bool record(const MeritPoint& p) {
    HistoryEntry h;
    h.evals = objective.eval_count() - base;
    h.epsilon = epsilon_stationarity(p.y, p.objective_gradient).epsilon;
    h.ratio = h.epsilon / g0_norm;
    history.push_back(h);
    done = h.ratio <= tau_min;
    return !done;
  }
};

}  // namespace

void validate_solver_name(const std::string& name) {
  if (name == "adawarp" || name == "ppm" || name == "projgrad-baseline") return;
  if (is_fixed_sigma(name)) {
    parse_fixed_sigma(name);
    return;
  }
  throw InvalidArgument("unknown solver '" + name + "'");
}

std::vector<RunRecord> run_cell(const Problem& problem, const std::string& solver,
                                const std::vector<double>& taus, long budget) {
  validate_solver_name(solver);
  if (taus.empty()) throw InvalidArgument("bench: no tolerances given");
  if (budget <= 0) throw InvalidArgument("bench: budget must be positive");

  const Problem run = problem.clone();
  const Objective& obj = run.objective;
  const BoundBox& box = run.box();
  const Eigen::Index n = run.dim();
  const long max_evals = budget * (n + 1);
  const VectorXd y0_unit = affine_from_box(run.start, box);

  // the normalising gradient is computed on a separate counter set
  const double g0_norm = obj.clone().unit_gradient(y0_unit).norm();

  const double tau_min = *std::min_element(taus.begin(), taus.end());
  Recorder rec{obj, obj.eval_count(), g0_norm, tau_min, {}};
  const long base_g = obj.grad_count();
  std::string status;

  try {
    if (!(g0_norm > 0.0)) throw DegenerateNormalization("zero gradient at the nominal start");
    SolverConfig scfg;
    scfg.max_evals = max_evals;
    scfg.max_iters = 1000000;
    const IterationCallback cb = [&](const IterationInfo& info) { return rec.record(*info.point); };

    if (solver == "adawarp") {
      AdaWarpConfig cfg;
      cfg.sigma0 = VectorXd::Constant(1, 1e-3);
      cfg.epsilon = tau_min * g0_norm;
      cfg.max_outer_iters = 200;
      cfg.max_evals = max_evals;
      cfg.solver = scfg;
      const AdaWarpTrace t = adawarp(obj, run.start, cfg, [&](int, const IterationInfo& info) {
        return rec.record(*info.point);
      });
      status = to_string(t.status);
    } else if (is_fixed_sigma(solver)) {
      const double s = parse_fixed_sigma(solver);
      const MeritFunction m = MeritFunction::sigmoidal(obj, SigmoidalWarp::uniform(n, s));
      scfg.delta = 1e-14;
      const SolveResult r = lbfgs(m, m.from_unit(y0_unit), scfg, cb);
      status = to_string(r.status);
    } else if (solver == "ppm") {
      const MeritFunction m = MeritFunction::projection_penalty(obj);
      scfg.delta = 1e-14;
      const SolveResult r = nonsmooth_qn_ppm(m, y0_unit, scfg, cb);
      status = to_string(r.status);
    } else {
      scfg.delta = 1e-14;
      const SolveResult r = projected_gradient_baseline(obj, run.start, scfg, cb);
      status = to_string(r.status);
    }
  } catch (const Error& e) {
    status = std::string("error: ") + e.what();
    spdlog::warn("bench: {} on {} failed: {}", solver, run.name, e.what());
  }

  std::vector<RunRecord> out;
  for (double tau : taus) {
    RunRecord r;
    r.problem = run.name;
    r.solver = solver;
    r.n = n;
    r.tau = tau;
    for (const HistoryEntry& h : rec.history) {
      if (h.ratio <= tau) {
        r.t_pa = h.evals;
        break;
      }
    }
    r.f_evals = obj.eval_count() - rec.base;
    r.grad_evals = obj.grad_count() - base_g;
    r.violations = obj.violation_count();
    r.status = status;
    r.history = rec.history;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> run_campaign(const std::vector<Problem>& problems, const CampaignConfig& cfg) {
  if (problems.empty()) throw InvalidArgument("bench: empty problem list");
  if (cfg.solvers.empty()) throw InvalidArgument("bench: empty solver list");
  for (const auto& s : cfg.solvers) validate_solver_name(s);

  const std::size_t cells = problems.size() * cfg.solvers.size();
  std::vector<std::vector<RunRecord>> results(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells; i = next++) {
      const Problem& p = problems[i / cfg.solvers.size()];
      const std::string& s = cfg.solvers[i % cfg.solvers.size()];
      spdlog::debug("bench: {} / {}", p.name, s);
      results[i] = run_cell(p, s, cfg.taus, cfg.budget);
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(cells)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<RunRecord> out;
  for (auto& cell : results) {
    for (auto& r : cell) out.push_back(std::move(r));
  }
  return out;
}

DataProfile data_profile(const std::vector<RunRecord>& records, const std::vector<double>& alphas) {
  if (!std::is_sorted(alphas.begin(), alphas.end())) {
    throw InvalidArgument("data_profile: alphas must be increasing");
  }
  // (solver, tau) in first-seen order
  std::vector<std::pair<std::string, double>> keys;
  std::map<std::pair<std::string, double>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    auto key = std::make_pair(r.solver, r.tau);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }

  std::map<double, std::set<std::string>> problem_sets;
  for (const auto& key : keys) {
    std::set<std::string> names;
    for (const RunRecord* r : groups[key]) names.insert(r->problem);
    auto [it, inserted] = problem_sets.emplace(key.second, names);
    if (!inserted && it->second != names) {
      throw InvalidArgument("data_profile: solver '" + key.first + "' covers a different problem set");
    }
  }

  DataProfile prof;
  prof.alphas = alphas;
  for (const auto& key : keys) {
    const auto& group = groups[key];
    ProfileCurve c;
    c.solver = key.first;
    c.tau = key.second;
    for (double a : alphas) {
      std::size_t solved = 0;
      for (const RunRecord* r : group) {
        if (r->t_pa && static_cast<double>(*r->t_pa) / static_cast<double>(r->n + 1) <= a) ++solved;
      }
      c.fractions.push_back(static_cast<double>(solved) / static_cast<double>(group.size()));
    }
    prof.curves.push_back(std::move(c));
  }
  return prof;
}

std::vector<double> default_alphas(int decades) {
  std::vector<double> a;
  for (int j = 0; j <= 10 * decades; ++j) a.push_back(std::pow(10.0, j / 10.0));
  return a;
}

std::string profile_csv(const DataProfile& profile) {
  std::ostringstream os;
  os << "solver,tau,alpha,fraction\n";
  char buf[96];
  for (const ProfileCurve& c : profile.curves) {
    for (std::size_t i = 0; i < profile.alphas.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.6g,%.6g,%.6f\n", c.tau, profile.alphas[i], c.fractions[i]);
      os << c.solver << buf;
    }
  }
  return os.str();
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json hist = nlohmann::json::array();
  for (const HistoryEntry& h : r.history) hist.push_back({h.evals, h.epsilon, h.ratio});
  return {{"problem", r.problem},
          {"solver", r.solver},
          {"n", r.n},
          {"tau", r.tau},
          {"t_pa", r.t_pa ? nlohmann::json(*r.t_pa) : nlohmann::json(nullptr)},
          {"f_evals", r.f_evals},
          {"grad_evals", r.grad_evals},
          {"violations", r.violations},
          {"status", r.status},
          {"history", hist}};
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.problem = j.at("problem").get<std::string>();
  r.solver = j.at("solver").get<std::string>();
  r.n = j.at("n").get<Eigen::Index>();
  r.tau = j.at("tau").get<double>();
  if (!j.at("t_pa").is_null()) r.t_pa = j.at("t_pa").get<long>();
  r.f_evals = j.value("f_evals", 0L);
  r.grad_evals = j.value("grad_evals", 0L);
  r.violations = j.value("violations", 0L);
  r.status = j.value("status", std::string());
  if (j.contains("history")) {
    for (const auto& h : j.at("history")) {
      r.history.push_back({h.at(0).get<long>(), h.at(1).get<double>(), h.at(2).get<double>()});
    }
  }
  return r;
}

}  // namespace warpopt
