#pragma once

#include "sivs/diagnostics.hpp"
#include "sivs/solvers.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sivs::bench {

enum class Experiment { Mms, Cavity, GammaSweep, Compare };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

enum class Problem { Mms, Cavity };

/// Resolved run configuration. Unset fields take per-experiment defaults in
/// resolve_defaults().
struct RunConfig {
  Experiment experiment = Experiment::Mms;
  Problem problem = Problem::Cavity;  // compare only
  std::vector<int> n;
  std::vector<Method> methods;
  double nu = 1.0;
  std::vector<double> re;
  std::vector<double> gamma;
  double stop_tol = 1e-6;
  int max_iter = 500;
  std::filesystem::path out = "run";
  bool keep_iterates = false;
  bool single_thread = false;

  void validate() const;
};

/// Fills empty lists with the defaults of `experiment`.
void resolve_defaults(RunConfig& config);

/// Merges a JSON object into `config`. Keys: experiment, problem, n, method,
/// nu, re, re_list, gamma, gamma_list, tol, max_iter, out, keep_iterates,
/// single_thread. Scalars and lists are both accepted for n/re/gamma/method.
void apply_json(RunConfig& config, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

struct RunOutcome {
  nlohmann::json report;
  bool all_converged = true;
};

RunOutcome run_mms(const RunConfig& config);
RunOutcome run_cavity(const RunConfig& config);
RunOutcome run_gamma_sweep(const RunConfig& config);
RunOutcome run_compare(const RunConfig& config);
/// Dispatches on config.experiment and writes report.json into config.out.
RunOutcome run(const RunConfig& config);

/// Table-convention errors and exact-solution errors for one MMS resolution.
struct MmsRow {
  int n = 0;
  double h = 0.0;
  int iterations = 0;
  bool converged = false;
  ErrorReport table;
  ErrorReport exact;
};

MmsRow mms_row(int n, double nu, double gamma, const SolveConfig& solve_config, SolveResult* result = nullptr);

/// rates.csv: n,h,iterations,converged followed by value/rate pairs for the
/// table-convention errors and then for the exact-solution errors. Undefined
/// rates are empty cells. Values are written with 17 significant digits.
void write_rates_csv(std::ostream& os, const std::vector<MmsRow>& rows);
std::vector<MmsRow> read_rates_csv(std::istream& is);

/// Ghia ordinates of the vendored tables (17 each).
const std::vector<double>& ghia_vertical_ordinates();
const std::vector<double>& ghia_horizontal_ordinates();

/// Directory holding ghia_u.csv and ghia_v.csv; $SIVS_DATA_DIR overrides the
/// build-time default.
std::filesystem::path data_dir();

/// field_sample.csv on a uniform (m x m) grid: x,y,u,v,speed,p.
void write_field_sample(std::ostream& os, const TaylorHoodSpace& space, const Vector& u, const Vector& p, int m = 101);

}  // namespace sivs::bench
