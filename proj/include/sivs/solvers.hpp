#pragma once

#include "sivs/assembly.hpp"
#include "sivs/sparse.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sivs {

enum class Method { Sivs, Picard, Ipy };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

/// Which velocity advects the Step-1 convection term.
enum class AdvectingField { EndOfStep, Tentative };

struct SolveConfig {
  Method method = Method::Sivs;
  double stop_tol = 1e-6;
  int max_nonlinear = 500;
  double schur_tol = 1e-10;
  int schur_maxit = 2000;
  AdvectingField advecting = AdvectingField::EndOfStep;
  bool keep_iterates = false;

  void validate() const;
};

struct IterRecord {
  int k = 0;
  double rel_p_increment = 0.0;
  double div_norm = 0.0;  // ||B U_full||
  int schur_iterations = 0;
  double seconds = 0.0;
};

/// Per-iteration vectors, retained when SolveConfig::keep_iterates is set.
struct Iterate {
  Vector u;        // end-of-step velocity (full)
  Vector u_tilde;  // tentative velocity (full)
  Vector p;        // pressure, zero Mp-mean
};

struct SolveResult {
  Vector u;
  Vector p;
  Vector u_tilde_last;
  std::vector<IterRecord> records;
  std::vector<Iterate> iterates;
  bool converged = false;
  int iterations = 0;
};

/// Initial state; empty vectors mean zero interior velocity and zero pressure.
struct InitialGuess {
  Vector u;
  Vector p;
};

/// Stopping test on consecutive pressures (both zero Mp-mean).
bool pressure_converged(const Vector& p_new, const Vector& p_old, double tol, double* rel_increment = nullptr);

SolveResult sivs_solve(const ConstrainedSystem& system, const SolveConfig& config, const InitialGuess& init = {});
SolveResult ipy_solve(const ConstrainedSystem& system, const SolveConfig& config, const InitialGuess& init = {});
SolveResult picard_monolithic_solve(const ConstrainedSystem& system, const SolveConfig& config,
                                    const InitialGuess& init = {});
/// Dispatches on config.method.
SolveResult solve(const ConstrainedSystem& system, const SolveConfig& config, const InitialGuess& init = {});

using SystemBuilder = std::function<ConstrainedSystem(double reynolds)>;

/// Reynolds continuation: each member starts from the last converged result.
std::vector<SolveResult> continuation_solve(const std::vector<double>& re_list, const SolveConfig& config,
                                            const SystemBuilder& builder);

}  // namespace sivs
