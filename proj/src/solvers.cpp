#include "sivs/solvers.hpp"

#include <cctype>
#include <chrono>
#include <optional>
#include <stdexcept>

namespace sivs {

const char* to_string(Method m) {
  switch (m) {
    case Method::Sivs: return "SIVS";
    case Method::Picard: return "PICARD";
    case Method::Ipy: return "IPY";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  std::string up;
  for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "SIVS") return Method::Sivs;
  if (up == "PICARD") return Method::Picard;
  if (up == "IPY") return Method::Ipy;
  throw std::invalid_argument("unknown method '" + name + "' (expected SIVS, PICARD or IPY)");
}

void SolveConfig::validate() const {
  if (!(stop_tol > 0.0)) throw std::invalid_argument("SolveConfig: stop_tol must be positive");
  if (max_nonlinear < 1) throw std::invalid_argument("SolveConfig: max_nonlinear must be >= 1");
  if (!(schur_tol > 0.0) || schur_maxit < 1) throw std::invalid_argument("SolveConfig: bad inner tolerances");
}

bool pressure_converged(const Vector& p_new, const Vector& p_old, double tol, double* rel_increment) {
  const double diff = (p_new - p_old).norm();
  const double norm = p_new.norm();
  const double rel = norm < 1e-14 ? diff : diff / norm;
  if (rel_increment) *rel_increment = rel;
  return rel <= tol;
}

namespace {

using Clock = std::chrono::steady_clock;

struct StartState {
  Vector u;
  Vector p;
};

StartState start_state(const ConstrainedSystem& cs, const InitialGuess& init) {
  const TaylorHoodSpace& space = cs.space();
  StartState s;
  if (init.u.size() == 0) {
    s.u = cs.g_full;
  } else {
    if (init.u.size() != space.num_velocity_dofs()) throw std::invalid_argument("initial velocity has wrong size");
    s.u = cs.expand(cs.restrict_free(init.u));
  }
  if (init.p.size() == 0) {
    s.p = Vector::Zero(space.num_pressure_dofs());
  } else {
    if (init.p.size() != space.num_pressure_dofs()) throw std::invalid_argument("initial pressure has wrong size");
    s.p = init.p;
  }
  return s;
}

/// A_{k-1} = A_tilde + C(w) on free rows; also returns C[free, constrained] g.
struct LinearizedOperator {
  CsrMatrix a_ff;
  Vector c_lift;  // C_fc g
};

LinearizedOperator linearize(const ConstrainedSystem& cs, const Vector& w) {
  const TaylorHoodSpace& space = cs.space();
  const CsrMatrix c = assemble_convection(space, w);
  LinearizedOperator op;
  const CsrMatrix c_ff = extract(c, space.free_index(), space.num_free(), space.free_index(), space.num_free());
  op.a_ff = cs.a_ff + c_ff;
  op.a_ff.makeCompressed();
  const CsrMatrix c_fc =
      extract(c, space.free_index(), space.num_free(), space.constrained_index(), space.num_constrained());
  op.c_lift = c_fc * cs.g;
  return op;
}

/// Keeps the symbolic analysis while the sparsity pattern stays fixed.
void factor_into(std::optional<SparseFactorization>& fact, Eigen::Index& nnz, const CsrMatrix& a) {
  if (fact && nnz == a.nonZeros()) {
    fact->refactorize(a);
  } else {
    fact.emplace(lu_factorize(a));
    nnz = a.nonZeros();
  }
}

SolveResult splitting_solve(const ConstrainedSystem& cs, const SolveConfig& config, const InitialGuess& init,
                            bool ipy_update) {
  config.validate();
  const DiscreteSystem& sys = *cs.system;
  const SparseFactorization a_tilde = cholesky_factorize(cs.a_ff);
  const MassPreconditioner precond(sys.mp);
  const SchurOperator schur(cs.b_f, a_tilde);

  auto [u, p] = start_state(cs, init);
  Vector u_tilde = u;
  std::optional<SparseFactorization> a_fact;
  Eigen::Index a_nnz = 0;

  SolveResult result;
  for (int k = 1; k <= config.max_nonlinear; ++k) {
    const auto t0 = Clock::now();
    const Vector& advecting = config.advecting == AdvectingField::EndOfStep ? u : u_tilde;
    const LinearizedOperator op = linearize(cs, advecting);
    factor_into(a_fact, a_nnz, op.a_ff);

    // Step 1: advected elliptic solve with the lagged pressure.
    const Vector rhs1 = cs.f_f - op.c_lift - cs.b_f.transpose() * p;
    const Vector ut_free = a_fact->solve(rhs1);
    u_tilde = cs.expand(ut_free);

    // Step 2: pressure increment from the frozen Schur complement.
    Vector rhs2 = sys.b * u_tilde;
    project_zero_mean(rhs2);
    Vector dp;
    const KrylovStats ks = conjugate_gradient(schur, rhs2, precond, dp, config.schur_tol, config.schur_maxit);
    if (!ks.converged)
      throw SolverError("Schur CG did not converge at nonlinear iteration " + std::to_string(k) +
                        " (relative residual " + std::to_string(ks.relative_residual) + ")");
    const Vector correction = cs.b_f.transpose() * dp;
    const Vector u_free = ut_free - (ipy_update ? a_fact->solve(correction) : a_tilde.solve(correction));
    u = cs.expand(u_free);

    Vector p_new = p + dp;
    normalize_pressure(sys.mp, p_new);
    IterRecord rec;
    rec.k = k;
    const bool done = pressure_converged(p_new, p, config.stop_tol, &rec.rel_p_increment);
    rec.div_norm = (sys.b * u).norm();
    rec.schur_iterations = ks.iterations;
    p = std::move(p_new);
    rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    result.records.push_back(rec);
    if (config.keep_iterates) result.iterates.push_back({u, u_tilde, p});
    result.iterations = k;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.u = std::move(u);
  result.p = std::move(p);
  result.u_tilde_last = std::move(u_tilde);
  return result;
}

}  // namespace

SolveResult sivs_solve(const ConstrainedSystem& system, const SolveConfig& config, const InitialGuess& init) {
  return splitting_solve(system, config, init, false);
}

SolveResult ipy_solve(const ConstrainedSystem& system, const SolveConfig& config, const InitialGuess& init) {
  return splitting_solve(system, config, init, true);
}

SolveResult picard_monolithic_solve(const ConstrainedSystem& cs, const SolveConfig& config,
                                    const InitialGuess& init) {
  config.validate();
  const DiscreteSystem& sys = *cs.system;
  const int nf = cs.space().num_free();
  const int np = cs.space().num_pressure_dofs();
  const int n = nf + np - 1;  // pressure dof 0 pinned to zero

  std::vector<Eigen::Triplet<double>> b_trips;
  for (int q = 1; q < cs.b_f.outerSize(); ++q)
    for (CsrMatrix::InnerIterator it(cs.b_f, q); it; ++it) {
      b_trips.emplace_back(nf + q - 1, it.col(), it.value());
      b_trips.emplace_back(it.col(), nf + q - 1, it.value());
    }

  auto [u, p] = start_state(cs, init);
  std::optional<SparseFactorization> fact;
  Eigen::Index nnz = 0;
  SolveResult result;
  for (int k = 1; k <= config.max_nonlinear; ++k) {
    const auto t0 = Clock::now();
    const LinearizedOperator op = linearize(cs, u);
    std::vector<Eigen::Triplet<double>> trips = b_trips;
    trips.reserve(trips.size() + op.a_ff.nonZeros());
    for (int i = 0; i < op.a_ff.outerSize(); ++i)
      for (CsrMatrix::InnerIterator it(op.a_ff, i); it; ++it) trips.emplace_back(i, it.col(), it.value());
    CsrMatrix saddle(n, n);
    saddle.setFromTriplets(trips.begin(), trips.end());
    factor_into(fact, nnz, saddle);

    Vector rhs(n);
    rhs.head(nf) = cs.f_f - op.c_lift;
    rhs.tail(np - 1) = cs.d_g.tail(np - 1);
    const Vector x = fact->solve(rhs);
    u = cs.expand(x.head(nf));
    Vector p_new(np);
    p_new(0) = 0.0;
    p_new.tail(np - 1) = x.tail(np - 1);
    normalize_pressure(sys.mp, p_new);

    IterRecord rec;
    rec.k = k;
    const bool done = pressure_converged(p_new, p, config.stop_tol, &rec.rel_p_increment);
    rec.div_norm = (sys.b * u).norm();
    p = std::move(p_new);
    rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    result.records.push_back(rec);
    if (config.keep_iterates) result.iterates.push_back({u, u, p});
    result.iterations = k;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.u_tilde_last = u;
  result.u = std::move(u);
  result.p = std::move(p);
  return result;
}

SolveResult solve(const ConstrainedSystem& system, const SolveConfig& config, const InitialGuess& init) {
  switch (config.method) {
    case Method::Sivs: return sivs_solve(system, config, init);
    case Method::Ipy: return ipy_solve(system, config, init);
    case Method::Picard: return picard_monolithic_solve(system, config, init);
  }
  throw std::invalid_argument("solve: unknown method");
}

std::vector<SolveResult> continuation_solve(const std::vector<double>& re_list, const SolveConfig& config,
                                            const SystemBuilder& builder) {
  if (re_list.empty()) throw std::invalid_argument("continuation_solve: empty Reynolds list");
  for (std::size_t i = 1; i < re_list.size(); ++i)
    if (!(re_list[i] > re_list[i - 1]))
      throw std::invalid_argument("continuation_solve: Reynolds list must be increasing");

  std::vector<SolveResult> out;
  InitialGuess warm;
  for (double re : re_list) {
    const ConstrainedSystem cs = builder(re);
    SolveResult r = solve(cs, config, warm);
    if (r.converged) warm = {r.u, r.p};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sivs
