// sivs_bench: runs the manufactured-solution, cavity, gamma-sweep and
// method-comparison experiments and writes a run directory.
//
// Exit codes: 0 success, 1 configuration error, 2 nonconvergence.

#include "sivs/bench.hpp"

#include "CLI11.hpp"

#include <Eigen/Core>

#include <fstream>
#include <iostream>

namespace {

struct Flags {
  std::vector<int> n;
  std::vector<double> re, gamma;
  double re_single = 0.0, gamma_single = 0.0, nu = 0.0, tol = 0.0;
  std::vector<std::string> method;
  std::string problem, out, config;
  int max_iter = 0;
  bool keep_iterates = false, single_thread = false;
};

void add_flags(CLI::App* cmd, Flags& f, bool list_methods) {
  cmd->add_option("--n", f.n, "mesh resolution(s), cells per side")->delimiter(',');
  cmd->add_option("--re", f.re_single, "Reynolds number");
  cmd->add_option("--re-list", f.re, "increasing Reynolds numbers (continuation)")->delimiter(',');
  cmd->add_option("--gamma", f.gamma_single, "grad-div parameter");
  cmd->add_option("--gamma-list", f.gamma, "grad-div parameters")->delimiter(',');
  auto* m = cmd->add_option("--method", f.method, list_methods ? "methods: SIVS,IPY,PICARD" : "SIVS, IPY or PICARD");
  if (list_methods) m->delimiter(',');
  cmd->add_option("--nu", f.nu, "viscosity (manufactured solution)");
  cmd->add_option("--tol", f.tol, "relative pressure-increment tolerance");
  cmd->add_option("--max-iter", f.max_iter, "nonlinear iteration cap");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--config", f.config, "JSON config; flags override its values")->check(CLI::ExistingFile);
  cmd->add_flag("--keep-iterates", f.keep_iterates, "retain per-iteration vectors");
  cmd->add_flag("--single-thread", f.single_thread, "run sweep members sequentially");
}

void apply_flags(const CLI::App* cmd, const Flags& f, sivs::bench::RunConfig& c) {
  auto given = [&](const char* name) { return cmd->get_option(name)->count() > 0; };
  if (given("--n")) c.n = f.n;
  if (given("--re")) c.re = {f.re_single};
  if (given("--re-list")) c.re = f.re;
  if (given("--gamma")) c.gamma = {f.gamma_single};
  if (given("--gamma-list")) c.gamma = f.gamma;
  if (given("--method")) {
    c.methods.clear();
    for (const auto& m : f.method) c.methods.push_back(sivs::method_from_string(m));
  }
  if (given("--nu")) c.nu = f.nu;
  if (given("--tol")) c.stop_tol = f.tol;
  if (given("--max-iter")) c.max_iter = f.max_iter;
  if (given("--out")) c.out = f.out;
  if (f.keep_iterates) c.keep_iterates = true;
  if (f.single_thread) c.single_thread = true;
  if (cmd->get_option_no_throw("--problem") && given("--problem"))
    c.problem = f.problem == "mms" ? sivs::bench::Problem::Mms : sivs::bench::Problem::Cavity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady Navier-Stokes experiments with incremental viscosity splitting"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char*, sivs::bench::Experiment> cmds[] = {
      {"mms", sivs::bench::Experiment::Mms},
      {"cavity", sivs::bench::Experiment::Cavity},
      {"gamma-sweep", sivs::bench::Experiment::GammaSweep},
      {"compare", sivs::bench::Experiment::Compare}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, exp] : cmds) {
    CLI::App* sub = app.add_subcommand(name);
    add_flags(sub, flags, exp == sivs::bench::Experiment::Compare);
    if (exp == sivs::bench::Experiment::Compare)
      sub->add_option("--problem", flags.problem, "mms or cavity")->check(CLI::IsMember({"mms", "cavity"}));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  sivs::bench::RunConfig config;
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      config.experiment = cmds[i].second;
      if (!flags.config.empty()) {
        std::ifstream in(flags.config);
        sivs::bench::apply_json(config, nlohmann::json::parse(in));
        config.experiment = cmds[i].second;
      }
      apply_flags(subs[i], flags, config);
    }
    sivs::bench::resolve_defaults(config);
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "sivs_bench: " << e.what() << '\n';
    return 1;
  }
  if (config.single_thread) Eigen::setNbThreads(1);

  try {
    const sivs::bench::RunOutcome out = sivs::bench::run(config);
    for (const auto& m : out.report["members"]) {
      std::cout << m.value("iterations", 0) << " iterations" << (m.value("converged", false) ? "" : " (NOT converged)");
      for (const char* key : {"n", "re", "gamma", "method"})
        if (m.contains(key)) std::cout << "  " << key << '=' << m[key];
      std::cout << '\n';
    }
    std::cout << "wrote " << config.out.string() << '\n';
    return out.all_converged ? 0 : 2;
  } catch (const sivs::SolverError& e) {
    std::cerr << "sivs_bench: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "sivs_bench: " << e.what() << '\n';
    return 1;
  }
}
