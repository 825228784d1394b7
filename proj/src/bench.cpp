#include "sivs/bench.hpp"

#include "sivs/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#ifndef SIVS_DEFAULT_DATA_DIR
#define SIVS_DEFAULT_DATA_DIR "data"
#endif

namespace sivs::bench {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Mms: return "mms";
    case Experiment::Cavity: return "cavity";
    case Experiment::GammaSweep: return "gamma-sweep";
    case Experiment::Compare: return "compare";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "mms") return Experiment::Mms;
  if (name == "cavity") return Experiment::Cavity;
  if (name == "gamma-sweep") return Experiment::GammaSweep;
  if (name == "compare") return Experiment::Compare;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

void RunConfig::validate() const {
  if (n.empty()) throw std::invalid_argument("no mesh resolution given");
  for (int v : n)
    if (v < 1) throw std::invalid_argument("mesh resolution must be >= 1");
  if (methods.empty()) throw std::invalid_argument("no method given");
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  for (double r : re)
    if (!(r > 0.0)) throw std::invalid_argument("Reynolds numbers must be positive");
  for (std::size_t i = 1; i < re.size(); ++i)
    if (!(re[i] > re[i - 1])) throw std::invalid_argument("Reynolds list must be increasing");
  for (double g : gamma)
    if (!(g >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (!(stop_tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max-iter must be >= 1");
  if (experiment != Experiment::Compare && methods.size() != 1)
    throw std::invalid_argument("only the compare experiment takes several methods");
  if (experiment == Experiment::Cavity && n.size() != 1)
    throw std::invalid_argument("cavity takes a single mesh resolution");
}

void resolve_defaults(RunConfig& c) {
  switch (c.experiment) {
    case Experiment::Mms:
      if (c.n.empty()) c.n = {10, 20, 40, 80};
      if (c.gamma.empty()) c.gamma = {1.0};
      break;
    case Experiment::Cavity:
      if (c.n.empty()) c.n = {128};
      if (c.re.empty()) c.re = {100.0};
      if (c.gamma.empty()) c.gamma = {1.0};
      break;
    case Experiment::GammaSweep:
      if (c.n.empty()) c.n = {64};
      if (c.re.empty()) c.re = {100.0};
      if (c.gamma.empty()) c.gamma = {1e-6, 1e-3, 1.0, 1e2, 1e3, 1e6};
      break;
    case Experiment::Compare:
      if (c.n.empty()) c.n = {16};
      if (c.re.empty()) c.re = {100.0};
      if (c.gamma.empty()) c.gamma = {1.0};
      if (c.methods.empty()) c.methods = {Method::Sivs, Method::Ipy, Method::Picard};
      break;
  }
  if (c.methods.empty()) c.methods = {Method::Sivs};
}

namespace {

template <class T>
std::vector<T> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "experiment") c.experiment = experiment_from_string(v.get<std::string>());
      else if (key == "problem") {
        const std::string s = v.get<std::string>();
        if (s == "mms") c.problem = Problem::Mms;
        else if (s == "cavity") c.problem = Problem::Cavity;
        else throw std::invalid_argument("unknown problem '" + s + "'");
      } else if (key == "n") c.n = as_list<int>(v);
      else if (key == "method" || key == "methods") {
        c.methods.clear();
        for (const auto& m : as_list<std::string>(v)) c.methods.push_back(method_from_string(m));
      } else if (key == "nu") c.nu = v.get<double>();
      else if (key == "re" || key == "re_list") c.re = as_list<double>(v);
      else if (key == "gamma" || key == "gamma_list") c.gamma = as_list<double>(v);
      else if (key == "tol") c.stop_tol = v.get<double>();
      else if (key == "max_iter") c.max_iter = v.get<int>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "keep_iterates") c.keep_iterates = v.get<bool>();
      else if (key == "single_thread") c.single_thread = v.get<bool>();
      else throw std::invalid_argument("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

json to_json(const RunConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(sivs::to_string(m));
  return {{"experiment", to_string(c.experiment)},
          {"problem", c.problem == Problem::Mms ? "mms" : "cavity"},
          {"n", c.n},
          {"methods", methods},
          {"nu", c.nu},
          {"re", c.re},
          {"gamma", c.gamma},
          {"tol", c.stop_tol},
          {"max_iter", c.max_iter},
          {"out", c.out.string()},
          {"keep_iterates", c.keep_iterates},
          {"single_thread", c.single_thread}};
}

namespace {

SolveConfig solve_config(const RunConfig& c, Method m) {
  SolveConfig s;
  s.method = m;
  s.stop_tol = c.stop_tol;
  s.max_nonlinear = c.max_iter;
  s.keep_iterates = c.keep_iterates;
  return s;
}

json records_json(const SolveResult& r) {
  json a = json::array();
  for (const IterRecord& rec : r.records)
    a.push_back({{"k", rec.k},
                 {"rel_p_increment", rec.rel_p_increment},
                 {"div_norm", rec.div_norm},
                 {"schur_iterations", rec.schur_iterations},
                 {"seconds", rec.seconds}});
  return a;
}

double total_seconds(const SolveResult& r) {
  double s = 0.0;
  for (const IterRecord& rec : r.records) s += rec.seconds;
  return s;
}

void write_iteration_header(std::ostream& os, const std::string& key) {
  os << key << ",k,rel_p_increment,div_norm,schur_iterations,seconds\n";
}

void write_iteration_rows(std::ostream& os, const std::string& key, const SolveResult& r) {
  for (const IterRecord& rec : r.records)
    os << key << ',' << rec.k << ',' << rec.rel_p_increment << ',' << rec.div_norm << ',' << rec.schur_iterations
       << ',' << rec.seconds << '\n';
}

std::string format_number(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(12);
  return os;
}

json errors_json(const ErrorReport& e) {
  return {{"l2_u", e.l2_u}, {"h1_u", e.h1_u}, {"div_u", e.div_u}, {"l2_p", e.l2_p}};
}

void copy_reference_tables(const fs::path& out) {
  for (const char* name : {"ghia_u.csv", "ghia_v.csv"}) {
    const fs::path src = data_dir() / name;
    if (fs::exists(src)) fs::copy_file(src, out / name, fs::copy_options::overwrite_existing);
  }
}

std::vector<double> column(const std::vector<MmsRow>& rows, double ErrorReport::*field, bool table) {
  std::vector<double> v;
  for (const MmsRow& r : rows) v.push_back((table ? r.table : r.exact).*field);
  return v;
}

}  // namespace

MmsRow mms_row(int n, double nu, double gamma, const SolveConfig& solve_config, SolveResult* result) {
  const auto system = make_mms_system(n, nu, gamma);
  const ConstrainedSystem cs = apply_dirichlet(system);
  SolveResult r = solve(cs, solve_config);
  const QuadratureRule quad = triangle_rule(12);
  const ExactSolution ex = mms::exact();
  MmsRow row;
  row.n = n;
  row.h = 1.0 / n;
  row.iterations = r.iterations;
  row.converged = r.converged;
  row.table = errors_vs_interpolant(*system->space, r.u, r.p, ex, quad);
  row.exact = errors_vs_analytic(*system->space, r.u, r.p, ex, quad);
  if (result) *result = std::move(r);
  return row;
}

namespace {

constexpr double ErrorReport::*kErrorFields[] = {&ErrorReport::l2_u, &ErrorReport::h1_u, &ErrorReport::div_u,
                                                  &ErrorReport::l2_p};
constexpr const char* kErrorNames[] = {"l2_u", "h1_u", "div_u", "l2_p"};

}  // namespace

void write_rates_csv(std::ostream& os, const std::vector<MmsRow>& rows) {
  os << "n,h,iterations,converged";
  for (const char* prefix : {"", "exact_"})
    for (const char* name : kErrorNames) os << ',' << prefix << name << ",rate_" << prefix << name;
  os << '\n';
  std::vector<double> h;
  for (const MmsRow& r : rows) h.push_back(r.h);
  std::vector<std::vector<std::optional<double>>> rate_cols;
  for (bool table : {true, false})
    for (auto field : kErrorFields) rate_cols.push_back(rates(h, column(rows, field, table)));

  const auto old_prec = os.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const MmsRow& r = rows[i];
    os << r.n << ',' << r.h << ',' << r.iterations << ',' << (r.converged ? 1 : 0);
    std::size_t c = 0;
    for (bool table : {true, false})
      for (auto field : kErrorFields) {
        os << ',' << (table ? r.table : r.exact).*field << ',';
        if (i > 0 && rate_cols[c][i - 1]) os << *rate_cols[c][i - 1];
        ++c;
      }
    os << '\n';
  }
  os.precision(old_prec);
}

std::vector<MmsRow> read_rates_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("rates.csv: missing header");
  std::vector<MmsRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < 20) cells.resize(20);
    MmsRow r;
    r.n = std::stoi(cells[0]);
    r.h = std::stod(cells[1]);
    r.iterations = std::stoi(cells[2]);
    r.converged = cells[3] == "1";
    for (int k = 0; k < 4; ++k) {
      r.table.*kErrorFields[k] = std::stod(cells[4 + 2 * k]);
      r.exact.*kErrorFields[k] = std::stod(cells[12 + 2 * k]);
    }
    rows.push_back(r);
  }
  return rows;
}

const std::vector<double>& ghia_vertical_ordinates() {
  static const std::vector<double> y = {1.0,    0.9766, 0.9688, 0.9609, 0.9531, 0.8516, 0.7344, 0.6172, 0.5,
                                        0.4531, 0.2813, 0.1719, 0.1016, 0.0703, 0.0625, 0.0547, 0.0};
  return y;
}

const std::vector<double>& ghia_horizontal_ordinates() {
  static const std::vector<double> x = {1.0,    0.9688, 0.9609, 0.9531, 0.9453, 0.9063, 0.8594, 0.8047, 0.5,
                                        0.2344, 0.2266, 0.1563, 0.0938, 0.0781, 0.0703, 0.0625, 0.0};
  return x;
}

fs::path data_dir() {
  if (const char* env = std::getenv("SIVS_DATA_DIR"); env && *env) return env;
  return SIVS_DEFAULT_DATA_DIR;
}

void write_field_sample(std::ostream& os, const TaylorHoodSpace& space, const Vector& u, const Vector& p, int m) {
  if (m < 2) throw std::invalid_argument("write_field_sample: grid needs at least 2 points per side");
  os << "x,y,u,v,speed,p\n";
  const auto old_prec = os.precision(12);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const Point2 x(static_cast<double>(i) / (m - 1), static_cast<double>(j) / (m - 1));
      const FieldValue fv = evaluate_field(space, u, x);
      os << x.x() << ',' << x.y() << ',' << fv.value.x() << ',' << fv.value.y() << ',' << fv.value.norm() << ','
         << evaluate_pressure(space, p, x) << '\n';
    }
  os.precision(old_prec);
}

RunOutcome run_mms(const RunConfig& c) {
  fs::create_directories(c.out);
  const double gamma = c.gamma.front();
  const SolveConfig sc = solve_config(c, c.methods.front());
  std::vector<MmsRow> rows;
  std::vector<SolveResult> runs;
  for (int n : c.n) {
    SolveResult r;
    rows.push_back(mms_row(n, c.nu, gamma, sc, &r));
    runs.push_back(std::move(r));
  }

  {
    std::ofstream os = open_out(c.out / "rates.csv");
    write_rates_csv(os, rows);
  }
  {
    std::ofstream os = open_out(c.out / "iterations.csv");
    write_iteration_header(os, "n");
    for (std::size_t i = 0; i < runs.size(); ++i) write_iteration_rows(os, std::to_string(rows[i].n), runs[i]);
  }

  RunOutcome out;
  json members = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.all_converged = out.all_converged && rows[i].converged;
    members.push_back({{"n", rows[i].n},
                       {"h", rows[i].h},
                       {"iterations", rows[i].iterations},
                       {"converged", rows[i].converged},
                       {"seconds", total_seconds(runs[i])},
                       {"errors", errors_json(rows[i].table)},
                       {"exact_errors", errors_json(rows[i].exact)},
                       {"records", records_json(runs[i])}});
  }
  out.report["members"] = members;
  return out;
}

RunOutcome run_cavity(const RunConfig& c) {
  fs::create_directories(c.out);
  const int n = c.n.front();
  const double gamma = c.gamma.front();
  auto space = std::make_shared<const TaylorHoodSpace>(unit_square_mesh(n));
  const SystemBuilder builder = [&](double re) { return apply_dirichlet(make_cavity_system(space, re, gamma)); };
  const std::vector<SolveResult> runs = continuation_solve(c.re, solve_config(c, c.methods.front()), builder);

  RunOutcome out;
  std::vector<CenterlineSample> cu, cv;
  json members = json::array();
  {
    std::ofstream os = open_out(c.out / "iterations.csv");
    write_iteration_header(os, "re");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const SolveResult& r = runs[i];
      write_iteration_rows(os, format_number(c.re[i]), r);
      out.all_converged = out.all_converged && r.converged;
      cu.push_back(centerline(*space, r.u, Centerline::Vertical, ghia_vertical_ordinates(), c.re[i]));
      cv.push_back(centerline(*space, r.u, Centerline::Horizontal, ghia_horizontal_ordinates(), c.re[i]));
      members.push_back({{"re", c.re[i]},
                         {"iterations", r.iterations},
                         {"converged", r.converged},
                         {"seconds", total_seconds(r)},
                         {"records", records_json(r)}});
    }
  }

  auto write_centerlines = [&](const fs::path& path, const char* coord, const std::vector<CenterlineSample>& s) {
    std::ofstream os = open_out(path);
    os << coord;
    for (const CenterlineSample& cs : s) os << ",Re" << format_number(cs.reynolds);
    os << '\n';
    for (std::size_t i = 0; i < s.front().coordinates.size(); ++i) {
      os << s.front().coordinates[i];
      for (const CenterlineSample& cs : s) os << ',' << cs.values[i];
      os << '\n';
    }
  };
  write_centerlines(c.out / "centerline_u.csv", "y", cu);
  write_centerlines(c.out / "centerline_v.csv", "x", cv);
  {
    std::ofstream os = open_out(c.out / "field_sample.csv");
    write_field_sample(os, *space, runs.back().u, runs.back().p);
  }
  copy_reference_tables(c.out);
  out.report["members"] = members;
  return out;
}

RunOutcome run_gamma_sweep(const RunConfig& c) {
  fs::create_directories(c.out);
  const int n = c.n.front();
  const double re = c.re.front();
  auto space = std::make_shared<const TaylorHoodSpace>(unit_square_mesh(n));
  const SolveConfig sc = solve_config(c, c.methods.front());

  auto member = [&](double gamma) {
    const ConstrainedSystem cs = apply_dirichlet(make_cavity_system(space, re, gamma));
    return solve(cs, sc);
  };
  std::vector<SolveResult> runs;
  if (c.single_thread) {
    for (double g : c.gamma) runs.push_back(member(g));
  } else {
    std::vector<std::future<SolveResult>> jobs;
    for (double g : c.gamma) jobs.push_back(std::async(std::launch::async, member, g));
    for (auto& f : jobs) runs.push_back(f.get());
  }

  RunOutcome out;
  json members = json::array();
  std::ofstream os = open_out(c.out / "iterations.csv");
  write_iteration_header(os, "gamma");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    write_iteration_rows(os, format_number(c.gamma[i]), runs[i]);
    out.all_converged = out.all_converged && runs[i].converged;
    members.push_back({{"gamma", c.gamma[i]},
                       {"iterations", runs[i].iterations},
                       {"converged", runs[i].converged},
                       {"seconds", total_seconds(runs[i])},
                       {"records", records_json(runs[i])}});
  }
  out.report["members"] = members;
  return out;
}

RunOutcome run_compare(const RunConfig& c) {
  fs::create_directories(c.out);
  const int n = c.n.front();
  const double gamma = c.gamma.front();
  const auto system = c.problem == Problem::Mms ? make_mms_system(n, c.nu, gamma)
                                                : make_cavity_system(n, c.re.front(), gamma);
  const ConstrainedSystem cs = apply_dirichlet(system);

  std::vector<SolveResult> runs;
  for (Method m : c.methods) runs.push_back(solve(cs, solve_config(c, m)));

  RunOutcome out;
  json members = json::array();
  std::ofstream os = open_out(c.out / "iterations.csv");
  write_iteration_header(os, "method");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    write_iteration_rows(os, sivs::to_string(c.methods[i]), runs[i]);
    out.all_converged = out.all_converged && runs[i].converged;
    members.push_back({{"method", sivs::to_string(c.methods[i])},
                       {"iterations", runs[i].iterations},
                       {"converged", runs[i].converged},
                       {"seconds", total_seconds(runs[i])},
                       {"records", records_json(runs[i])}});
  }

  json distances = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      const double du = (runs[i].u - runs[j].u).norm() / std::max(runs[j].u.norm(), 1e-300);
      const double dp = (runs[i].p - runs[j].p).norm() / std::max(runs[j].p.norm(), 1e-300);
      double dc = 0.0;
      for (Centerline w : {Centerline::Vertical, Centerline::Horizontal}) {
        const auto& ord = w == Centerline::Vertical ? ghia_vertical_ordinates() : ghia_horizontal_ordinates();
        const CenterlineSample a = centerline(cs.space(), runs[i].u, w, ord);
        const CenterlineSample b = centerline(cs.space(), runs[j].u, w, ord);
        for (std::size_t q = 0; q < ord.size(); ++q) dc = std::max(dc, std::abs(a.values[q] - b.values[q]));
      }
      distances.push_back({{"a", sivs::to_string(c.methods[i])},
                           {"b", sivs::to_string(c.methods[j])},
                           {"rel_u", du},
                           {"rel_p", dp},
                           {"max_centerline", dc}});
    }
  out.report["members"] = members;
  out.report["distances"] = distances;
  return out;
}

RunOutcome run(const RunConfig& c) {
  c.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  switch (c.experiment) {
    case Experiment::Mms: out = run_mms(c); break;
    case Experiment::Cavity: out = run_cavity(c); break;
    case Experiment::GammaSweep: out = run_gamma_sweep(c); break;
    case Experiment::Compare: out = run_compare(c); break;
  }
  out.report["config"] = to_json(c);
  out.report["converged"] = out.all_converged;
  out.report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report["version"] = SIVS_VERSION;
  std::ofstream os = open_out(c.out / "report.json");
  os << out.report.dump(2) << '\n';
  return out;
}

}  // namespace sivs::bench
