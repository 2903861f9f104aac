#include "hbvm/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include "hbvm/blended.hpp"
#include "hbvm/errors.hpp"
#include "hbvm/integrator.hpp"
#include "hbvm/partition.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/tableau.hpp"

namespace hbvm::cli {

namespace {

struct Options {
  int k = 0;  // 0: same as s
  int s = 2;
  double h = 0.1;
  int steps = 100;
  std::string problem = "pendulum";
  std::optional<double> gamma;
  std::string selection = "rule-of-thumb";
  std::string out;
  unsigned seed = 1;

  double q0 = 1.0;
  double p0 = 0.0;
  double rtol = 1e-14;
  double atol = 1e-16;
  int max_iter = 100;

  int s_max = 10;
  bool include_s1 = false;
  int k_max = 100;
  int grid = 200;
  int levels = 4;
  double t_end = 10.0;
  double tol = 1e-9;
  int random_sets = 0;
};

struct Report {
  std::string text;
  int status = kSuccess;
};

// Thrown for parameter combinations CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) { return fmt::format("{:.16g}", x); }

int resolved_k(const Options& o) { return o.k == 0 ? o.s : o.k; }

BlendedConfig solver_config(const Options& o) {
  BlendedConfig cfg;
  cfg.gamma = o.gamma;
  cfg.rtol = o.rtol;
  cfg.atol = o.atol;
  cfg.max_inner = o.max_iter;
  cfg.max_outer = o.max_iter;
  return cfg;
}

Selection selection_of(const Options& o) {
  return o.selection == "first-s" ? Selection::FirstS : Selection::RuleOfThumb;
}

void require_stages(const Options& o) {
  if (resolved_k(o) < o.s) throw UsageError(fmt::format("need k >= s, got k = {}, s = {}", resolved_k(o), o.s));
}

std::string header(const std::string& command, const std::map<std::string, std::string>& params) {
  std::string line = "# hbvm " + command;
  for (const auto& [key, value] : params) line += " " + key + "=" + value;
  return line + "\n";
}

std::string solver_params(const Options& o) {
  return fmt::format("gamma={} rtol={} atol={} max_iter={}", o.gamma ? num(*o.gamma) : "optimal", num(o.rtol),
                     num(o.atol), o.max_iter);
}

Report cmd_tableau(const Options& o) {
  require_stages(o);
  const int k = resolved_k(o);
  const StagePartition part = make_partition(k, o.s, selection_of(o));
  Report r;
  r.text = header("tableau", {{"k", std::to_string(k)}, {"s", std::to_string(o.s)}, {"selection", o.selection}});
  r.text += "i,node,weight,fundamental";
  for (int j = 1; j <= k; ++j) r.text += fmt::format(",a{}", j);
  r.text += "\n";
  const HbvmTableau& tab = part.tableau;
  for (std::size_t i = 0; i < std::size_t(k); ++i) {
    const bool fund = std::find(part.fund_idx.begin(), part.fund_idx.end(), i) != part.fund_idx.end();
    r.text += fmt::format("{},{},{},{}", i + 1, num(tab.nodes()[i]), num(tab.omega[i]), fund ? 1 : 0);
    for (std::size_t j = 0; j < std::size_t(k); ++j) r.text += "," + num(tab.A(i, j));
    r.text += "\n";
  }
  return r;
}

Report cmd_isospectral(const Options& o) {
  require_stages(o);
  const int k = resolved_k(o);
  const SpectrumReport rep = verify_isospectral(k, o.s, o.tol);
  Report r;
  r.text = header("isospectral", {{"k", std::to_string(k)},
                                  {"s", std::to_string(o.s)},
                                  {"tol", num(o.tol)},
                                  {"random_sets", std::to_string(o.random_sets)},
                                  {"seed", std::to_string(o.seed)}});
  r.text += "matrix,zero_count,expected_zero_count,max_pairing_error,result\n";
  bool passed = rep.passed;
  r.text += fmt::format("A,{},{},{},{}\n", rep.zero_count, rep.expected_zero_count, num(rep.max_pairing_error),
                        rep.passed ? "pass" : "fail");

  if (o.random_sets > 0) {
    const HbvmTableau tab = build_gauss_tableau(k, o.s);
    const auto reference = eigenvalues(x_matrix(o.s));
    std::mt19937 rng(o.seed);
    std::vector<std::size_t> all(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (int set = 0; set < o.random_sets; ++set) {
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<std::size_t> pick(all.begin(), all.begin() + o.s);
      std::sort(pick.begin(), pick.end());
      std::string label = "C[";
      for (std::size_t i = 0; i < pick.size(); ++i) label += (i ? " " : "") + std::to_string(pick[i] + 1);
      label += "]";
      try {
        const double err = pairing_error(eigenvalues(build_partition(tab, pick).C), reference);
        const bool ok = err <= 1e-8;
        passed = passed && ok;
        r.text += fmt::format("{},0,0,{},{}\n", label, num(err), ok ? "pass" : "fail");
      } catch (const PartitionRejected&) {
        r.text += fmt::format("{},0,0,nan,rejected\n", label);
      }
    }
  }
  r.status = passed ? kSuccess : kVerificationFailure;
  return r;
}

Report cmd_gamma_table(const Options& o) {
  Report r;
  r.text = header("gamma-table", {{"s_max", std::to_string(o.s_max)}, {"include_s1", o.include_s1 ? "1" : "0"}});
  r.text += "s,gamma,rho_star\n";
  for (int s = o.include_s1 ? 1 : 2; s <= o.s_max; ++s) {
    const auto spectrum = eigenvalues(x_matrix(s));
    const double gamma = gamma_opt(spectrum);
    // Adding 0.0 turns a rounded -0.0000 into 0.0000.
    r.text += fmt::format("{},{:.4f},{:.4f}\n", s, gamma, rho_star(spectrum, gamma) + 0.0);
  }
  return r;
}

Report cmd_cond(const Options& o) {
  if (o.k_max < o.s) throw UsageError("need k-max >= s");
  const Selection sel = selection_of(o);
  Report r;
  r.text = header("cond", {{"s", std::to_string(o.s)}, {"k_max", std::to_string(o.k_max)}, {"selection", o.selection}});
  r.text += "k,cond\n";
  // The rule of thumb needs k - s even; first-s accepts every k.
  const int stride = sel == Selection::RuleOfThumb ? 2 : 1;
  for (int k = o.s; k <= o.k_max; k += stride) {
    try {
      r.text += fmt::format("{},{}\n", k, num(condition_number(make_partition(k, o.s, sel).C)));
    } catch (const SelectionError& e) {
      r.text += fmt::format("# k={} skipped: {}\n", k, e.what());
    }
  }
  return r;
}

Report cmd_amplification(const Options& o) {
  require_stages(o);
  const int k = resolved_k(o);
  const Matrix c = make_partition(k, o.s).C;
  const double gamma = o.gamma ? *o.gamma : gamma_opt(eigenvalues(c));
  const LinearAnalysis a = analyze_linear(c, gamma, o.grid);
  Report r;
  r.text = header("amplification", {{"k", std::to_string(k)},
                                    {"s", std::to_string(o.s)},
                                    {"gamma", num(gamma)},
                                    {"grid", std::to_string(o.grid)},
                                    {"rho_star", num(a.rho_star)}});
  r.text += "y,rho\n";
  for (const AmplificationSample& sample : a.q_grid) r.text += fmt::format("{},{}\n", num(sample.y), num(sample.rho));
  return r;
}

HamiltonianSystem problem_of(const Options& o) { return problems::by_name(o.problem); }

std::map<std::string, std::string> run_params(const Options& o) {
  return {{"problem", o.problem},    {"k", std::to_string(resolved_k(o))}, {"s", std::to_string(o.s)},
          {"h", num(o.h)},           {"steps", std::to_string(o.steps)},    {"q0", num(o.q0)},
          {"p0", num(o.p0)},         {"selection", o.selection},            {"solver", "\"" + solver_params(o) + "\""}};
}

Report cmd_integrate(const Options& o) {
  require_stages(o);
  const HamiltonianSystem sys = problem_of(o);
  const HbvmMethod method = make_method(resolved_k(o), o.s, solver_config(o), selection_of(o));
  const IntegrationResult run = integrate_steps(method, sys, {o.q0, o.p0}, o.h, std::size_t(o.steps));
  Report r;
  r.text = header("integrate", run_params(o));
  r.text += "step,t,q,p,H,sweeps\n";
  for (std::size_t n = 0; n < run.states.size(); ++n)
    r.text += fmt::format("{},{},{},{},{},{}\n", n, num(run.times[n]), num(run.states[n][0]), num(run.states[n][1]),
                          num(run.energy[n]), n == 0 ? 0 : run.sweeps[n - 1]);
  if (!run.complete()) {
    r.text += fmt::format("# step {} failed: {}\n", run.failures[0].step + 1, run.failures[0].reason);
    r.status = kVerificationFailure;
  }
  return r;
}

Report cmd_energy(const Options& o) {
  require_stages(o);
  const HamiltonianSystem sys = problem_of(o);
  const HbvmMethod method = make_method(resolved_k(o), o.s, solver_config(o), selection_of(o));
  const IntegrationResult run = integrate_steps(method, sys, {o.q0, o.p0}, o.h, std::size_t(o.steps));
  double max_step = 0.0;
  for (std::size_t n = 1; n < run.energy.size(); ++n)
    max_step = std::max(max_step, std::abs(run.energy[n] - run.energy[n - 1]));
  Report r;
  r.text = header("energy", run_params(o));
  r.text += "problem,k,s,h,steps,H0,max_drift,max_relative_drift,max_step_change\n";
  r.text += fmt::format("{},{},{},{},{},{},{},{},{}\n", o.problem, resolved_k(o), o.s, num(o.h), run.steps(),
                        num(run.energy.front()), num(run.max_energy_error()), num(run.max_relative_energy_error()),
                        num(max_step));
  if (!run.complete()) {
    r.text += fmt::format("# step {} failed: {}\n", run.failures[0].step + 1, run.failures[0].reason);
    r.status = kVerificationFailure;
  }
  return r;
}

Report cmd_order(const Options& o) {
  require_stages(o);
  const HamiltonianSystem sys = problem_of(o);
  const Vector y0{o.q0, o.p0};
  ExactSolution exact;
  if (o.problem == "harmonic") exact = [y0](double t) { return problems::harmonic_exact(y0, t); };
  const OrderStudy study = observed_order(sys, y0, o.t_end, resolved_k(o), o.s, o.h, o.levels, solver_config(o), exact);
  Report r;
  auto params = run_params(o);
  params.erase("steps");
  params["t_end"] = num(o.t_end);
  params["levels"] = std::to_string(o.levels);
  params["reference"] = exact ? "exact" : "fine";
  r.text = header("order", params);
  r.text += "h,error\n";
  for (std::size_t i = 0; i < study.step_sizes.size(); ++i)
    r.text += fmt::format("{},{}\n", num(study.step_sizes[i]), num(study.errors[i]));
  r.text += study.measurable ? fmt::format("# slope={}\n", num(study.slope)) : "# slope=unmeasurable\n";
  if (!study.measurable) r.status = kVerificationFailure;
  return r;
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += fmt::format(".tmp{}", ::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    file << text;
    file.close();
    if (!file) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output to " + path + ": " + ec.message());
  }
}

void add_stage_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--k", o.k, "Total stages k (defaults to s)")->check(CLI::Range(1, 200));
  cmd.add_option("--s", o.s, "Polynomial degree s")->check(CLI::Range(1, 200));
}

void add_run_options(CLI::App& cmd, Options& o) {
  add_stage_options(cmd, o);
  cmd.add_option("--problem", o.problem, "harmonic, quartic, sextic or pendulum")
      ->check(CLI::IsMember(problems::names()));
  cmd.add_option("--h", o.h, "Step size")->check(CLI::PositiveNumber);
  cmd.add_option("--q0", o.q0, "Initial position");
  cmd.add_option("--p0", o.p0, "Initial momentum");
  cmd.add_option("--gamma", o.gamma, "Blending parameter (default: optimal)")->check(CLI::PositiveNumber);
  cmd.add_option("--selection", o.selection, "rule-of-thumb or first-s")
      ->check(CLI::IsMember({"rule-of-thumb", "first-s"}));
  cmd.add_option("--rtol", o.rtol, "Relative residual tolerance")->check(CLI::NonNegativeNumber);
  cmd.add_option("--atol", o.atol, "Absolute residual tolerance")->check(CLI::NonNegativeNumber);
  cmd.add_option("--max-iter", o.max_iter, "Iteration cap per step")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hamiltonian Boundary Value Methods HBVM(k,s) with blended iteration", "hbvm"};
  // --h is the step size, so help is spelled out.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.add_option("--out", o.out, "Write the report to this file instead of stdout");
  app.fallthrough();

  auto* tableau = app.add_subcommand("tableau", "Butcher tableau of HBVM(k,s) on Gauss nodes");
  add_stage_options(*tableau, o);
  tableau->add_option("--selection", o.selection, "rule-of-thumb or first-s")
      ->check(CLI::IsMember({"rule-of-thumb", "first-s"}));

  auto* iso = app.add_subcommand("isospectral", "Check that A has the Gauss spectrum plus k - s zeros");
  add_stage_options(*iso, o);
  iso->add_option("--tol", o.tol, "Zero threshold and pairing tolerance")->check(CLI::PositiveNumber);
  iso->add_option("--random-sets", o.random_sets, "Also check C on this many random fundamental sets")
      ->check(CLI::NonNegativeNumber);
  iso->add_option("--seed", o.seed, "Seed for --random-sets");

  auto* gamma_table = app.add_subcommand("gamma-table", "Optimal gamma and rho* for s = 2..s-max");
  gamma_table->add_option("--s-max", o.s_max, "Largest s")->check(CLI::Range(1, 10));
  gamma_table->add_flag("--include-s1", o.include_s1, "Also print the s = 1 row");

  auto* cond = app.add_subcommand("cond", "Condition number of C(k,s) for k = s..k-max");
  cond->add_option("--s", o.s, "Polynomial degree s")->check(CLI::Range(1, 200));
  cond->add_option("--k-max", o.k_max, "Largest k")->check(CLI::Range(1, 200));
  cond->add_option("--selection", o.selection, "rule-of-thumb or first-s")
      ->check(CLI::IsMember({"rule-of-thumb", "first-s"}));

  auto* amp = app.add_subcommand("amplification", "rho(Z(iy)) of the blended iteration on the imaginary axis");
  add_stage_options(*amp, o);
  amp->add_option("--gamma", o.gamma, "Blending parameter (default: optimal)")->check(CLI::PositiveNumber);
  amp->add_option("--grid", o.grid, "Log-grid points over [1e-3, 1e3]")->check(CLI::Range(16, 1000000));

  auto* integ = app.add_subcommand("integrate", "Fixed-step trajectory as CSV");
  add_run_options(*integ, o);
  integ->add_option("--steps", o.steps, "Number of steps")->check(CLI::NonNegativeNumber);

  auto* energy = app.add_subcommand("energy", "Energy drift summary of a fixed-step run");
  add_run_options(*energy, o);
  energy->add_option("--steps", o.steps, "Number of steps")->check(CLI::NonNegativeNumber);

  auto* order = app.add_subcommand("order", "Observed order from successive step halvings");
  add_run_options(*order, o);
  order->add_option("--t-end", o.t_end, "Final time (a multiple of every step size)")->check(CLI::PositiveNumber);
  order->add_option("--levels", o.levels, "Number of step sizes h, h/2, ...")->check(CLI::Range(4, 12));

  for (CLI::App* sub : app.get_subcommands({})) sub->set_help_flag("--help", "Print this help message and exit");

  // Per-command defaults that differ from the shared ones.
  energy->preparse_callback([&o](std::size_t) {
    o.problem = "quartic";
    o.k = 4;
    o.steps = 10000;
  });
  order->preparse_callback([&o](std::size_t) { o.h = 0.5; });
  integ->preparse_callback([&o](std::size_t) { o.steps = 100; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  Report report;
  try {
    if (*tableau) report = cmd_tableau(o);
    else if (*iso) report = cmd_isospectral(o);
    else if (*gamma_table) report = cmd_gamma_table(o);
    else if (*cond) report = cmd_cond(o);
    else if (*amp) report = cmd_amplification(o);
    else if (*integ) report = cmd_integrate(o);
    else if (*energy) report = cmd_energy(o);
    else report = cmd_order(o);
  } catch (const UsageError& e) {
    err << "hbvm: " << e.what() << "\n";
    return kUsageError;
  } catch (const InvalidArgument& e) {
    err << "hbvm: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "hbvm: " << e.what() << "\n";
    return kVerificationFailure;
  }

  try {
    if (o.out.empty()) {
      out << report.text;
    } else {
      write_atomically(o.out, report.text);
    }
  } catch (const std::exception& e) {
    err << "hbvm: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return report.status;
}

}  // namespace hbvm::cli
