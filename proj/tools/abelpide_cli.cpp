// Command-line driver: kernel tables, single runs, convergence studies,
// parameter sweeps and the crossover comparison. All output is CSV.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "abelpide/abelpide.hpp"

namespace fs = std::filesystem;
using namespace abelpide;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  double tol = kDefaultWeightTolerance;
};

ExperimentConfig load(const Options& opt, ExperimentConfig defaults) {
  if (!(opt.tol > 0.0 && opt.tol <= 1e-8)) throw ConfigError("--tol must lie in (0, 1e-8]");
  if (opt.config_path.empty()) return defaults;
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("cannot open config file '" + opt.config_path + "'");
  return apply_config(parse_config(in), std::move(defaults));
}

void emit(const Options& opt, const std::string& name, const csv::Table& table) {
  fs::create_directories(opt.out_dir);
  const fs::path path = fs::path(opt.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  csv::write(out, table);
  fmt::print("wrote {}\n", path.string());
}

const ExponentSpec& exponent_of(const KernelFamily& k) {
  if (const auto* m = std::get_if<MultiscaleKernel>(&k)) return m->exponent;
  throw ConfigError("this command needs a multiscale kernel (kernel.kind = multiscale)");
}

void print_rates(const std::vector<ConvergenceRow>& rows, const char* level, const char* err) {
  fmt::print("{:>6} {:>14} {:>8}\n", level, err, "rate");
  for (const auto& r : rows) {
    fmt::print("{:>6} {:>14.4e} {:>8}\n", r.level, r.error,
               std::isnan(r.rate) ? std::string("-") : fmt::format("{:.2f}", r.rate));
  }
}

std::string tag(double v) { return fmt::format("{}", v); }

int cmd_kernel(const Options& opt) {
  const auto cfg = load(opt, default_kernel_compare());
  const auto& e = exponent_of(cfg.model.kernel);
  emit(opt, "kernel_compare.csv", kernel_compare_table(e, cfg.ml_beta, cfg.t_min, cfg.t_max, cfg.points));
  emit(opt, "kernel_family.csv",
       kernel_family_table(0.7, cfg.family_rates, cfg.ml_beta, cfg.t_min, cfg.t_max, cfg.points));
  emit(opt, "kernel.csv",
       kernel_table_csv(kernel_table(cfg.model.kernel, cfg.t_min, cfg.t_max, cfg.points, cfg.spacing)));
  return 0;
}

int cmd_solve(const Options& opt) {
  const auto cfg = load(opt, default_time_study());
  const auto traj = solve(cfg.model, opt.tol);
  emit(opt, "trajectory.csv", trajectory_csv(traj));
  emit(opt, "probe.csv", probe_csv(probe_series(traj, cfg.probe_x)));
  return 0;
}

int cmd_converge_time(const Options& opt) {
  const auto cfg = load(opt, default_time_study());
  const auto rows = converge_time(cfg.model, cfg.levels, opt.tol);
  print_rates(rows, "N", "E2");
  emit(opt, "converge_time.csv", convergence_csv(rows, "N", "E2"));
  return 0;
}

int cmd_converge_space(const Options& opt) {
  const auto cfg = load(opt, default_space_study());
  const auto rows = converge_space(cfg.model, cfg.levels, opt.tol);
  print_rates(rows, "M", "F2");
  emit(opt, "converge_space.csv", convergence_csv(rows, "M", "F2"));
  return 0;
}

int cmd_params(const Options& opt) {
  const auto cfg = load(opt, default_parameter_study());
  for (const auto& run : sweep_alpha(cfg.model, cfg.alphas, cfg.probe_x, opt.tol)) {
    emit(opt, "probe_alpha_" + tag(run.parameter) + ".csv", probe_csv(run.series));
  }
  for (const auto& run : sweep_mu(cfg.model, cfg.mus, cfg.probe_x, opt.tol)) {
    emit(opt, "probe_mu_" + tag(run.parameter) + ".csv", probe_csv(run.series));
  }
  return 0;
}

int cmd_crossover(const Options& opt) {
  const auto cfg = load(opt, default_crossover());
  const auto r = crossover(cfg.model, exponent_of(cfg.model.kernel), cfg.probe_x, opt.tol);
  emit(opt, "probe_k.csv", probe_csv(r.multiscale));
  emit(opt, "probe_k0.csv", probe_csv(r.short_time));
  emit(opt, "probe_kinf.csv", probe_csv(r.long_time));
  const auto gaps = crossover_gap_csv(r);
  emit(opt, "crossover_gap.csv", gaps);
  double max0 = 0.0;
  double maxinf = 0.0;
  for (const auto& row : gaps.rows) {
    max0 = std::max(max0, row[1]);
    maxinf = std::max(maxinf, row[2]);
  }
  fmt::print("max |u_k - u_k0| = {:.4e}, max |u_k - u_kinf| = {:.4e}\n", max0, maxinf);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent Abel kernel PIDE solver and experiment harness"};
  app.require_subcommand(1);
  Options opt;
  std::function<int(const Options&)> action;

  const auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "key = value config file");
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--tol", opt.tol, "memory weight tolerance")->capture_default_str();
    sub->callback([&action, fn] { action = fn; });
  };
  add("kernel", "tabulate k, k0, k_inf and the Mittag-Leffler kernel", cmd_kernel);
  add("solve", "run one simulation and dump the trajectory", cmd_solve);
  add("converge-time", "temporal self-refinement study (E2)", cmd_converge_time);
  add("converge-space", "spatial self-refinement study (F2)", cmd_converge_space);
  add("params", "probe u(x, t) across exponents and viscosities", cmd_params);
  add("crossover", "compare solutions under k, k0 and k_inf", cmd_crossover);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    return action(opt);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "solver error: {}\n", e.what());
    return kExitSolver;
  }
}
