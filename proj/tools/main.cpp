#include "egkit/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

struct SolveArgs {
  std::string problem;
  std::string method;
  int iters = 100;
  double step = 0.0;
  bool has_step = false;
  std::string x0;
  std::string out;
  int record_every = 1;
  double target = 0.0;
  bool lazy = false;
  bool force = false;
};

void add_solve_flags(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--problem", a.problem, "corpus problem name, e.g. rotation-2")
      ->required();
  cmd->add_option("--method", a.method, "aeg | apeg | eag | peag | fbfs | pfbfs")
      ->required();
  cmd->add_option("--iters", a.iters, "iteration budget")->check(CLI::NonNegativeNumber);
  cmd->add_option("--step", a.step, "step parameter (method default when omitted)")
      ->each([&a](const std::string&) { a.has_step = true; });
  cmd->add_option("--x0", a.x0, "initial point, e.g. \"1,0\"");
  cmd->add_option("--out", a.out, "trace CSV path");
  cmd->add_option("--record-every", a.record_every, "record every n-th row")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--target", a.target, "stop once the residual reaches this value");
  cmd->add_flag("--lazy", a.lazy, "skip optional diagnostics (natural residual column)");
  cmd->add_flag("--force", a.force, "run even if the step rule rejects the parameters");
}

egkit::ExperimentConfig to_config(const SolveArgs& a, bool certify) {
  egkit::ExperimentConfig cfg;
  cfg.problem = a.problem;
  cfg.method = a.method;
  cfg.iters = a.iters;
  if (a.has_step) cfg.step = a.step;
  if (!a.x0.empty()) cfg.x0 = egkit::parse_vector_literal(a.x0);
  cfg.out = a.out;
  cfg.record_every = a.record_every;
  cfg.target_residual = a.target;
  cfg.certify = certify;
  cfg.lazy = a.lazy;
  cfg.force = a.force;
  return cfg;
}

int run_solve(const SolveArgs& a, bool certify) {
  const egkit::ExperimentResult res = egkit::run_experiment(to_config(a, certify));
  if (res.exit_code >= 2) {
    std::fprintf(stderr, "error: %s\n", res.error.c_str());
    return res.exit_code;
  }
  if (certify) {
    std::fputs(res.report_text.c_str(), stdout);
  } else if (!res.trace.rows.empty()) {
    const auto& last = res.trace.rows.back();
    std::printf("%s on %s: k=%d res=%.17g\n", a.method.c_str(), a.problem.c_str(), last.k,
                last.res_w);
  }
  if (!a.out.empty()) std::printf("trace: %s\n", a.out.c_str());
  return res.exit_code;
}

void print_fit(const char* label, const egkit::RateFit& fit) {
  if (fit.underflow)
    std::printf("%s: slope=-inf (exact-zero residual in tail) points=%d\n", label,
                fit.n_points);
  else
    std::printf("%s: slope=%.6g intercept=%.6g points=%d\n", label, fit.slope,
                fit.intercept, fit.n_points);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inclusion solver benchmark harness"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  SolveArgs certify_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one method on one problem");
  add_solve_flags(solve_cmd, solve_args);
  CLI::App* certify_cmd =
      app.add_subcommand("certify", "run and check the decrease/rate certificates");
  add_solve_flags(certify_cmd, certify_args);

  std::string sweep_path;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a problems x methods grid");
  sweep_cmd->add_option("--config", sweep_path, "key=value sweep config file")->required();

  std::string rates_in;
  double tail = 0.5;
  bool best = false;
  CLI::App* rates_cmd = app.add_subcommand("rates", "fit log-log slopes of a trace CSV");
  rates_cmd->add_option("--in", rates_in, "trace CSV path")->required();
  rates_cmd->add_option("--tail", tail, "fraction of trailing rows to fit (default 0.5)");
  rates_cmd->add_flag("--best", best, "report only the best-iterate fit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args, false);
    if (certify_cmd->parsed()) return run_solve(certify_args, true);
    if (sweep_cmd->parsed()) {
      const egkit::SweepResult result = egkit::run_sweep(egkit::read_sweep_config(sweep_path));
      for (const auto& r : result.runs) {
        if (r.error.empty())
          std::printf("%s %s exit=%d %s\n", r.problem.c_str(), r.method.c_str(), r.exit_code,
                      r.out.c_str());
        else
          std::printf("%s %s exit=%d error: %s\n", r.problem.c_str(), r.method.c_str(),
                      r.exit_code, r.error.c_str());
      }
      std::printf("aggregate exit=%d\n", result.exit_code);
      return result.exit_code;
    }
    if (rates_cmd->parsed()) {
      const auto rows = egkit::read_csv(rates_in);
      if (best) {
        print_fit("best-iterate", egkit::fit_log_slope(rows, tail, true));
      } else {
        print_fit("last-iterate", egkit::fit_log_slope(rows, tail, false));
        print_fit("best-iterate", egkit::fit_log_slope(rows, tail, true));
      }
      return 0;
    }
  } catch (const egkit::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
