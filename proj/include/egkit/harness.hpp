#pragma once

#include "egkit/certify.hpp"
#include "egkit/core.hpp"
#include "egkit/problems.hpp"
#include "egkit/solvers.hpp"

#include <optional>
#include <string>
#include <vector>

// Experiment harness: CSV traces, log-log rate fits, single runs with process
// exit codes, and config-driven sweeps.
namespace egkit {

// CSV schema (LF line endings, %.17g doubles, empty field = value not recorded):
//   k,res_w,res_nat,dist,lyapunov,bound
extern const char* const kCsvHeader;

std::string rows_to_csv(const std::vector<TraceRow>& rows);
std::string trace_to_csv(const Trace& trace);
void write_csv(const Trace& trace, const std::string& path);
std::vector<TraceRow> parse_csv(const std::string& text);
std::vector<TraceRow> read_csv(const std::string& path);

struct RateFit {
  double slope = 0.0;          // least-squares slope of log res against log k
  double intercept = 0.0;
  double tail_fraction = 0.0;  // fraction of trailing rows the fit used
  double r_squared = 0.0;      // coefficient of determination of the log-log fit
  int n_points = 0;            // tail points entering the fit
  bool underflow = false;      // a tail residual was exactly zero; slope is −∞
};

// Fits log(res_w) ~ slope·log(k) + intercept over the last ⌈tail_fraction·n⌉
// of the rows with k ≥ 1 (best_iterate swaps in the running minimum of res_w).
// Throws ConfigError when fewer than 10 rows land in the tail.
RateFit fit_log_slope(const std::vector<TraceRow>& rows, double tail_fraction,
                      bool best_iterate = false);
RateFit fit_log_slope(const Trace& trace, double tail_fraction, bool best_iterate = false);

// "1,0", "[1, 0]" and "(1,0)" all parse to the vector (1,0).
Vector parse_vector_literal(const std::string& text);

struct ExperimentConfig {
  std::string problem;               // corpus name, e.g. "rotation-2"
  std::string method;                // scheme name, e.g. "aeg"
  int iters = 100;
  std::optional<double> step;        // per-method default when absent
  std::optional<Vector> x0;          // corpus default start when absent
  std::string out;                   // CSV path; certification adds "<out>.cert"
  int record_every = 1;
  double target_residual = 0.0;
  bool certify = false;
  bool lazy = false;                 // skip the optional diagnostics
  bool force = false;                // run despite a failed admissibility check
};

// 0 = success, 1 = certification failure, 2 = configuration or step-rule
// rejection, 3 = numerical abort.
struct ExperimentResult {
  int exit_code = 0;
  Trace trace;
  std::optional<CertReport> report;
  std::string report_text;
  std::string error;                 // message for exit codes 2 and 3
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Flat key=value config ('#' comments; lists comma-separated):
//   problems, methods, iters, step, x0, certify, record_every, out_dir
struct SweepConfig {
  std::vector<std::string> problems;
  std::vector<std::string> methods;
  int iters = 100;
  std::optional<double> step;
  std::optional<Vector> x0;
  bool certify = true;
  int record_every = 1;
  std::string out_dir = "sweep-out";
};

SweepConfig parse_sweep_config(const std::string& text);
SweepConfig read_sweep_config(const std::string& path);

struct SweepRunSummary {
  std::string problem;
  std::string method;
  std::string out;
  int exit_code = 0;
  std::string error;
};

struct SweepResult {
  int exit_code = 0;  // max exit code over all runs
  std::vector<SweepRunSummary> runs;
};

// Runs every problem × method pair concurrently, one CSV per pair at
// <out_dir>/<problem>__<method>.csv (plus .cert files when certifying).
SweepResult run_sweep(const SweepConfig& cfg);

}  // namespace egkit
