#pragma once

#include "egkit/core.hpp"
#include "egkit/schedules.hpp"

#include <optional>
#include <string>
#include <vector>

// Step functions and the run driver. Index convention: trace row k carries the
// k-th iterate x^k and its residual element w^k = Fx^k + ξ^k in the theorems'
// numbering, so the O(1/k) envelopes apply row-wise; row 0 is the initial point.
namespace egkit {

struct SolverState {
  Method method = Method::AEG;
  int k = 0;          // index of the next step to execute
  Vector x;           // latest iterate x^k
  Vector y;           // extrapolated point y^k (momentum/baseline methods: the next one)
  Vector z;           // averaged point z^k (momentum methods)
  Vector x_prev;      // momentum lag for the next step (phantom x^{−1} before step 0)
  Vector w;           // residual element w^k (diagnostic for the past variants)
  Vector w_hat;       // past surrogate ŵ^k
  Vector w_prev;      // lagged w^{k−1} (momentum) resp. ŵ^{k−1}
  Vector xi;          // T-component ξ^k of the residual
  Vector anchor;      // x⁰ for anchored methods
  Vector f_lag;       // Fy^{k−1} (PEAG) or Fx^{k−1} (PFBFS)
};

// Builds the initial state; ξ⁰ comes from the problem's selection oracle or the
// validated zero default (J_{ηT}(x⁰ + ηξ⁰) must reproduce x⁰ within 1e-10).
SolverState init_state(Method m, const ProblemSpec& problem, const ScheduleEntry& sched0,
                       const Vector& x0);

// One iteration of each scheme. Every step consumes exactly one resolvent
// evaluation; F-evaluation counts are 2 (AEG/EAG/FBFS) and 1 (APEG/PEAG/PFBFS).
// `diagnostic_w` spends one extra F evaluation to form the certified residual
// w^k ∈ Fx^k + Tx^k for the past variants.
SolverState aeg_step(SolverState s, const ScheduleEntry& sched, const ProblemSpec& p);
SolverState apeg_step(SolverState s, const ScheduleEntry& sched, const ProblemSpec& p,
                      bool diagnostic_w = false);
SolverState eag_step(SolverState s, const ScheduleEntry& sched, const ProblemSpec& p);
SolverState peag_step(SolverState s, const ScheduleEntry& sched, const ProblemSpec& p,
                      bool diagnostic_w = false);
SolverState fbfs_step(SolverState s, const ScheduleEntry& sched, const ProblemSpec& p);
SolverState pfbfs_step(SolverState s, const ScheduleEntry& sched, const ProblemSpec& p);

// Differential-testing twin of the momentum methods with the averaged point
// eliminated: y^{k+1} = x^k + θ_k(x^k − x^{k−1}) − β_k w + σ_k w_prev (− F-difference
// correction for the non-past form), β_k = γ(1+θ_k−ν_k) − ην_k, σ_k = γθ_k − ν_k η̂_k.
SolverState eliminated_step(Method m, SolverState s, const ScheduleEntry& sched,
                            const ProblemSpec& p);

// Residual norm the driver monitors: ‖w‖ when populated, else ‖ŵ‖.
double residual_norm(const SolverState& s);

struct RunConfig {
  int max_iters = 100;
  double target_residual = 0.0;         // stop once ‖w^k‖ ≤ target (∞ disables)
  std::optional<double> step;           // γ resp. η; defaulted per method when absent
  int record_every = 1;                 // row 0 and the final row are always kept
  bool certify = false;                 // populate Lyapunov/bound columns
  bool lazy_diagnostics = false;        // skip ‖G_η x‖ and the past variants' extra F eval
  bool allow_inadmissible = false;      // proceed past a failed admissibility check
};

struct TraceRow {
  int k = 0;
  double res_w = 0.0;                   // ‖w^k‖ (‖ŵ^k‖ when running lazy past variants)
  std::optional<double> res_nat;        // ‖G_η x^k‖
  std::optional<double> dist;           // ‖x^k − x⋆‖
  std::optional<double> lyapunov;       // potential value at index k
  std::optional<double> bound;          // theorem envelope for ‖w^k‖²
};

struct TraceMeta {
  Method method = Method::AEG;
  std::string problem;
  double step = 0.0;
  double eta = 0.0;
  double rho = 0.0;
  double L = 0.0;
  Admissibility admissibility;
  bool admissibility_overridden = false;
  bool aborted = false;
  std::string abort_reason;
};

struct Trace {
  TraceMeta meta;
  std::vector<TraceRow> rows;
};

// Runs `method` from x0, recording rows k = 0..max_iters (subject to
// record_every; early stop on the residual target). Inadmissible parameters
// throw StepRuleError unless config.allow_inadmissible; non-finite iterates
// abort the run with the trace retained up to the failure.
Trace run(Method method, const ProblemSpec& problem, const RunConfig& config, const Vector& x0);

}  // namespace egkit
