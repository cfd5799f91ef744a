#pragma once

#include "egkit/core.hpp"

#include <string>
#include <vector>

// Per-iteration parameter schedules and admissibility windows for the solver
// family. Anchored variants are driven by (τ_k, β_k), momentum variants by
// (t_k, θ_k, ν_k, γ); η and η̂_k are common to all.
namespace egkit {

enum class Method { AEG, APEG, EAG, PEAG, FBFS, PFBFS };

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // case-insensitive; ConfigError on unknown

struct ScheduleEntry {
  int k = 0;
  double t = 0.0;        // t_k = k + 2
  double theta = 0.0;    // θ_k = (t_k − 1)/t_{k+1}
  double nu = 0.0;       // ν_k = t_k/t_{k+1}
  double eta = 0.0;      // resolvent step η
  double eta_hat = 0.0;  // correction weight η̂_k
  double gamma = 0.0;    // extrapolation step γ (momentum methods)
  double tau = 0.0;      // anchor weight τ_k = 1/(k+2)
  double beta = 0.0;     // anchored-past damping β_k
  Method method = Method::AEG;
};

// Which ScheduleEntry fields actually drive a method's update; the rest are
// populated with their universal formulas but flagged unused here.
struct ScheduleFieldUse {
  bool momentum = false;  // t, theta, nu, gamma
  bool anchor = false;    // tau
  bool damping = false;   // beta
};
ScheduleFieldUse schedule_field_use(Method m);

// Momentum schedule with η = γ + 2ρ. Requires γ > 0 and γ + 2ρ > 0.
ScheduleEntry aeg_schedule(int k, double gamma, double rho);

// Past-variant momentum schedule with η = 2(3γ + 2ρ). Requires γ > 0, 3γ + 2ρ > 0.
ScheduleEntry apeg_schedule(int k, double gamma, double rho);

// Anchored schedule: τ_k = 1/(k+2), η̂_k = (1−τ_k)η. Requires η > 0 and η > 2ρ.
ScheduleEntry eag_schedule(int k, double eta, double rho);

// Anchored-past schedule: adds β_k = 4ρ(1−τ_k)/(1+τ_k). Requires η > 0, η > 4ρ.
ScheduleEntry peag_schedule(int k, double eta, double rho);

// Constant-step baselines with η̂ = η.
ScheduleEntry baseline_schedule(Method m, int k, double eta);

// Dispatch on method; `step` is γ for momentum methods and η for the rest.
ScheduleEntry make_schedule(Method m, int k, double step, double rho);

// Theorem-backed default steps:
//   AEG   γ = 1/L − 2ρ          (ρ < 0: midpoint of the admissible γ-window)
//   APEG  γ̄ = (√(29−92L²ρ²) − 74Lρ)/(116L), the root saturating the admissibility bound
//   EAG   η = 1/L
//   PEAG  η = (1/L)·√(2/17)
//   FBFS  η = 0.5/L     PFBFS  η = 0.3/L
// Throws StepRuleError naming the failed inequality when no admissible default exists.
double default_step(Method m, double L, double rho);

struct Violation {
  std::string name;  // the inequality, e.g. "2√34·Lρ < 1"
  double margin;     // amount by which it fails (positive when violated)
};

struct Admissibility {
  bool ok = true;
  std::vector<Violation> violated;
};

// Checks the theorem conditions for (L, ρ, step); baselines check their step range.
Admissibility admissibility_check(Method m, double L, double rho, double step);

}  // namespace egkit
