#pragma once

#include "egkit/core.hpp"
#include "egkit/schedules.hpp"
#include "egkit/solvers.hpp"

#include <string>
#include <vector>

// Machine-checkable certification: per-iteration potential/Lyapunov values,
// the theorems' O(1/k) residual envelopes, and monotone-decrease checking.
namespace egkit {

// Coefficient bundle for the potential of `m` at index k (normalizations:
// b₀ = 2γ for the momentum potentials, b₀ = 1 for the anchored ones).
struct LyapunovCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;      // coupling weight of the past variants; 0 otherwise
  double t = 0.0;      // t_k = k + 2
  double b0 = 0.0;
  double omega = 0.0;  // anchored-past smoothing parameter (13/4)
  double M = 0.0;      // anchored-past curvature constant 2(1+ω)L²
};
LyapunovCoeffs lyapunov_coeffs(Method m, int k, double step, double rho, double L);

// Momentum potential P_k = a_k‖w^{k−1}‖² + b_k⟨w^{k−1}, z^k−y^k⟩
//                        + ‖z^k + t_k(y^k−z^k) − x⋆‖², evaluated on the state
// entering step k (its w_prev/z/y fields). Requires problem.known_solution.
double potential_aeg(int k, const SolverState& s, const ProblemSpec& p, double gamma,
                     double rho);

// Past-variant potential adds c_k‖w^{k−1} − ŵ^{k−1}‖²; the state must carry the
// diagnostic residual (certification runs compute it every step).
double potential_apeg(int k, const SolverState& s, const ProblemSpec& p, double gamma,
                      double rho);

// Anchored Lyapunov V_k = a_k‖w^k‖² + b_k⟨w^k, x^k − x⁰⟩ on the state at row k.
double lyapunov_eag(int k, const SolverState& s, const ProblemSpec& p, double eta,
                    double rho);

// Anchored-past Lyapunov adds c_k‖w^k − ŵ^k‖².
double lyapunov_peag(int k, const SolverState& s, const ProblemSpec& p, double eta,
                     double rho);

struct BoundParams {
  double step = 0.0;  // γ for momentum methods, η for anchored ones
  double rho = 0.0;
  double L = 0.0;
};

// The theorem envelope for ‖w^k‖² at iteration k, from d = ‖x⁰ − x⋆‖ and
// r = ‖w⁰‖. Parameters must be admissible; baselines have no envelope.
double theoretical_bound(Method m, int k, double x0_dist, double w0_norm,
                         const BoundParams& params);

struct DecreaseReport {
  bool ok = true;
  int first_violation = -1;  // index into the series
  double margin = 0.0;       // amount above the tolerated increase
};

// series[i+1] <= series[i] + rel_tol*(1 + |series[i]|) for all i.
DecreaseReport check_monotone_decrease(const std::vector<double>& series, double rel_tol);

struct CertReport {
  bool lyapunov_checked = false;
  DecreaseReport lyapunov;
  bool bound_checked = false;
  bool bound_ok = true;
  int bound_worst_k = -1;
  double bound_worst_excess = 0.0;  // max of res² − bound·(1+tol)
  Admissibility admissibility;
  bool admissibility_overridden = false;
  bool aborted = false;

  bool pass() const {
    return admissibility.ok && !aborted && (!lyapunov_checked || lyapunov.ok) &&
           (!bound_checked || bound_ok);
  }
};

// Checks the Lyapunov column for monotone decrease and every recorded residual
// against its envelope: ‖w^k‖² ≤ bound_k·(1 + rel_tol).
CertReport certify_trace(const Trace& trace, double rel_tol = 1e-8);

// Deterministic plain-text rendering ("lyapunov: PASS", "bound: PASS", ...).
std::string format_report(const Trace& trace, const CertReport& report);

}  // namespace egkit
