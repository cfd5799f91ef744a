#include "egkit/solvers.hpp"

#include "egkit/certify.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace egkit {
namespace {

Vector eval_F(const ProblemSpec& p, const Vector& v) {
  if (!p.F.eval) throw ConfigError("problem has no forward operator");
  Vector f = p.F.eval(v);
  if (f.size() != v.size() || !f.allFinite())
    throw NumericalError("forward operator returned a non-finite value");
  return f;
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NumericalError(std::string(what) + " became non-finite");
}

// Momentum coefficients of the eliminated form.
double elim_beta(const ScheduleEntry& c) {
  return c.gamma * (1.0 + c.theta - c.nu) - c.eta * c.nu;
}
double elim_sigma(const ScheduleEntry& c) {
  return c.gamma * c.theta - c.nu * c.eta_hat;
}

}  // namespace

SolverState init_state(Method m, const ProblemSpec& problem, const ScheduleEntry& sched0,
                       const Vector& x0) {
  if (x0.size() == 0) throw ConfigError("initial point is empty");
  if (!x0.allFinite()) throw NumericalError("initial point is not finite");
  if (problem.dimension > 0 && x0.size() != problem.dimension)
    throw ConfigError("initial point dimension mismatch");

  SolverState st;
  st.method = m;
  st.k = 0;

  if (m == Method::FBFS) {
    st.y = x0;
    return st;
  }
  if (m == Method::PFBFS) {
    st.y = x0;
    st.f_lag = eval_F(problem, x0);  // F at the phantom iterate x^{-1} := y⁰
    return st;
  }

  // ξ⁰ from the selection oracle, defaulting to zero; either way it must satisfy
  // the resolvent characterization J_{ηT}(x⁰ + ηξ⁰) = x⁰.
  Vector xi0 = problem.T.selection ? problem.T.selection(x0) : Vector(Vector::Zero(x0.size()));
  if (xi0.size() != x0.size() || !xi0.allFinite())
    throw ResolventError("selection oracle returned an invalid element");
  Vector back = resolvent_apply(problem.T, sched0.eta, x0 + sched0.eta * xi0);
  if ((back - x0).norm() > 1e-10 * (1.0 + x0.norm()))
    throw ResolventError("selection validation failed: xi0 is not an element of Tx0");

  Vector Fx0 = eval_F(problem, x0);
  st.x = x0;
  st.xi = xi0;
  st.w = Fx0 + xi0;

  switch (m) {
    case Method::AEG:
    case Method::APEG:
      st.y = x0;
      st.z = x0;
      // Lagged residual scaled so that step 0 reproduces (x⁰, w⁰) exactly.
      st.w_prev = (sched0.eta / sched0.eta_hat) * st.w;
      // Phantom x^{-1} consistent with z⁰ = x^{-1} − γ w^{-1}, for the eliminated twin.
      st.x_prev = x0 + sched0.gamma * st.w_prev;
      break;
    case Method::EAG:
      st.anchor = x0;
      break;
    case Method::PEAG:
      st.anchor = x0;
      st.w_hat = st.w;  // ŵ⁰ = w⁰ under the y^{-1} := x⁰ convention
      st.f_lag = Fx0;
      break;
    default:
      break;
  }
  return st;
}

SolverState aeg_step(SolverState s, const ScheduleEntry& c, const ProblemSpec& p) {
  const double eta = c.eta;
  Vector Fy = eval_F(p, s.y);
  Vector u = s.y - eta * Fy + c.eta_hat * s.w_prev;
  Vector x = resolvent_apply(p.T, eta, u);
  Vector xi = (u - x) / eta;  // ∈ Tx
  Vector Fx = eval_F(p, x);
  Vector w = Fx + xi;
  Vector z_next = x - c.gamma * w;
  Vector y_next = z_next + c.theta * (z_next - s.z) + c.nu * (s.y - z_next);
  require_finite(w, "residual");
  require_finite(y_next, "extrapolated point");

  s.x_prev = x;  // momentum lag for the next step (phantom x^{-1} before step 0)
  s.x = std::move(x);
  s.xi = std::move(xi);
  s.w = w;
  s.w_prev = std::move(w);
  s.z = std::move(z_next);
  s.y = std::move(y_next);
  ++s.k;
  return s;
}

SolverState apeg_step(SolverState s, const ScheduleEntry& c, const ProblemSpec& p,
                      bool diagnostic_w) {
  const double eta = c.eta;
  Vector Fy = eval_F(p, s.y);
  Vector u = s.y - eta * Fy + c.eta_hat * s.w_prev;
  Vector x = resolvent_apply(p.T, eta, u);
  Vector xi = (u - x) / eta;      // ∈ Tx
  Vector w_hat = Fy + xi;         // ŵ^k, no fresh F evaluation at x
  Vector z_next = x - c.gamma * w_hat;
  Vector y_next = z_next + c.theta * (z_next - s.z) + c.nu * (s.y - z_next);
  require_finite(w_hat, "past residual");
  require_finite(y_next, "extrapolated point");

  if (diagnostic_w) {
    s.w = eval_F(p, x) + xi;  // certified w^k ∈ Fx^k + Tx^k
  } else {
    s.w.resize(0);
  }
  s.x_prev = x;  // momentum lag for the next step
  s.x = std::move(x);
  s.xi = std::move(xi);
  s.w_hat = w_hat;
  s.w_prev = std::move(w_hat);
  s.z = std::move(z_next);
  s.y = std::move(y_next);
  ++s.k;
  return s;
}

SolverState eag_step(SolverState s, const ScheduleEntry& c, const ProblemSpec& p) {
  const double eta = c.eta;
  const double anchor_coeff = c.eta_hat - 2.0 * p.rho * (1.0 - c.tau);
  Vector y = s.x + c.tau * (s.anchor - s.x) - anchor_coeff * s.w;
  Vector Fy = eval_F(p, y);
  Vector u = y - eta * Fy + c.eta_hat * s.w;
  Vector x_next = resolvent_apply(p.T, eta, u);
  Vector xi_next = (u - x_next) / eta;  // ∈ Tx^{k+1}
  Vector Fx_next = eval_F(p, x_next);
  Vector w_next = Fx_next + xi_next;
  require_finite(w_next, "residual");

  s.y = std::move(y);
  s.x = std::move(x_next);
  s.xi = std::move(xi_next);
  s.w = std::move(w_next);
  ++s.k;
  return s;
}

SolverState peag_step(SolverState s, const ScheduleEntry& c, const ProblemSpec& p,
                      bool diagnostic_w) {
  const double eta = c.eta;
  Vector y = s.x + c.tau * (s.anchor - s.x) - (c.eta_hat - c.beta) * s.w_hat;
  Vector Fy = eval_F(p, y);
  Vector u = y - eta * Fy + c.eta_hat * s.w_hat;
  Vector x_next = resolvent_apply(p.T, eta, u);
  Vector xi_next = (u - x_next) / eta;   // ∈ Tx^{k+1}
  Vector w_hat_next = Fy + xi_next;      // ŵ^{k+1} = Fy^k + ξ^{k+1}
  require_finite(w_hat_next, "past residual");

  if (diagnostic_w) {
    s.w = eval_F(p, x_next) + xi_next;  // certified w^{k+1}
  } else {
    s.w.resize(0);
  }
  s.y = std::move(y);
  s.x = std::move(x_next);
  s.xi = std::move(xi_next);
  s.w_hat = std::move(w_hat_next);
  s.f_lag = std::move(Fy);
  ++s.k;
  return s;
}

SolverState fbfs_step(SolverState s, const ScheduleEntry& c, const ProblemSpec& p) {
  const double eta = c.eta;
  Vector Fy = eval_F(p, s.y);
  Vector u = s.y - eta * Fy;
  Vector x = resolvent_apply(p.T, eta, u);
  Vector xi = (u - x) / eta;  // ∈ Tx
  Vector Fx = eval_F(p, x);
  Vector w = Fx + xi;
  Vector y_next = x - (c.eta_hat * Fx - eta * Fy);
  require_finite(y_next, "forward-corrected point");

  s.x = std::move(x);
  s.xi = std::move(xi);
  s.w = std::move(w);
  s.y = std::move(y_next);
  ++s.k;
  return s;
}

SolverState pfbfs_step(SolverState s, const ScheduleEntry& c, const ProblemSpec& p) {
  const double eta = c.eta;
  Vector u = s.y - eta * s.f_lag;  // f_lag = Fx^{k-1}
  Vector x = resolvent_apply(p.T, eta, u);
  Vector xi = (u - x) / eta;  // ∈ Tx
  Vector Fx = eval_F(p, x);
  Vector w = Fx + xi;
  Vector y_next = x - (c.eta_hat * Fx - eta * s.f_lag);
  require_finite(y_next, "forward-corrected point");

  s.x = std::move(x);
  s.xi = std::move(xi);
  s.w = std::move(w);
  s.f_lag = std::move(Fx);
  s.y = std::move(y_next);
  ++s.k;
  return s;
}

SolverState eliminated_step(Method m, SolverState s, const ScheduleEntry& c,
                            const ProblemSpec& p) {
  if (m != Method::AEG && m != Method::APEG)
    throw ConfigError("eliminated form exists only for the momentum methods");
  const double eta = c.eta;
  const double beta = elim_beta(c);
  const double sigma = elim_sigma(c);

  Vector Fy = eval_F(p, s.y);
  Vector u = s.y - eta * Fy + c.eta_hat * s.w_prev;
  Vector x = resolvent_apply(p.T, eta, u);
  Vector xi = (u - x) / eta;

  Vector y_next;
  Vector res;  // the lagged quantity this form recurses on
  if (m == Method::AEG) {
    Vector Fx = eval_F(p, x);
    res = Fx + xi;
    y_next = x + c.theta * (x - s.x_prev) - beta * res + sigma * s.w_prev -
             eta * c.nu * (Fx - Fy);
    s.w = res;
  } else {
    res = Fy + xi;  // ŵ^k; no F-difference correction in the past variant
    y_next = x + c.theta * (x - s.x_prev) - beta * res + sigma * s.w_prev;
    s.w_hat = res;
    s.w.resize(0);
  }
  require_finite(y_next, "extrapolated point");

  s.x_prev = x;  // momentum lag for the next step
  s.x = std::move(x);
  s.xi = std::move(xi);
  s.w_prev = std::move(res);
  s.y = std::move(y_next);
  ++s.k;
  return s;
}

double residual_norm(const SolverState& s) {
  if (s.w.size() > 0) return s.w.norm();
  if (s.w_hat.size() > 0) return s.w_hat.norm();
  throw NumericalError("state carries no residual yet");
}

namespace {

SolverState dispatch_step(Method m, SolverState s, const ScheduleEntry& c,
                          const ProblemSpec& p, bool diag) {
  switch (m) {
    case Method::AEG: return aeg_step(std::move(s), c, p);
    case Method::APEG: return apeg_step(std::move(s), c, p, diag);
    case Method::EAG: return eag_step(std::move(s), c, p);
    case Method::PEAG: return peag_step(std::move(s), c, p, diag);
    case Method::FBFS: return fbfs_step(std::move(s), c, p);
    case Method::PFBFS: return pfbfs_step(std::move(s), c, p);
  }
  throw ConfigError("unreachable method tag");
}

bool is_momentum(Method m) { return m == Method::AEG || m == Method::APEG; }
bool is_anchored(Method m) { return m == Method::EAG || m == Method::PEAG; }

}  // namespace

Trace run(Method method, const ProblemSpec& problem, const RunConfig& config,
          const Vector& x0) {
  if (config.max_iters < 0) throw ConfigError("max_iters must be nonnegative");
  if (config.record_every < 1) throw ConfigError("record_every must be at least 1");
  if (std::isnan(config.target_residual) || config.target_residual < 0.0)
    throw ConfigError("target residual must be nonnegative");

  const double L = problem.F.lipschitz_L;
  const double rho = problem.rho;
  const double step = config.step ? *config.step : default_step(method, L, rho);

  Trace tr;
  tr.meta.method = method;
  tr.meta.step = step;
  tr.meta.rho = rho;
  tr.meta.L = L;
  tr.meta.admissibility = admissibility_check(method, L, rho, step);
  if (!tr.meta.admissibility.ok) {
    if (!config.allow_inadmissible) {
      std::string names;
      for (const auto& v : tr.meta.admissibility.violated) {
        if (!names.empty()) names += "; ";
        names += v.name;
      }
      throw StepRuleError("inadmissible parameters: " + names);
    }
    tr.meta.admissibility_overridden = true;
  }

  const ScheduleEntry sched0 = make_schedule(method, 0, step, rho);
  tr.meta.eta = sched0.eta;

  SolverState st = init_state(method, problem, sched0, x0);

  const bool have_sol = problem.known_solution.has_value();
  const bool accelerated = is_momentum(method) || is_anchored(method);
  const bool do_lyap = config.certify && have_sol && accelerated;
  const bool do_bound = config.certify && have_sol && accelerated && tr.meta.admissibility.ok;
  const bool diag = !config.lazy_diagnostics || config.certify;
  const double d0 = have_sol ? (x0 - *problem.known_solution).norm() : 0.0;
  const double r0 = (st.w.size() > 0) ? st.w.norm() : 0.0;
  const BoundParams bp{step, rho, L};
  const bool stop_enabled = std::isfinite(config.target_residual);

  auto make_row = [&](int k, std::optional<double> lyap) {
    TraceRow row;
    row.k = k;
    row.res_w = residual_norm(st);
    if (!config.lazy_diagnostics)
      row.res_nat = natural_residual(problem, sched0.eta, st.x).norm();
    if (have_sol) row.dist = (st.x - *problem.known_solution).norm();
    row.lyapunov = lyap;
    if (do_bound) row.bound = theoretical_bound(method, k, d0, r0, bp);
    return row;
  };

  try {
    if (is_anchored(method)) {
      // Row 0 is the initial point itself; paper-step k produces row k+1.
      std::optional<double> lyap0;
      if (do_lyap) {
        lyap0 = (method == Method::EAG) ? lyapunov_eag(0, st, problem, step, rho)
                                        : lyapunov_peag(0, st, problem, step, rho);
      }
      tr.rows.push_back(make_row(0, lyap0));
      if (stop_enabled && tr.rows.back().res_w <= config.target_residual) return tr;
      for (int k = 1; k <= config.max_iters; ++k) {
        st = dispatch_step(method, std::move(st), make_schedule(method, k - 1, step, rho),
                           problem, diag);
        const double res = residual_norm(st);
        const bool stop = stop_enabled && res <= config.target_residual;
        if (k % config.record_every == 0 || k == config.max_iters || stop) {
          std::optional<double> lyap;
          if (do_lyap) {
            lyap = (method == Method::EAG) ? lyapunov_eag(k, st, problem, step, rho)
                                           : lyapunov_peag(k, st, problem, step, rho);
          }
          tr.rows.push_back(make_row(k, lyap));
        }
        if (stop) break;
      }
    } else {
      // Momentum methods and baselines: step k produces row k; step 0 reproduces
      // the initial point for the momentum methods.
      for (int k = 0; k <= config.max_iters; ++k) {
        std::optional<double> lyap;
        if (do_lyap) {
          // The potential at index k is a function of the state entering step k.
          lyap = (method == Method::AEG) ? potential_aeg(k, st, problem, step, rho)
                                         : potential_apeg(k, st, problem, step, rho);
        }
        st = dispatch_step(method, std::move(st), make_schedule(method, k, step, rho),
                           problem, diag);
        const double res = residual_norm(st);
        const bool stop = stop_enabled && res <= config.target_residual;
        if (k % config.record_every == 0 || k == config.max_iters || stop) {
          tr.rows.push_back(make_row(k, lyap));
        }
        if (stop) break;
      }
    }
  } catch (const NumericalError& e) {
    tr.meta.aborted = true;
    tr.meta.abort_reason = e.what();
  } catch (const ResolventError& e) {
    tr.meta.aborted = true;
    tr.meta.abort_reason = e.what();
  }
  return tr;
}

}  // namespace egkit
