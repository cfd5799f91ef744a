#include "egkit/certify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace egkit {
namespace {

const Vector& solution_of(const ProblemSpec& p) {
  if (!p.known_solution) throw ConfigError("certification needs problem.known_solution");
  return *p.known_solution;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

LyapunovCoeffs lyapunov_coeffs(Method m, int k, double step, double rho, double L) {
  if (k < 0) throw StepRuleError("potential index must be nonnegative");
  const double kk = static_cast<double>(k);
  LyapunovCoeffs c;
  c.t = kk + 2.0;
  switch (m) {
    case Method::AEG: {
      const double g = step;
      c.b0 = 2.0 * g;
      c.b = g * (kk + 1.0) * (kk + 2.0);
      c.a = g * (kk + 1.0) * (g * kk + 3.0 * g + 2.0 * rho) / 2.0;
      return c;
    }
    case Method::APEG: {
      const double g = step;
      c.b0 = 2.0 * g;
      c.b = g * (kk + 1.0) * (kk + 2.0);
      c.a = g * (kk + 1.0) * (g * kk + 5.0 * g + 2.0 * rho) / 2.0;
      c.c = g * (kk + 1.0) * ((31.0 * g + 20.0 * rho) * (kk + 1.0) + g) / 2.0;
      return c;
    }
    case Method::EAG: {
      const double eta = step;
      c.b0 = 1.0;
      c.b = kk + 1.0;
      c.a = ((eta - 2.0 * rho) * (kk + 1.0) + 2.0 * rho) * (kk + 1.0) / 2.0;
      return c;
    }
    case Method::PEAG: {
      const double eta = step;
      c.b0 = 1.0;
      c.omega = 13.0 / 4.0;
      c.M = 2.0 * (1.0 + c.omega) * L * L;
      c.b = kk + 1.0;
      c.a = (c.b / 2.0) *
            (eta * (kk + 1.0) - 4.0 * rho * kk + 2.0 * rho * (kk - 1.0) / (kk + 3.0));
      c.c = (c.b / 2.0) *
            (c.M * eta * eta * eta * (kk + 1.0) +
             8.0 * rho * (kk + 2.0) * (kk + 2.0) / (kk + 3.0));
      return c;
    }
    default:
      throw StepRuleError("no potential is defined for the baseline splittings");
  }
}

double potential_aeg(int k, const SolverState& s, const ProblemSpec& p, double gamma,
                     double rho) {
  const Vector& xstar = solution_of(p);
  if (s.w_prev.size() == 0 || s.z.size() == 0 || s.y.size() == 0)
    throw ConfigError("potential needs a momentum-form state");
  const LyapunovCoeffs c = lyapunov_coeffs(Method::AEG, k, gamma, rho, p.F.lipschitz_L);
  const Vector shifted = s.z + c.t * (s.y - s.z) - xstar;
  return c.a * s.w_prev.squaredNorm() + c.b * s.w_prev.dot(s.z - s.y) +
         shifted.squaredNorm();
}

double potential_apeg(int k, const SolverState& s, const ProblemSpec& p, double gamma,
                      double rho) {
  const Vector& xstar = solution_of(p);
  if (s.w_prev.size() == 0 || s.z.size() == 0 || s.y.size() == 0)
    throw ConfigError("potential needs a momentum-form state");
  // Entering step k the state carries ŵ^{k−1} (w_prev) and the diagnostic
  // w^{k−1} (w); at k = 0 both lags coincide by construction.
  const Vector& w_hat_lag = s.w_prev;
  const Vector& w_lag = (k == 0) ? s.w_prev : s.w;
  if (w_lag.size() == 0)
    throw ConfigError("past-variant potential needs the diagnostic residual");
  const LyapunovCoeffs c = lyapunov_coeffs(Method::APEG, k, gamma, rho, p.F.lipschitz_L);
  const Vector shifted = s.z + c.t * (s.y - s.z) - xstar;
  return c.a * w_lag.squaredNorm() + c.b * w_lag.dot(s.z - s.y) + shifted.squaredNorm() +
         c.c * (w_lag - w_hat_lag).squaredNorm();
}

double lyapunov_eag(int k, const SolverState& s, const ProblemSpec& p, double eta,
                    double rho) {
  if (s.w.size() == 0 || s.anchor.size() == 0)
    throw ConfigError("anchored Lyapunov needs w and the anchor");
  const LyapunovCoeffs c = lyapunov_coeffs(Method::EAG, k, eta, rho, p.F.lipschitz_L);
  return c.a * s.w.squaredNorm() + c.b * s.w.dot(s.x - s.anchor);
}

double lyapunov_peag(int k, const SolverState& s, const ProblemSpec& p, double eta,
                     double rho) {
  if (s.w.size() == 0)
    throw ConfigError("anchored-past Lyapunov needs the diagnostic residual");
  if (s.w_hat.size() == 0 || s.anchor.size() == 0)
    throw ConfigError("anchored-past Lyapunov needs ŵ and the anchor");
  const LyapunovCoeffs c = lyapunov_coeffs(Method::PEAG, k, eta, rho, p.F.lipschitz_L);
  return c.a * s.w.squaredNorm() + c.b * s.w.dot(s.x - s.anchor) +
         c.c * (s.w - s.w_hat).squaredNorm();
}

double theoretical_bound(Method m, int k, double x0_dist, double w0_norm,
                         const BoundParams& params) {
  if (k < 0) throw StepRuleError("bound index must be nonnegative");
  const Admissibility adm = admissibility_check(m, params.L, params.rho, params.step);
  if (!adm.ok) {
    std::string names;
    for (const auto& v : adm.violated) {
      if (!names.empty()) names += "; ";
      names += v.name;
    }
    throw StepRuleError("bound undefined for inadmissible parameters: " + names);
  }
  const double d2 = x0_dist * x0_dist;
  const double r2 = w0_norm * w0_norm;
  const double kk = static_cast<double>(k);
  const double rho = params.rho;
  switch (m) {
    case Method::AEG: {
      const double g = params.step;
      return (4.0 * d2 + 8.0 * g * (3.0 * g + 2.0 * rho) * r2) /
             (g * g * (kk + 2.0) * (kk + 2.0));
    }
    case Method::APEG: {
      const double g = params.step;
      return (4.0 * d2 + 8.0 * g * (5.0 * g + 2.0 * rho) * r2) /
             (g * g * (kk + 2.0) * (kk + 4.0));
    }
    case Method::EAG: {
      const double eta = params.step;
      const double gap = eta - 2.0 * rho;
      return (4.0 * d2 + 2.0 * eta * gap * r2) / (gap * gap * (kk + 1.0) * (kk + 1.0));
    }
    case Method::PEAG: {
      const double eta = params.step;
      const double gap = eta - 4.0 * rho;
      return (4.0 * d2 / (gap * gap) + 2.0 * (3.0 * eta - 2.0 * rho) * r2 / (3.0 * gap)) /
             ((kk + 1.0) * (kk + 1.0));
    }
    default:
      throw StepRuleError("no residual envelope for the baseline splittings");
  }
}

DecreaseReport check_monotone_decrease(const std::vector<double>& series, double rel_tol) {
  DecreaseReport rep;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double allowance = rel_tol * (1.0 + std::abs(series[i]));
    const double excess = series[i + 1] - series[i] - allowance;
    if (excess > 0.0) {
      rep.ok = false;
      rep.first_violation = static_cast<int>(i);
      rep.margin = excess;
      return rep;
    }
  }
  return rep;
}

CertReport certify_trace(const Trace& trace, double rel_tol) {
  CertReport rep;
  rep.admissibility = trace.meta.admissibility;
  rep.admissibility_overridden = trace.meta.admissibility_overridden;
  rep.aborted = trace.meta.aborted;

  std::vector<double> lyap;
  lyap.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    if (row.lyapunov) lyap.push_back(*row.lyapunov);
  }
  if (!lyap.empty()) {
    rep.lyapunov_checked = true;
    rep.lyapunov = check_monotone_decrease(lyap, rel_tol);
  }

  for (const auto& row : trace.rows) {
    if (!row.bound) continue;
    rep.bound_checked = true;
    const double res2 = row.res_w * row.res_w;
    const double allowed = *row.bound * (1.0 + rel_tol);
    const double excess = res2 - allowed;
    if (excess > rep.bound_worst_excess || rep.bound_worst_k < 0) {
      rep.bound_worst_excess = excess;
      rep.bound_worst_k = row.k;
    }
    if (excess > 0.0) rep.bound_ok = false;
  }
  return rep;
}

std::string format_report(const Trace& trace, const CertReport& report) {
  std::ostringstream out;
  out << "method: " << method_name(trace.meta.method) << "\n";
  if (!trace.meta.problem.empty()) out << "problem: " << trace.meta.problem << "\n";
  out << "step: " << fmt(trace.meta.step) << "\n";
  out << "eta: " << fmt(trace.meta.eta) << "\n";
  out << "rows: " << trace.rows.size() << "\n";

  out << "admissibility: " << (report.admissibility.ok ? "PASS" : "FAIL") << "\n";
  for (const auto& v : report.admissibility.violated)
    out << "  violated: " << v.name << " (by " << fmt(v.margin) << ")\n";
  if (report.admissibility_overridden) out << "  note: run forced past the check\n";

  if (report.lyapunov_checked) {
    out << "lyapunov: " << (report.lyapunov.ok ? "PASS" : "FAIL") << "\n";
    if (!report.lyapunov.ok)
      out << "  first violation at index " << report.lyapunov.first_violation << " (by "
          << fmt(report.lyapunov.margin) << ")\n";
  } else {
    out << "lyapunov: N/A\n";
  }

  if (report.bound_checked) {
    out << "bound: " << (report.bound_ok ? "PASS" : "FAIL") << "\n";
    out << "  worst excess: " << fmt(report.bound_worst_excess) << " at k="
        << report.bound_worst_k << "\n";
  } else {
    out << "bound: N/A\n";
  }

  if (report.aborted) out << "aborted: " << trace.meta.abort_reason << "\n";
  out << "overall: " << (report.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace egkit
