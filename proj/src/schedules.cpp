#include "egkit/schedules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace egkit {
namespace {

// Admissibility comparisons carry the artifact-wide abs-plus-rel cushion so
// defaults that saturate a bound exactly are not rejected by rounding.
constexpr double kCushion = 1e-10;

bool leq(double lhs, double rhs) { return lhs <= rhs + kCushion * (1.0 + std::abs(rhs)); }
bool lt(double lhs, double rhs) { return lhs < rhs - kCushion * (1.0 + std::abs(rhs)); }

void fill_common(ScheduleEntry& s, int k) {
  if (k < 0) throw StepRuleError("schedule index must be nonnegative");
  const double tk = static_cast<double>(k) + 2.0;
  const double tk1 = static_cast<double>(k) + 3.0;
  s.k = k;
  s.t = tk;
  s.theta = (tk - 1.0) / tk1;
  s.nu = tk / tk1;
  s.tau = 1.0 / tk;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::AEG: return "AEG";
    case Method::APEG: return "APEG";
    case Method::EAG: return "EAG";
    case Method::PEAG: return "PEAG";
    case Method::FBFS: return "FBFS";
    case Method::PFBFS: return "PFBFS";
  }
  throw ConfigError("unreachable method tag");
}

Method method_from_name(const std::string& name) {
  std::string u;
  u.reserve(name.size());
  for (char c : name) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "AEG") return Method::AEG;
  if (u == "APEG") return Method::APEG;
  if (u == "EAG") return Method::EAG;
  if (u == "PEAG") return Method::PEAG;
  if (u == "FBFS") return Method::FBFS;
  if (u == "PFBFS") return Method::PFBFS;
  throw ConfigError("unknown method '" + name + "'");
}

ScheduleFieldUse schedule_field_use(Method m) {
  switch (m) {
    case Method::AEG:
    case Method::APEG: return {.momentum = true, .anchor = false, .damping = false};
    case Method::EAG: return {.momentum = false, .anchor = true, .damping = false};
    case Method::PEAG: return {.momentum = false, .anchor = true, .damping = true};
    case Method::FBFS:
    case Method::PFBFS: return {};
  }
  throw ConfigError("unreachable method tag");
}

ScheduleEntry aeg_schedule(int k, double gamma, double rho) {
  if (!(gamma > 0.0)) throw StepRuleError("gamma must be positive");
  const double eta = gamma + 2.0 * rho;
  if (!(eta > 0.0)) throw StepRuleError("nonpositive eta = gamma + 2rho rejected");
  ScheduleEntry s;
  fill_common(s, k);
  s.method = Method::AEG;
  s.gamma = gamma;
  s.eta = eta;
  s.eta_hat = (s.t - 1.0) * eta / s.t;
  return s;
}

ScheduleEntry apeg_schedule(int k, double gamma, double rho) {
  if (!(gamma > 0.0)) throw StepRuleError("gamma must be positive");
  const double eta = 2.0 * (3.0 * gamma + 2.0 * rho);
  if (!(eta > 0.0)) throw StepRuleError("nonpositive eta = 2(3gamma + 2rho) rejected");
  ScheduleEntry s;
  fill_common(s, k);
  s.method = Method::APEG;
  s.gamma = gamma;
  s.eta = eta;
  s.eta_hat = (s.t - 1.0) * eta / s.t;
  return s;
}

ScheduleEntry eag_schedule(int k, double eta, double rho) {
  if (!(eta > 0.0)) throw StepRuleError("eta must be positive");
  if (rho > 0.0 && eta <= 2.0 * rho) throw StepRuleError("eta <= 2rho rejected");
  ScheduleEntry s;
  fill_common(s, k);
  s.method = Method::EAG;
  s.eta = eta;
  s.eta_hat = (1.0 - s.tau) * eta;
  return s;
}

ScheduleEntry peag_schedule(int k, double eta, double rho) {
  if (!(eta > 0.0)) throw StepRuleError("eta must be positive");
  if (rho > 0.0 && eta <= 4.0 * rho) throw StepRuleError("eta <= 4rho rejected");
  ScheduleEntry s;
  fill_common(s, k);
  s.method = Method::PEAG;
  s.eta = eta;
  s.eta_hat = (1.0 - s.tau) * eta;
  s.beta = 4.0 * rho * (1.0 - s.tau) / (1.0 + s.tau);
  return s;
}

ScheduleEntry baseline_schedule(Method m, int k, double eta) {
  if (m != Method::FBFS && m != Method::PFBFS)
    throw StepRuleError("baseline schedule only covers FBFS/PFBFS");
  if (!(eta > 0.0)) throw StepRuleError("eta must be positive");
  ScheduleEntry s;
  fill_common(s, k);
  s.method = m;
  s.eta = eta;
  s.eta_hat = eta;
  return s;
}

ScheduleEntry make_schedule(Method m, int k, double step, double rho) {
  switch (m) {
    case Method::AEG: return aeg_schedule(k, step, rho);
    case Method::APEG: return apeg_schedule(k, step, rho);
    case Method::EAG: return eag_schedule(k, step, rho);
    case Method::PEAG: return peag_schedule(k, step, rho);
    case Method::FBFS:
    case Method::PFBFS: return baseline_schedule(m, k, step);
  }
  throw ConfigError("unreachable method tag");
}

double default_step(Method m, double L, double rho) {
  if (!(L > 0.0)) throw StepRuleError("Lipschitz constant must be positive");
  switch (m) {
    case Method::AEG: {
      if (rho >= 0.0) {
        if (!(2.0 * L * rho < 1.0))
          throw StepRuleError("no default step: 2Lρ < 1 fails");
        return 1.0 / L - 2.0 * rho;
      }
      // ρ < 0 (co-coercive side): midpoint of the admissible γ-window, with the
      // floor raised to −2ρ when the plain midpoint would zero out η = γ + 2ρ.
      double lo = std::max(-1.0 / L - 2.0 * rho, 0.0);
      const double hi = 1.0 / L - 2.0 * rho;
      double mid = 0.5 * (lo + hi);
      if (mid + 2.0 * rho <= 0.0) {
        lo = -2.0 * rho;
        mid = 0.5 * (lo + hi);
      }
      return mid;
    }
    case Method::APEG: {
      const double disc = 29.0 - 92.0 * (L * rho) * (L * rho);
      if (!(8.0 * std::sqrt(3.0) * L * rho < 1.0) || !(disc > 0.0) ||
          !(std::sqrt(disc) > 74.0 * L * rho))
        throw StepRuleError("no default step: 8√3·Lρ < 1 fails");
      return (std::sqrt(disc) - 74.0 * L * rho) / (116.0 * L);
    }
    case Method::EAG: {
      const double eta = 1.0 / L;
      if (2.0 * rho >= eta * (1.0 - 1e-9)) {
        throw StepRuleError(
            "no default step: 2ρ < η = 1/L fails (2Lρ < 1 margin " +
            std::to_string(1.0 - 2.0 * L * rho) + ", η − 2ρ margin " +
            std::to_string(eta - 2.0 * rho) + ")");
      }
      return eta;
    }
    case Method::PEAG: {
      const double eta = std::sqrt(2.0 / 17.0) / L;
      if (!(2.0 * std::sqrt(34.0) * L * rho < 1.0))
        throw StepRuleError("no default step: 2√34·Lρ < 1 fails");
      return eta;
    }
    case Method::FBFS: return 0.5 / L;
    case Method::PFBFS: return 0.3 / L;
  }
  throw ConfigError("unreachable method tag");
}

Admissibility admissibility_check(Method m, double L, double rho, double step) {
  Admissibility a;
  auto require = [&a](bool ok, const std::string& name, double margin) {
    if (!ok) {
      a.ok = false;
      a.violated.push_back({name, margin});
    }
  };
  if (!(L > 0.0)) {
    require(false, "L > 0", -L);
    return a;
  }

  switch (m) {
    case Method::AEG: {
      const double g = step;
      require(g > 0.0, "γ > 0", -g);
      if (rho >= 0.0) {
        require(lt(2.0 * L * rho, 1.0), "2Lρ < 1", 2.0 * L * rho - 1.0);
        require(leq(L * (2.0 * rho + g), 1.0), "L(2ρ+γ) ≤ 1", L * (2.0 * rho + g) - 1.0);
      } else {
        // relaxed window for co-coercive problems
        require(lt(-1.0, L * (g + 2.0 * rho)), "−1 < L(γ+2ρ)", -1.0 - L * (g + 2.0 * rho));
        require(leq(L * (g + 2.0 * rho), 1.0), "L(γ+2ρ) ≤ 1", L * (g + 2.0 * rho) - 1.0);
        require(g + 2.0 * rho > 0.0, "γ + 2ρ > 0", -(g + 2.0 * rho));
      }
      break;
    }
    case Method::APEG: {
      const double g = step;
      require(g > 0.0, "γ > 0", -g);
      const double lhs1 = 8.0 * std::sqrt(3.0) * L * rho;
      require(lt(lhs1, 1.0), "8√3·Lρ < 1", lhs1 - 1.0);
      if (g > 0.0) {
        const double lhs2 =
            16.0 * L * L *
            (3.0 * (3.0 * g + 2.0 * rho) * (3.0 * g + 2.0 * rho) + g * (2.0 * g + rho));
        require(leq(lhs2, 1.0), "16L²[3(3γ+2ρ)² + γ(2γ+ρ)] ≤ 1", lhs2 - 1.0);
      }
      break;
    }
    case Method::EAG: {
      const double eta = step;
      require(lt(2.0 * L * rho, 1.0), "2Lρ < 1", 2.0 * L * rho - 1.0);
      require(lt(2.0 * rho, eta), "2ρ < η", 2.0 * rho - eta);
      require(leq(eta, 1.0 / L), "η ≤ 1/L", eta - 1.0 / L);
      break;
    }
    case Method::PEAG: {
      const double eta = step;
      const double lhs = 2.0 * std::sqrt(34.0) * L * rho;
      require(lt(lhs, 1.0), "2√34·Lρ < 1", lhs - 1.0);
      const double pinned = std::sqrt(2.0 / 17.0) / L;
      require(std::abs(eta - pinned) <= 1e-12 * (1.0 + pinned), "η = √(2/17)/L",
              std::abs(eta - pinned));
      require(lt(4.0 * rho, eta), "η > 4ρ", 4.0 * rho - eta);
      break;
    }
    case Method::FBFS: {
      const double eta = step;
      require(eta > 0.0, "η > 0", -eta);
      require(lt(eta, 1.0 / L), "η < 1/L", eta - 1.0 / L);
      break;
    }
    case Method::PFBFS: {
      const double eta = step;
      require(eta > 0.0, "η > 0", -eta);
      require(leq(eta, 1.0 / (3.0 * L)), "η ≤ 1/(3L)", eta - 1.0 / (3.0 * L));
      break;
    }
  }
  return a;
}

}  // namespace egkit
