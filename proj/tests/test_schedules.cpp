#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egkit/schedules.hpp"

#include <cmath>
#include <string>
#include <vector>

using egkit::Method;

namespace {

bool names_violation(const egkit::Admissibility& adm, const std::string& needle) {
  for (const auto& v : adm.violated)
    if (v.name.find(needle) != std::string::npos) return true;
  return false;
}

// k values spanning the telescoping range, dense at the start.
std::vector<int> sample_indices() {
  std::vector<int> ks;
  for (int k = 0; k <= 1000; ++k) ks.push_back(k);
  for (int k = 2000; k <= 1000000; k *= 2) ks.push_back(k);
  ks.push_back(1000000);
  return ks;
}

}  // namespace

TEST_CASE("momentum schedule values at pinned indices") {
  auto s0 = egkit::aeg_schedule(0, 1.0, 0.0);
  CHECK(s0.t == 2.0);
  CHECK(s0.eta == 1.0);
  CHECK(s0.eta_hat == 0.5);
  CHECK(s0.theta == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s0.nu == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  auto s5 = egkit::aeg_schedule(5, 1.0, 0.0);
  CHECK(s5.t == 7.0);
  CHECK(s5.eta == 1.0);
  CHECK(s5.eta_hat == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(s5.theta == doctest::Approx(6.0 / 8.0).epsilon(1e-15));
  CHECK(s5.nu == doctest::Approx(7.0 / 8.0).epsilon(1e-15));

  auto mixed = egkit::aeg_schedule(0, 0.8, 0.1);
  CHECK(mixed.eta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mixed.eta_hat == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("past-momentum schedule uses the doubled step") {
  auto s0 = egkit::apeg_schedule(0, 0.04, 0.0);
  CHECK(s0.eta == doctest::Approx(0.24).epsilon(1e-15));
  CHECK(s0.eta_hat == doctest::Approx(0.12).epsilon(1e-15));
  CHECK(s0.theta == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s0.nu == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  auto s3 = egkit::apeg_schedule(3, 0.04, 0.0);
  CHECK(s3.t == 5.0);
  CHECK(s3.eta_hat == doctest::Approx(0.192).epsilon(1e-15));

  auto shifted = egkit::apeg_schedule(0, 0.01, 0.05);
  CHECK(shifted.eta == doctest::Approx(0.26).epsilon(1e-15));
}

TEST_CASE("anchored schedule values at pinned indices") {
  auto s0 = egkit::eag_schedule(0, 1.0, 0.0);
  CHECK(s0.tau == 0.5);
  CHECK(s0.eta_hat == 0.5);

  auto s8 = egkit::eag_schedule(8, 1.0, 0.0);
  CHECK(s8.tau == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(s8.eta_hat == doctest::Approx(0.9).epsilon(1e-15));

  // The y-line anchor coefficient at rho = 0.2.
  auto r = egkit::eag_schedule(0, 1.0, 0.2);
  const double coeff = r.eta_hat - 2.0 * 0.2 * (1.0 - r.tau);
  CHECK(coeff == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("anchored-past schedule and its damping coefficient") {
  auto s0 = egkit::peag_schedule(0, 0.343, 0.0);
  CHECK(s0.beta == 0.0);
  CHECK(s0.tau == 0.5);
  CHECK(s0.eta_hat == doctest::Approx(0.1715).epsilon(1e-15));

  auto damped = egkit::peag_schedule(0, 0.343, 0.01);
  CHECK(damped.beta == doctest::Approx(0.04 * 0.5 / 1.5).epsilon(1e-15));

  // beta_k increases to 4*rho.
  const double rho = 0.03;
  double prev = -1.0;
  for (int k : {0, 1, 10, 100, 10000, 1000000}) {
    const double beta = egkit::peag_schedule(k, 0.343, rho).beta;
    CHECK(beta > prev);
    prev = beta;
  }
  CHECK(prev == doctest::Approx(4.0 * rho).epsilon(1e-5));
}

TEST_CASE("default steps match the pinned formulas") {
  CHECK(egkit::default_step(Method::AEG, 1.0, 0.0) == 1.0);
  CHECK(egkit::default_step(Method::EAG, 1.0, 0.0) == 1.0);
  CHECK(egkit::default_step(Method::FBFS, 2.0, 0.0) == 0.25);
  CHECK(egkit::default_step(Method::PFBFS, 1.0, 0.0) == doctest::Approx(0.3).epsilon(1e-15));

  const double gbar = egkit::default_step(Method::APEG, 1.0, 0.0);
  CHECK(gbar == doctest::Approx(std::sqrt(29.0) / 116.0).epsilon(1e-12));
  // Saturates the step-size inequality at rho = 0: 16*29*gamma^2 = 1.
  CHECK(std::abs(16.0 * 29.0 * gbar * gbar - 1.0) <= 1e-9);

  const double peta = egkit::default_step(Method::PEAG, 2.0, 0.0);
  CHECK(peta == doctest::Approx(0.5 * std::sqrt(2.0 / 17.0)).epsilon(1e-15));
  CHECK(peta == doctest::Approx(0.171499).epsilon(1e-5));
}

TEST_CASE("default step rejections name the failed inequality") {
  // 8*sqrt(3)*L*rho = 1.38 > 1 at mu = 0.1 scale.
  const double L = 1.0049876;
  const double rho = 0.0990099;
  CHECK_THROWS_WITH_AS(egkit::default_step(Method::APEG, L, rho),
                       doctest::Contains("8√3·Lρ < 1"), egkit::StepRuleError);
  CHECK_THROWS_WITH_AS(egkit::default_step(Method::PEAG, L, rho),
                       doctest::Contains("2√34·Lρ < 1"), egkit::StepRuleError);
  // EAG's window empties when 2*rho reaches 1/L; the message carries both margins.
  CHECK_THROWS_WITH_AS(egkit::default_step(Method::EAG, 1.0, 0.5),
                       doctest::Contains("2ρ"), egkit::StepRuleError);
}

TEST_CASE("default step for the momentum method under co-coercivity") {
  // Interior negative rho: the window midpoint keeps eta = gamma + 2 rho > 0.
  const double g1 = egkit::default_step(Method::AEG, 1.0, -0.2);
  CHECK(g1 == doctest::Approx((0.0 + (1.0 + 0.4)) / 2.0).epsilon(1e-12));
  CHECK(g1 + 2.0 * (-0.2) > 0.0);
  // Strongly negative rho: the literal midpoint would zero out eta; the floor
  // is raised so eta = 1/(2L).
  const double g2 = egkit::default_step(Method::AEG, 1.0, -0.5);
  CHECK(g2 + 2.0 * (-0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("admissibility at the pinned corpus points") {
  auto ok = egkit::admissibility_check(Method::AEG, 1.0, 0.0, 1.0);
  CHECK(ok.ok);  // boundary case L(2rho+gamma) = 1

  auto apeg = egkit::admissibility_check(Method::APEG, 1.0012, 0.0499, 0.0143);
  CHECK(apeg.ok);

  const double L = 1.0049876;
  const double rho = 0.0990099;
  auto peag = egkit::admissibility_check(Method::PEAG, L, rho,
                                         std::sqrt(2.0 / 17.0) / L);
  CHECK_FALSE(peag.ok);
  CHECK(names_violation(peag, "2√34·Lρ < 1"));
}

TEST_CASE("admissibility windows for the baselines") {
  CHECK(egkit::admissibility_check(Method::FBFS, 1.0, 0.0, 0.5).ok);
  CHECK_FALSE(egkit::admissibility_check(Method::FBFS, 1.0, 0.0, 1.0).ok);  // strict
  CHECK(egkit::admissibility_check(Method::PFBFS, 1.0, 0.0, 1.0 / 3.0).ok);  // closed
  CHECK_FALSE(egkit::admissibility_check(Method::PFBFS, 1.0, 0.0, 0.3334).ok);
}

TEST_CASE("relaxed momentum window for negative rho") {
  auto inside = egkit::admissibility_check(Method::AEG, 1.0, -0.3, 1.5);  // eta = 0.9
  CHECK(inside.ok);
  auto high = egkit::admissibility_check(Method::AEG, 1.0, -0.3, 1.7);  // eta = 1.1
  CHECK_FALSE(high.ok);
  CHECK(names_violation(high, "L(γ+2ρ) ≤ 1"));
  auto collapsed = egkit::admissibility_check(Method::AEG, 1.0, -0.3, 0.5);  // eta < 0
  CHECK_FALSE(collapsed.ok);
  CHECK(names_violation(collapsed, "γ + 2ρ > 0"));
}

TEST_CASE("schedule rejects nonpositive effective steps") {
  CHECK_THROWS_AS(egkit::aeg_schedule(0, 0.1, -0.2), egkit::StepRuleError);  // eta < 0
  CHECK_THROWS_AS(egkit::aeg_schedule(0, -1.0, 0.0), egkit::StepRuleError);
  CHECK_THROWS_AS(egkit::eag_schedule(0, 0.1, 0.2), egkit::StepRuleError);  // eta <= 2rho
  CHECK_THROWS_AS(egkit::peag_schedule(0, 0.1, 0.2), egkit::StepRuleError);  // eta <= 4rho
}

TEST_CASE("telescoping identities are exact as products divided once") {
  for (int k : sample_indices()) {
    const double tk = static_cast<double>(k) + 2.0;
    const double tk1 = static_cast<double>(k) + 3.0;
    const auto s = egkit::aeg_schedule(k, 1.0, 0.0);
    CHECK(s.t == tk);
    // The schedule stores the single-division forms bit-exactly...
    CHECK(s.theta == (tk - 1.0) / tk1);
    CHECK(s.nu == tk / tk1);
    // ...and the telescoped identities hold exactly when each side is a
    // product of exactly-representable small integers divided once.
    CHECK(((tk - 1.0) * tk1) / tk1 == tk - 1.0);
    CHECK((tk * tk1) / tk1 == tk);
  }
}

TEST_CASE("momentum coupling eta_hat*nu = eta*theta") {
  for (Method m : {Method::AEG, Method::APEG}) {
    const double gamma = (m == Method::AEG) ? 0.7 : 0.03;
    for (int k : {0, 1, 2, 7, 100, 9999}) {
      const auto s = (m == Method::AEG) ? egkit::aeg_schedule(k, gamma, 0.02)
                                        : egkit::apeg_schedule(k, gamma, 0.02);
      CHECK(egkit::within_tol(s.eta_hat * s.nu, s.eta * s.theta, 1e-10));
    }
  }
}

TEST_CASE("schedule sequences approach their limits monotonically") {
  double theta_prev = -1.0, nu_prev = -1.0, tau_prev = 2.0, eta_hat_prev = -1.0;
  for (int k = 0; k <= 2000; ++k) {
    const auto s = egkit::aeg_schedule(k, 1.0, 0.0);
    CHECK(s.theta > theta_prev);
    CHECK(s.nu > nu_prev);
    CHECK(s.tau < tau_prev);
    CHECK(s.eta_hat > eta_hat_prev);
    CHECK(s.theta < 1.0);
    CHECK(s.nu <= 1.0);
    CHECK(s.eta_hat < s.eta);
    theta_prev = s.theta;
    nu_prev = s.nu;
    tau_prev = s.tau;
    eta_hat_prev = s.eta_hat;
  }
  const auto far = egkit::aeg_schedule(1000000, 1.0, 0.0);
  CHECK(far.theta == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(far.nu == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(far.tau == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(far.eta_hat == doctest::Approx(far.eta).epsilon(1e-5));
}

TEST_CASE("baseline schedule pins eta_hat to eta") {
  for (Method m : {Method::FBFS, Method::PFBFS}) {
    const auto s = egkit::baseline_schedule(m, 3, 0.4);
    CHECK(s.eta == 0.4);
    CHECK(s.eta_hat == 0.4);
  }
}

TEST_CASE("method names round-trip") {
  using egkit::method_from_name;
  using egkit::method_name;
  for (Method m : {Method::AEG, Method::APEG, Method::EAG, Method::PEAG, Method::FBFS,
                   Method::PFBFS}) {
    CHECK(method_from_name(method_name(m)) == m);
  }
  CHECK(method_from_name("AEG") == Method::AEG);  // case-insensitive
  CHECK_THROWS_AS(method_from_name("unknown"), egkit::ConfigError);
}

TEST_CASE("field-use flags follow the method families") {
  CHECK(egkit::schedule_field_use(Method::AEG).momentum);
  CHECK(egkit::schedule_field_use(Method::APEG).momentum);
  CHECK(egkit::schedule_field_use(Method::EAG).anchor);
  CHECK(egkit::schedule_field_use(Method::PEAG).anchor);
  CHECK(egkit::schedule_field_use(Method::PEAG).damping);
  CHECK_FALSE(egkit::schedule_field_use(Method::FBFS).momentum);
  CHECK_FALSE(egkit::schedule_field_use(Method::FBFS).anchor);
}
