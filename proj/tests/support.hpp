#pragma once

#include "egkit/core.hpp"
#include "egkit/schedules.hpp"

#include <Eigen/Dense>

#include <memory>
#include <random>
#include <vector>

// Shared test helpers: oracle-counting wrappers, a fixed-seed RNG, and
// independent extended-precision transcriptions of the momentum/anchored
// schemes in their T = 0 equation-root forms (differential-test oracles).
namespace egtest {

struct OracleCounters {
  std::shared_ptr<long> f_evals = std::make_shared<long>(0);
  std::shared_ptr<long> resolvent_calls = std::make_shared<long>(0);
};

// Same problem, but every oracle call bumps the counters.
inline egkit::ProblemSpec counted(const egkit::ProblemSpec& p, OracleCounters& c) {
  egkit::ProblemSpec q = p;
  const auto f = p.F.eval;
  const auto fc = c.f_evals;
  q.F.eval = [f, fc](const egkit::Vector& x) {
    ++*fc;
    return f(x);
  };
  const auto r = p.T.resolvent;
  const auto rc = c.resolvent_calls;
  q.T.resolvent = [r, rc](double eta, const egkit::Vector& u) {
    ++*rc;
    return r(eta, u);
  };
  return q;
}

inline std::mt19937_64 fixed_rng(unsigned long long seed = 20240915ull) {
  return std::mt19937_64(seed);
}

inline egkit::Vector random_vector(std::mt19937_64& rng, Eigen::Index dim,
                                   double scale = 2.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  egkit::Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = dist(rng);
  return v;
}

using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

inline LongVector widen(const egkit::Vector& v) { return v.cast<long double>(); }
inline egkit::Vector narrow(const LongVector& v) { return v.cast<double>(); }

// Momentum scheme in the equation-root form (T = 0, F = M linear); iterates in
// long double, straight off the update equations. past=false is the
// two-F-evaluation variant, past=true replaces the residual with its surrogate.
inline std::vector<egkit::Vector> ref_momentum(const LongMatrix& M, const egkit::Vector& x0,
                                               double gamma_in, double rho_in, int steps,
                                               bool past) {
  const long double gamma = gamma_in;
  const long double rho = rho_in;
  const long double eta =
      past ? 2.0L * (3.0L * gamma + 2.0L * rho) : gamma + 2.0L * rho;
  LongVector y = widen(x0);
  LongVector z = y;
  LongVector w_prev = 2.0L * (M * y);  // (η/η̂₀)·w⁰ with η̂₀ = η/2
  std::vector<egkit::Vector> xs;
  for (int k = 0; k < steps; ++k) {
    const long double t = static_cast<long double>(k) + 2.0L;
    const long double eta_hat = (t - 1.0L) * eta / t;
    const long double theta = (t - 1.0L) / (t + 1.0L);
    const long double nu = t / (t + 1.0L);
    const LongVector x = y - eta * (M * y) + eta_hat * w_prev;
    const LongVector w = past ? LongVector((y - x + eta_hat * w_prev) / eta)
                              : LongVector(M * x);
    const LongVector z_next = x - gamma * w;
    const LongVector y_next = z_next + theta * (z_next - z) + nu * (y - z_next);
    xs.push_back(narrow(x));
    w_prev = w;
    z = z_next;
    y = y_next;
  }
  return xs;
}

// Anchored scheme in the equation-root form (T = 0, F = M linear); past=true is
// the one-F-evaluation variant driven by the lagged forward value.
inline std::vector<egkit::Vector> ref_anchored(const LongMatrix& M, const egkit::Vector& x0,
                                               double eta_in, double rho_in, int steps,
                                               bool past) {
  const long double eta = eta_in;
  const long double rho = rho_in;
  LongVector x = widen(x0);
  const LongVector anchor = x;
  LongVector w_hat = M * x;  // ŵ⁰ = w⁰
  std::vector<egkit::Vector> xs;
  xs.push_back(narrow(x));
  for (int k = 0; k < steps; ++k) {
    const long double tau = 1.0L / (static_cast<long double>(k) + 2.0L);
    const long double eta_hat = (1.0L - tau) * eta;
    LongVector y;
    if (past) {
      const long double beta = 4.0L * rho * (1.0L - tau) / (1.0L + tau);
      y = x + tau * (anchor - x) - (eta_hat - beta) * w_hat;
    } else {
      const LongVector w = M * x;
      y = x + tau * (anchor - x) - (eta_hat - 2.0L * rho * (1.0L - tau)) * w;
      w_hat = w;
    }
    const LongVector fy = M * y;
    x = y - eta * fy + eta_hat * w_hat;
    if (past) w_hat = fy;  // ŵ^{k+1} = Fy^k + ξ^{k+1}, ξ = 0 here
    xs.push_back(narrow(x));
  }
  return xs;
}

}  // namespace egtest
