#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

// Core types and residual machinery for inclusion problems 0 ∈ Fx + Tx,
// with F single-valued Lipschitz and T multivalued with a computable resolvent.
namespace egkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oracle failures: resolvent undefined at the query point, selection invalid.
struct ResolventError : Error {
  using Error::Error;
};

// Step-rule / admissibility preconditions violated; message names the inequality.
struct StepRuleError : Error {
  using Error::Error;
};

// Non-finite iterates, eigensolver or power-iteration non-convergence.
struct NumericalError : Error {
  using Error::Error;
};

// Bad experiment configuration (unknown names, unwritable paths, ...).
struct ConfigError : Error {
  using Error::Error;
};

// Absolute-plus-relative comparison used for every tolerance in the artifact:
// |a - b| <= tol * (1 + scale), scale defaulting to |b|.
inline bool within_tol(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

struct SingleValuedOperator {
  std::function<Vector(const Vector&)> eval;
  double lipschitz_L = 0.0;
};

// T is accessed only through its resolvent J_{ηT}: resolvent(eta, u) returns the
// unique x with u ∈ x + ηTx. An optional selection oracle returns some ξ ∈ Tx.
struct MultivaluedOperator {
  std::function<Vector(double, const Vector&)> resolvent;
  std::function<Vector(const Vector&)> selection;  // may be empty
  bool nonexpansive_resolvent = true;
};

struct ProblemSpec {
  SingleValuedOperator F;
  MultivaluedOperator T;
  double rho = 0.0;  // co-hypomonotonicity modulus of F + T
  std::optional<Vector> known_solution;
  Eigen::Index dimension = 0;
};

// A residual element w = Fx + ξ with its T-component ξ ∈ Tx.
struct ResidualPair {
  Vector w;
  Vector xi;
};

// T ≡ 0: resolvent is the identity, the only selection is the zero vector.
MultivaluedOperator zero_operator();

// Normal cone of the box [-bound, bound]^n: resolvent is the coordinate clamp
// (independent of η), which is nonexpansive.
MultivaluedOperator box_normal_cone(double bound);

// J_{ηT}(u). Throws StepRuleError for eta <= 0, propagates oracle failures,
// and rejects non-finite output.
Vector resolvent_apply(const MultivaluedOperator& T, double eta, const Vector& u);

// G_η x = (1/η)(x − J_{ηT}(x − ηFx)); zero exactly at solutions.
Vector natural_residual(const ProblemSpec& problem, double eta, const Vector& x);

// ‖w‖ for a residual pair produced at x (finiteness-checked).
double inclusion_residual_norm(const ProblemSpec& problem, const ResidualPair& pair,
                               const Vector& x);

// True iff the smallest eigenvalue of sym(M) + ρ·MᵀM is >= -tol, the exact
// characterization of ρ-co-hypomonotonicity for a linear operator M.
bool verify_cohypomonotone_linear(const Matrix& M, double rho, double tol);

// Spectral norm ‖M‖₂ via power iteration on MᵀM with a deterministic start,
// relative tolerance 1e-10. Throws NumericalError if the cap is hit.
double lipschitz_constant_linear(const Matrix& M);

}  // namespace egkit
