#include "egkit/core.hpp"

#include <cmath>

namespace egkit {

MultivaluedOperator zero_operator() {
  MultivaluedOperator T;
  T.resolvent = [](double, const Vector& u) { return u; };
  T.selection = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  T.nonexpansive_resolvent = true;
  return T;
}

MultivaluedOperator box_normal_cone(double bound) {
  if (!(bound > 0.0)) throw StepRuleError("box bound must be positive");
  MultivaluedOperator T;
  T.resolvent = [bound](double, const Vector& u) {
    return Vector(u.cwiseMax(-bound).cwiseMin(bound));
  };
  // No selection oracle: the zero selection is validated at init time instead
  // (0 ∈ N_C(x) exactly for x in the box, and N_C(x) is empty outside it).
  T.nonexpansive_resolvent = true;
  return T;
}

Vector resolvent_apply(const MultivaluedOperator& T, double eta, const Vector& u) {
  if (!(eta > 0.0)) throw StepRuleError("resolvent step eta must be positive");
  if (!u.allFinite()) throw NumericalError("resolvent input is not finite");
  if (!T.resolvent) throw ResolventError("no resolvent oracle attached");
  Vector x = T.resolvent(eta, u);
  if (x.size() != u.size() || !x.allFinite())
    throw ResolventError("resolvent oracle returned an invalid point");
  return x;
}

Vector natural_residual(const ProblemSpec& problem, double eta, const Vector& x) {
  if (!(eta > 0.0)) throw StepRuleError("natural residual requires eta > 0");
  if (!x.allFinite()) throw NumericalError("natural residual input is not finite");
  Vector fwd = x - eta * problem.F.eval(x);
  Vector j = resolvent_apply(problem.T, eta, fwd);
  return (x - j) / eta;
}

double inclusion_residual_norm(const ProblemSpec& problem, const ResidualPair& pair,
                               const Vector& x) {
  (void)problem;
  if (!pair.w.allFinite() || !pair.xi.allFinite() || !x.allFinite())
    throw NumericalError("residual pair is not finite");
  return pair.w.norm();
}

bool verify_cohypomonotone_linear(const Matrix& M, double rho, double tol) {
  if (M.rows() != M.cols()) throw StepRuleError("co-hypomonotonicity check needs a square matrix");
  Matrix S = 0.5 * (M + M.transpose()) + rho * (M.transpose() * M);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigensolver failed to converge on sym(M) + rho MᵀM");
  return eig.eigenvalues().minCoeff() >= -tol;
}

double lipschitz_constant_linear(const Matrix& M) {
  if (M.size() == 0) throw StepRuleError("spectral norm of an empty matrix");
  const Matrix G = M.transpose() * M;  // symmetric PSD, ‖M‖₂² = λ_max(G)
  const Eigen::Index n = G.rows();

  // Deterministic start with no zero pattern: 1/(i+1) entries.
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  v /= v.norm();

  const int cap = 20000;
  const double rel_tol = 1e-12;  // interior margin under the 1e-10 contract
  double lambda = v.dot(G * v);
  for (int it = 0; it < cap; ++it) {
    Vector gv = G * v;
    double norm = gv.norm();
    if (norm == 0.0) return 0.0;  // started in the kernel of a nilpotent-free PSD map: M = 0
    v = gv / norm;
    double next = v.dot(G * v);
    if (std::abs(next - lambda) <= rel_tol * (1.0 + std::abs(next))) {
      return std::sqrt(next);
    }
    lambda = next;
  }
  throw NumericalError("power iteration did not converge within the cap");
}

}  // namespace egkit
