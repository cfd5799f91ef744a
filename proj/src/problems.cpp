#include "egkit/problems.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace egkit {

namespace {

Vector alternating_x0(int dim) {
  Vector x0 = Vector::Zero(dim);
  for (int i = 0; i < dim; i += 2) x0(i) = 1.0;
  return x0;
}

SingleValuedOperator linear_operator(Matrix M, double L) {
  SingleValuedOperator F;
  auto m = std::make_shared<Matrix>(std::move(M));
  F.eval = [m](const Vector& x) -> Vector {
    if (x.size() != m->cols())
      throw ConfigError("operator applied to vector of wrong dimension");
    return (*m) * x;
  };
  F.lipschitz_L = L;
  return F;
}

std::string format_mu(double mu) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", mu);
  return buf;
}

}  // namespace

CorpusEntry make_rotation(int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw ConfigError("rotation problem needs even dimension >= 2");
  Matrix M = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; i += 2) {
    M(i, i + 1) = -1.0;
    M(i + 1, i) = 1.0;
  }
  CorpusEntry e;
  e.name = "rotation-" + std::to_string(dim);
  e.spec.F = linear_operator(M, 1.0);
  e.spec.T = zero_operator();
  e.spec.rho = 0.0;
  e.spec.known_solution = Vector::Zero(dim);
  e.spec.dimension = dim;
  e.default_x0 = alternating_x0(dim);
  e.notes = "block rotation field, monotone, L = 1";
  e.linear_matrix = M;
  return e;
}

CorpusEntry make_shifted_rotation(double mu, int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw ConfigError("shifted rotation problem needs even dimension >= 2");
  if (mu < 0.0) throw ConfigError("shifted rotation needs mu >= 0");
  Matrix M = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; i += 2) {
    M(i, i) = -mu;
    M(i, i + 1) = -1.0;
    M(i + 1, i) = 1.0;
    M(i + 1, i + 1) = -mu;
  }
  CorpusEntry e;
  e.name = "shifted-" + format_mu(mu) + "-" + std::to_string(dim);
  e.spec.F = linear_operator(M, std::sqrt(1.0 + mu * mu));
  e.spec.T = zero_operator();
  e.spec.rho = mu / (1.0 + mu * mu);
  e.spec.known_solution = Vector::Zero(dim);
  e.spec.dimension = dim;
  e.default_x0 = alternating_x0(dim);
  e.notes = "negatively shifted rotation, co-hypomonotone but not monotone";
  e.linear_matrix = M;
  return e;
}

CorpusEntry make_box_bilinear(const Matrix& B, double bound) {
  if (B.rows() < 1 || B.cols() != B.rows())
    throw ConfigError("box-bilinear needs a square coupling matrix");
  if (!(bound > 0.0)) throw ConfigError("box-bilinear needs bound > 0");
  const int n = static_cast<int>(B.rows());
  const int dim = 2 * n;
  Matrix M = Matrix::Zero(dim, dim);
  M.topRightCorner(n, n) = B;
  M.bottomLeftCorner(n, n) = -B.transpose();
  CorpusEntry e;
  e.name = "box-bilinear-" + std::to_string(n);
  e.spec.F = linear_operator(M, lipschitz_constant_linear(B));
  e.spec.T = box_normal_cone(bound);
  e.spec.rho = 0.0;
  e.spec.known_solution = Vector::Zero(dim);
  e.spec.dimension = dim;
  e.default_x0 = alternating_x0(dim);
  e.notes = "bilinear saddle field with box constraints, resolvent = clamp";
  e.linear_matrix = M;
  return e;
}

std::vector<CorpusEntry> standard_corpus() {
  std::vector<CorpusEntry> corpus;
  corpus.push_back(make_rotation(2));
  corpus.push_back(make_shifted_rotation(0.05, 2));
  corpus.push_back(make_shifted_rotation(0.1, 2));
  corpus.push_back(make_box_bilinear(Matrix::Identity(1, 1), 1.0));
  return corpus;
}

CorpusEntry corpus_by_name(const std::string& name) {
  auto parse_int = [&](const std::string& s, int& out) {
    try {
      size_t pos = 0;
      out = std::stoi(s, &pos);
      return pos == s.size();
    } catch (const std::exception&) {
      return false;
    }
  };
  auto parse_double = [&](const std::string& s, double& out) {
    try {
      size_t pos = 0;
      out = std::stod(s, &pos);
      return pos == s.size();
    } catch (const std::exception&) {
      return false;
    }
  };

  const std::string rot_prefix = "rotation-";
  const std::string shift_prefix = "shifted-";
  const std::string box_prefix = "box-bilinear-";
  if (name.rfind(rot_prefix, 0) == 0) {
    int dim = 0;
    if (parse_int(name.substr(rot_prefix.size()), dim)) return make_rotation(dim);
  } else if (name.rfind(box_prefix, 0) == 0) {
    int n = 0;
    if (parse_int(name.substr(box_prefix.size()), n) && n >= 1)
      return make_box_bilinear(Matrix::Identity(n, n), 1.0);
  } else if (name.rfind(shift_prefix, 0) == 0) {
    const std::string rest = name.substr(shift_prefix.size());
    const size_t dash = rest.rfind('-');
    if (dash != std::string::npos && dash > 0) {
      double mu = 0.0;
      int dim = 0;
      if (parse_double(rest.substr(0, dash), mu) &&
          parse_int(rest.substr(dash + 1), dim))
        return make_shifted_rotation(mu, dim);
    }
  }
  throw ConfigError("unknown problem name: " + name);
}

}  // namespace egkit
