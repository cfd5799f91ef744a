#pragma once

#include "egkit/core.hpp"

#include <optional>
#include <string>
#include <vector>

// Benchmark corpus: small structured instances with known solutions and
// analytically certified (L, ρ) constants.
namespace egkit {

struct CorpusEntry {
  std::string name;
  ProblemSpec spec;
  Vector default_x0;
  std::string notes;
  std::optional<Matrix> linear_matrix;  // F's matrix when F is linear
};

// "rotation-<dim>": block-diagonal 2×2 rotations (a,b) ↦ (−b,a), T ≡ 0.
// Monotone (ρ = 0), isometric (L = 1), x⋆ = 0. dim must be even and ≥ 2.
CorpusEntry make_rotation(int dim);

// "shifted-<mu>-<dim>": blocks [[−μ,−1],[1,−μ]], T ≡ 0. Not monotone for μ > 0;
// exactly ρ-co-hypomonotone with ρ = μ/(1+μ²), L = √(1+μ²), x⋆ = 0.
CorpusEntry make_shifted_rotation(double mu, int dim);

// "box-bilinear-<n>": F(u,v) = (Bv, −Bᵀu) on ℝ²ⁿ with T the normal cone of
// [−bound, bound]²ⁿ (resolvent = clamp, nonexpansive). ρ = 0, L = ‖B‖₂, x⋆ = 0.
CorpusEntry make_box_bilinear(const Matrix& B, double bound);

// rotation-2, shifted-0.05-2, shifted-0.1-2, box-bilinear-1.
std::vector<CorpusEntry> standard_corpus();

// Parses "rotation-<dim>", "shifted-<mu>-<dim>", "box-bilinear-<n>" (the named
// box instances use B = I, bound = 1). Throws ConfigError on unknown names.
CorpusEntry corpus_by_name(const std::string& name);

}  // namespace egkit
