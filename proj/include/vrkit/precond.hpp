#pragma once

#include <cstddef>
#include <string_view>

#include "vrkit/dataset.hpp"
#include "vrkit/projection.hpp"

namespace vrkit {

enum class PrecondKind { scalar, diagonal, full_matrix };

std::string_view to_string(PrecondKind kind);
PrecondKind parse_precond_kind(std::string_view name);

struct PrecondVariant {
  PrecondKind kind = PrecondKind::scalar;
  // G_0 = delta * I for diagonal and full-matrix; ignored by scalar (G_0 = 0).
  double delta = 1e-8;

  static PrecondVariant scalar() { return {PrecondKind::scalar, 0.0}; }
  static PrecondVariant diagonal(double delta = 1e-8) { return {PrecondKind::diagonal, delta}; }
  static PrecondVariant full_matrix(double delta = 1e-8) { return {PrecondKind::full_matrix, delta}; }
};

// Full-matrix preconditioning costs O(d^3) per step; larger d only warns.
inline constexpr std::size_t kFullMatrixSoftCap = 512;

// AdaGrad accumulator G_t and its square root A_t = G_t^{1/2}.
//
//   scalar:   G = sum ||g_s||^2            A = sqrt(G)           (a number)
//   diagonal: G = delta + sum g_s (.) g_s  A = sqrt(G) per coordinate
//   full:     G = delta I + sum g_s g_s^T  A = G^{1/2} (eigendecomposition)
//
// For the scalar variant Tr(A) and ||v||_A are taken with A as the number
// sqrt(G), not sqrt(G) * I.
class PrecondState {
 public:
  PrecondState(PrecondVariant variant, std::size_t dim);

  void reset();
  void accumulate(const Vector& g);

  const PrecondVariant& variant() const { return variant_; }
  PrecondKind kind() const { return variant_.kind; }
  std::size_t dim() const { return dim_; }
  std::size_t steps() const { return steps_; }

  // Tr(G) = ||G||_*^2
  double trace_g() const;
  double g_norm_star() const;
  // Tr(A)
  double trace_a() const;

  // False only for the scalar variant before a nonzero gradient arrives.
  bool can_step() const;

  // A^{-1} g. Coordinates of a diagonal G that are still exactly zero map to 0
  // (their gradient entries have all been zero).
  Vector inverse_apply(const Vector& g) const;
  // ||g||^2_{A^{-1}} = g^T A^{-1} g
  double inverse_norm_sq(const Vector& g) const;
  // ||v||^2_A = v^T A v
  double metric_norm_sq(const Vector& v) const;

  // Pi_{X,A}[x - eta A^{-1} g]. Call after accumulate(g).
  Vector step(const Vector& x, const Vector& g, double eta, const ProjectionSpec& proj) const;

  double scalar_g() const { return scalar_; }
  const Vector& diagonal_g() const { return diag_; }
  const Matrix& matrix_g() const { return full_; }
  // Diagonal of A for scalar (sqrt(G) repeated) and diagonal variants.
  Vector diagonal_a() const;
  // Dense A for any variant.
  Matrix dense_a() const;

 private:
  void factorize() const;

  PrecondVariant variant_;
  std::size_t dim_;
  std::size_t steps_ = 0;
  double scalar_ = 0.0;
  Vector diag_;
  Matrix full_;

  mutable bool factor_valid_ = false;
  mutable Matrix eigvecs_;
  mutable Vector sqrt_eigs_;
};

}  // namespace vrkit
