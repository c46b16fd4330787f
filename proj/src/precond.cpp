#include "vrkit/precond.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "vrkit/errors.hpp"

namespace vrkit {

std::string_view to_string(PrecondKind kind) {
  switch (kind) {
    case PrecondKind::scalar: return "scalar";
    case PrecondKind::diagonal: return "diag";
    case PrecondKind::full_matrix: return "full";
  }
  return "scalar";
}

PrecondKind parse_precond_kind(std::string_view name) {
  if (name == "scalar") return PrecondKind::scalar;
  if (name == "diag" || name == "diagonal") return PrecondKind::diagonal;
  if (name == "full" || name == "full_matrix") return PrecondKind::full_matrix;
  throw std::invalid_argument("unknown preconditioner '" + std::string(name) + "'");
}

PrecondState::PrecondState(PrecondVariant variant, std::size_t dim) : variant_(variant), dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("PrecondState: dimension must be positive");
  if (!(variant_.delta >= 0.0)) throw std::invalid_argument("PrecondState: delta must be >= 0");
  if (variant_.kind == PrecondKind::full_matrix) {
    if (!(variant_.delta > 0.0)) {
      throw std::invalid_argument("PrecondState: full-matrix variant needs delta > 0");
    }
    if (dim_ > kFullMatrixSoftCap) {
      std::clog << "vrkit: warning: full-matrix preconditioner with d = " << dim_
                << " costs O(d^3) per step\n";
    }
  }
  reset();
}

void PrecondState::reset() {
  steps_ = 0;
  factor_valid_ = false;
  const auto d = static_cast<Eigen::Index>(dim_);
  switch (variant_.kind) {
    case PrecondKind::scalar:
      scalar_ = 0.0;
      break;
    case PrecondKind::diagonal:
      diag_ = Vector::Constant(d, variant_.delta);
      break;
    case PrecondKind::full_matrix:
      full_ = variant_.delta * Matrix::Identity(d, d);
      break;
  }
}

void PrecondState::accumulate(const Vector& g) {
  if (static_cast<std::size_t>(g.size()) != dim_) {
    throw std::invalid_argument("PrecondState: gradient dimension mismatch");
  }
  switch (variant_.kind) {
    case PrecondKind::scalar:
      scalar_ += g.squaredNorm();
      break;
    case PrecondKind::diagonal:
      diag_ += g.cwiseAbs2();
      break;
    case PrecondKind::full_matrix:
      full_.selfadjointView<Eigen::Lower>().rankUpdate(g);
      full_.triangularView<Eigen::StrictlyUpper>() = full_.transpose();
      factor_valid_ = false;
      break;
  }
  ++steps_;
}

double PrecondState::trace_g() const {
  switch (variant_.kind) {
    case PrecondKind::scalar: return scalar_;
    case PrecondKind::diagonal: return diag_.sum();
    case PrecondKind::full_matrix: return full_.trace();
  }
  return 0.0;
}

double PrecondState::g_norm_star() const { return std::sqrt(trace_g()); }

double PrecondState::trace_a() const {
  switch (variant_.kind) {
    case PrecondKind::scalar: return std::sqrt(scalar_);
    case PrecondKind::diagonal: return diag_.cwiseSqrt().sum();
    case PrecondKind::full_matrix:
      factorize();
      return sqrt_eigs_.sum();
  }
  return 0.0;
}

bool PrecondState::can_step() const {
  return variant_.kind != PrecondKind::scalar || scalar_ > 0.0;
}

void PrecondState::factorize() const {
  if (factor_valid_) return;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(full_);
  if (eig.info() != Eigen::Success) throw NumericalError("PrecondState: eigendecomposition failed");
  const double floor = 0.5 * variant_.delta;
  eigvecs_ = eig.eigenvectors();
  sqrt_eigs_ = eig.eigenvalues().cwiseMax(floor).cwiseSqrt();
  factor_valid_ = true;
}

Vector PrecondState::inverse_apply(const Vector& g) const {
  switch (variant_.kind) {
    case PrecondKind::scalar:
      if (!(scalar_ > 0.0)) {
        throw NumericalError("PrecondState: scalar accumulator is zero; skip the step until a nonzero gradient arrives");
      }
      return g / std::sqrt(scalar_);
    case PrecondKind::diagonal: {
      Vector out(g.size());
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        out[j] = diag_[j] > 0.0 ? g[j] / std::sqrt(diag_[j]) : 0.0;
      }
      return out;
    }
    case PrecondKind::full_matrix:
      factorize();
      return eigvecs_ * ((eigvecs_.transpose() * g).cwiseQuotient(sqrt_eigs_));
  }
  return g;
}

double PrecondState::inverse_norm_sq(const Vector& g) const { return g.dot(inverse_apply(g)); }

double PrecondState::metric_norm_sq(const Vector& v) const {
  switch (variant_.kind) {
    case PrecondKind::scalar: return std::sqrt(scalar_) * v.squaredNorm();
    case PrecondKind::diagonal: return v.cwiseAbs2().dot(diag_.cwiseSqrt());
    case PrecondKind::full_matrix: {
      factorize();
      const Vector c = eigvecs_.transpose() * v;
      return c.cwiseAbs2().dot(sqrt_eigs_);
    }
  }
  return 0.0;
}

Vector PrecondState::diagonal_a() const {
  switch (variant_.kind) {
    case PrecondKind::scalar:
      return Vector::Constant(static_cast<Eigen::Index>(dim_), std::sqrt(scalar_));
    case PrecondKind::diagonal:
      return diag_.cwiseSqrt();
    case PrecondKind::full_matrix:
      throw std::invalid_argument("PrecondState: full-matrix preconditioner is not diagonal");
  }
  return {};
}

Matrix PrecondState::dense_a() const {
  if (variant_.kind == PrecondKind::full_matrix) {
    factorize();
    return eigvecs_ * sqrt_eigs_.asDiagonal() * eigvecs_.transpose();
  }
  return diagonal_a().asDiagonal();
}

Vector PrecondState::step(const Vector& x, const Vector& g, double eta,
                          const ProjectionSpec& proj) const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("PrecondState: step size must be positive");
  Vector next = x - eta * inverse_apply(g);
  if (proj.active()) next = project(proj, *this, next);
  if (!next.allFinite()) throw NumericalError("PrecondState: non-finite iterate");
  return next;
}

}  // namespace vrkit
