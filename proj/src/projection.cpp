#include "vrkit/projection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vrkit/precond.hpp"

namespace vrkit {

ProjectionSpec ProjectionSpec::l2_ball(double radius, double tolerance) {
  if (!(radius > 0.0)) throw std::invalid_argument("ProjectionSpec: ball radius must be > 0");
  ProjectionSpec spec;
  spec.kind = ProjectionKind::l2_ball;
  spec.radius = radius;
  spec.tolerance = tolerance;
  return spec;
}

ProjectionSpec ProjectionSpec::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("ProjectionSpec: box bounds differ in size");
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("ProjectionSpec: empty box");
  ProjectionSpec spec;
  spec.kind = ProjectionKind::box;
  spec.lo = std::move(lo);
  spec.hi = std::move(hi);
  return spec;
}

double ProjectionSpec::diameter() const {
  switch (kind) {
    case ProjectionKind::none: return std::numeric_limits<double>::infinity();
    case ProjectionKind::l2_ball: return 2.0 * radius;
    case ProjectionKind::box: return (hi - lo).norm();
  }
  return 0.0;
}

bool ProjectionSpec::contains(const Vector& x, double slack) const {
  switch (kind) {
    case ProjectionKind::none: return true;
    case ProjectionKind::l2_ball: return x.norm() <= radius + slack;
    case ProjectionKind::box:
      return ((x.array() >= lo.array() - slack) && (x.array() <= hi.array() + slack)).all();
  }
  return false;
}

namespace {

Vector clip(const ProjectionSpec& spec, const Vector& y) {
  if (spec.lo.size() != y.size()) throw std::invalid_argument("project: box dimension mismatch");
  return y.cwiseMax(spec.lo).cwiseMin(spec.hi);
}

// argmin ||x - y||_A over ||x|| <= R with A = diag(a): x = a y / (a + lambda),
// lambda >= 0 found by bisection on ||x(lambda)|| = R.
Vector weighted_ball(const Vector& a, const Vector& y, double radius, double tolerance) {
  if (y.norm() <= radius) return y;
  auto at = [&](double lambda) -> Vector {
    Vector x(y.size());
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      x[j] = a[j] > 0.0 ? a[j] * y[j] / (a[j] + lambda) : 0.0;
    }
    return x;
  };
  double lo = 0.0;
  double hi = std::max(1.0, a.maxCoeff());
  Vector x_hi = at(hi);
  while (x_hi.norm() > radius) {
    lo = hi;
    hi *= 2.0;
    x_hi = at(hi);
  }
  for (int iter = 0; iter < 400 && radius - x_hi.norm() > tolerance; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Vector x_mid = at(mid);
    if (x_mid.norm() > radius) {
      lo = mid;
    } else {
      hi = mid;
      x_hi = std::move(x_mid);
    }
  }
  return x_hi;
}

}  // namespace

Vector project_euclidean(const ProjectionSpec& spec, const Vector& y) {
  switch (spec.kind) {
    case ProjectionKind::none: return y;
    case ProjectionKind::l2_ball: {
      const double norm = y.norm();
      return norm > spec.radius ? Vector(y * (spec.radius / norm)) : y;
    }
    case ProjectionKind::box: return clip(spec, y);
  }
  return y;
}

Vector project(const ProjectionSpec& spec, const PrecondState& state, const Vector& y) {
  if (!spec.active()) return y;
  switch (state.kind()) {
    case PrecondKind::scalar:
      return project_euclidean(spec, y);
    case PrecondKind::diagonal:
      if (spec.kind == ProjectionKind::box) return clip(spec, y);
      return weighted_ball(state.diagonal_a(), y, spec.radius, spec.tolerance);
    case PrecondKind::full_matrix:
      throw std::invalid_argument("project: projection under a full-matrix preconditioner is not supported");
  }
  return y;
}

}  // namespace vrkit
