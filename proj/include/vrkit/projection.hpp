#pragma once

#include "vrkit/dataset.hpp"

namespace vrkit {

class PrecondState;

enum class ProjectionKind { none, l2_ball, box };

// Feasible set X for the projected step.
struct ProjectionSpec {
  ProjectionKind kind = ProjectionKind::none;
  double radius = 0.0;
  Vector lo;
  Vector hi;
  // Bisection tolerance on ||x|| - R for the weighted ball projection.
  double tolerance = 1e-10;

  static ProjectionSpec none() { return {}; }
  static ProjectionSpec l2_ball(double radius, double tolerance = 1e-10);
  static ProjectionSpec box(Vector lo, Vector hi);

  bool active() const { return kind != ProjectionKind::none; }
  // Diameter D of X; infinite when kind == none.
  double diameter() const;
  bool contains(const Vector& x, double slack = 0.0) const;
};

// argmin_{x in X} ||x - y||_A with A the preconditioner held by `state`.
// Supported: any set under scalar A; box and l2_ball under diagonal A. A full
// matrix A with an active set throws std::invalid_argument.
Vector project(const ProjectionSpec& spec, const PrecondState& state, const Vector& y);

// Euclidean projection (A = I).
Vector project_euclidean(const ProjectionSpec& spec, const Vector& y);

}  // namespace vrkit
