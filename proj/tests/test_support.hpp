#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "vrkit/dataset.hpp"
#include "vrkit/problem.hpp"
#include "vrkit/rng.hpp"

namespace vrkit::testing {

// Dense random dataset with ~density nonzeros per row. Classification labels
// are +-1, regression labels standard normal.
inline std::shared_ptr<const Dataset> random_dataset(std::size_t n, std::size_t d, std::uint64_t seed,
                                                     bool classification = true, double density = 1.0) {
  Rng rng(seed);
  auto data = std::make_shared<Dataset>(d);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < n; ++i) {
    idx.clear();
    val.clear();
    for (std::size_t j = 0; j < d; ++j) {
      if (density < 1.0 && rng.uniform() >= density) continue;
      idx.push_back(static_cast<std::uint32_t>(j));
      val.push_back(rng.normal());
    }
    const double y = classification ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.normal();
    data->append_row(idx, val, y);
  }
  return data;
}

inline Vector random_vector(std::size_t d, Rng& rng, double scale = 1.0) {
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = scale * rng.normal();
  return v;
}

// Central differences with step h on every coordinate.
inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& w,
                                 double h = 1e-6) {
  Vector g(w.size());
  Vector probe = w;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    probe[j] = w[j] + h;
    const double up = f(probe);
    probe[j] = w[j] - h;
    const double down = f(probe);
    probe[j] = w[j];
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

// Second derivative of the per-example loss in the margin (test-side, written
// independently of Loss::derivative).
inline double loss_curvature(const Loss& loss, double z, double y) {
  switch (loss.kind) {
    case LossKind::logistic: {
      const double s = 1.0 / (1.0 + std::exp(-y * z));
      return s * (1.0 - s);
    }
    case LossKind::squared: return 1.0;
    case LossKind::huber: return std::abs(z - y) <= loss.huber_delta ? 1.0 : 0.0;
    case LossKind::squared_hinge: return y * z < 1.0 ? 2.0 : 0.0;
  }
  return 0.0;
}

// Reference minimizer by damped Newton iterations with a dense Hessian,
// finished when the gradient norm is below tol. Independent of every
// first-order method in the library.
inline Vector newton_minimize(const Problem& problem, Vector w, double tol = 1e-12, int max_iter = 200) {
  const Dataset& data = problem.data();
  const auto d = static_cast<Eigen::Index>(problem.dim());
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = problem.gradient(w);
    if (g.norm() < tol) break;
    Matrix H = problem.l2_reg() * Matrix::Identity(d, d);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Vector a = data.dense_row(i);
      H += (loss_curvature(problem.loss(), a.dot(w), data.label(i)) / static_cast<double>(data.size())) *
           a * a.transpose();
    }
    H += 1e-14 * Matrix::Identity(d, d);
    const Vector dir = H.ldlt().solve(g);
    const double f0 = problem.value(w);
    double step = 1.0;
    Vector cand = w - dir;
    while (problem.value(cand) > f0 - 1e-4 * step * g.dot(dir) && step > 1e-12) {
      step *= 0.5;
      cand = w - step * dir;
    }
    w = cand;
  }
  return w;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace vrkit::testing
