#include <cmath>

#include <gtest/gtest.h>

#include "vrkit/armijo.hpp"

namespace vrkit {
namespace {

// f_i(x) = a (x - s_i)^2 with s_1 = 1, s_2 = -1; test-side Armijo condition.
bool armijo_holds(double a, double c, double x, int i, double eta) {
  const double s = i == 1 ? 1.0 : -1.0;
  const double g = 2.0 * a * x;
  const auto fi = [&](double y) { return a * (y - s) * (y - s); };
  return fi(x - eta * g) <= fi(x) - c * eta * g * g + 1e-12;
}

TEST(ArmijoTest, Examples) {
  EXPECT_EQ(armijo_max_step(1.0, 1.0, 1.0, 0.5, 2), 1.0);
  EXPECT_EQ(0.5 - 1.0 * (2.0 * 0.5), -0.5);
  for (double x : {0.01, 0.3, 0.5, 0.99}) EXPECT_EQ(armijo_max_step(1.0, 1.0, 1.0, x, 1), 0.0);
  EXPECT_EQ(armijo_max_step(1.0, 1.0, 1.0, 0.0, 2), 0.0);
  EXPECT_THROW(armijo_max_step(1.0, 1.0, 1.0, 0.5, 3), std::invalid_argument);
}

TEST(ArmijoTest, ClosedFormIsTheLargestAcceptedStep) {
  for (double a : {1.0, 2.0, 5.0}) {
    for (double c : {0.1, 0.5, 1.0}) {
      for (double x : {-2.0, -0.7, -0.2, 0.2, 0.7, 2.0}) {
        for (int i : {1, 2}) {
          const double eta = armijo_max_step(a, c, 1.0, x, i);
          if (eta > 0.0) {
            EXPECT_TRUE(armijo_holds(a, c, x, i, eta));
          }
          // Scan: nothing in (eta, eta_max] passes.
          for (int k = 1; k <= 200; ++k) {
            const double cand = eta + (1.0 - eta) * k / 200.0;
            if (cand > eta * (1 + 1e-9) + 1e-9) EXPECT_FALSE(armijo_holds(a, c, x, i, cand)) << a << " " << c << " " << x;
          }
        }
      }
    }
  }
}

TEST(ArmijoTest, EitherStallsOrReflects) {
  const auto r = svrg_inner_armijo_1d(1.0, 1.0, 1.0, 0.5, 0, 0);
  EXPECT_EQ(r.abs_iterates, (std::vector<double>{0.5}));
  // a = c = eta_max = 1: the component pulling toward zero rejects every step,
  // the other accepts eta = 1 and maps x to -x.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto run = svrg_inner_armijo_1d(1.0, 1.0, 1.0, 0.5, 50, seed);
    std::size_t stalls = 0;
    for (std::size_t t = 0; t < run.components.size(); ++t) {
      EXPECT_TRUE(run.step_sizes[t] == 0.0 || run.step_sizes[t] == 1.0);
      if (run.step_sizes[t] == 0.0) ++stalls;
      EXPECT_EQ(run.abs_iterates[t + 1], 0.5);
    }
    EXPECT_GT(stalls, 0u);
  }
}

TEST(ArmijoTest, NeverMovesTowardTheOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = svrg_inner_armijo_1d(1.0, 1.0, 1.0, 0.5, 10000, seed);
    EXPECT_EQ(r.contractions, 0u);
    for (std::size_t t = 0; t + 1 < r.abs_iterates.size(); ++t) {
      const double ax = r.abs_iterates[t];
      if (ax > 0.0 && ax < 1.0) ASSERT_GE(r.abs_iterates[t + 1], ax - 1e-15);
    }
  }
}

TEST(ArmijoTest, ZeroIsAFixedPoint) {
  const auto r = svrg_inner_armijo_1d(2.0, 0.5, 1.0, 0.0, 100, 3);
  for (double v : r.abs_iterates) EXPECT_EQ(v, 0.0);
}

TEST(ArmijoTest, RejectsSmallCurvature) {
  EXPECT_THROW(svrg_inner_armijo_1d(0.5, 1.0, 1.0, 0.5, 10, 0), std::invalid_argument);
  EXPECT_THROW(svrg_inner_armijo_1d(1.0, 0.0, 1.0, 0.5, 10, 0), std::invalid_argument);
}

}  // namespace
}  // namespace vrkit
