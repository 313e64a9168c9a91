#include <gtest/gtest.h>

#include <cmath>

#include "cnk/linalg.hpp"
#include "cnk/selection.hpp"
#include "support/oracles.hpp"

namespace cnk {
namespace {

constexpr int kStates = 2000;

TEST(SelectionProperty, EpsilonTimesFrobeniusAtLeastOne) {
  Rng rng(1);
  for (int t = 0; t < kStates; ++t) {
    const auto s = oracle::random_geometry(rng);
    const RowGeometry g = RowGeometry::from(s.residual, s.grad_sq);
    const double theta = t % 10 == 0 ? (t % 20 == 0 ? 0.0 : 1.0) : rng.uniform();
    const double eps = compute_epsilon(g, ThresholdMode::convex(theta));
    ASSERT_GE(eps * g.jac_fro_sq, 1.0 - 1e-12) << "state " << t;
  }
}

TEST(SelectionProperty, DeltaBetweenInverseRowsAndOne) {
  Rng rng(2);
  for (int t = 0; t < kStates; ++t) {
    const auto s = oracle::random_geometry(rng);
    const RowGeometry g = RowGeometry::from(s.residual, s.grad_sq);
    const Index m = g.rows();
    const double delta = compute_delta(g, m, ThresholdMode::convex(rng.uniform()));
    ASSERT_GE(delta, (1.0 / static_cast<double>(m)) * (1 - 1e-12));
    ASSERT_LE(delta, 1.0 + 1e-12);
  }
}

TEST(SelectionProperty, SetsNonemptyAndContainArgmax) {
  Rng rng(3);
  for (int t = 0; t < kStates; ++t) {
    const auto s = oracle::random_geometry(rng);
    const RowGeometry g = RowGeometry::from(s.residual, s.grad_sq);
    const ThresholdMode mode = t % 3 == 0 ? ThresholdMode::scaled(0.05 + 0.95 * rng.uniform())
                                          : ThresholdMode::convex(rng.uniform());
    const SelectionResult u = build_distance_set(g, compute_epsilon(g, mode));
    const SelectionResult i = build_residual_set(g, compute_delta(g, g.rows(), mode));
    ASSERT_FALSE(u.set.empty());
    ASSERT_FALSE(i.set.empty());

    Index best_distance = -1;
    double best_ratio = -1.0;
    for (Index r : g.active) {
      const double ratio = g.residual(r) * g.residual(r) / g.grad_sq_norms(r);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_distance = r;
      }
    }
    Index best_residual = 0;
    g.residual.cwiseAbs2().maxCoeff(&best_residual);
    EXPECT_NE(std::find(u.set.begin(), u.set.end(), best_distance), u.set.end()) << "state " << t;
    EXPECT_NE(std::find(i.set.begin(), i.set.end(), best_residual), i.set.end()) << "state " << t;
  }
}

TEST(SelectionProperty, ProbabilitiesNormalize) {
  Rng rng(4);
  for (int t = 0; t < kStates; ++t) {
    const auto s = oracle::random_geometry(rng);
    const RowGeometry g = RowGeometry::from(s.residual, s.grad_sq);
    const ThresholdMode half = ThresholdMode::convex(0.5);
    for (const SelectionResult& sel : {build_distance_set(g, compute_epsilon(g, half)),
                                       build_residual_set(g, compute_delta(g, g.rows(), half))}) {
      double total = 0.0;
      for (double p : sel.probabilities()) {
        ASSERT_GE(p, 0.0);
        total += p;
      }
      ASSERT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(SelectionProperty, HomogeneousUnderRescaling) {
  Rng rng(5);
  for (int t = 0; t < kStates; ++t) {
    const auto s = oracle::random_geometry(rng);
    const double c = std::ldexp(1.0, static_cast<int>(rng.uniform_index(41)) - 20);
    const RowGeometry g = RowGeometry::from(s.residual, s.grad_sq);
    const RowGeometry h = RowGeometry::from(c * s.residual, (c * c) * s.grad_sq);
    const ThresholdMode mode = ThresholdMode::convex(rng.uniform());
    const SelectionResult u1 = build_distance_set(g, compute_epsilon(g, mode));
    const SelectionResult u2 = build_distance_set(h, compute_epsilon(h, mode));
    ASSERT_EQ(u1.set, u2.set);
    const SelectionResult i1 = build_residual_set(g, compute_delta(g, g.rows(), mode));
    const SelectionResult i2 = build_residual_set(h, compute_delta(h, h.rows(), mode));
    ASSERT_EQ(i1.set, i2.set);
    const auto p1 = u1.probabilities(), p2 = u2.probabilities();
    for (std::size_t k = 0; k < p1.size(); ++k) ASSERT_NEAR(p1[k], p2[k], 1e-12);
    const auto q1 = i1.probabilities(), q2 = i2.probabilities();
    for (std::size_t k = 0; k < q1.size(); ++k) ASSERT_NEAR(q1[k], q2[k], 1e-12);
  }
}

TEST(NumericsProperty, SingularExtremesBoundRayleighQuotients) {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const Index rows = 1 + rng.uniform_index(12);
    const Index cols = 1 + rng.uniform_index(12);
    const DenseMatrix j = oracle::gaussian_matrix(rng, rows, cols);
    const SingularExtremes s = singular_extremes(j);
    for (int k = 0; k < 1000; ++k) {
      Vector x = rng.normal_vector(cols);
      x.normalize();
      const double q = (j * x).norm();
      ASSERT_GE(q, s.h2 * (1 - 1e-12));
      ASSERT_LE(q, s.sigma_max * (1 + 1e-12));
    }
  }
}

}  // namespace
}  // namespace cnk
