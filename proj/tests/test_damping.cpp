#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "specproj/damping.hpp"
#include "specproj/quadrature.hpp"

using namespace specproj;

namespace {

// With `quantized`, endpoints are multiples of 1/32 so that a 1/256 midpoint
// grid visits every cell of the box arrangement.
DampingProfile random_profile(std::mt19937& rng, int dimension, int max_boxes = 3,
                              bool quantized = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> amp(0.0, 10.0);
  std::uniform_int_distribution<int> count(1, max_boxes);
  std::uniform_int_distribution<int> tick(0, 32);
  auto interval = [&] {
    double a = quantized ? tick(rng) / 32.0 : unit(rng);
    double b = quantized ? tick(rng) / 32.0 : unit(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) b = std::min(1.0, a + 0.0625), a = b - 0.0625;
    return Interval{a, b};
  };
  DampingProfile p(dimension);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) p.add_box(interval(), dimension == 2 ? interval() : Interval{0, 1}, amp(rng));
  return p;
}

}  // namespace

TEST(Damping, IntervalFamily) {
  const auto whole = family_interval(0.5, 1.0);
  ASSERT_EQ(whole.boxes().size(), 1u);
  EXPECT_EQ(whole.boxes()[0].x, (Interval{0.0, 1.0}));
  EXPECT_EQ(whole.boxes()[0].amplitude, 1.0);
  EXPECT_DOUBLE_EQ(whole.total_mass(), 1.0);

  const auto narrow = family_interval(0.5, 0.25);
  EXPECT_EQ(narrow.boxes()[0].amplitude, 4.0);
  EXPECT_DOUBLE_EQ(narrow.boxes()[0].x.lo, 0.375);
  EXPECT_DOUBLE_EQ(narrow.boxes()[0].x.hi, 0.625);

  for (double x0 : {0.1, 0.25, 0.4, 0.5})
    for (double alpha : {0.01, 0.1, 2 * x0}) EXPECT_NEAR(family_interval(x0, alpha).total_mass(), 1.0, 1e-14);

  EXPECT_THROW(family_interval(0.3, 0.8), std::invalid_argument);
  EXPECT_THROW(family_interval(0.5, 0.0), std::invalid_argument);
}

TEST(Damping, CombFamily) {
  const auto one = family_comb(1);
  ASSERT_EQ(one.boxes().size(), 1u);
  EXPECT_DOUBLE_EQ(0.5 * (one.boxes()[0].x.lo + one.boxes()[0].x.hi), 0.5);
  EXPECT_EQ(one.boxes()[0].amplitude, 0.5);

  const auto two = family_comb(2);
  ASSERT_EQ(two.boxes().size(), 2u);
  EXPECT_DOUBLE_EQ(0.5 * (two.boxes()[0].x.lo + two.boxes()[0].x.hi), 0.25);
  EXPECT_DOUBLE_EQ(0.5 * (two.boxes()[1].x.lo + two.boxes()[1].x.hi), 0.75);

  // Widths 1/(2 i beta) at amplitude 1/2: mass = H_beta / (4 beta).
  for (int beta : {1, 2, 4, 8}) {
    double harmonic = 0.0;
    for (int i = 1; i <= beta; ++i) harmonic += 1.0 / i;
    EXPECT_NEAR(family_comb(beta).total_mass(), harmonic / (4.0 * beta), 1e-15);
  }
  EXPECT_NEAR(family_comb(4, 0.25).total_mass(), 0.5, 1e-15);
  EXPECT_THROW(family_comb(0), std::invalid_argument);
  EXPECT_THROW(family_comb(2, 0.6), std::invalid_argument);
}

TEST(Damping, SquareFamilies) {
  const auto unit = family_square2d(1.0);
  EXPECT_EQ(unit.boxes()[0].amplitude, 1.0);
  EXPECT_DOUBLE_EQ(unit.total_mass(), 1.0);

  const auto moving = family_moving_square(0.5, 0.5);
  EXPECT_EQ(moving.boxes()[0].amplitude, 64.0);
  EXPECT_DOUBLE_EQ(moving.boxes()[0].x.lo, 7.0 / 16);
  EXPECT_DOUBLE_EQ(moving.boxes()[0].y.hi, 9.0 / 16);
  EXPECT_DOUBLE_EQ(moving.total_mass(), 1.0);

  EXPECT_THROW(family_square2d(0.0), std::invalid_argument);
  EXPECT_THROW(family_moving_square(0.05, 0.5), std::invalid_argument);
}

TEST(Damping, ProfileValidation) {
  DampingProfile p(1);
  EXPECT_THROW(p.add_interval({0.2, 0.1}, 1.0), std::invalid_argument);
  EXPECT_THROW(p.add_interval({-0.1, 0.5}, 1.0), std::invalid_argument);
  EXPECT_THROW(p.add_interval({0.1, 0.5}, -1.0), std::invalid_argument);
  EXPECT_THROW(DampingProfile(3), std::invalid_argument);
}

TEST(Damping, MassAndSupAgreeWithGrid) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = trial % 2 ? 2 : 1;
    const auto p = random_profile(rng, dim, 4, true);
    const int n = 256;
    double grid_sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      if (dim == 1) {
        grid_sup = std::max(grid_sup, p.value(x));
      } else {
        for (int j = 0; j < n; ++j) grid_sup = std::max(grid_sup, p.value(x, (j + 0.5) / n));
      }
    }
    EXPECT_NEAR(p.sup_norm(), grid_sup, 1e-12);

    // Exact mass: boxes integrated independently.
    double mass = 0.0;
    for (const auto& b : p.boxes()) mass += b.amplitude * b.x.length() * (dim == 2 ? b.y.length() : 1.0);
    EXPECT_NEAR(p.total_mass(), mass, 1e-12);
  }
  DampingProfile overlapping(1);
  overlapping.add_interval({0.1, 0.6}, 1.0).add_interval({0.4, 0.9}, 2.0);
  EXPECT_DOUBLE_EQ(overlapping.sup_norm(), 3.0);
  EXPECT_DOUBLE_EQ(overlapping.value(0.5), 3.0);
  EXPECT_DOUBLE_EQ(overlapping.total_mass(), 1.5);
}

TEST(Damping, OverlapBasicValues) {
  const ModalModel w(ModelKind::wave1d);
  const auto one = DampingProfile::constant(1.0);
  for (int i = 1; i <= 30; ++i) {
    EXPECT_NEAR(overlap(w, one, {i}, {i}), 1.0, 1e-13);
    for (int j = i + 1; j <= 30; ++j) EXPECT_NEAR(overlap(w, one, {i}, {j}), 0.0, 1e-13);
  }
  DampingProfile p(1);
  p.add_interval({0.1, 0.5}, 10.0);
  EXPECT_NEAR(overlap(w, p, {1}, {1}), overlap_quadrature(w, p, {1}, {1}, 1e-12), 1e-10);
  EXPECT_EQ(overlap(w, DampingProfile(1), {3}, {4}), 0.0);
}

TEST(Damping, OverlapIsExactlySymmetric) {
  std::mt19937 rng(11);
  for (auto kind : {ModelKind::wave1d, ModelKind::wave2d}) {
    const ModalModel m(kind);
    const auto modes = enumerate_modes(m, 25);
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = random_profile(rng, m.dimension());
      for (const auto& a : modes)
        for (const auto& b : modes) EXPECT_EQ(overlap(m, p, a, b), overlap(m, p, b, a));
    }
  }
}

TEST(Damping, OverlapScalesLinearly) {
  std::mt19937 rng(5);
  const ModalModel m(ModelKind::wave1d);
  const auto p = random_profile(rng, 1);
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      const double base = overlap(m, p, {i}, {j});
      EXPECT_EQ(overlap(m, p.scaled(4.0), {i}, {j}), 4.0 * base);  // power of two: exact
      EXPECT_NEAR(overlap(m, p.scaled(3.7), {i}, {j}), 3.7 * base, 1e-14 * (1 + std::abs(base)));
    }
  }
}

TEST(Damping, GramMatrixIsPositiveSemidefinite) {
  std::mt19937 rng(3);
  for (auto kind : {ModelKind::wave1d, ModelKind::wave2d}) {
    const ModalModel m(kind);
    const auto modes = enumerate_modes(m, 10);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_profile(rng, m.dimension());
      Eigen::MatrixXd g(10, 10);
      for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) g(i, j) = overlap(m, p, modes[i], modes[j]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
  }
}

TEST(Damping, ClosedFormMatchesQuadratureOracle) {
  std::mt19937 rng(2024);
  for (auto kind : {ModelKind::wave1d, ModelKind::beam1d, ModelKind::schrodinger1d, ModelKind::wave2d}) {
    const ModalModel m(kind);
    const auto modes = enumerate_modes(m, 12);
    std::uniform_int_distribution<int> pick(0, 11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_profile(rng, m.dimension());
      const auto& a = modes[pick(rng)];
      const auto& b = modes[pick(rng)];
      EXPECT_NEAR(overlap(m, p, a, b), overlap_quadrature(m, p, a, b, 1e-11), 1e-10);
    }
  }
}

TEST(Quadrature, OracleEdgeCases) {
  const ModalModel w(ModelKind::wave1d);
  EXPECT_NEAR(overlap_quadrature(w, DampingProfile::constant(1.0), {4}, {4}, 1e-10), 1.0, 1e-10);
  EXPECT_EQ(overlap_quadrature(w, DampingProfile::constant(0.0), {2}, {3}, 1e-10), 0.0);
  EXPECT_THROW(overlap_quadrature(w, DampingProfile::constant(1.0), {1}, {1}, 0.0), std::invalid_argument);
  // A budget too small for the tolerance is reported, not silently accepted.
  auto wiggly = [](double x) { return std::sin(400.0 * x); };
  EXPECT_THROW(integrate_adaptive(wiggly, 0.0, 1.0, 1e-14, 4), QuadratureError);
}
