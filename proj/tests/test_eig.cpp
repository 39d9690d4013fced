#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "specproj/assembly.hpp"
#include "specproj/eig.hpp"

using namespace specproj;

namespace {

constexpr double pi = std::numbers::pi;

// Characteristic polynomial by Faddeev-LeVerrier: p(z) = sum c[k] z^k, c[n] = 1.
std::vector<Complex> characteristic_polynomial(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

// Durand-Kerner simultaneous root iteration for a monic polynomial.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  auto eval = [&](Complex z) {
    Complex v = c[n];
    for (std::size_t k = n; k-- > 0;) v = v * z + c[k];
    return v;
  };
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(Complex(0.4, 0.9), static_cast<double>(i)) * 2.0;
  for (int it = 0; it < 5000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const Complex step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  return z;
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  // Greedy pairing: adequate for well-separated test spectra.
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const Complex& p, const Complex& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

Spectrum make(std::vector<Complex> v) {
  Spectrum s;
  s.values = std::move(v);
  return s;
}

RealMatrix random_damped_system(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DampingProfile p(1);
  for (int b = 0; b < 2; ++b) {
    double lo = unit(rng), hi = unit(rng);
    if (lo > hi) std::swap(lo, hi);
    p.add_interval({lo, std::min(1.0, hi + 0.01)}, 15.0 * unit(rng));
  }
  return realize_real(assemble(ModalModel(ModelKind::wave1d), p, n));
}

}  // namespace

TEST(Eig, DampedSingleMode) {
  RealMatrix m(2, 2);
  m << 0, 1, -pi * pi, -2;
  const auto s = eigen_real(m);
  ASSERT_EQ(s.size(), 2u);
  const double im = std::sqrt(pi * pi - 1.0);
  EXPECT_NEAR(std::abs(s.values[0] - Complex(-1, -im)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(s.values[1] - Complex(-1, im)), 0.0, 1e-13);
}

TEST(Eig, DiagonalAndUndamped) {
  RealMatrix d = Eigen::Vector4d(3.0, -1.0, 0.5, 7.0).asDiagonal();
  const auto s = eigen_real(d);
  std::vector<double> re;
  for (auto z : s.values) {
    re.push_back(z.real());
    EXPECT_EQ(z.imag(), 0.0);
  }
  std::sort(re.begin(), re.end());
  EXPECT_EQ(re, (std::vector<double>{-1.0, 0.5, 3.0, 7.0}));

  RealMatrix u(2, 2);
  u << 0, 1, -pi * pi, 0;
  const auto su = eigen_real(u);
  EXPECT_NEAR(std::abs(su.values[0] - Complex(0, -pi)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(su.values[1] - Complex(0, pi)), 0.0, 1e-13);
}

TEST(Eig, ComplexDiagonalAndHermitian) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = {-1, -pi * pi};
  d(1, 1) = {-1, -4 * pi * pi};
  const auto s = eigen_complex(d);
  EXPECT_EQ(s.sides, Sidedness::one_sided);
  EXPECT_NEAR(std::abs(s.values[0] - d(1, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.values[1] - d(0, 0)), 0.0, 1e-12);

  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  RealMatrix a(6, 6);
  for (int i = 0; i < 36; ++i) a.data()[i] = g(rng);
  const RealMatrix sym = a + a.transpose();
  for (auto z : eigen_complex(sym.cast<Complex>()).values) EXPECT_NEAR(z.imag(), 0.0, 1e-10);
}

TEST(Eig, RandomComplexMatchesPolynomialOracle) {
  std::mt19937 rng(42);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix m(5, 5);
    for (int i = 0; i < 25; ++i) m.data()[i] = {g(rng), g(rng)};
    const auto oracle = polynomial_roots(characteristic_polynomial(m));
    EXPECT_LT(multiset_distance(eigen_complex(m).values, oracle), 1e-6);
  }
}

TEST(Eig, OrderingRule) {
  const Complex i(0, 1);
  EXPECT_EQ(order_spectrum(make({i, -i, 2.0 * i})).values, (std::vector<Complex>{-i, i, 2.0 * i}));
  // Equal imaginary parts: larger modulus first.
  EXPECT_EQ(order_spectrum(make({Complex(-1, 1), Complex(-2, 1)})).values,
            (std::vector<Complex>{Complex(-2, 1), Complex(-1, 1)}));
  // Equal imaginary part and modulus: real part ascending.
  EXPECT_EQ(order_spectrum(make({Complex(2, 0), Complex(-2, 0)})).values,
            (std::vector<Complex>{Complex(-2, 0), Complex(2, 0)}));
  const auto once = order_spectrum(make({Complex(-1, 3), Complex(0, -2), Complex(-4, 3)}));
  EXPECT_EQ(order_spectrum(once).values, once.values);
}

TEST(Eig, SpectralInvariantsOnDampedSystems) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + trial;
    const RealMatrix m = random_damped_system(rng, n);
    const auto s = eigen_real(m);
    ASSERT_EQ(s.size(), static_cast<std::size_t>(2 * n));
    EXPECT_LE(s.max_residual, 1e-8);

    std::vector<Complex> conj;
    for (auto z : s.values) conj.push_back(std::conj(z));
    EXPECT_LT(multiset_distance(s.values, conj), 1e-8);

    Complex sum = 0.0, prod = 1.0;
    for (auto z : s.values) sum += z, prod *= z;
    EXPECT_LT(std::abs(sum - m.trace()), 1e-8 * std::abs(m.trace()));
    const double det = m.determinant();
    EXPECT_LT(std::abs(prod - det), 1e-6 * std::abs(det));
    for (auto z : s.values) EXPECT_LE(z.real(), 1e-10);
  }
}

TEST(Eig, MatchSpectra) {
  const auto s1 = order_spectrum(make({{-1, -3}, {-1, 3}, {-2, -7}, {-2, 7}}));
  auto m = match_spectra(s1, s1, 0, 4);
  for (const auto& x : m) {
    EXPECT_EQ(x.distance, 0.0);
    EXPECT_EQ(x.first, x.second);
  }
  const Complex shift(0.03, -0.04);
  std::vector<Complex> moved;
  for (auto z : s1.values) moved.push_back(z + shift);
  m = match_spectra(s1, order_spectrum(make(moved)), 1, 3);
  ASSERT_EQ(m.size(), 2u);
  for (const auto& x : m) EXPECT_NEAR(x.distance, 0.05, 1e-15);
  EXPECT_THROW(match_spectra(s1, s1, 0, 5), std::invalid_argument);
  EXPECT_THROW(match_spectra(make({1.0}), s1, 0, 1), std::invalid_argument);
}

TEST(Eig, FailuresAreExplicit) {
  RealMatrix bad(2, 2);
  bad << 1, std::nan(""), 0, 1;
  EXPECT_THROW(eigen_real(bad), std::invalid_argument);
  EXPECT_THROW(eigen_real(RealMatrix(2, 3)), std::invalid_argument);

  // A zero sweep budget cannot converge on a matrix that needs iterations.
  std::mt19937 rng(11);
  const RealMatrix m = random_damped_system(rng, 10);
  EigenOptions opts;
  opts.iterations_per_eigenvalue = 0;
  EXPECT_THROW(eigen_real(m, opts), SolverError);
}

TEST(Eig, BalancingPreservesSpectrum) {
  std::mt19937 rng(4);
  const RealMatrix m = random_damped_system(rng, 12);
  EigenOptions raw;
  raw.balance = false;
  const auto a = eigen_real(m);
  const auto b = eigen_real(m, raw);
  EXPECT_LT(multiset_distance(a.values, b.values), 1e-8 * m.cwiseAbs().maxCoeff());
}
