#ifndef SPECPROJ_EIG_HPP
#define SPECPROJ_EIG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "specproj/spectrum.hpp"

namespace specproj {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenOptions {
  bool balance = true;
  /// Compute eigenvectors and check ||Mw - eta w|| <= tolerance * ||M||_1.
  bool certify = true;
  double certificate_tolerance = 1e-8;
  /// QR sweeps allowed per eigenvalue before giving up.
  int iterations_per_eigenvalue = 30;
};

namespace detail {

template <class Matrix>
void require_square_finite(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
  if (m.rows() == 0) throw std::invalid_argument(std::string(who) + ": empty matrix");
  if (!m.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

/// Parlett-Reinsch diagonal balancing with power-of-two scalings (no
/// permutations). On return `m` holds D^{-1} M D; the diagonal of D is
/// returned.
template <class Matrix>
Eigen::VectorXd balance_in_place(Matrix& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double col = 0.0;
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(m(j, i));
        row += std::abs(m(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      double g = row / radix;
      double f = 1.0;
      const double s = col + row;
      while (col < g) {
        f *= radix;
        col *= radix2;
      }
      g = row * radix;
      while (col > g) {
        f /= radix;
        col /= radix2;
      }
      if ((col + row) / f < 0.95 * s) {
        converged = false;
        scale(i) *= f;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
  return scale;
}

template <class Matrix>
double one_norm(const Matrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// max_k ||M w_k - eta_k w_k|| / ||M||_1 over unit eigenvector estimates.
inline double certificate_residual(const ComplexMatrix& m, const Eigen::VectorXcd& values,
                                   const ComplexMatrix& vectors) {
  const double norm = std::max(one_norm(m), std::numeric_limits<double>::min());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    Eigen::VectorXcd w = vectors.col(k);
    const double wn = w.norm();
    if (!(wn > 0.0)) return std::numeric_limits<double>::infinity();
    w /= wn;
    worst = std::max(worst, (m * w - values(k) * w).norm() / norm);
  }
  return worst;
}

inline Spectrum finish(const Eigen::VectorXcd& values, Sidedness sides, double residual) {
  Spectrum s;
  s.sides = sides;
  s.values.assign(values.data(), values.data() + values.size());
  s.max_residual = residual;
  return order_spectrum(std::move(s));
}

}  // namespace detail

/// All eigenvalues of a real square matrix, ordered.
inline Spectrum eigen_real(const RealMatrix& matrix, const EigenOptions& opts = {}) {
  detail::require_square_finite(matrix, "eigen_real");
  RealMatrix work = matrix;
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(work.rows());
  if (opts.balance) scale = detail::balance_in_place(work);

  Eigen::EigenSolver<RealMatrix> solver;
  solver.setMaxIterations(opts.iterations_per_eigenvalue * static_cast<int>(work.rows()));
  solver.compute(work, opts.certify);
  if (solver.info() != Eigen::Success)
    throw SolverError("eigen_real: QR iteration did not converge");

  double residual = 0.0;
  if (opts.certify) {
    ComplexMatrix vectors = scale.asDiagonal() * solver.eigenvectors();
    residual = detail::certificate_residual(matrix.cast<Complex>(), solver.eigenvalues(), vectors);
    if (!(residual <= opts.certificate_tolerance))
      throw SolverError("eigen_real: backward-error certificate failed (residual " +
                        std::to_string(residual) + ")");
  }
  // A real matrix has a conjugate-symmetric spectrum.
  return detail::finish(solver.eigenvalues(), Sidedness::two_sided, residual);
}

/// All eigenvalues of a complex square matrix (native complex Schur form),
/// ordered. The returned spectrum is tagged one-sided.
inline Spectrum eigen_complex(const ComplexMatrix& matrix, const EigenOptions& opts = {}) {
  detail::require_square_finite(matrix, "eigen_complex");
  ComplexMatrix work = matrix;
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(work.rows());
  if (opts.balance) scale = detail::balance_in_place(work);

  Eigen::ComplexEigenSolver<ComplexMatrix> solver;
  solver.setMaxIterations(opts.iterations_per_eigenvalue * static_cast<int>(work.rows()));
  solver.compute(work, opts.certify);
  if (solver.info() != Eigen::Success)
    throw SolverError("eigen_complex: QR iteration did not converge");

  double residual = 0.0;
  if (opts.certify) {
    ComplexMatrix vectors = scale.asDiagonal() * solver.eigenvectors();
    residual = detail::certificate_residual(matrix, solver.eigenvalues(), vectors);
    if (!(residual <= opts.certificate_tolerance))
      throw SolverError("eigen_complex: backward-error certificate failed (residual " +
                        std::to_string(residual) + ")");
  }
  return detail::finish(solver.eigenvalues(), Sidedness::one_sided, residual);
}

struct SpectrumMatch {
  std::size_t first;   // position in the first spectrum
  std::size_t second;  // position of the nearest value in the second spectrum
  double distance;
};

/// Nearest-neighbour pairing of s1[first..last) into s2.
inline std::vector<SpectrumMatch> match_spectra(const Spectrum& s1, const Spectrum& s2,
                                                std::size_t first, std::size_t last) {
  if (!s1.ordered || !s2.ordered)
    throw std::invalid_argument("match_spectra: spectra must be ordered");
  if (first > last || last > s1.size())
    throw std::invalid_argument("match_spectra: band exceeds the spectrum length");
  if (s2.size() == 0 && first < last)
    throw std::invalid_argument("match_spectra: empty target spectrum");
  std::vector<SpectrumMatch> out;
  out.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    // s2 is sorted by Im, so scan outward from the first entry at or above Im(s1[i]).
    const Complex z = s1.values[i];
    const auto it = std::lower_bound(s2.values.begin(), s2.values.end(), z.imag(),
                                     [](const Complex& c, double im) { return c.imag() < im; });
    const auto start = static_cast<std::ptrdiff_t>(it - s2.values.begin());
    const auto n2 = static_cast<std::ptrdiff_t>(s2.size());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::ptrdiff_t j = start; j < n2; ++j) {
      if (s2.values[j].imag() - z.imag() > best) break;
      const double d = std::abs(s2.values[j] - z);
      if (d < best) best = d, best_j = static_cast<std::size_t>(j);
    }
    for (std::ptrdiff_t j = start - 1; j >= 0; --j) {
      if (z.imag() - s2.values[j].imag() > best) break;
      const double d = std::abs(s2.values[j] - z);
      if (d < best || (d == best && static_cast<std::size_t>(j) < best_j))
        best = d, best_j = static_cast<std::size_t>(j);
    }
    out.push_back({i, best_j, best});
  }
  return out;
}

}  // namespace specproj

#endif  // SPECPROJ_EIG_HPP
