#ifndef SPECPROJ_ASSEMBLY_HPP
#define SPECPROJ_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "specproj/damping.hpp"
#include "specproj/eig.hpp"
#include "specproj/operators.hpp"

namespace specproj {

/// Galerkin projection of A_B onto the first N eigenvector pairs of A_0.
///
/// `omega(i, j) = -<BB* v_i, v_j>_H = -damping_factor * overlap(i, j)`. For
/// second-order models the realized matrix is the block companion
/// [[0, I], [-diag(lambda), omega]]; for first-order models it is
/// -i diag(lambda) + omega.
struct ProjectedSystem {
  ModalModel model{ModelKind::wave1d};
  DampingProfile profile;
  std::vector<ModeIndex> modes;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd omega;

  int size() const { return static_cast<int>(modes.size()); }
  SystemOrder order() const { return model.order(); }
};

inline ProjectedSystem assemble(const ModalModel& model, const DampingProfile& profile, int n) {
  if (profile.dimension() != model.dimension())
    throw std::invalid_argument("assemble: profile dimension does not match the model");
  ProjectedSystem sys{model, profile, enumerate_modes(model, n), {}, {}};
  sys.lambda.resize(n);
  sys.omega.resize(n, n);
  const double c = model.damping_factor();
  for (int i = 0; i < n; ++i) {
    sys.lambda(i) = model.mu(sys.modes[static_cast<std::size_t>(i)]);
    for (int j = 0; j <= i; ++j) {
      const double w = 0.0 - c * overlap(model, profile, sys.modes[static_cast<std::size_t>(i)],
                                    sys.modes[static_cast<std::size_t>(j)]);
      sys.omega(i, j) = w;
      sys.omega(j, i) = w;
    }
  }
  return sys;
}

using RealizedMatrix = std::variant<RealMatrix, ComplexMatrix>;

inline RealMatrix realize_real(const ProjectedSystem& sys) {
  if (sys.order() != SystemOrder::second)
    throw std::invalid_argument("realize_real: first-order systems are complex");
  const Eigen::Index n = sys.size();
  RealMatrix m = RealMatrix::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n).setIdentity();
  m.bottomLeftCorner(n, n).diagonal() = -sys.lambda;
  m.bottomRightCorner(n, n) = sys.omega;
  return m;
}

inline ComplexMatrix realize_complex(const ProjectedSystem& sys) {
  if (sys.order() != SystemOrder::first)
    throw std::invalid_argument("realize_complex: second-order systems are real");
  ComplexMatrix m = sys.omega.cast<Complex>();
  m.diagonal() += Complex(0.0, -1.0) * sys.lambda.cast<Complex>();
  return m;
}

inline RealizedMatrix realize_matrix(const ProjectedSystem& sys) {
  if (sys.order() == SystemOrder::second) return realize_real(sys);
  return realize_complex(sys);
}

/// Eigenvalues of the realized matrix, ordered.
inline Spectrum solve(const ProjectedSystem& sys, const EigenOptions& opts = {}) {
  if (sys.order() == SystemOrder::second) return eigen_real(realize_real(sys), opts);
  return eigen_complex(realize_complex(sys), opts);
}

namespace detail {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Plain-text dump: one row per line, space separated, 17 significant
/// digits; complex entries as "re+imi" / "re-imi".
inline void write_matrix(std::ostream& os, const RealizedMatrix& matrix) {
  std::visit(
      [&](const auto& m) {
        using Scalar = typename std::decay_t<decltype(m)>::Scalar;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            if constexpr (std::is_same_v<Scalar, double>) {
              os << detail::format_g17(m(i, j));
            } else {
              char buf[80];
              std::snprintf(buf, sizeof buf, "%.17g%+.17gi", m(i, j).real(), m(i, j).imag());
              os << buf;
            }
          }
          os << '\n';
        }
      },
      matrix);
}

}  // namespace specproj

#endif  // SPECPROJ_ASSEMBLY_HPP
