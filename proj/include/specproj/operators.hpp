#ifndef SPECPROJ_OPERATORS_HPP
#define SPECPROJ_OPERATORS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "specproj/spectrum.hpp"

namespace specproj {

enum class ModelKind { wave1d, beam1d, schrodinger1d, wave2d };

/// Second-order models live on H_{1/2} x H; first-order ones act on H.
enum class SystemOrder { second, first };

/// Mode of the unperturbed operator. One-dimensional models leave l = 0.
struct ModeIndex {
  int k = 1;
  int l = 0;
  int sign = 1;

  bool is_2d() const { return l != 0; }
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

inline void validate(const ModeIndex& m, ModelKind kind) {
  if (kind == ModelKind::wave2d) {
    if (m.k < 1 || m.l < 1) throw std::invalid_argument("2-D mode needs k >= 1 and l >= 1");
  } else {
    if (m.k == 0 || m.l != 0) throw std::invalid_argument("1-D mode needs k != 0 and l == 0");
  }
  if (m.sign != 1 && m.sign != -1) throw std::invalid_argument("mode sign must be +1 or -1");
}

/// Unperturbed operator A together with the coupling of the damping:
/// BB* = damping_factor() * a(x).
class ModalModel {
 public:
  explicit ModalModel(ModelKind kind) : kind_(kind) {}

  ModelKind kind() const { return kind_; }
  SystemOrder order() const {
    return kind_ == ModelKind::schrodinger1d ? SystemOrder::first : SystemOrder::second;
  }
  int dimension() const { return kind_ == ModelKind::wave2d ? 2 : 1; }
  double damping_factor() const { return kind_ == ModelKind::schrodinger1d ? 1.0 : 2.0; }

  /// Eigenvalue of A for the mode; the sign of the mode is irrelevant.
  double mu(const ModeIndex& m) const {
    validate(m, kind_);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double k2 = static_cast<double>(m.k) * m.k;
    switch (kind_) {
      case ModelKind::wave1d:
      case ModelKind::schrodinger1d:
        return k2 * pi2;
      case ModelKind::beam1d:
        return k2 * k2 * pi2 * pi2;
      case ModelKind::wave2d:
        return (k2 + static_cast<double>(m.l) * m.l) * pi2;
    }
    return 0.0;
  }

  /// Eigenvalue of the unperturbed generator: sign * i sqrt(mu) for second
  /// order, -i mu for the Schrodinger model.
  Complex lambda(const ModeIndex& m) const {
    const double value = mu(m);
    if (order() == SystemOrder::first) return {0.0, -value};
    return {0.0, m.sign * std::sqrt(value)};
  }

  /// L2-normalized eigenfunction of A at (x, y); y is ignored in 1-D.
  double eigenfunction(const ModeIndex& m, double x, double y = 0.0) const {
    validate(m, kind_);
    constexpr double pi = std::numbers::pi;
    const int k = std::abs(m.k);
    if (kind_ == ModelKind::wave2d) {
      return 2.0 * std::sin(k * pi * x) * std::sin(m.l * pi * y);
    }
    return std::numbers::sqrt2 * std::sin(k * pi * x);
  }

 private:
  ModelKind kind_;
};

inline std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::wave1d: return "wave1d";
    case ModelKind::beam1d: return "beam1d";
    case ModelKind::schrodinger1d: return "schrodinger1d";
    case ModelKind::wave2d: return "wave2d";
  }
  return "";
}

inline ModelKind parse_model_kind(std::string_view id) {
  for (auto kind : {ModelKind::wave1d, ModelKind::beam1d, ModelKind::schrodinger1d,
                    ModelKind::wave2d}) {
    if (to_string(kind) == id) return kind;
  }
  throw std::invalid_argument("unknown model '" + std::string(id) + "'");
}

/// The N modes of smallest mu, ascending. In 2-D ties are broken
/// lexicographically on (k, l) and (k, l), (l, k) count separately.
inline std::vector<ModeIndex> enumerate_modes(const ModalModel& model, int n) {
  if (n < 1) throw std::invalid_argument("enumerate_modes: N must be >= 1");
  std::vector<ModeIndex> modes;
  modes.reserve(static_cast<std::size_t>(n));
  if (model.dimension() == 1) {
    for (int k = 1; k <= n; ++k) modes.push_back({k, 0, 1});
    return modes;
  }
  // Pairs (k, 1), k <= n, already give n candidates with k^2 + l^2 <= n^2 + 1,
  // so every selected pair has k, l <= n.
  const long bound = static_cast<long>(n) * n + 1;
  std::vector<std::tuple<long, int, int>> candidates;
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      const long s = static_cast<long>(k) * k + static_cast<long>(l) * l;
      if (s > bound) break;
      candidates.emplace_back(s, k, l);
    }
  }
  std::partial_sort(candidates.begin(), candidates.begin() + n, candidates.end());
  for (int i = 0; i < n; ++i) {
    const auto& [s, k, l] = candidates[static_cast<std::size_t>(i)];
    modes.push_back({k, l, 1});
  }
  return modes;
}

/// Spectrum of the unperturbed generator restricted to the first N modes,
/// in the standard ordering.
inline Spectrum base_frequencies(const ModalModel& model, int n) {
  Spectrum s;
  s.sides = model.order() == SystemOrder::second ? Sidedness::two_sided : Sidedness::one_sided;
  for (auto m : enumerate_modes(model, n)) {
    s.values.push_back(model.lambda(m));
    if (model.order() == SystemOrder::second) {
      m.sign = -1;
      s.values.push_back(model.lambda(m));
    }
  }
  return order_spectrum(std::move(s));
}

}  // namespace specproj

#endif  // SPECPROJ_OPERATORS_HPP
