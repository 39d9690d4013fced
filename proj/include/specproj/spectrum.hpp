#ifndef SPECPROJ_SPECTRUM_HPP
#define SPECPROJ_SPECTRUM_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace specproj {

using Complex = std::complex<double>;

/// Layout of a spectrum with respect to the signed mode index k in Z*.
///
/// A two-sided spectrum has 2N values indexed k = -N..-1, 1..N (second-order
/// models, conjugate-symmetric). A one-sided spectrum has N values, all in the
/// lower half plane, indexed so that the highest frequency comes first
/// (first-order models).
enum class Sidedness { two_sided, one_sided };

struct Spectrum {
  std::vector<Complex> values;
  Sidedness sides = Sidedness::two_sided;
  bool ordered = false;
  /// Largest backward-error residual ||Mw - eta w|| / ||M|| seen while
  /// certifying the eigenpairs (0 when certification was skipped).
  double max_residual = 0.0;

  std::size_t size() const { return values.size(); }

  /// Number of modes N behind this spectrum.
  std::size_t modes() const {
    return sides == Sidedness::two_sided ? values.size() / 2 : values.size();
  }

  /// Signed mode index of the value stored at `pos` (requires ordered()).
  long index_at(std::size_t pos) const {
    const auto n = static_cast<long>(modes());
    const auto p = static_cast<long>(pos);
    if (sides == Sidedness::one_sided) return n - p;
    return p < n ? p - n : p - n + 1;
  }

  /// Position range [first, last) holding the modes with |k| <= N - r.
  std::pair<std::size_t, std::size_t> retained(std::size_t r) const {
    const std::size_t n = modes();
    if (r > n) throw std::invalid_argument("retained band: r exceeds mode count");
    if (sides == Sidedness::one_sided) return {r, n};
    return {r, 2 * n - r};
  }
};

/// Total order used for every spectrum: Im ascending; equal Im puts the
/// larger modulus first; equal Im and modulus falls back to Re ascending.
inline bool spectrum_less(const Complex& a, const Complex& b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  return a.real() < b.real();
}

inline Spectrum order_spectrum(Spectrum s) {
  std::stable_sort(s.values.begin(), s.values.end(), spectrum_less);
  s.ordered = true;
  return s;
}

}  // namespace specproj

#endif  // SPECPROJ_SPECTRUM_HPP
