#ifndef SPECPROJ_DAMPING_HPP
#define SPECPROJ_DAMPING_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specproj/operators.hpp"

namespace specproj {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains_open(double x) const { return lo < x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box with constant amplitude. In 1-D the y interval is (0, 1)
/// and does not contribute.
struct DampingBox {
  Interval x;
  Interval y;
  double amplitude = 0.0;
  friend bool operator==(const DampingBox&, const DampingBox&) = default;
};

/// Nonnegative piecewise-constant damping a(x) on (0,1) or (0,1)^2.
/// Overlapping boxes add their amplitudes.
class DampingProfile {
 public:
  explicit DampingProfile(int dimension = 1) : dimension_(dimension) {
    if (dimension != 1 && dimension != 2)
      throw std::invalid_argument("damping profile dimension must be 1 or 2");
  }

  static DampingProfile constant(double amplitude, int dimension = 1) {
    DampingProfile p(dimension);
    p.add_box(Interval{0.0, 1.0}, Interval{0.0, 1.0}, amplitude);
    return p;
  }

  DampingProfile& add_interval(Interval x, double amplitude) {
    if (dimension_ != 1) throw std::invalid_argument("add_interval on a 2-D profile");
    return add_box(x, Interval{0.0, 1.0}, amplitude);
  }

  DampingProfile& add_box(Interval x, Interval y, double amplitude) {
    check_interval(x, "x");
    check_interval(y, "y");
    if (!std::isfinite(amplitude) || amplitude < 0.0)
      throw std::invalid_argument("damping amplitude must be finite and >= 0");
    boxes_.push_back({x, y, amplitude});
    return *this;
  }

  int dimension() const { return dimension_; }
  const std::vector<DampingBox>& boxes() const { return boxes_; }

  /// Pointwise value; box boundaries are treated as open.
  double value(double x, double y = 0.5) const {
    double sum = 0.0;
    for (const auto& b : boxes_) {
      if (b.x.contains_open(x) && (dimension_ == 1 || b.y.contains_open(y))) sum += b.amplitude;
    }
    return sum;
  }

  double total_mass() const {
    double mass = 0.0;
    for (const auto& b : boxes_) {
      mass += b.amplitude * b.x.length() * (dimension_ == 2 ? b.y.length() : 1.0);
    }
    return mass;
  }

  /// Essential supremum: max over the cells of the breakpoint arrangement.
  double sup_norm() const {
    const auto xs = breakpoints(true);
    const auto ys = dimension_ == 2 ? breakpoints(false) : std::vector<double>{0.0, 1.0};
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (!(xs[i] < xs[i + 1])) continue;
      const double xm = 0.5 * (xs[i] + xs[i + 1]);
      for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        if (!(ys[j] < ys[j + 1])) continue;
        best = std::max(best, value(xm, 0.5 * (ys[j] + ys[j + 1])));
      }
    }
    return best;
  }

  DampingProfile scaled(double factor) const {
    if (!std::isfinite(factor) || factor < 0.0)
      throw std::invalid_argument("damping scale factor must be finite and >= 0");
    DampingProfile out = *this;
    for (auto& b : out.boxes_) b.amplitude *= factor;
    return out;
  }

  friend bool operator==(const DampingProfile&, const DampingProfile&) = default;

 private:
  static void check_interval(const Interval& iv, const char* axis) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
      throw std::invalid_argument(std::string("empty or invalid ") + axis + " interval");
    if (iv.lo < 0.0 || iv.hi > 1.0)
      throw std::invalid_argument(std::string(axis) + " interval escapes the domain (0,1)");
  }

  std::vector<double> breakpoints(bool along_x) const {
    std::vector<double> pts{0.0, 1.0};
    for (const auto& b : boxes_) {
      const Interval& iv = along_x ? b.x : b.y;
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  int dimension_;
  std::vector<DampingBox> boxes_;
};

namespace detail {

// Endpoints within this distance of 0 or 1 are snapped onto the boundary so
// that families touching the boundary (e.g. the whole domain) stay valid.
inline constexpr double boundary_slack = 1e-12;

inline Interval centered_interval(double center, double width, const char* what) {
  if (!std::isfinite(center) || !std::isfinite(width) || !(width > 0.0))
    throw std::invalid_argument(std::string(what) + ": width must be positive");
  double lo = center - 0.5 * width;
  double hi = center + 0.5 * width;
  if (lo < -boundary_slack || hi > 1.0 + boundary_slack)
    throw std::invalid_argument(std::string(what) + ": support escapes the domain (0,1)");
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  return {lo, hi};
}

}  // namespace detail

/// a(x) = (1/alpha) on (x0 - alpha/2, x0 + alpha/2); unit mass.
inline DampingProfile family_interval(double x0, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("family_interval: alpha must be > 0");
  DampingProfile p(1);
  p.add_interval(detail::centered_interval(x0, alpha, "family_interval"), 1.0 / alpha);
  return p;
}

/// beta intervals of amplitude 1/2 centered at (2i-1)/(2 beta). Interval i has
/// width 1/(2 i beta) unless a uniform width is given.
inline DampingProfile family_comb(int beta, std::optional<double> width = std::nullopt) {
  if (beta < 1) throw std::invalid_argument("family_comb: beta must be >= 1");
  DampingProfile p(1);
  for (int i = 1; i <= beta; ++i) {
    const double center = (2.0 * i - 1.0) / (2.0 * beta);
    const double w = width.value_or(1.0 / (2.0 * i * beta));
    p.add_interval(detail::centered_interval(center, w, "family_comb"), 0.5);
  }
  return p;
}

/// Square of side alpha centered in the unit square, amplitude 1/alpha^2.
inline DampingProfile family_square2d(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("family_square2d: alpha must be > 0");
  const Interval side = detail::centered_interval(0.5, alpha, "family_square2d");
  DampingProfile p(2);
  p.add_box(side, side, 1.0 / (alpha * alpha));
  return p;
}

/// 1/8 x 1/8 square centered at (a1, a2) with amplitude 64; unit mass.
inline DampingProfile family_moving_square(double a1, double a2) {
  DampingProfile p(2);
  p.add_box(detail::centered_interval(a1, 0.125, "family_moving_square"),
            detail::centered_interval(a2, 0.125, "family_moving_square"), 64.0);
  return p;
}

/// 2 * integral over (c, d) of sin(i pi x) sin(j pi x), i.e. the overlap of
/// the normalized 1-D eigenfunctions sqrt(2) sin(k pi x) on (c, d).
inline double normalized_sine_overlap(int i, int j, const Interval& iv) {
  constexpr double pi = std::numbers::pi;
  // Canonical argument order makes the result exactly symmetric in (i, j).
  const int p = std::max(std::abs(i), std::abs(j));
  const int q = std::min(std::abs(i), std::abs(j));
  if (p == q) {
    const double w = 2.0 * p * pi;
    auto anti = [&](double x) { return x - std::sin(w * x) / w; };
    return anti(iv.hi) - anti(iv.lo);
  }
  const double wm = (p - q) * pi;
  const double wp = (p + q) * pi;
  auto anti = [&](double x) { return std::sin(wm * x) / wm - std::sin(wp * x) / wp; };
  return anti(iv.hi) - anti(iv.lo);
}

/// <a v_i, v_j>_H in closed form for L2-normalized eigenfunctions.
inline double overlap(const ModalModel& model, const DampingProfile& profile,
                      const ModeIndex& i, const ModeIndex& j) {
  validate(i, model.kind());
  validate(j, model.kind());
  if (profile.dimension() != model.dimension())
    throw std::invalid_argument("overlap: profile dimension does not match the model");
  double sum = 0.0;
  for (const auto& b : profile.boxes()) {
    double term = normalized_sine_overlap(i.k, j.k, b.x);
    if (model.dimension() == 2) term *= normalized_sine_overlap(i.l, j.l, b.y);
    sum += b.amplitude * term;
  }
  return sum;
}

}  // namespace specproj

#endif  // SPECPROJ_DAMPING_HPP
