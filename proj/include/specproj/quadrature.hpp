#ifndef SPECPROJ_QUADRATURE_HPP
#define SPECPROJ_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

#include "specproj/damping.hpp"

namespace specproj {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> gk15_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * gk15_kronrod_weights[7];
  double gauss = fc * gk15_gauss_weights[3];
  for (std::size_t n = 0; n < 7; ++n) {
    const double dx = half * gk15_nodes[n];
    const double s = f(center - dx) + f(center + dx);
    kronrod += gk15_kronrod_weights[n] * s;
    if (n % 2 == 1) gauss += gk15_gauss_weights[n / 2] * s;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration to an absolute error target.
/// Throws QuadratureError when the panel budget runs out first.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double tol,
                          std::size_t max_panels = 1'000'000) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be > 0");
  if (a == b) return 0.0;
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gk15(f, a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  std::size_t count = 1;
  // The Kronrod-Gauss difference overestimates the error of the Kronrod value
  // on smooth integrands, so a small safety factor suffices.
  while (error > 0.5 * tol) {
    if (count + 1 > max_panels)
      throw QuadratureError("adaptive quadrature: panel budget exhausted");
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
    if (error <= 0.5 * tol) {
      // Re-sum to shed the drift accumulated by incremental updates.
      double v = 0.0, e = 0.0;
      auto copy = panels;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      value = v;
      error = e;
    }
  }
  return value;
}

/// <a v_i, v_j>_H by boxwise adaptive quadrature of the pointwise
/// eigenfunctions. Validation oracle for overlap().
inline double overlap_quadrature(const ModalModel& model, const DampingProfile& profile,
                                 const ModeIndex& i, const ModeIndex& j, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("overlap_quadrature: tol must be > 0");
  if (profile.dimension() != model.dimension())
    throw std::invalid_argument("overlap_quadrature: profile dimension does not match the model");
  const auto& boxes = profile.boxes();
  if (boxes.empty()) return 0.0;
  const double per_box = tol / static_cast<double>(boxes.size());
  double sum = 0.0;
  for (const auto& b : boxes) {
    if (b.amplitude == 0.0) continue;
    const double box_tol = per_box / b.amplitude;
    if (model.dimension() == 1) {
      auto f = [&](double x) { return model.eigenfunction(i, x) * model.eigenfunction(j, x); };
      sum += b.amplitude * integrate_adaptive(f, b.x.lo, b.x.hi, box_tol);
    } else {
      const double inner_tol = 0.25 * box_tol / b.y.length();
      auto inner = [&](double y) {
        auto g = [&](double x) {
          return model.eigenfunction(i, x, y) * model.eigenfunction(j, x, y);
        };
        return integrate_adaptive(g, b.x.lo, b.x.hi, inner_tol);
      };
      sum += b.amplitude * integrate_adaptive(inner, b.y.lo, b.y.hi, 0.5 * box_tol);
    }
  }
  return sum;
}

}  // namespace specproj

#endif  // SPECPROJ_QUADRATURE_HPP
