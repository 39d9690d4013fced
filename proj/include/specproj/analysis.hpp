#ifndef SPECPROJ_ANALYSIS_HPP
#define SPECPROJ_ANALYSIS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "specproj/abscissa.hpp"
#include "specproj/damping.hpp"

namespace specproj {

// ---------------------------------------------------------------------------
// Parametric damping families
// ---------------------------------------------------------------------------

struct DampingFamily {
  std::string name;
  std::vector<std::string> parameters;
  std::function<DampingProfile(const std::vector<double>&)> build;

  DampingProfile operator()(const std::vector<double>& params) const {
    if (params.size() != parameters.size())
      throw std::invalid_argument("family '" + name + "' expects " +
                                  std::to_string(parameters.size()) + " parameters");
    return build(params);
  }
};

inline int as_positive_int(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > std::numeric_limits<int>::max())
    throw std::invalid_argument(std::string(what) + " must be a positive integer");
  return static_cast<int>(v);
}

/// Named families: interval(x0, alpha), comb(beta), square2d(alpha),
/// moving_square(a1, a2). `comb_width` overrides the per-interval comb width.
inline DampingFamily damping_family(const std::string& name,
                                    std::optional<double> comb_width = std::nullopt) {
  if (name == "interval")
    return {name, {"x0", "alpha"}, [](const auto& p) { return family_interval(p[0], p[1]); }};
  if (name == "comb")
    return {name, {"beta"}, [comb_width](const auto& p) {
              return family_comb(as_positive_int(p[0], "beta"), comb_width);
            }};
  if (name == "square2d")
    return {name, {"alpha"}, [](const auto& p) { return family_square2d(p[0]); }};
  if (name == "moving_square")
    return {name, {"a1", "a2"}, [](const auto& p) { return family_moving_square(p[0], p[1]); }};
  throw std::invalid_argument("unknown damping family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct FixedR {
  std::size_t r = 0;
};
/// One estimate_r call at the first grid point, reused for the whole grid.
struct FirstPointR {
  int N0 = 50;
  double eps = 0.1;
};
struct PerPointR {
  int N0 = 50;
  double eps = 0.1;
};
using RPolicy = std::variant<FixedR, FirstPointR, PerPointR>;

struct SweepOptions {
  int N = 100;
  RPolicy r_policy = FirstPointR{};
  /// Grid points evaluated concurrently; results are collected in grid order.
  unsigned threads = 1;
  EigenOptions eig{};
};

struct SweepPoint {
  std::vector<double> params;
  double mu_r = std::numeric_limits<double>::quiet_NaN();
  long argmax_index = 0;
  std::size_t r = 0;
  std::vector<std::string> warnings;
  bool failed = false;
};

struct SweepResult {
  std::string family;
  std::vector<std::string> parameter_names;
  std::string model;
  int N = 0;
  std::optional<double> eps;
  std::vector<SweepPoint> points;
};

namespace detail {

inline SweepPoint sweep_point(const ModalModel& model, const DampingFamily& family,
                              const std::vector<double>& params, int n,
                              std::optional<std::size_t> fixed_r, const PerPointR& per_point,
                              const EigenOptions& eig) {
  SweepPoint pt;
  pt.params = params;
  try {
    const DampingProfile profile = family(params);
    pt.r = fixed_r ? *fixed_r : estimate_r(model, profile, per_point.N0, per_point.eps, eig);
    if (pt.r >= static_cast<std::size_t>(n)) throw std::invalid_argument("r must be < N");
    const auto value = modified_abscissa(solve(assemble(model, profile, n), eig), pt.r);
    pt.mu_r = value.mu_r;
    pt.argmax_index = value.argmax_index;
    pt.warnings = hypothesis_warnings(model, profile, n);
  } catch (const std::exception& e) {
    pt.failed = true;
    pt.warnings.push_back(std::string("failed: ") + e.what());
  }
  return pt;
}

}  // namespace detail

/// mu_r over a parameter grid. Per-point failures are recorded and the sweep
/// continues.
inline SweepResult sweep(const ModalModel& model, const DampingFamily& family,
                         const std::vector<std::vector<double>>& grid, const SweepOptions& opts = {}) {
  if (opts.N < 1) throw std::invalid_argument("sweep: N must be >= 1");
  SweepResult out;
  out.family = family.name;
  out.parameter_names = family.parameters;
  out.model = std::string(to_string(model.kind()));
  out.N = opts.N;

  std::optional<std::size_t> fixed_r;
  PerPointR per_point;
  std::vector<std::string> shared_warnings;
  if (const auto* f = std::get_if<FixedR>(&opts.r_policy)) {
    fixed_r = f->r;
  } else if (const auto* f = std::get_if<FirstPointR>(&opts.r_policy)) {
    out.eps = f->eps;
    fixed_r = 0;
    if (!grid.empty()) {
      try {
        fixed_r = estimate_r(model, family(grid.front()), f->N0, f->eps, opts.eig);
      } catch (const std::exception& e) {
        shared_warnings.push_back(std::string("r estimate failed, using r = 0: ") + e.what());
      }
    }
  } else {
    per_point = std::get<PerPointR>(opts.r_policy);
    out.eps = per_point.eps;
  }

  out.points.resize(grid.size());
  const unsigned threads = std::max(1u, opts.threads);
  auto run_range = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < grid.size(); i += step)
      out.points[i] = detail::sweep_point(model, family, grid[i], opts.N, fixed_r, per_point, opts.eig);
  };
  if (threads == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, run_range, t, threads));
    for (auto& j : jobs) j.get();
  }
  for (auto& pt : out.points) pt.warnings.insert(pt.warnings.begin(), shared_warnings.begin(), shared_warnings.end());
  return out;
}

/// Cartesian product of per-parameter value lists, first parameter slowest.
inline std::vector<std::vector<double>> cartesian_grid(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> grid{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : grid) {
      for (double v : axis) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Finite-element dispersion comparison
// ---------------------------------------------------------------------------

/// Eigenvalue i 2 Nel sin(k pi / (2 Nel)) of the uniform-mesh finite-element
/// discretization of the 1-D wave operator.
inline Complex fem_eigenvalue(int k, int n_el) {
  if (k < 1 || n_el < k) throw std::invalid_argument("fem_eigenvalue: need 1 <= k <= Nel");
  return {0.0, 2.0 * n_el * std::sin(k * std::numbers::pi / (2.0 * n_el))};
}

inline double fem_dispersion_error(int k, int n_el) {
  return k * std::numbers::pi - fem_eigenvalue(k, n_el).imag();
}

struct FemRequirement {
  double estimate = 0.0;
  int exact_minimal = 0;
};

/// Elements needed so that |k pi - 2 N sin(k pi / 2N)| <= eps: the asymptotic
/// estimate k^{3/2} pi^{3/2} / (2 sqrt(6) sqrt(eps)) and the exact minimum.
inline FemRequirement fem_required_elements(int k, double eps) {
  if (k < 1) throw std::invalid_argument("fem_required_elements: k must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("fem_required_elements: eps must be > 0");
  FemRequirement out;
  out.estimate = std::pow(k * std::numbers::pi, 1.5) / (2.0 * std::sqrt(6.0) * std::sqrt(eps));
  // The error decreases strictly in N, so bracket by doubling and bisect.
  int lo = k;
  if (fem_dispersion_error(k, lo) <= eps) {
    out.exact_minimal = lo;
    return out;
  }
  int hi = 2 * k;
  while (fem_dispersion_error(k, hi) > eps) {
    lo = hi;
    if (hi > std::numeric_limits<int>::max() / 2)
      throw std::invalid_argument("fem_required_elements: eps too small");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (fem_dispersion_error(k, mid) <= eps ? hi : lo) = mid;
  }
  out.exact_minimal = hi;
  return out;
}

struct ProjectionFemRow {
  int k = 0;
  double projection_error = 0.0;
  double fem_error = 0.0;
};

/// Projection error of eta_k at N against a reference resolution, next to the
/// FEM dispersion error at the same k with Nel = N (matrix size 2N for both).
/// Rows for k = 1..N - r.
inline std::vector<ProjectionFemRow> compare_projection_fem(const ModalModel& model,
                                                            const DampingProfile& profile, int n,
                                                            int reference_n, std::size_t r,
                                                            const EigenOptions& eig = {}) {
  if (model.kind() != ModelKind::wave1d)
    throw std::invalid_argument("compare_projection_fem: FEM dispersion is for wave1d");
  if (reference_n <= n) throw std::invalid_argument("compare_projection_fem: reference N must exceed N");
  const Spectrum s = solve(assemble(model, profile, n), eig);
  const Spectrum ref = solve(assemble(model, profile, reference_n), eig);
  const auto [first, last] = s.retained(r);
  const auto matches = match_spectra(s, ref, first, last);
  std::vector<ProjectionFemRow> rows;
  for (const auto& m : matches) {
    const long k = s.index_at(m.first);
    if (k < 1) continue;
    rows.push_back({static_cast<int>(k), m.distance, fem_dispersion_error(static_cast<int>(k), n)});
  }
  return rows;
}

}  // namespace specproj

#endif  // SPECPROJ_ANALYSIS_HPP
