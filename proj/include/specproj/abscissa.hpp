#ifndef SPECPROJ_ABSCISSA_HPP
#define SPECPROJ_ABSCISSA_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "specproj/assembly.hpp"
#include "specproj/eig.hpp"

namespace specproj {

// ---------------------------------------------------------------------------
// Modified spectral abscissa
// ---------------------------------------------------------------------------

struct AbscissaValue {
  double mu_r = 0.0;
  long argmax_index = 0;
};

/// max Re over the retained band |k| <= N - r. Ties go to the smallest |k|,
/// then to the positive index.
inline AbscissaValue modified_abscissa(const Spectrum& s, std::size_t r) {
  if (!s.ordered) throw std::invalid_argument("modified_abscissa: spectrum must be ordered");
  if (r >= s.modes()) throw std::invalid_argument("modified_abscissa: r must be < N");
  const auto [first, last] = s.retained(r);
  AbscissaValue best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t p = first; p < last; ++p) {
    const double re = s.values[p].real();
    const long k = s.index_at(p);
    const bool better =
        re > best.mu_r ||
        (re == best.mu_r && (std::labs(k) < std::labs(best.argmax_index) ||
                             (std::labs(k) == std::labs(best.argmax_index) && k > 0)));
    if (better) best = {re, k};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Step 2: safe-band width r from two resolutions
// ---------------------------------------------------------------------------

/// Smallest r such that every value of `coarse` with |k| <= N0 - r has a
/// neighbour in `fine` within eps. Returns N0 when no band qualifies.
inline std::size_t estimate_r(const Spectrum& coarse, const Spectrum& fine, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("estimate_r: eps must be > 0");
  const auto matches = match_spectra(coarse, fine, 0, coarse.size());
  const std::size_t n0 = coarse.modes();
  for (std::size_t r = 0; r < n0; ++r) {
    const auto [first, last] = coarse.retained(r);
    bool ok = true;
    for (std::size_t p = first; p < last && ok; ++p) ok = matches[p].distance <= eps;
    if (ok) return r;
  }
  return n0;
}

inline std::size_t estimate_r(const ModalModel& model, const DampingProfile& profile, int n0,
                              double eps, const EigenOptions& opts = {}) {
  if (n0 < 4) throw std::invalid_argument("estimate_r: N0 must be >= 4");
  if (!(eps > 0.0)) throw std::invalid_argument("estimate_r: eps must be > 0");
  const Spectrum coarse = solve(assemble(model, profile, n0), opts);
  const Spectrum fine = solve(assemble(model, profile, 2 * n0), opts);
  return estimate_r(coarse, fine, eps);
}

// ---------------------------------------------------------------------------
// Step 1: asymptote of Re(eta_k) and onset N1
// ---------------------------------------------------------------------------

struct AsymptoteEstimate {
  int N1 = 1;
  double alpha_hat = 0.0;
  bool detected = false;
};

/// alpha_hat is the median of Re over the top quarter of retained |k|; N1 is
/// the smallest index (at least 1) beyond which every retained Re is within
/// eps of alpha_hat. Detection fails when that onset reaches into the top
/// quarter itself.
inline AsymptoteEstimate estimate_N1(const Spectrum& s, std::size_t r, double eps) {
  if (!s.ordered) throw std::invalid_argument("estimate_N1: spectrum must be ordered");
  if (!(eps > 0.0)) throw std::invalid_argument("estimate_N1: eps must be > 0");
  if (r >= s.modes()) throw std::invalid_argument("estimate_N1: r must be < N");
  const long kept = static_cast<long>(s.modes() - r);
  const long quarter = std::max(1L, kept / 4);
  const long top_start = kept - quarter + 1;
  const auto [first, last] = s.retained(r);

  std::vector<double> top;
  for (std::size_t p = first; p < last; ++p) {
    if (std::labs(s.index_at(p)) >= top_start) top.push_back(s.values[p].real());
  }
  std::sort(top.begin(), top.end());
  const std::size_t m = top.size();
  const double alpha = m % 2 ? top[m / 2] : 0.5 * (top[m / 2 - 1] + top[m / 2]);

  long onset = 1;
  for (std::size_t p = first; p < last; ++p) {
    if (std::abs(s.values[p].real() - alpha) > eps) onset = std::max(onset, std::labs(s.index_at(p)));
  }
  return {static_cast<int>(onset), alpha, onset < top_start};
}

inline AsymptoteEstimate estimate_N1(const ModalModel& model, const DampingProfile& profile, int n,
                                     double eps, std::size_t r = 0, const EigenOptions& opts = {}) {
  if (n < 16) throw std::invalid_argument("estimate_N1: N must be >= 16");
  return estimate_N1(solve(assemble(model, profile, n), opts), r, eps);
}

// ---------------------------------------------------------------------------
// Hypothesis diagnostics
// ---------------------------------------------------------------------------

struct H5Entry {
  int p = 0;
  int r1 = 0;
  double tail = 0.0;
};

struct HypothesisReport {
  int N = 0;
  bool h1_simple = true;
  double B_norm_bound = 0.0;
  double h2_margin = 0.0;
  double h3_margin = 0.0;
  std::vector<H5Entry> h5_table;
  /// delta_k = sqrt(mu_{k+1}) - sqrt(mu_k) (mu_{k+1} - mu_k for first order).
  std::vector<double> gaps;
  /// delta_{k+1} / delta_k^2.
  std::vector<double> gap_ratios;

  bool h2_holds() const { return h2_margin > 0.0; }
  bool h3_holds() const { return h3_margin >= 0.0; }
};

/// ||B|| upper bound: damping_factor * ess sup a.
inline double b_norm_bound(const ModalModel& model, const DampingProfile& profile) {
  return model.damping_factor() * profile.sup_norm();
}

/// Squared energy-space couplings |<B V_i, V_j>|^2 summed over both signs of
/// j, as a function of the positive mode pair (n, m).
///
/// Second order: V_k = (v_k / lambda_k, v_k) / sqrt(2) and B acts on the
/// velocity component only, so <B V_{+-n}, V_{+-m}> = -omega(n, m) / 2 and the
/// two signs of j contribute omega^2 / 2. First order: V_k = v_k and the
/// coupling is -omega(n, m).
inline double coupling_weight(const ModalModel& model) {
  return model.order() == SystemOrder::second ? 0.5 : 1.0;
}

inline HypothesisReport check_hypotheses(const ModalModel& model, const DampingProfile& profile,
                                         int n, const std::vector<int>& p_list,
                                         const std::vector<int>& r1_list) {
  if (n < 2) throw std::invalid_argument("check_hypotheses: N must be >= 2");
  int max_p = 0, max_r1 = 0;
  for (int p : p_list) {
    if (p < 1) throw std::invalid_argument("check_hypotheses: p must be >= 1");
    max_p = std::max(max_p, p);
  }
  for (int r1 : r1_list) {
    if (r1 < 1) throw std::invalid_argument("check_hypotheses: r1 must be >= 1");
    max_r1 = std::max(max_r1, r1);
  }
  if (n < max_p + max_r1) throw std::invalid_argument("check_hypotheses: N < max(p) + max(r1)");

  HypothesisReport rep;
  rep.N = n;
  const auto modes = enumerate_modes(model, n);
  std::vector<double> mu(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) mu[i] = model.mu(modes[i]);
  for (std::size_t i = 0; i + 1 < mu.size(); ++i) rep.h1_simple = rep.h1_simple && mu[i] < mu[i + 1];

  rep.B_norm_bound = b_norm_bound(model, profile);
  const Spectrum base = base_frequencies(model, n);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < base.size(); ++i)
    min_gap = std::min(min_gap, std::abs(base.values[i + 1] - base.values[i]));
  if (base.size() < 2) min_gap = 0.0;
  rep.h2_margin = min_gap - 2.0 * rep.B_norm_bound;
  rep.h3_margin = std::abs(model.lambda(modes.front())) - rep.B_norm_bound;

  if (!p_list.empty() && !r1_list.empty()) {
    const ProjectedSystem sys = assemble(model, profile, n);
    const double w = coupling_weight(model);
    for (int p : p_list) {
      for (int r1 : r1_list) {
        double worst = 0.0;
        for (int i = 0; i < p; ++i) {
          double tail = 0.0;
          for (int j = p + r1 - 1; j < n; ++j) tail += w * sys.omega(i, j) * sys.omega(i, j);
          worst = std::max(worst, tail);
        }
        rep.h5_table.push_back({p, r1, worst});
      }
    }
  }

  for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
    rep.gaps.push_back(model.order() == SystemOrder::second ? std::sqrt(mu[i + 1]) - std::sqrt(mu[i])
                                                             : mu[i + 1] - mu[i]);
  }
  for (std::size_t i = 0; i + 1 < rep.gaps.size(); ++i) {
    rep.gap_ratios.push_back(rep.gaps[i] == 0.0 ? std::numeric_limits<double>::infinity()
                                                : rep.gaps[i + 1] / (rep.gaps[i] * rep.gaps[i]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Full algorithm
// ---------------------------------------------------------------------------

struct AlgorithmOptions {
  /// Largest resolution tried while searching for the asymptotic regime.
  int max_N = 1024;
  EigenOptions eig{};
};

struct AbscissaReport {
  ModalModel model{ModelKind::wave1d};
  DampingProfile profile;
  double eps = 0.0;
  int N0 = 0;
  std::size_t r = 0;
  int N1 = 0;
  double alpha_hat = 0.0;
  bool asymptote_detected = false;
  int N_final = 0;
  double mu_r = 0.0;
  long argmax_index = 0;
  bool failed = false;
  std::vector<std::string> warnings;
  Spectrum spectrum;
};

inline std::vector<std::string> hypothesis_warnings(const ModalModel& model,
                                                    const DampingProfile& profile, int n) {
  std::vector<std::string> out;
  const auto h = check_hypotheses(model, profile, std::max(n, 2), {}, {});
  if (!h.h1_simple) out.push_back("H1 violated: unperturbed eigenvalues are not simple");
  if (!h.h2_holds()) out.push_back("H2 violated: eigenvalue gap does not exceed 2||B||");
  if (!h.h3_holds()) out.push_back("H3 violated: ||B|| exceeds |lambda_1|");
  return out;
}

/// Safe band r at N0 (Step 2), asymptotic regime by doubling N from 2 N0
/// (Step 1), then mu_r on the detecting resolution, which satisfies
/// N > N1 + r (Step 3).
inline AbscissaReport run_algorithm(const ModalModel& model, const DampingProfile& profile,
                                    double eps, int n0, const AlgorithmOptions& opts = {}) {
  if (!(eps > 0.0)) throw std::invalid_argument("run_algorithm: eps must be > 0");
  if (n0 < 4) throw std::invalid_argument("run_algorithm: N0 must be >= 4");
  AbscissaReport rep;
  rep.model = model;
  rep.profile = profile;
  rep.eps = eps;
  rep.N0 = n0;
  rep.warnings = hypothesis_warnings(model, profile, n0);

  const Spectrum coarse = solve(assemble(model, profile, n0), opts.eig);
  Spectrum current = solve(assemble(model, profile, 2 * n0), opts.eig);
  rep.r = estimate_r(coarse, current, eps);
  if (rep.r >= static_cast<std::size_t>(n0)) {
    rep.warnings.push_back("no stable band found between N0 and 2 N0; r set to N0");
  }

  int n = 2 * n0;
  if (n < 16) {
    n = 16;
    current = solve(assemble(model, profile, n), opts.eig);
  }
  AsymptoteEstimate asym;
  while (true) {
    if (rep.r < current.modes()) asym = estimate_N1(current, rep.r, eps);
    if (asym.detected || 2 * n > opts.max_N) break;
    n *= 2;
    current = solve(assemble(model, profile, n), opts.eig);
  }
  rep.N1 = asym.N1;
  rep.alpha_hat = asym.alpha_hat;
  rep.asymptote_detected = asym.detected;
  if (!asym.detected) {
    rep.failed = true;
    rep.warnings.push_back("asymptotic regime not detected within N <= " +
                           std::to_string(opts.max_N));
  }
  rep.N_final = n;
  if (rep.r < current.modes()) {
    const auto value = modified_abscissa(current, rep.r);
    rep.mu_r = value.mu_r;
    rep.argmax_index = value.argmax_index;
  } else {
    rep.failed = true;
    rep.mu_r = std::numeric_limits<double>::quiet_NaN();
  }
  rep.spectrum = std::move(current);
  return rep;
}

}  // namespace specproj

#endif  // SPECPROJ_ABSCISSA_HPP
