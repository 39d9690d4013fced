#ifndef SPECPROJ_IO_HPP
#define SPECPROJ_IO_HPP

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specproj/abscissa.hpp"
#include "specproj/analysis.hpp"
#include "specproj/damping.hpp"

namespace specproj {

using json = nlohmann::json;

/// Malformed or out-of-range user input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// CSV number format: 12 significant digits, "nan" for missing values.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

inline double get_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

// ---------------------------------------------------------------------------
// Damping profiles
// ---------------------------------------------------------------------------

/// Canonical form: {"boxes": [{"region": [lo, hi] | [[x0, x1], [y0, y1]], "amplitude": a}]}.
inline json profile_to_json(const DampingProfile& p) {
  json boxes = json::array();
  for (const auto& b : p.boxes()) {
    json region = p.dimension() == 1 ? json::array({b.x.lo, b.x.hi})
                                     : json::array({json::array({b.x.lo, b.x.hi}),
                                                    json::array({b.y.lo, b.y.hi})});
    boxes.push_back({{"region", region}, {"amplitude", b.amplitude}});
  }
  return {{"boxes", boxes}};
}

namespace detail {

inline Interval parse_interval(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + ": interval must be [lo, hi]");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline DampingProfile parse_boxes(const json& boxes, int dimension) {
  if (!boxes.is_array()) throw ConfigError("profile.boxes must be an array");
  DampingProfile p(dimension);
  for (const auto& box : boxes) {
    reject_unknown_keys(box, {"region", "amplitude"}, "profile box");
    if (!box.contains("region")) throw ConfigError("profile box: missing 'region'");
    const double amp = get_number(box, "amplitude", "profile box");
    const auto& region = box.at("region");
    const bool is_2d = region.is_array() && region.size() == 2 && region[0].is_array();
    if ((is_2d ? 2 : 1) != dimension)
      throw ConfigError("profile box dimension does not match the model");
    try {
      if (is_2d)
        p.add_box(parse_interval(region[0], "region x"), parse_interval(region[1], "region y"), amp);
      else
        p.add_interval(parse_interval(region, "region"), amp);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("profile box: ") + e.what());
    }
  }
  return p;
}

}  // namespace detail

/// Parses either the canonical box list or a named family with parameters.
inline DampingProfile profile_from_json(const json& spec, int dimension) {
  if (!spec.is_object()) throw ConfigError("profile must be a JSON object");
  if (spec.contains("boxes")) {
    reject_unknown_keys(spec, {"boxes"}, "profile");
    return detail::parse_boxes(spec.at("boxes"), dimension);
  }
  if (!spec.contains("family") || !spec.at("family").is_string())
    throw ConfigError("profile needs either 'boxes' or 'family'");
  const std::string family = spec.at("family").get<std::string>();
  try {
    DampingProfile p(dimension);
    if (family == "constant") {
      reject_unknown_keys(spec, {"family", "amplitude"}, "profile");
      p = DampingProfile::constant(get_number(spec, "amplitude", "profile"), dimension);
    } else if (family == "interval") {
      reject_unknown_keys(spec, {"family", "x0", "alpha"}, "profile");
      p = family_interval(get_number(spec, "x0", "profile"), get_number(spec, "alpha", "profile"));
    } else if (family == "comb") {
      reject_unknown_keys(spec, {"family", "beta", "width"}, "profile");
      std::optional<double> width;
      if (spec.contains("width")) width = get_number(spec, "width", "profile");
      p = family_comb(as_positive_int(get_number(spec, "beta", "profile"), "beta"), width);
    } else if (family == "square2d") {
      reject_unknown_keys(spec, {"family", "alpha"}, "profile");
      p = family_square2d(get_number(spec, "alpha", "profile"));
    } else if (family == "moving_square") {
      reject_unknown_keys(spec, {"family", "a1", "a2"}, "profile");
      p = family_moving_square(get_number(spec, "a1", "profile"), get_number(spec, "a2", "profile"));
    } else {
      throw ConfigError("unknown damping family '" + family + "'");
    }
    if (p.dimension() != dimension)
      throw ConfigError("damping family '" + family + "' does not match the model dimension");
    return p;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json complex_list(const Spectrum& s) {
  json out = json::array();
  for (std::size_t p = 0; p < s.size(); ++p)
    out.push_back({{"k", s.index_at(p)}, {"re", s.values[p].real()}, {"im", s.values[p].imag()}});
  return out;
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const AbscissaReport& r) {
  return {{"model", std::string(to_string(r.model.kind()))},
          {"profile", profile_to_json(r.profile)},
          {"eps", r.eps},
          {"N0", r.N0},
          {"r", r.r},
          {"N1", r.N1},
          {"alpha_hat", r.alpha_hat},
          {"asymptote_detected", r.asymptote_detected},
          {"N_final", r.N_final},
          {"mu_r", finite_or_null(r.mu_r)},
          {"argmax_index", r.argmax_index},
          {"failed", r.failed},
          {"warnings", r.warnings},
          {"spectrum", complex_list(r.spectrum)}};
}

inline json to_json(const HypothesisReport& h) {
  json table = json::array();
  for (const auto& e : h.h5_table) table.push_back({{"p", e.p}, {"r1", e.r1}, {"tail", e.tail}});
  json ratios = json::array();
  for (double v : h.gap_ratios) ratios.push_back(finite_or_null(v));
  return {{"N", h.N},
          {"h1_simple", h.h1_simple},
          {"B_norm_bound", h.B_norm_bound},
          {"h2_margin", h.h2_margin},
          {"h2_holds", h.h2_holds()},
          {"h3_margin", h.h3_margin},
          {"h3_holds", h.h3_holds()},
          {"h5_table", table},
          {"gaps", h.gaps},
          {"gap_ratios", ratios}};
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

/// Header row, then one row per grid point: parameters, mu_r, argmax_index,
/// warnings joined with ';'.
inline std::string sweep_csv(const SweepResult& s) {
  std::string out;
  for (const auto& name : s.parameter_names) out += name + ",";
  out += "mu_r,argmax_index,warnings\n";
  for (const auto& pt : s.points) {
    for (double v : pt.params) out += csv_number(v) + ",";
    out += csv_number(pt.mu_r) + "," + std::to_string(pt.argmax_index) + "," +
           csv_escape(join(pt.warnings, ";")) + "\n";
  }
  return out;
}

inline json to_json(const SweepResult& s) {
  json points = json::array();
  for (const auto& pt : s.points) {
    json params = json::object();
    for (std::size_t i = 0; i < pt.params.size(); ++i) params[s.parameter_names[i]] = pt.params[i];
    points.push_back({{"params", params},
                      {"mu_r", finite_or_null(pt.mu_r)},
                      {"argmax_index", pt.argmax_index},
                      {"r", pt.r},
                      {"failed", pt.failed},
                      {"warnings", pt.warnings}});
  }
  return {{"model", s.model},
          {"family", s.family},
          {"N", s.N},
          {"eps", s.eps ? json(*s.eps) : json(nullptr)},
          {"points", points}};
}

}  // namespace specproj

#endif  // SPECPROJ_IO_HPP
