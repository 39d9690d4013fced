#ifndef SPECPROJ_CLI_HPP
#define SPECPROJ_CLI_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specproj/io.hpp"
#include "specproj/quadrature.hpp"

namespace specproj::cli {

enum class Format { csv, json };

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_solver = 3;

struct SweepConfig {
  std::string family;
  std::optional<double> width;
  /// One value list per family parameter, in family order.
  std::vector<std::vector<double>> axes;
  std::string r_policy = "first_point";
  unsigned threads = 1;
};

struct FemConfig {
  std::vector<int> k;
  std::optional<int> compare_N;
  std::optional<int> compare_reference_N;
};

/// Fully validated run description. `normalized` echoes the accepted input
/// with defaults filled in; it parses back to the same config.
struct RunConfig {
  std::string command;
  ModelKind model = ModelKind::wave1d;
  std::optional<DampingProfile> profile;
  int N = 100;
  int N0 = 50;
  double eps = 0.1;
  std::optional<std::size_t> r;
  int max_N = 1024;
  std::vector<int> p_list;
  std::vector<int> r1_list;
  SweepConfig sweep;
  FemConfig fem;
  std::string output;
  Format format = Format::json;
  std::string dump_matrix;
  json normalized;
};

/// Command-line overrides applied on top of the JSON config.
struct Overrides {
  std::optional<std::string> command;
  std::optional<std::string> model;
  std::optional<int> N;
  std::optional<int> N0;
  std::optional<double> eps;
  std::optional<int> r;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

namespace detail {

inline int get_int(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

inline std::vector<int> int_list(const json& v, const std::string& what) {
  std::vector<int> out;
  if (v.is_number_integer()) return {v.get<int>()};
  if (!v.is_array()) throw ConfigError(what + " must be an integer or a list of integers");
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ConfigError(what + " entries must be integers");
    out.push_back(x.get<int>());
  }
  return out;
}

inline std::vector<double> axis_values(const json& v, const std::string& name) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError("sweep grid '" + name + "' entries must be numbers");
      out.push_back(x.get<double>());
    }
    if (out.empty()) throw ConfigError("sweep grid '" + name + "' is empty");
    return out;
  }
  if (v.is_object()) {
    reject_unknown_keys(v, {"from", "to", "count"}, "sweep grid '" + name + "'");
    const double from = get_number(v, "from", "sweep grid");
    const double to = get_number(v, "to", "sweep grid");
    if (!v.contains("count") || !v.at("count").is_number_integer() || v.at("count").get<int>() < 1)
      throw ConfigError("sweep grid '" + name + "': 'count' must be a positive integer");
    const int count = v.at("count").get<int>();
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    return out;
  }
  throw ConfigError("sweep grid '" + name + "' must be a number, list or {from,to,count}");
}

}  // namespace detail

inline const std::set<std::string>& top_level_keys() {
  static const std::set<std::string> keys{"command", "model", "profile", "N",      "N0",
                                          "eps",     "r",     "max_N",   "p",      "r1",
                                          "sweep",   "fem",   "output",  "format", "dump_matrix"};
  return keys;
}

/// Validates a JSON config (plus overrides) against every module precondition
/// before any computation runs. Throws ConfigError.
inline RunConfig parse_config(json input, const Overrides& ov = {}) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(input, top_level_keys(), "config");
  if (ov.command) input["command"] = *ov.command;
  if (ov.model) input["model"] = *ov.model;
  if (ov.N) input["N"] = *ov.N;
  if (ov.N0) input["N0"] = *ov.N0;
  if (ov.eps) input["eps"] = *ov.eps;
  if (ov.r) input["r"] = *ov.r;
  if (ov.out) input["output"] = *ov.out;
  if (ov.format) input["format"] = *ov.format;

  RunConfig c;
  if (!input.contains("command") || !input.at("command").is_string())
    throw ConfigError("config: missing 'command'");
  c.command = input.at("command").get<std::string>();
  static const std::set<std::string> commands{"spectrum", "abscissa", "check", "sweep", "fem"};
  if (!commands.contains(c.command)) throw ConfigError("unknown command '" + c.command + "'");

  if (input.contains("model")) {
    if (!input.at("model").is_string()) throw ConfigError("'model' must be a string");
    try {
      c.model = parse_model_kind(input.at("model").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  input["model"] = std::string(to_string(c.model));
  const ModalModel model(c.model);

  if (input.contains("N")) c.N = detail::get_int(input, "N", "config");
  if (input.contains("N0")) c.N0 = detail::get_int(input, "N0", "config");
  if (input.contains("eps")) c.eps = get_number(input, "eps", "config");
  if (input.contains("max_N")) c.max_N = detail::get_int(input, "max_N", "config");
  if (input.contains("r")) {
    const int r = detail::get_int(input, "r", "config");
    if (r < 0) throw ConfigError("'r' must be >= 0");
    c.r = static_cast<std::size_t>(r);
  }
  if (c.N < 1) throw ConfigError("'N' must be >= 1");
  if (c.N0 < 4) throw ConfigError("'N0' must be >= 4");
  if (!(c.eps > 0.0) || !std::isfinite(c.eps)) throw ConfigError("'eps' must be > 0");
  if (c.r && *c.r >= static_cast<std::size_t>(c.N)) throw ConfigError("'r' must be < N");
  if (c.max_N < 16) throw ConfigError("'max_N' must be >= 16");

  if (input.contains("format")) {
    const auto f = input.at("format");
    if (f == "csv") c.format = Format::csv;
    else if (f == "json") c.format = Format::json;
    else throw ConfigError("'format' must be \"csv\" or \"json\"");
  } else {
    c.format = (c.command == "sweep" || c.command == "fem" || c.command == "spectrum") ? Format::csv
                                                                                         : Format::json;
    input["format"] = c.format == Format::csv ? "csv" : "json";
  }
  if (input.contains("output")) {
    if (!input.at("output").is_string()) throw ConfigError("'output' must be a string");
    c.output = input.at("output").get<std::string>();
  }
  if (input.contains("dump_matrix")) {
    if (!input.at("dump_matrix").is_string()) throw ConfigError("'dump_matrix' must be a string");
    c.dump_matrix = input.at("dump_matrix").get<std::string>();
  }

  const bool needs_profile = c.command == "spectrum" || c.command == "abscissa" || c.command == "check" ||
                             (c.command == "fem" && input.contains("fem") &&
                              input.at("fem").is_object() && input.at("fem").contains("compare"));
  if (input.contains("profile")) {
    c.profile = profile_from_json(input.at("profile"), model.dimension());
  } else if (needs_profile) {
    throw ConfigError("command '" + c.command + "' requires a 'profile'");
  }

  if (c.command == "check") {
    c.p_list = input.contains("p") ? detail::int_list(input.at("p"), "'p'") : std::vector<int>{1, 5};
    c.r1_list = input.contains("r1") ? detail::int_list(input.at("r1"), "'r1'") : std::vector<int>{1, 5};
    int max_p = 0, max_r1 = 0;
    for (int p : c.p_list) {
      if (p < 1) throw ConfigError("'p' entries must be >= 1");
      max_p = std::max(max_p, p);
    }
    for (int r1 : c.r1_list) {
      if (r1 < 1) throw ConfigError("'r1' entries must be >= 1");
      max_r1 = std::max(max_r1, r1);
    }
    if (c.N < std::max(2, max_p + max_r1)) throw ConfigError("'N' must be >= max(p) + max(r1)");
    input["p"] = c.p_list;
    input["r1"] = c.r1_list;
  }

  if (c.command == "sweep") {
    if (!input.contains("sweep")) throw ConfigError("command 'sweep' requires a 'sweep' object");
    const json& s = input.at("sweep");
    reject_unknown_keys(s, {"family", "fixed", "grid", "r_policy", "width", "threads"}, "sweep");
    if (!s.contains("family") || !s.at("family").is_string())
      throw ConfigError("sweep: missing 'family'");
    c.sweep.family = s.at("family").get<std::string>();
    if (s.contains("width")) c.sweep.width = get_number(s, "width", "sweep");
    DampingFamily family;
    try {
      family = damping_family(c.sweep.family, c.sweep.width);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const bool family_2d = c.sweep.family == "square2d" || c.sweep.family == "moving_square";
    if ((family_2d ? 2 : 1) != model.dimension())
      throw ConfigError("sweep family '" + c.sweep.family + "' does not match the model dimension");
    const json fixed = s.value("fixed", json::object());
    const json grid = s.value("grid", json::object());
    std::set<std::string> names(family.parameters.begin(), family.parameters.end());
    reject_unknown_keys(fixed, names, "sweep.fixed");
    reject_unknown_keys(grid, names, "sweep.grid");
    for (const auto& name : family.parameters) {
      if (fixed.contains(name) && grid.contains(name))
        throw ConfigError("sweep parameter '" + name + "' is both fixed and gridded");
      if (fixed.contains(name)) c.sweep.axes.push_back({get_number(fixed, name, "sweep.fixed")});
      else if (grid.contains(name)) c.sweep.axes.push_back(detail::axis_values(grid.at(name), name));
      else throw ConfigError("sweep parameter '" + name + "' has no value");
    }
    if (s.contains("r_policy")) {
      if (!s.at("r_policy").is_string()) throw ConfigError("sweep.r_policy must be a string");
      c.sweep.r_policy = s.at("r_policy").get<std::string>();
    }
    if (c.sweep.r_policy != "first_point" && c.sweep.r_policy != "per_point" &&
        c.sweep.r_policy != "fixed")
      throw ConfigError("sweep.r_policy must be first_point, per_point or fixed");
    if (c.sweep.r_policy == "fixed" && !c.r) throw ConfigError("sweep.r_policy 'fixed' needs 'r'");
    if (s.contains("threads")) {
      const int t = detail::get_int(s, "threads", "sweep");
      if (t < 1) throw ConfigError("sweep.threads must be >= 1");
      c.sweep.threads = static_cast<unsigned>(t);
    }
    // Every grid point must satisfy the family preconditions up front.
    for (const auto& point : cartesian_grid(c.sweep.axes)) {
      try {
        (void)family(point);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sweep grid point rejected: ") + e.what());
      }
    }
  }

  if (c.command == "fem") {
    const json f = input.value("fem", json::object());
    reject_unknown_keys(f, {"k", "compare"}, "fem");
    c.fem.k = f.contains("k") ? detail::int_list(f.at("k"), "fem.k") : std::vector<int>{10};
    for (int k : c.fem.k)
      if (k < 1) throw ConfigError("fem.k entries must be >= 1");
    if (f.contains("compare")) {
      const json& cmp = f.at("compare");
      reject_unknown_keys(cmp, {"N", "reference_N"}, "fem.compare");
      c.fem.compare_N = cmp.contains("N") ? detail::get_int(cmp, "N", "fem.compare") : c.N;
      c.fem.compare_reference_N = cmp.contains("reference_N")
                                      ? detail::get_int(cmp, "reference_N", "fem.compare")
                                      : 2 * *c.fem.compare_N;
      if (*c.fem.compare_N < 1 || *c.fem.compare_reference_N <= *c.fem.compare_N)
        throw ConfigError("fem.compare needs 1 <= N < reference_N");
      if (c.model != ModelKind::wave1d) throw ConfigError("fem.compare requires model wave1d");
      if (c.r && *c.r >= static_cast<std::size_t>(*c.fem.compare_N))
        throw ConfigError("'r' must be < fem.compare.N");
    }
  }

  c.normalized = input;
  return c;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string cmd_spectrum(const RunConfig& c) {
  const ModalModel model(c.model);
  const ProjectedSystem sys = assemble(model, *c.profile, c.N);
  if (!c.dump_matrix.empty()) {
    std::ofstream os(c.dump_matrix);
    if (!os) throw std::runtime_error("cannot open matrix dump file '" + c.dump_matrix + "'");
    write_matrix(os, realize_matrix(sys));
  }
  const Spectrum s = solve(sys);
  const std::size_t r = c.r.value_or(0);
  const auto best = modified_abscissa(s, r);
  if (c.format == Format::csv) {
    std::string out = "k,re,im,argmax\n";
    for (std::size_t p = 0; p < s.size(); ++p) {
      const long k = s.index_at(p);
      out += std::to_string(k) + "," + csv_number(s.values[p].real()) + "," +
             csv_number(s.values[p].imag()) + "," + (k == best.argmax_index ? "1" : "0") + "\n";
    }
    return out;
  }
  return dump({{"model", std::string(to_string(c.model))},
               {"profile", profile_to_json(*c.profile)},
               {"N", c.N},
               {"r", r},
               {"mu_r", best.mu_r},
               {"argmax_index", best.argmax_index},
               {"max_residual", s.max_residual},
               {"spectrum", complex_list(s)},
               {"config", c.normalized}});
}

inline std::string cmd_abscissa(const RunConfig& c) {
  AlgorithmOptions opts;
  opts.max_N = c.max_N;
  const AbscissaReport rep = run_algorithm(ModalModel(c.model), *c.profile, c.eps, c.N0, opts);
  if (c.format == Format::csv) {
    return "model,eps,N0,r,N1,alpha_hat,N_final,mu_r,argmax_index,warnings\n" +
           std::string(to_string(c.model)) + "," + csv_number(rep.eps) + "," + std::to_string(rep.N0) +
           "," + std::to_string(rep.r) + "," + std::to_string(rep.N1) + "," + csv_number(rep.alpha_hat) +
           "," + std::to_string(rep.N_final) + "," + csv_number(rep.mu_r) + "," +
           std::to_string(rep.argmax_index) + "," + csv_escape(join(rep.warnings, ";")) + "\n";
  }
  json j = to_json(rep);
  j["config"] = c.normalized;
  return dump(j);
}

inline std::string cmd_check(const RunConfig& c) {
  const ModalModel model(c.model);
  const HypothesisReport h = check_hypotheses(model, *c.profile, c.N, c.p_list, c.r1_list);
  if (c.format == Format::csv) {
    std::string out = "p,r1,tail\n";
    for (const auto& e : h.h5_table)
      out += std::to_string(e.p) + "," + std::to_string(e.r1) + "," + csv_number(e.tail) + "\n";
    return out;
  }
  json j = to_json(h);
  j["model"] = std::string(to_string(c.model));
  j["profile"] = profile_to_json(*c.profile);
  j["config"] = c.normalized;
  return dump(j);
}

inline std::string cmd_sweep(const RunConfig& c) {
  SweepOptions opts;
  opts.N = c.N;
  opts.threads = c.sweep.threads;
  if (c.sweep.r_policy == "fixed") opts.r_policy = FixedR{*c.r};
  else if (c.sweep.r_policy == "per_point") opts.r_policy = PerPointR{c.N0, c.eps};
  else opts.r_policy = FirstPointR{c.N0, c.eps};
  const SweepResult result = sweep(ModalModel(c.model), damping_family(c.sweep.family, c.sweep.width),
                                   cartesian_grid(c.sweep.axes), opts);
  if (c.format == Format::csv) return sweep_csv(result);
  json j = to_json(result);
  j["config"] = c.normalized;
  return dump(j);
}

/// Matrix size quoted elsewhere for k <= 10, eps = 0.1; reported next to ours.
inline constexpr int quoted_fem_matrix_size = 440;

inline std::string fem_note(int k, double eps, int matrix_size) {
  if (k == 10 && eps == 0.1 && matrix_size != quoted_fem_matrix_size)
    return "quoted size " + std::to_string(quoted_fem_matrix_size) + "x" +
           std::to_string(quoted_fem_matrix_size) + " differs from computed " +
           std::to_string(matrix_size) + "x" + std::to_string(matrix_size);
  return "";
}

inline std::string cmd_fem(const RunConfig& c) {
  struct Row {
    int k;
    FemRequirement req;
  };
  std::vector<Row> rows;
  for (int k : c.fem.k) rows.push_back({k, fem_required_elements(k, c.eps)});
  if (c.format == Format::csv) {
    std::string out = "k,eps,estimate,exact_minimal,matrix_size,note\n";
    for (const auto& row : rows) {
      const int size = 2 * row.req.exact_minimal;
      out += std::to_string(row.k) + "," + csv_number(c.eps) + "," + csv_number(row.req.estimate) + "," +
             std::to_string(row.req.exact_minimal) + "," + std::to_string(size) + "," +
             csv_escape(fem_note(row.k, c.eps, size)) + "\n";
    }
    return out;
  }
  json table = json::array();
  for (const auto& row : rows) {
    const int size = 2 * row.req.exact_minimal;
    table.push_back({{"k", row.k},
                     {"eps", c.eps},
                     {"estimate", row.req.estimate},
                     {"exact_minimal", row.req.exact_minimal},
                     {"matrix_size", size},
                     {"note", fem_note(row.k, c.eps, size)}});
  }
  json j = {{"requirements", table}};
  if (c.fem.compare_N) {
    json cmp = json::array();
    for (const auto& row : compare_projection_fem(ModalModel(c.model), *c.profile, *c.fem.compare_N,
                                                  *c.fem.compare_reference_N, c.r.value_or(0))) {
      cmp.push_back({{"k", row.k}, {"projection_error", row.projection_error}, {"fem_error", row.fem_error}});
    }
    j["comparison"] = {{"N", *c.fem.compare_N},
                       {"reference_N", *c.fem.compare_reference_N},
                       {"r", c.r.value_or(0)},
                       {"rows", cmp}};
  }
  j["config"] = c.normalized;
  return dump(j);
}

inline std::string run_command(const RunConfig& c) {
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "abscissa") return cmd_abscissa(c);
  if (c.command == "check") return cmd_check(c);
  if (c.command == "sweep") return cmd_sweep(c);
  return cmd_fem(c);
}

struct RunResult {
  int exit_code = exit_ok;
  std::string output;
  std::string error;
};

/// Parses, validates and runs; never throws. Exit codes: 0 success,
/// 2 validation error, 3 solver failure.
inline RunResult execute(const json& input, const Overrides& ov = {}) {
  RunResult res;
  RunConfig config;
  try {
    config = parse_config(input, ov);
  } catch (const std::exception& e) {
    return {exit_validation, "", e.what()};
  }
  try {
    res.output = run_command(config);
  } catch (const SolverError& e) {
    return {exit_solver, "", e.what()};
  } catch (const QuadratureError& e) {
    return {exit_solver, "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {exit_validation, "", e.what()};
  } catch (const std::exception& e) {
    return {exit_solver, "", e.what()};
  }
  return res;
}

}  // namespace specproj::cli

#endif  // SPECPROJ_CLI_HPP
