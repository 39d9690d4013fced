#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "specproj/cli.hpp"

namespace cli = specproj::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spectral abscissa of damped evolution operators by modal projection"};
  std::string command;
  std::string config_path;
  cli::Overrides ov;
  app.add_option("command", command, "spectrum | abscissa | check | sweep | fem (overrides the config)");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", ov.out, "Output file (stdout when omitted)");
  app.add_option("--format", ov.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--model", ov.model, "wave1d | beam1d | schrodinger1d | wave2d");
  app.add_option("--N", ov.N, "Number of modes");
  app.add_option("--N0", ov.N0, "Coarse resolution for the safe-band estimate");
  app.add_option("--eps", ov.eps, "Tolerance");
  app.add_option("--r", ov.r, "Discarded band width");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::exit_ok : cli::exit_validation;
  }
  if (!command.empty()) ov.command = command;

  specproj::json config = specproj::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << config_path << "'\n";
      return cli::exit_validation;
    }
    try {
      config = specproj::json::parse(in);
    } catch (const specproj::json::parse_error& e) {
      std::cerr << "error: invalid JSON in '" << config_path << "': " << e.what() << "\n";
      return cli::exit_validation;
    }
  }

  const cli::RunResult result = cli::execute(config, ov);
  if (result.exit_code != cli::exit_ok) {
    std::cerr << "error: " << result.error << "\n";
    return result.exit_code;
  }
  const std::string out_path = ov.out ? *ov.out : config.value("output", std::string{});
  if (out_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return cli::exit_validation;
    }
    os << result.output;
  }
  return cli::exit_ok;
}
