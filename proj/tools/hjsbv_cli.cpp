#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hjsbv/acceptance.hpp"
#include "hjsbv/experiment.hpp"

namespace {

int run_config(const std::string& path, const std::string& out, const std::string& only_check) {
  using namespace hjsbv;
  Json raw;
  {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read config " << path << "\n";
      return 2;
    }
    try {
      raw = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
  }
  ExperimentConfig cfg;
  try {
    cfg = parse_config(raw);
    if (!only_check.empty()) cfg.checks = {only_check};
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  ReportBundle b;
  try {
    b = run_experiment(cfg, out);
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& r : b.checks) {
    std::printf("%-17s %s%s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.hard ? "" : " (report only)");
    if (!r.pass) std::fprintf(stderr, "check %s failed: %s\n", r.name.c_str(), r.failure.c_str());
  }
  return b.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf-Lax solver and SBV regularity experiments"};
  app.require_subcommand(1);
  std::string config, out;
  struct Sub {
    const char* name;
    const char* check;
    const char* help;
  };
  const Sub subs[] = {
      {"run", "", "run every check listed in the config"},
      {"solve", "solve", "solve the configured time slices"},
      {"ftrace", "ftrace", "trace F(t) over the time grid"},
      {"lemmas", "lemmas", "compression, lower bound and injectivity checks"},
      {"decompose", "decompose", "BV decomposition of Du along a slice line"},
      {"scan", "exceptional-scan", "exceptional-time scan"},
      {"lift", "stationary-lift", "time-constant lift of a stationary profile"},
  };
  std::string chosen;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", out, "output directory, overrides output_dir");
    sc->callback([&chosen, &s] { chosen = s.check; });
  }
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify-all", "run the acceptance suite on the built-in catalog");
  verify->add_option("--out", out, "directory for acceptance.json");
  verify->add_option("--only", only, "criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (verify->parsed()) {
    const auto results = hjsbv::run_acceptance(stdout, only);
    int failed = 0;
    hjsbv::Json arr = hjsbv::Json::array();
    for (const auto& r : results) {
      failed += !r.pass;
      arr.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    if (!out.empty()) {
      hjsbv::OutputDir dir(out);
      dir.write_json("acceptance.json", {{"criteria", arr}, {"failed", failed}});
    }
    return failed == 0 ? 0 : 1;
  }
  return run_config(config, out, chosen);
}
