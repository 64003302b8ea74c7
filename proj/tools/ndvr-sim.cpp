/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

// ndvr-sim: run one scenario and write its artifacts.
//
// exit codes: 0 ok, 1 output not writable, 2 bad configuration or flags,
// 3 runtime invariant breach

#include "ndvr/scenario/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int EXIT_IO = 1;
constexpr int EXIT_CONFIG = 2;
constexpr int EXIT_INVARIANT = 3;

} // namespace

int
main(int argc, char** argv)
{
  using namespace ndvr;

  CLI::App app{"NDVR routing simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario");
  std::string scenarioPath;
  std::string outDir;
  std::optional<uint64_t> seed;
  std::optional<double> duration;
  std::optional<std::string> traceLevel;
  bool validateOnly = false;
  run->add_option("--scenario", scenarioPath, "scenario file")->required();
  run->add_option("--seed", seed, "random seed; overrides [run] seed");
  run->add_option("--out", outDir, "output directory");
  run->add_option("--duration", duration, "simulated seconds; overrides [run] duration_s");
  run->add_option("--trace-level", traceLevel, "none, pkt or full")
     ->check(CLI::IsMember({"none", "pkt", "full"}));
  run->add_flag("--validate-only", validateOnly, "parse and check the scenario, then exit");

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : EXIT_CONFIG;
  }

  scenario::ScenarioConfig cfg;
  try {
    scenario::Overrides o;
    o.seed = seed;
    o.durationS = duration;
    if (traceLevel)
      o.traceLevel = scenario::parseTraceLevel(*traceLevel);
    cfg = scenario::loadScenario(scenarioPath);
    if (validateOnly) {
      cfg = scenario::applyOverrides(std::move(cfg), o.seed ? o : scenario::Overrides{1, o.durationS, o.traceLevel});
      std::cout << "scenario ok: " << cfg.nodes.size() << " nodes, " << cfg.durationS << " s\n";
      return 0;
    }
    cfg = scenario::applyOverrides(std::move(cfg), o);
    if (outDir.empty())
      throw scenario::ConfigError(0, "--out is required unless --validate-only is given");
  }
  catch (const scenario::ConfigError& e) {
    std::cerr << "ndvr-sim: " << scenarioPath << ": " << e.what() << '\n';
    return EXIT_CONFIG;
  }

  try {
    auto result = scenario::runScenario(cfg, outDir);
    const auto& s = result.summary;
    std::cout << "events " << result.events
              << ", overhead " << s.overheadPkts
              << ", forwarded " << s.forwardedPkts
              << ", delivered " << s.delivered
              << ", undelivered " << s.undelivered << '\n';
    return 0;
  }
  catch (const scenario::IoError& e) {
    std::cerr << "ndvr-sim: " << e.what() << '\n';
    return EXIT_IO;
  }
  catch (const scenario::ConfigError& e) {
    std::cerr << "ndvr-sim: " << e.what() << '\n';
    return EXIT_CONFIG;
  }
  catch (const InvariantError& e) {
    std::cerr << "ndvr-sim: invariant violated: " << e.what() << '\n';
    return EXIT_INVARIANT;
  }
  catch (const std::exception& e) {
    std::cerr << "ndvr-sim: internal error: " << e.what() << '\n';
    return EXIT_INVARIANT;
  }
}
