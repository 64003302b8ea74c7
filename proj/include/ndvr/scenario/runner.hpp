/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SCENARIO_RUNNER_HPP
#define NDVR_SCENARIO_RUNNER_HPP

#include "ndvr/scenario/simulation.hpp"

#include <filesystem>

namespace ndvr::scenario {

/// Output directory or artifact file could not be written.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Command-line values that take precedence over the scenario file.
struct Overrides
{
  std::optional<uint64_t> seed;
  std::optional<double> durationS;
  std::optional<sim::TraceLevel> traceLevel;
};

inline ScenarioConfig
applyOverrides(ScenarioConfig cfg, const Overrides& o)
{
  if (o.seed)
    cfg.seed = o.seed;
  if (o.durationS)
    cfg.durationS = *o.durationS;
  if (o.traceLevel)
    cfg.traceLevel = *o.traceLevel;
  if (!cfg.seed)
    throw ConfigError(0, "a seed is required, either --seed or [run] seed");
  cfg.validate();
  return cfg;
}

struct RunResult
{
  app::Summary summary;
  sim::RadioCounters radio;
  uint64_t events = 0;
};

namespace detail {

inline std::ofstream
openArtifact(const std::filesystem::path& p)
{
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("cannot write " + p.string());
  return os;
}

inline void
closeArtifact(std::ofstream& os, const std::filesystem::path& p)
{
  os.close();
  if (!os)
    throw IoError("error while writing " + p.string());
}

} // namespace detail

/**
 * @brief Runs one scenario and writes every artifact into @p outDir.
 *
 * Artifacts: trace.log, mobility.csv, delays.csv, cdf.csv, summary.csv and
 * one routes_<node>.csv per node.
 */
inline RunResult
runScenario(const ScenarioConfig& cfg, const std::filesystem::path& outDir)
{
  if (!cfg.seed)
    throw ConfigError(0, "a seed is required");
  std::error_code ec;
  std::filesystem::create_directories(outDir, ec);
  if (ec || !std::filesystem::is_directory(outDir))
    throw IoError("cannot create output directory " + outDir.string());

  auto tracePath = outDir / "trace.log";
  auto mobilityPath = outDir / "mobility.csv";
  auto trace = detail::openArtifact(tracePath);
  auto mobility = detail::openArtifact(mobilityPath);

  Simulation sim(cfg, *cfg.seed);
  sim.setTraceOutput(&trace, cfg.traceLevel);
  sim.setMobilityOutput(&mobility);
  sim.run();
  sim.checkInvariants();
  detail::closeArtifact(trace, tracePath);
  detail::closeArtifact(mobility, mobilityPath);

  RunResult result;
  result.summary = sim.summary();
  result.radio = sim.medium().counters();
  result.events = sim.scheduler().processed();

  auto write = [&] (const std::string& file, auto&& body) {
    auto p = outDir / file;
    auto os = detail::openArtifact(p);
    body(os);
    detail::closeArtifact(os, p);
  };
  write("delays.csv", [&] (std::ostream& os) { app::writeDelaysCsv(os, result.summary); });
  write("cdf.csv", [&] (std::ostream& os) { app::writeCdfCsv(os, result.summary); });
  write("summary.csv", [&] (std::ostream& os) { app::writeSummaryCsv(os, result.summary); });
  for (size_t i = 0; i < sim.size(); ++i)
    write("routes_" + sim.node(i).label() + ".csv", [&] (std::ostream& os) { os << sim.routesCsv(i); });
  return result;
}

} // namespace ndvr::scenario

#endif // NDVR_SCENARIO_RUNNER_HPP
