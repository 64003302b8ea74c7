/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SCENARIO_CONFIG_HPP
#define NDVR_SCENARIO_CONFIG_HPP

#include "ndvr/routing/config.hpp"
#include "ndvr/sim/mobility.hpp"
#include "ndvr/sim/radio.hpp"
#include "ndvr/sim/trace.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ndvr::scenario {

using ndn::Name;

/// Malformed or inconsistent scenario; line is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
    , m_line(line)
  {
  }

  size_t line() const { return m_line; }

private:
  size_t m_line;
};

enum class ForwardingMode {
  NdvrMulticast,         ///< routes from NDVR, multicast strategy
  MulticastDefaultRoute, ///< no routing, every node floods through a default route
};

enum class WorkloadType {
  None,
  Announce,    ///< every node advertises `<announcePrefix>/<label>` and does nothing else
  SyncPoisson, ///< Poisson producer plus routing-triggered consumer on every node
  Cbr,         ///< every node serves its prefix and requests every other node's at a constant rate
};

struct NodeSpec
{
  std::string label;
  std::optional<sim::Vec2> position; ///< unset: drawn uniformly in the arena
  std::optional<double> range;       ///< unset: the radio default
};

struct WorkloadConfig
{
  WorkloadType type = WorkloadType::None;
  Name announcePrefix{"ndn"};
  double meanIntervalS = 40;
  double producerDurationS = 800;
  size_t payloadSize = 300;
  milliseconds freshness{10000};
  uint32_t syncRetries = 3;
  milliseconds syncSpacing{1000};
  milliseconds idt{100};
  double cbrDurationS = 100;
  milliseconds cbrLifetime{1000};
};

struct ScenarioConfig
{
  sim::Arena arena;
  std::vector<NodeSpec> nodes;
  Name network{"ufba"};

  sim::MobilityModel mobility = sim::MobilityModel::Static;
  sim::WalkParams walk;
  sim::RpgmParams rpgm;
  milliseconds mobilityStep{100};

  sim::RadioConfig radio;

  routing::NdvrConfig ndvr;
  bool security = true;
  bool unicastFaces = true;

  ForwardingMode forwarding = ForwardingMode::NdvrMulticast;
  size_t csCapacity = 256;
  bool cacheUnsolicited = true;

  WorkloadConfig workload;

  double durationS = 0;
  std::optional<uint64_t> seed;
  sim::TraceLevel traceLevel = sim::TraceLevel::Pkt;

  /// Cross-field checks; throws ConfigError.
  void
  validate() const
  {
    if (!(arena.width > 0) || !(arena.height > 0))
      throw ConfigError(0, "arena width and height must be positive");
    if (nodes.empty())
      throw ConfigError(0, "scenario has no nodes");
    std::set<std::string> labels;
    for (const auto& n : nodes) {
      if (!labels.insert(n.label).second)
        throw ConfigError(0, "duplicate node label '" + n.label + "'");
      if (n.position && !arena.contains(*n.position))
        throw ConfigError(0, "node '" + n.label + "' is outside the arena");
      if (n.range && !(*n.range >= 0))
        throw ConfigError(0, "node '" + n.label + "' has a negative range");
    }
    if (!(durationS > 0))
      throw ConfigError(0, "run duration must be positive");
    if (!(radio.range >= 0))
      throw ConfigError(0, "radio range must be non-negative");
    if (!(radio.lossProb >= 0 && radio.lossProb <= 1))
      throw ConfigError(0, "radio loss must be in [0, 1]");
    if (radio.bitrate == 0)
      throw ConfigError(0, "radio bitrate must be positive");
    if (radio.contention.cwMin > radio.contention.cwMax)
      throw ConfigError(0, "cw_min must not exceed cw_max");
    if (mobilityStep.count() <= 0)
      throw ConfigError(0, "mobility step must be positive");
    if (!(walk.speedMin > 0) || walk.speedMin > walk.speedMax || !(walk.legSeconds > 0))
      throw ConfigError(0, "invalid walk parameters");
    if (!(rpgm.groupMean >= 1) || rpgm.groupStddev < 0 || rpgm.offsetBound < 0)
      throw ConfigError(0, "invalid group mobility parameters");
    try {
      ndvr.validate();
    }
    catch (const std::invalid_argument& e) {
      throw ConfigError(0, e.what());
    }
    if (workload.type == WorkloadType::SyncPoisson && forwarding != ForwardingMode::NdvrMulticast)
      throw ConfigError(0, "the sync workload learns names through routing and needs ndvr_multicast");
    if (workload.type == WorkloadType::Announce && forwarding != ForwardingMode::NdvrMulticast)
      throw ConfigError(0, "the announce workload needs ndvr_multicast");
    if (!(workload.meanIntervalS > 0) || workload.idt.count() <= 0)
      throw ConfigError(0, "workload intervals must be positive");
  }
};

namespace detail {

inline std::string_view
trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string>
words(std::string_view s)
{
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w)
    out.push_back(w);
  return out;
}

inline double
toDouble(std::string_view v, size_t line)
{
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(line, "expected a number, got '" + std::string(v) + "'");
  return out;
}

inline uint64_t
toUnsigned(std::string_view v, size_t line)
{
  uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(line, "expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

inline bool
toBool(std::string_view v, size_t line)
{
  if (v == "true" || v == "yes" || v == "on" || v == "1")
    return true;
  if (v == "false" || v == "no" || v == "off" || v == "0")
    return false;
  throw ConfigError(line, "expected a boolean, got '" + std::string(v) + "'");
}

inline Name
toName(std::string_view v, size_t line)
{
  if (v.empty() || v.front() != '/')
    throw ConfigError(line, "expected a name starting with '/', got '" + std::string(v) + "'");
  try {
    return Name(v);
  }
  catch (const std::exception& e) {
    throw ConfigError(line, e.what());
  }
}

inline milliseconds
toMs(std::string_view v, size_t line)
{
  return milliseconds(static_cast<int64_t>(toUnsigned(v, line)));
}

} // namespace detail

inline sim::TraceLevel
parseTraceLevel(std::string_view v, size_t line = 0)
{
  if (v == "none")
    return sim::TraceLevel::None;
  if (v == "pkt")
    return sim::TraceLevel::Pkt;
  if (v == "full")
    return sim::TraceLevel::Full;
  throw ConfigError(line, "trace level must be none, pkt or full");
}

/**
 * @brief Parses the sectioned `key = value` scenario format.
 *
 * `#` starts a comment. Keys are unique within a section, except `node`,
 * which may repeat: `node = <label> [<x> <y> [<range>]]`.
 */
inline ScenarioConfig
parseScenario(std::istream& in)
{
  using namespace detail;
  ScenarioConfig cfg;
  using Setter = std::function<void(std::string_view, size_t)>;
  std::map<std::string, std::map<std::string, Setter>> keys;

  std::optional<uint64_t> nodeCount;
  size_t nodeCountLine = 0;
  bool haveWidth = false, haveHeight = false, haveDuration = false;

  auto& arena = keys["arena"];
  arena["width"] = [&] (auto v, size_t l) { cfg.arena.width = toDouble(v, l); haveWidth = true; };
  arena["height"] = [&] (auto v, size_t l) { cfg.arena.height = toDouble(v, l); haveHeight = true; };

  auto& nodes = keys["nodes"];
  nodes["count"] = [&] (auto v, size_t l) { nodeCount = toUnsigned(v, l); nodeCountLine = l; };
  nodes["network"] = [&] (auto v, size_t l) { cfg.network = toName(v, l); };
  nodes["node"] = [&] (auto v, size_t l) {
    auto w = words(v);
    if (w.size() != 1 && w.size() != 3 && w.size() != 4)
      throw ConfigError(l, "node needs: <label> [<x> <y> [<range>]]");
    NodeSpec n;
    n.label = w[0];
    if (n.label.find('/') != std::string::npos)
      throw ConfigError(l, "node label must not contain '/'");
    if (w.size() >= 3)
      n.position = sim::Vec2{toDouble(w[1], l), toDouble(w[2], l)};
    if (w.size() == 4)
      n.range = toDouble(w[3], l);
    cfg.nodes.push_back(std::move(n));
  };

  auto& mob = keys["mobility"];
  mob["model"] = [&] (auto v, size_t l) {
    if (v == "static")
      cfg.mobility = sim::MobilityModel::Static;
    else if (v == "random_walk")
      cfg.mobility = sim::MobilityModel::RandomWalk;
    else if (v == "rpgm")
      cfg.mobility = sim::MobilityModel::Rpgm;
    else
      throw ConfigError(l, "mobility model must be static, random_walk or rpgm");
  };
  mob["speed_min"] = [&] (auto v, size_t l) { cfg.walk.speedMin = cfg.rpgm.walk.speedMin = toDouble(v, l); };
  mob["speed_max"] = [&] (auto v, size_t l) { cfg.walk.speedMax = cfg.rpgm.walk.speedMax = toDouble(v, l); };
  mob["leg_s"] = [&] (auto v, size_t l) { cfg.walk.legSeconds = cfg.rpgm.walk.legSeconds = toDouble(v, l); };
  mob["step_ms"] = [&] (auto v, size_t l) { cfg.mobilityStep = toMs(v, l); };
  mob["group_mean"] = [&] (auto v, size_t l) { cfg.rpgm.groupMean = toDouble(v, l); };
  mob["group_stddev"] = [&] (auto v, size_t l) { cfg.rpgm.groupStddev = toDouble(v, l); };
  mob["offset_bound"] = [&] (auto v, size_t l) { cfg.rpgm.offsetBound = toDouble(v, l); };

  auto& radio = keys["radio"];
  radio["range"] = [&] (auto v, size_t l) { cfg.radio.range = toDouble(v, l); };
  radio["loss"] = [&] (auto v, size_t l) { cfg.radio.lossProb = toDouble(v, l); };
  radio["preamble_us"] = [&] (auto v, size_t l) { cfg.radio.preamble = SimTime(toUnsigned(v, l)); };
  radio["bitrate"] = [&] (auto v, size_t l) { cfg.radio.bitrate = toUnsigned(v, l); };
  radio["broadcast_bitrate"] = [&] (auto v, size_t l) { cfg.radio.broadcastBitrate = toUnsigned(v, l); };
  radio["contention"] = [&] (auto v, size_t l) { cfg.radio.contention.enabled = toBool(v, l); };
  radio["queue_capacity"] = [&] (auto v, size_t l) { cfg.radio.contention.queueCapacity = toUnsigned(v, l); };
  radio["slot_us"] = [&] (auto v, size_t l) { cfg.radio.contention.slot = SimTime(toUnsigned(v, l)); };
  radio["difs_us"] = [&] (auto v, size_t l) { cfg.radio.contention.difs = SimTime(toUnsigned(v, l)); };
  radio["cw_min"] = [&] (auto v, size_t l) { cfg.radio.contention.cwMin = static_cast<uint32_t>(toUnsigned(v, l)); };
  radio["cw_max"] = [&] (auto v, size_t l) { cfg.radio.contention.cwMax = static_cast<uint32_t>(toUnsigned(v, l)); };
  radio["unicast_retries"] = [&] (auto v, size_t l) {
    cfg.radio.contention.unicastRetries = static_cast<uint32_t>(toUnsigned(v, l));
  };

  auto& ndvr = keys["ndvr"];
  ndvr["ehlo_interval_ms"] = [&] (auto v, size_t l) { cfg.ndvr.ehloInterval = toMs(v, l); };
  ndvr["ehlo_multiplier"] = [&] (auto v, size_t l) { cfg.ndvr.ehloMultiplier = static_cast<uint32_t>(toUnsigned(v, l)); };
  ndvr["subgroup_size"] = [&] (auto v, size_t l) { cfg.ndvr.subgroupSize = static_cast<uint32_t>(toUnsigned(v, l)); };
  ndvr["backoff_min_ms"] = [&] (auto v, size_t l) { cfg.ndvr.backoffMin = toMs(v, l); };
  ndvr["backoff_max_ms"] = [&] (auto v, size_t l) { cfg.ndvr.backoffMax = toMs(v, l); };
  ndvr["reply_delay_ms"] = [&] (auto v, size_t l) { cfg.ndvr.replyDelay = toMs(v, l); };
  ndvr["start_jitter_ms"] = [&] (auto v, size_t l) { cfg.ndvr.startJitterMax = toMs(v, l); };
  ndvr["fetch_lifetime_ms"] = [&] (auto v, size_t l) { cfg.ndvr.fetchLifetime = toMs(v, l); };
  ndvr["dvinfo_freshness_ms"] = [&] (auto v, size_t l) { cfg.ndvr.dvinfoFreshness = toMs(v, l); };
  ndvr["cost_strategy"] = [&] (auto v, size_t l) {
    if (v != "hop_count")
      throw ConfigError(l, "cost_strategy must be hop_count");
    cfg.ndvr.costStrategy = routing::CostStrategy::HopCount;
  };
  ndvr["security"] = [&] (auto v, size_t l) { cfg.security = toBool(v, l); };
  ndvr["unicast_faces"] = [&] (auto v, size_t l) { cfg.unicastFaces = toBool(v, l); };

  auto& fwd = keys["forwarding"];
  fwd["mode"] = [&] (auto v, size_t l) {
    if (v == "ndvr_multicast")
      cfg.forwarding = ForwardingMode::NdvrMulticast;
    else if (v == "multicast_default_route")
      cfg.forwarding = ForwardingMode::MulticastDefaultRoute;
    else
      throw ConfigError(l, "forwarding mode must be ndvr_multicast or multicast_default_route");
  };
  fwd["cs_capacity"] = [&] (auto v, size_t l) { cfg.csCapacity = toUnsigned(v, l); };
  fwd["cache_unsolicited"] = [&] (auto v, size_t l) { cfg.cacheUnsolicited = toBool(v, l); };

  auto& wl = keys["workload"];
  wl["type"] = [&] (auto v, size_t l) {
    if (v == "none")
      cfg.workload.type = WorkloadType::None;
    else if (v == "announce")
      cfg.workload.type = WorkloadType::Announce;
    else if (v == "sync_poisson")
      cfg.workload.type = WorkloadType::SyncPoisson;
    else if (v == "cbr")
      cfg.workload.type = WorkloadType::Cbr;
    else
      throw ConfigError(l, "workload type must be none, announce, sync_poisson or cbr");
  };
  wl["announce_prefix"] = [&] (auto v, size_t l) { cfg.workload.announcePrefix = toName(v, l); };
  wl["mean_interval_s"] = [&] (auto v, size_t l) { cfg.workload.meanIntervalS = toDouble(v, l); };
  wl["producer_duration_s"] = [&] (auto v, size_t l) { cfg.workload.producerDurationS = toDouble(v, l); };
  wl["payload_bytes"] = [&] (auto v, size_t l) { cfg.workload.payloadSize = toUnsigned(v, l); };
  wl["freshness_ms"] = [&] (auto v, size_t l) { cfg.workload.freshness = toMs(v, l); };
  wl["sync_retries"] = [&] (auto v, size_t l) { cfg.workload.syncRetries = static_cast<uint32_t>(toUnsigned(v, l)); };
  wl["sync_spacing_ms"] = [&] (auto v, size_t l) { cfg.workload.syncSpacing = toMs(v, l); };
  wl["idt_ms"] = [&] (auto v, size_t l) { cfg.workload.idt = toMs(v, l); };
  wl["cbr_duration_s"] = [&] (auto v, size_t l) { cfg.workload.cbrDurationS = toDouble(v, l); };
  wl["interest_lifetime_ms"] = [&] (auto v, size_t l) { cfg.workload.cbrLifetime = toMs(v, l); };

  auto& run = keys["run"];
  run["duration_s"] = [&] (auto v, size_t l) { cfg.durationS = toDouble(v, l); haveDuration = true; };
  run["seed"] = [&] (auto v, size_t l) { cfg.seed = toUnsigned(v, l); };
  run["trace_level"] = [&] (auto v, size_t l) { cfg.traceLevel = parseTraceLevel(v, l); };

  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::string raw;
  size_t lineNo = 0;
  size_t lastLine = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    lastLine = lineNo;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(lineNo, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!keys.count(section))
        throw ConfigError(lineNo, "unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(lineNo, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(lineNo, "key '" + key + "' appears before any section");
    auto& table = keys.at(section);
    auto it = table.find(key);
    if (it == table.end())
      throw ConfigError(lineNo, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty())
      throw ConfigError(lineNo, "key '" + key + "' has no value");
    if (key != "node" && !seen.emplace(section, key).second)
      throw ConfigError(lineNo, "duplicate key '" + key + "' in [" + section + "]");
    it->second(value, lineNo);
  }

  const size_t end = lastLine + 1;
  if (lastLine == 0)
    throw ConfigError(1, "scenario file is empty");
  if (!haveWidth || !haveHeight)
    throw ConfigError(end, "missing required [arena] width and height");
  if (!haveDuration)
    throw ConfigError(end, "missing required [run] duration_s");
  if (cfg.nodes.empty()) {
    if (!nodeCount)
      throw ConfigError(end, "missing required [nodes] count or node entries");
    if (*nodeCount == 0)
      throw ConfigError(nodeCountLine, "node count must be positive");
    for (uint64_t i = 0; i < *nodeCount; ++i)
      cfg.nodes.push_back(NodeSpec{std::to_string(i), std::nullopt, std::nullopt});
  }
  else if (nodeCount && *nodeCount != cfg.nodes.size()) {
    throw ConfigError(nodeCountLine, "count disagrees with the number of node entries");
  }
  return cfg;
}

inline ScenarioConfig
parseScenarioText(const std::string& text)
{
  std::istringstream is(text);
  return parseScenario(is);
}

/// Reads and validates a scenario file.
inline ScenarioConfig
loadScenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError(0, "cannot open scenario file " + path);
  ScenarioConfig cfg = parseScenario(in);
  cfg.validate();
  return cfg;
}

} // namespace ndvr::scenario

#endif // NDVR_SCENARIO_CONFIG_HPP
