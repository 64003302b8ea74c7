// End-to-end acceptance run. One PASS/FAIL line per criterion; exit status is
// nonzero if any of them fails.

#include "support/cases.hpp"
#include "support/network.hpp"
#include "support/oracles.hpp"
#include "support/trust_cases.hpp"

#include "ndvr/routing/ehlo.hpp"
#include "ndvr/scenario/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ndvr;
using namespace ndvr::scenario;
namespace fs = std::filesystem;

namespace {

const std::string SCEN = NDVR_SCENARIO_DIR;

struct Outcome
{
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double
secondsSince(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string
fmt(double v, int digits = 2)
{
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

oracle::Adjacency
graphOf(const ScenarioConfig& cfg)
{
  std::vector<std::pair<double, double>> pos;
  for (const auto& n : cfg.nodes)
    pos.push_back({n.position->x, n.position->y});
  return oracle::unitDisk(pos, cfg.radio.range);
}

double
toSeconds(SimTime t)
{
  return static_cast<double>(t.count()) / 1e6;
}

NodeId
idOf(const Simulation& s, const std::string& label)
{
  for (size_t i = 0; i < s.size(); ++i)
    if (s.node(i).label() == label)
      return static_cast<NodeId>(i);
  throw std::out_of_range("no node " + label);
}

bool
isEhlo(const sim::TraceRecord& r)
{
  return r.isInterest && routing::ehloPrefix().isPrefixOf(r.name);
}

// ---- 1: static chain ------------------------------------------------------------

Outcome
staticChain()
{
  auto cfg = loadScenario(SCEN + "/chain4.scn");
  auto t0 = Clock::now();
  Simulation s(cfg, *cfg.seed);
  const SimTime deadline = cfg.ndvr.ehloInterval * 5;
  s.runUntil(deadline);
  auto rep = testnet::checkConvergence(s, graphOf(cfg));
  double wall = secondsSince(t0);

  std::string detail = "checked at t=" + fmt(toSeconds(deadline), 1) + "s, wall " + fmt(wall, 3) + "s";
  if (!rep.ok())
    return {false, detail + "; " + rep.firstProblem};
  if (wall >= 5.0)
    return {false, detail + "; too slow"};
  return {true, detail + "; 16 routes at BFS cost, FIB agrees"};
}

// ---- 2: subgroup fetch, overheard reply -------------------------------------------

Outcome
overheardReply()
{
  auto cfg = loadScenario(SCEN + "/table1.scn");
  Simulation s(cfg, *cfg.seed);
  auto& a = s.node("A");
  const NodeId idA = idOf(s, "A"), idB = idOf(s, "B"), idC = idOf(s, "C"), idD = idOf(s, "D");
  const uint64_t target = 10;

  bool armed = false;
  bool ehloSeen = false;
  std::vector<sim::TraceRecord> log;
  s.tracer().addObserver([&] (const sim::TraceRecord& r) {
    if (armed && r.node == idA && r.dir == sim::TraceDir::Tx && isEhlo(r))
      ehloSeen = true;
    log.push_back(r);
  });

  // let routing settle, then wait for A to beacon so the next one is a full interval away
  s.runUntil(secondsToTime(8));
  armed = true;
  auto& sched = s.scheduler();
  while (!ehloSeen && sched.step()) {
  }
  if (!ehloSeen)
    return {false, "A never beaconed"};
  const SimTime intervention = sched.now();

  auto* router = a.router();
  if (router->table().version() >= target)
    return {false, "A's table version already " + std::to_string(router->table().version())};
  // re-announce A's own prefix: same prefix count, one version per commit
  while (router->table().version() < target)
    a.advertise(ndn::Name("/ndn/A"));

  // aim the next subgroup at {B, C}
  auto ordered = router->neighbors().ordered();
  bool aimed = false;
  for (size_t c = 0; c < ordered.size() && !aimed; ++c) {
    auto sub = routing::selectPrioritySubgroup(ordered, c, cfg.ndvr.subgroupSize);
    std::set<std::string> labels;
    for (const auto& m : sub.members)
      labels.insert(m.label);
    if (labels == std::set<std::string>{"B", "C"}) {
      router->setSubgroupCursor(c);
      aimed = true;
    }
  }
  if (!aimed)
    return {false, "no cursor gives subgroup {B, C}"};

  log.clear();
  s.runUntil(intervention + secondsToTime(3));

  const ndn::Name wanted = routing::makeDvInfoName(router->self(), target);
  std::vector<sim::TraceRecord> interests;
  size_t dataTx = 0, otherDataTx = 0;
  std::optional<SimTime> cachedAtD;
  size_t dFetchesAfterCache = 0;
  for (const auto& r : log) {
    auto parsed = routing::tryParseDvInfoName(r.name);
    bool fromA = parsed && parsed->router == router->self();
    if (r.dir == sim::TraceDir::Tx && r.isInterest && r.name == wanted)
      interests.push_back(r);
    if (r.dir == sim::TraceDir::Tx && !r.isInterest && r.name == wanted)
      (r.node == idA ? dataTx : otherDataTx)++;
    if (r.dir == sim::TraceDir::Cache && r.node == idD && r.name == wanted && !cachedAtD)
      cachedAtD = r.time;
    if (cachedAtD && r.dir == sim::TraceDir::Tx && r.isInterest && r.node == idD && fromA)
      ++dFetchesAfterCache;
  }

  std::string detail = std::to_string(interests.size()) + " fetch Interests, " + std::to_string(dataTx) +
                       " Data from A, D cached=" + (cachedAtD ? "yes" : "no") +
                       ", D fetches after cache=" + std::to_string(dFetchesAfterCache);
  bool ok = interests.size() == 2 && dataTx == 1 && otherDataTx == 0 && cachedAtD && dFetchesAfterCache == 0;
  if (interests.size() == 2) {
    std::set<NodeId> senders{interests[0].node, interests[1].node};
    ok = ok && senders == std::set<NodeId>{idB, idC} && interests[0].nonce != interests[1].nonce;
  }
  // nothing from D for this version at all, before or after the cache event
  for (const auto& r : interests)
    ok = ok && r.node != idD;
  return {ok, wanted.toUri() + ": " + detail};
}

// ---- 3: table update against the transliteration ----------------------------------

Outcome
processingMatchesReference()
{
  auto cmp = cases::compareDvProcessing(1000, 20240611);
  std::string detail = std::to_string(cmp.cases) + " cases, " + std::to_string(cmp.tableMismatches) +
                       " table / " + std::to_string(cmp.fibMismatches) + " FIB / " +
                       std::to_string(cmp.versionMismatches) + " version mismatches";
  if (!cmp.ok())
    detail += "; " + cmp.firstProblem;
  return {cmp.ok() && cmp.cases == 1000, detail};
}

// ---- 4: convergence and loop freedom on random graphs ------------------------------

Outcome
randomGraphs()
{
  std::mt19937_64 rng(4242);
  size_t violations = 0, notQuiet = 0;
  std::string first;
  for (size_t k = 0; k < 50; ++k) {
    size_t n = 2 + rng() % 9;
    auto g = oracle::randomConnectedGraph(n, 0.3, rng);
    testnet::GraphNet net(g, 1000 + k, 40);
    auto& s = *net.sim;
    s.runUntil(secondsToTime(30));
    std::vector<uint64_t> before;
    for (size_t i = 0; i < n; ++i)
      before.push_back(s.node(i).router()->table().version());
    s.runUntil(secondsToTime(40));
    for (size_t i = 0; i < n; ++i)
      if (s.node(i).router()->table().version() != before[i]) {
        ++notQuiet;
        if (first.empty())
          first = "graph " + std::to_string(k) + " still changing after 30 s";
        break;
      }
    auto rep = testnet::checkConvergence(s, g);
    if (!rep.ok()) {
      violations += rep.costMismatches + rep.missing + rep.fibMismatches + rep.loops;
      if (first.empty())
        first = "graph " + std::to_string(k) + " (n=" + std::to_string(n) + "): " + rep.firstProblem;
    }
  }
  std::string detail = "50 graphs, " + std::to_string(violations) + " violations, " +
                       std::to_string(notQuiet) + " not quiescent";
  if (!first.empty())
    detail += "; " + first;
  return {violations == 0 && notQuiet == 0, detail};
}

// ---- 5: churn ----------------------------------------------------------------------

struct LinkEvent
{
  double atS;
  bool cut;
  size_t a, b;
};

struct Script
{
  std::string name;
  oracle::Adjacency graph;
  std::vector<LinkEvent> events;
  double durationS;
};

oracle::Adjacency
fromEdges(size_t n, const std::vector<std::pair<size_t, size_t>>& edges)
{
  oracle::Adjacency g(n);
  for (auto [a, b] : edges) {
    g[a].insert(b);
    g[b].insert(a);
  }
  return g;
}

std::vector<Script>
churnScripts()
{
  std::vector<Script> out;
  out.push_back({"chain5", fromEdges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}),
                 {{10, true, 1, 2}, {20, false, 1, 2}, {30, true, 3, 4}, {40, false, 3, 4}}, 55});
  out.push_back({"ring6", fromEdges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}),
                 {{10, true, 0, 1}, {25, false, 0, 1}, {30, true, 2, 3}, {35, true, 4, 5},
                  {45, false, 2, 3}, {47, false, 4, 5}},
                 60});
  std::vector<std::pair<size_t, size_t>> grid;
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c) {
      if (c < 2)
        grid.push_back({r * 3 + c, r * 3 + c + 1});
      if (r < 2)
        grid.push_back({r * 3 + c, (r + 1) * 3 + c});
    }
  out.push_back({"grid3x3", fromEdges(9, grid),
                 {{10, true, 4, 1}, {10, true, 4, 3}, {12, true, 4, 5}, {12, true, 4, 7},
                  {30, false, 4, 1}, {32, false, 4, 7}, {40, true, 0, 1}, {40, true, 0, 3}, {50, false, 0, 1}},
                 65});

  std::mt19937_64 rng(555);
  for (int k = 0; k < 12; ++k) {
    size_t n = 4 + rng() % 5;
    auto g = oracle::randomConnectedGraph(n, 0.35, rng);
    std::vector<std::pair<size_t, size_t>> edges;
    for (size_t a = 0; a < n; ++a)
      for (size_t b : g[a])
        if (a < b)
          edges.push_back({a, b});
    std::set<std::pair<size_t, size_t>> down;
    std::vector<LinkEvent> ev;
    for (int e = 0; e < 8; ++e) {
      auto edge = edges[rng() % edges.size()];
      bool cut = down.count(edge) == 0;
      cut ? (void)down.insert(edge) : (void)down.erase(edge);
      ev.push_back({10.0 + 4.0 * e, cut, edge.first, edge.second});
    }
    out.push_back({"random" + std::to_string(k), g, ev, 60});
  }
  return out;
}

Outcome
churnSafety()
{
  size_t regressions = 0, excess = 0;
  uint32_t worst = 0;
  std::string first;
  auto scripts = churnScripts();
  for (size_t k = 0; k < scripts.size(); ++k) {
    const auto& sc = scripts[k];
    testnet::GraphNet net(sc.graph, 700 + k, sc.durationS);
    testnet::ChurnMonitor mon;
    auto& s = *net.sim;
    auto observe = [&] { mon.observe(s); };
    for (const auto& e : sc.events) {
      testnet::stepUntil(s, secondsToTime(e.atS), observe);
      e.cut ? net.cut(e.a, e.b) : net.restore(e.a, e.b);
    }
    testnet::stepUntil(s, secondsToTime(sc.durationS), observe);
    regressions += mon.seqRegressions;
    excess += mon.costViolations;
    worst = std::max(worst, mon.maxCost);
    if (first.empty() && !mon.firstProblem.empty())
      first = sc.name + ": " + mon.firstProblem;
  }
  std::string detail = std::to_string(scripts.size()) + " scripts, " + std::to_string(regressions) +
                       " seq regressions, " + std::to_string(excess) + " costs above n-1 (max cost seen " +
                       std::to_string(worst) + ")";
  if (!first.empty())
    detail += "; " + first;
  return {regressions == 0 && excess == 0, detail};
}

// ---- 6: neighbor timeout -----------------------------------------------------------

Outcome
neighborTimeout()
{
  // R0 - R1 - R2; R1 goes quiet at 10 s
  auto g = fromEdges(3, {{0, 1}, {1, 2}});
  testnet::GraphNet net(g, 66, 20);
  auto& s = *net.sim;
  bool silent = false;
  auto links = net.links;
  s.medium().setLinkFilter([links, &silent] (NodeId from, NodeId to) {
    return !(silent && from == 1) && (*links)[from].count(to) > 0;
  });

  std::optional<SimTime> lastEhlo;
  s.tracer().addObserver([&] (const sim::TraceRecord& r) {
    if (r.node == 0 && r.dir == sim::TraceDir::Rx && r.peer == NodeId{1} && isEhlo(r))
      lastEhlo = r.time;
  });

  s.runUntil(secondsToTime(10));
  const auto* r0 = s.node(0).router();
  const auto self1 = s.node(1).router()->self();
  if (r0->neighbors().find(self1) == nullptr || r0->table().find(testnet::prefixOf(1)) == nullptr)
    return {false, "R0 never learned R1"};
  silent = true;

  std::optional<SimTime> removedAt;
  testnet::stepUntil(s, secondsToTime(20), [&] {
    if (!removedAt && r0->neighbors().find(self1) == nullptr)
      removedAt = s.scheduler().now();
  });
  if (!removedAt || !lastEhlo)
    return {false, "R1 was never removed"};

  const auto& cfg = s.config().ndvr;
  const SimTime lo = *lastEhlo + cfg.neighborTimeout();
  const SimTime hi = lo + cfg.ehloInterval + SimTime(1); // one scheduler tick of slack
  std::string dump = r0->table().toCsv();
  bool routesGone = dump.find("/ndn/R1,") == std::string::npos && dump.find("/ndn/R2,") == std::string::npos;

  std::string detail = "last EHLO at " + fmt(toSeconds(*lastEhlo), 6) + "s, removed at " +
                       fmt(toSeconds(*removedAt), 6) + "s, window (" + fmt(toSeconds(lo), 6) + ", " +
                       fmt(toSeconds(hi), 6) + "], routes via R1 " + (routesGone ? "gone" : "still present");
  return {*removedAt > lo && *removedAt <= hi && routesGone, detail};
}

// ---- 7: trust ------------------------------------------------------------------------

Outcome
trustChain()
{
  auto rep = trustcases::runMany(200, 777);
  std::string detail = std::to_string(rep.cases) + " cases, " + std::to_string(rep.acceptedForged) +
                       " bad accepted, " + std::to_string(rep.rejectedHonest) + " honest rejected, " +
                       std::to_string(rep.unresolved) + " unresolved;";
  bool allKinds = true;
  for (auto k : {trustcases::Attack::None, trustcases::Attack::Tampered, trustcases::Attack::WrongSigner,
                 trustcases::Attack::Unanchored}) {
    size_t c = rep.perAttack.count(k) ? rep.perAttack.at(k) : 0;
    detail += std::string(" ") + trustcases::toString(k) + "=" + std::to_string(c);
    allKinds = allKinds && c > 0;
  }
  if (!rep.ok())
    detail += "; " + rep.firstProblem;
  return {rep.ok() && allKinds && rep.cases == 200, detail};
}

// ---- 8: NDVR against flooding on mobile nodes --------------------------------------

Outcome
mobileComparison()
{
  auto t0 = Clock::now();
  std::vector<double> rateN, rateF, fwdN, fwdF;
  auto ndvrCfg = loadScenario(SCEN + "/desk_ndvr.scn");
  auto floodCfg = loadScenario(SCEN + "/desk_flood.scn");
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    for (auto* cfg : {&ndvrCfg, &floodCfg}) {
      Simulation s(*cfg, seed);
      s.run();
      auto sum = s.summary();
      bool isNdvr = cfg == &ndvrCfg;
      (isNdvr ? rateN : rateF).push_back(sum.deliveryRatePps);
      (isNdvr ? fwdN : fwdF).push_back(static_cast<double>(sum.forwardedPkts));
    }
  }
  double wall = secondsSince(t0);
  auto rn = oracle::ci95(rateN), rf = oracle::ci95(rateF);
  auto fn = oracle::ci95(fwdN), ff = oracle::ci95(fwdF);
  bool rateOk = rn.mean > rf.mean && rn.lo() > rf.hi();
  bool fwdOk = fn.mean < ff.mean && fn.hi() < ff.lo();
  std::string detail = "delivery " + fmt(rn.mean) + "+-" + fmt(rn.half) + " vs " + fmt(rf.mean) + "+-" +
                       fmt(rf.half) + " pps; forwarded " + fmt(fn.mean, 0) + "+-" + fmt(fn.half, 0) + " vs " +
                       fmt(ff.mean, 0) + "+-" + fmt(ff.half, 0) + "; wall " + fmt(wall, 1) + "s";
  return {rateOk && fwdOk && wall < 300, detail};
}

// ---- 9: determinism --------------------------------------------------------------------

std::pair<uint64_t, uint64_t>
traceDigest(ScenarioConfig cfg, const fs::path& dir)
{
  cfg.traceLevel = sim::TraceLevel::Pkt;
  fs::remove_all(dir);
  runScenario(cfg, dir);
  std::ifstream in(dir / "trace.log", std::ios::binary);
  oracle::HashStream h;
  h << in.rdbuf();
  fs::remove_all(dir);
  return {h.hash(), h.bytes()};
}

Outcome
determinism()
{
  const fs::path base = fs::temp_directory_path() / ("ndvr_accept_" + std::to_string(::getpid()));
  std::string detail;
  bool ok = true;
  for (const char* name : {"chain4", "table1", "desk_ndvr"}) {
    auto cfg = loadScenario(SCEN + "/" + name + ".scn");
    auto first = traceDigest(cfg, base / "a");
    auto second = traceDigest(cfg, base / "b");
    bool same = first == second && first.second > 0;
    ok = ok && same;
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + std::to_string(first.second) + "B " +
              (same ? "identical" : "DIFFERENT");
  }
  fs::remove_all(base);
  return {ok, detail};
}

} // namespace

int
main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    {"static chain converges to hop counts", staticChain},
    {"subgroup fetch with overheard reply", overheardReply},
    {"table update matches reference", processingMatchesReference},
    {"random graphs converge loop-free", randomGraphs},
    {"no seq regression or runaway cost under churn", churnSafety},
    {"silent neighbor times out", neighborTimeout},
    {"trust chain verdicts", trustChain},
    {"mobile delivery and overhead vs flooding", mobileComparison},
    {"same seed gives identical trace", determinism},
  };

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    }
    catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass)
      ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " -- " << o.detail
              << " (" << fmt(secondsSince(t0), 1) << "s)" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
