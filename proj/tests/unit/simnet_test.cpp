#include "support/oracles.hpp"

#include "ndvr/sim/radio.hpp"
#include "ndvr/sim/trace.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace ndvr;
using namespace ndvr::sim;

// ---- scheduler ----------------------------------------------------------

TEST(Scheduler, OrderByTimeThenInsertion)
{
  Scheduler s;
  std::string log;
  s.schedule(SimTime(20), [&] { log += "c"; });
  s.schedule(SimTime(10), [&] { log += "a"; });
  s.schedule(SimTime(10), [&] { log += "b"; });
  s.schedule(SimTime(30), [&] { log += "d"; });
  s.runUntil(SimTime(25));
  EXPECT_EQ(log, "abc");
  EXPECT_EQ(s.now(), SimTime(25));
  s.runUntil(SimTime(30));
  EXPECT_EQ(log, "abcd");
  EXPECT_EQ(s.processed(), 4u);
}

TEST(Scheduler, PastSchedulingRejected)
{
  Scheduler s;
  s.runUntil(SimTime(100));
  EXPECT_THROW(s.schedule(SimTime(99), [] {}), SchedulerError);
  EXPECT_NO_THROW(s.schedule(SimTime(100), [] {}));
}

TEST(Scheduler, EmptyQueue)
{
  Scheduler s;
  EXPECT_FALSE(s.step());
  EXPECT_FALSE(s.nextEventTime());
  s.runUntil(SimTime(50));
  EXPECT_EQ(s.now(), SimTime(50));
}

TEST(Scheduler, CancelAndNested)
{
  Scheduler s;
  int hits = 0;
  auto id = s.schedule(SimTime(5), [&] { hits += 100; });
  s.schedule(SimTime(1), [&] {
    ++hits;
    s.scheduleAfter(SimTime(1), [&] { ++hits; });
  });
  s.cancel(id);
  s.cancel(9999);
  EXPECT_EQ(s.nextEventTime(), SimTime(1));
  s.runUntil(SimTime(10));
  EXPECT_EQ(hits, 2);
  EXPECT_EQ(s.pending(), 0u);
}

TEST(SchedulerProperty, ClockNeverGoesBackwards)
{
  std::mt19937_64 rng(3);
  Scheduler s;
  SimTime last{0};
  bool monotone = true;
  std::function<void()> spawn = [&] {
    if (s.now() < last)
      monotone = false;
    last = s.now();
    if (s.processed() < 5000)
      for (int k = 0; k < 2; ++k)
        s.scheduleAfter(SimTime(static_cast<int64_t>(rng() % 1000)), spawn);
  };
  s.schedule(SimTime(0), spawn);
  s.runUntil(SimTime(1'000'000'000));
  EXPECT_TRUE(monotone);
}

// ---- radio --------------------------------------------------------------

namespace {

struct Air
{
  Scheduler sched;
  MobilityManager mobility;
  Medium medium;
  std::vector<std::pair<NodeId, SimTime>> received;
  std::vector<NodeId> lost;

  Air(std::vector<Vec2> pos, RadioConfig cfg = {}, uint64_t seed = 1)
    : mobility(MobilityModel::Static, Arena{1000, 1000}, std::move(pos), seed)
    , medium(sched, mobility, cfg, seed)
  {
    medium.onReceive([this] (NodeId r, const Frame&) { received.push_back({r, sched.now()}); });
    medium.onDrop([this] (NodeId r, const Frame&, ChannelDrop) { lost.push_back(r); });
  }

  void
  broadcast(NodeId from, size_t size = 100)
  {
    ndn::Interest i;
    i.name = ndn::Name("/x");
    medium.send(Frame{from, std::nullopt, std::make_shared<const ndn::Packet>(i), size, false});
  }

  std::set<NodeId>
  receivers() const
  {
    std::set<NodeId> out;
    for (const auto& r : received)
      out.insert(r.first);
    return out;
  }
};

} // namespace

TEST(Radio, RangeBoundaryInclusive)
{
  Air air({{0, 0}, {60, 0}, {60.001, 0}, {0, 59.99}});
  air.broadcast(0);
  air.sched.runUntil(SimTime(1'000'000));
  EXPECT_EQ(air.receivers(), (std::set<NodeId>{1, 3}));
}

TEST(Radio, DeliveredAfterTxDelay)
{
  Air air({{0, 0}, {10, 0}});
  air.broadcast(0, 1000);
  air.sched.runUntil(SimTime(1'000'000));
  ASSERT_EQ(air.received.size(), 1u);
  EXPECT_EQ(air.received[0].second, txDelay(1000));
  // 192 us preamble + 8000 bits at 11 Mb/s, rounded up
  EXPECT_EQ(txDelay(1000), SimTime(192 + 728));
}

TEST(Radio, TxDelayFormula)
{
  RadioConfig cfg;
  cfg.bitrate = 1'000'000;
  cfg.broadcastBitrate = 500'000;
  EXPECT_EQ(txDelay(0, cfg), SimTime(192));
  EXPECT_EQ(txDelay(125, cfg), SimTime(192 + 1000));
  EXPECT_EQ(txDelay(125, cfg, true), SimTime(192 + 2000));
  cfg.broadcastBitrate = 0;
  EXPECT_EQ(txDelay(125, cfg, true), SimTime(192 + 1000));
}

TEST(Radio, TotalLoss)
{
  RadioConfig cfg;
  cfg.lossProb = 1;
  Air air({{0, 0}, {10, 0}, {20, 0}}, cfg);
  for (int k = 0; k < 20; ++k)
    air.broadcast(0);
  air.sched.runUntil(SimTime(1'000'000));
  EXPECT_TRUE(air.received.empty());
  EXPECT_EQ(air.lost.size(), 40u);
  EXPECT_EQ(air.medium.counters().losses, 40u);
}

TEST(Radio, LossRateIsRoughlyRight)
{
  RadioConfig cfg;
  cfg.lossProb = 0.3;
  Air air({{0, 0}, {10, 0}}, cfg, 11);
  const int n = 5000;
  for (int k = 0; k < n; ++k)
    air.broadcast(0);
  air.sched.runUntil(SimTime(1'000'000'000));
  double p = static_cast<double>(air.lost.size()) / n;
  double sigma = std::sqrt(0.3 * 0.7 / n);
  EXPECT_NEAR(p, 0.3, 4 * sigma);
}

TEST(Radio, AsymmetricRanges)
{
  Air air({{0, 0}, {50, 0}});
  air.medium.setRange(0, 100);
  air.medium.setRange(1, 30);
  EXPECT_TRUE(air.medium.reaches(0, 1));
  EXPECT_FALSE(air.medium.reaches(1, 0));
  air.broadcast(1);
  air.sched.runUntil(SimTime(1'000'000));
  EXPECT_TRUE(air.received.empty());
}

TEST(Radio, LinkFilterAppliesOnTopOfRange)
{
  Air air({{0, 0}, {10, 0}, {20, 0}, {500, 0}});
  air.medium.setLinkFilter([] (NodeId s, NodeId r) { return !(s == 0 && r == 1); });
  air.broadcast(0);
  air.sched.runUntil(SimTime(1'000'000));
  EXPECT_EQ(air.receivers(), (std::set<NodeId>{2}));
}

TEST(Radio, UnicastOnlyToDestination)
{
  Air air({{0, 0}, {10, 0}, {20, 0}});
  ndn::Interest i;
  i.name = ndn::Name("/x");
  air.medium.send(Frame{0, NodeId{2}, std::make_shared<const ndn::Packet>(i), 50, false});
  air.sched.runUntil(SimTime(1'000'000));
  EXPECT_EQ(air.receivers(), (std::set<NodeId>{2}));
}

TEST(Radio, ContentionCollidesOverlappingSenders)
{
  RadioConfig cfg;
  cfg.contention.enabled = true;
  // 0 and 2 cannot hear each other but both reach 1
  Air air({{0, 0}, {50, 0}, {100, 0}}, cfg);
  air.broadcast(0, 1500);
  air.broadcast(2, 1500);
  air.sched.runUntil(SimTime(1'000'000));
  EXPECT_GE(air.medium.counters().collisions, 1u);
}

// ---- random walk ----------------------------------------------------------

TEST(RandomWalk, StraightLineStep)
{
  Random rng(1);
  WalkState s;
  s.position = {10, 10};
  s.speed = 2;
  s.direction = 0;
  s.legRemaining = 20;
  randomWalkStep(s, Arena{300, 300}, WalkParams{}, rng, 1.0);
  EXPECT_NEAR(s.position.x, 12, 1e-9);
  EXPECT_NEAR(s.position.y, 10, 1e-9);
  EXPECT_NEAR(s.legRemaining, 19, 1e-9);
}

TEST(RandomWalk, ReflectsAtWall)
{
  Random rng(1);
  WalkState s;
  s.position = {299, 100};
  s.speed = 5;
  s.direction = 0;
  s.legRemaining = 20;
  randomWalkStep(s, Arena{300, 300}, WalkParams{}, rng, 1.0);
  EXPECT_NEAR(s.position.x, 296, 1e-9);
  EXPECT_NEAR(s.direction, std::numbers::pi, 1e-9);
}

TEST(RandomWalk, ReflectHelper)
{
  double v = -3;
  EXPECT_EQ(reflect(v, 10), 1);
  EXPECT_DOUBLE_EQ(v, 3);
  v = 25;
  EXPECT_EQ(reflect(v, 10), 2);
  EXPECT_DOUBLE_EQ(v, 5);
}

TEST(RandomWalk, LegRedrawMatchesReplay)
{
  WalkParams p{1, 20, 20};
  Random a(77), b(77);
  WalkState s;
  s.position = {150, 150};
  drawLeg(s, p, a);
  // run into the second leg
  for (int k = 0; k < 25; ++k)
    randomWalkStep(s, Arena{300, 300}, p, a, 1.0);

  // replay the draws by hand: two legs, each speed then direction
  double speed1 = b.uniform(1, 20);
  b.uniform(0, 2 * std::numbers::pi);
  double speed2 = b.uniform(1, 20);
  EXPECT_NE(speed1, speed2);
  EXPECT_DOUBLE_EQ(s.speed, speed2);
  EXPECT_NEAR(s.legRemaining, 15, 1e-9);
}

TEST(RandomWalkProperty, StaysInsideArena)
{
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    std::vector<Vec2> init(5, Vec2{150, 150});
    MobilityManager m(MobilityModel::RandomWalk, Arena{300, 300}, init, seed, WalkParams{1, 40, 20});
    for (int k = 0; k < 2000; ++k) {
      m.step(0.1);
      for (size_t i = 0; i < m.size(); ++i)
        ASSERT_TRUE(m.arena().contains(m.position(i)));
    }
  }
}

// ---- RPGM -----------------------------------------------------------------

TEST(Rpgm, MembersStayNearReference)
{
  RpgmParams rp;
  rp.offsetBound = 10;
  std::vector<Vec2> init(10, Vec2{150, 150});
  MobilityManager m(MobilityModel::Rpgm, Arena{300, 300}, init, 5, {}, rp);
  std::vector<size_t> membership;
  for (size_t i = 0; i < m.size(); ++i)
    membership.push_back(m.groupOf(i));
  for (int k = 0; k < 3000; ++k) {
    m.step(0.1);
    for (size_t i = 0; i < m.size(); ++i) {
      ASSERT_EQ(m.groupOf(i), membership[i]);
      ASSERT_TRUE(m.arena().contains(m.position(i)));
      // clamping only pulls a member toward the inside, never farther out
      ASSERT_LE(distance(m.position(i), m.reference(i)), rp.offsetBound + 1e-9);
    }
  }
}

TEST(Rpgm, GroupOfOneFollowsReference)
{
  RpgmParams rp;
  rp.groupMean = 1;
  rp.groupStddev = 0;
  std::vector<Vec2> init(3, Vec2{100, 100});
  MobilityManager m(MobilityModel::Rpgm, Arena{300, 300}, init, 2, {}, rp);
  EXPECT_EQ(m.groups().size(), 3u);
  for (int k = 0; k < 500; ++k) {
    m.step(0.1);
    for (size_t i = 0; i < 3; ++i)
      ASSERT_EQ(m.position(i), m.reference(i));
  }
}

TEST(Rpgm, GroupSizesCoverAllNodes)
{
  Random rng(4);
  for (int iter = 0; iter < 200; ++iter) {
    size_t n = 1 + rng.nextU32() % 40;
    auto sizes = drawGroupSizes(n, 3, 0.5, rng);
    size_t total = 0;
    for (size_t s : sizes) {
      EXPECT_GE(s, 1u);
      total += s;
    }
    EXPECT_EQ(total, n);
  }
}

TEST(Rpgm, OffsetsInsideDisk)
{
  Random rng(9);
  for (int k = 0; k < 10000; ++k) {
    Vec2 o = drawOffset(rng, 10);
    ASSERT_LE(std::hypot(o.x, o.y), 10 + 1e-9);
  }
}

TEST(Mobility, DeterministicPerSeed)
{
  auto run = [] (uint64_t seed) {
    std::vector<Vec2> init(6, Vec2{150, 150});
    MobilityManager m(MobilityModel::Rpgm, Arena{300, 300}, init, seed);
    for (int k = 0; k < 1000; ++k)
      m.step(0.1);
    return m.positions();
  };
  EXPECT_EQ(run(3), run(3));
  EXPECT_NE(run(3), run(4));
}

TEST(Mobility, StaticNeverMoves)
{
  std::vector<Vec2> init{{1, 2}, {3, 4}};
  MobilityManager m(MobilityModel::Static, Arena{10, 10}, init, 1);
  m.step(100);
  EXPECT_EQ(m.positions(), init);
}

// ---- trace ------------------------------------------------------------------

TEST(Trace, LineFormat)
{
  std::ostringstream os;
  Tracer t;
  t.setOutput(&os, TraceLevel::Pkt);
  t.record(TraceRecord{SimTime(1500), 3, TraceDir::Tx, true, ndn::Name("/a/b"), 42});
  TraceRecord chan{SimTime(1600), 3, TraceDir::Drop, false, ndn::Name("/a"), 10};
  chan.channel = true;
  t.record(chan);
  EXPECT_EQ(os.str(), "time_us,node_id,dir,pkt,name,size_bytes\n1500,3,TX,I,/a/b,42\n");

  std::ostringstream full;
  Tracer f;
  f.setOutput(&full, TraceLevel::Full);
  f.record(chan);
  EXPECT_EQ(full.str(), "time_us,node_id,dir,pkt,name,size_bytes\n1600,3,DROP,D,/a,10\n");
}

TEST(Trace, NoneWritesNothing)
{
  std::ostringstream os;
  Tracer t;
  t.setOutput(&os, TraceLevel::None);
  EXPECT_FALSE(t.active());
  t.record(TraceRecord{SimTime(1), 0, TraceDir::Rx, true, ndn::Name("/a"), 1});
  EXPECT_TRUE(os.str().empty());
  int seen = 0;
  t.addObserver([&] (const TraceRecord&) { ++seen; });
  t.record(TraceRecord{SimTime(1), 0, TraceDir::Rx, true, ndn::Name("/a"), 1});
  EXPECT_EQ(seen, 1);
}
