#include "support/oracles.hpp"

#include "ndvr/app/consumer.hpp"
#include "ndvr/app/producer.hpp"
#include "ndvr/scenario/simulation.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ndvr;
using namespace ndvr::app;
using ndn::Name;

namespace {

class FakeHost : public AppHost
{
public:
  explicit
  FakeHost(NodeId id = 3)
    : m_id(id)
  {
  }

  NodeId nodeId() const override { return m_id; }
  SimTime now() const override { return sched.now(); }

  void
  schedule(SimTime delay, std::function<void()> fn) override
  {
    sched.scheduleAfter(delay, std::move(fn));
  }

  uint32_t nonce() override { return ++m_nonce; }

  void
  expressInterest(FaceId, ndn::Interest i) override
  {
    interests.push_back({sched.now(), std::move(i)});
  }

  void
  putData(FaceId, ndn::Data d) override
  {
    data.push_back(std::move(d));
  }

  void
  advertise(const Name& prefix) override
  {
    advertised.push_back(prefix);
  }

  MetricsLog& metrics() override { return log; }

  sim::Scheduler sched;
  MetricsLog log;
  std::vector<std::pair<SimTime, ndn::Interest>> interests;
  std::vector<ndn::Data> data;
  std::vector<Name> advertised;

private:
  NodeId m_id;
  uint32_t m_nonce = 0;
};

SimTime
sec(double s)
{
  return SimTime(static_cast<int64_t>(s * 1e6));
}

} // namespace

// ---- producer -------------------------------------------------------------

TEST(SyncProducer, NamesAndAdvertises)
{
  FakeHost host(3);
  ProducerConfig cfg{producerPrefix(3), 40, 800, 300, milliseconds(10000)};
  SyncProducer p(host, cfg, Random(1), 2);
  p.tick();
  ASSERT_EQ(host.advertised.size(), 1u);
  EXPECT_EQ(host.advertised[0].toUri(), "/ndn/dataSync/3/1");
  ndn::Interest i;
  i.name = Name("/ndn/dataSync/3/1");
  p.onInterest(i);
  ASSERT_EQ(host.data.size(), 1u);
  EXPECT_EQ(host.data[0].content.size(), 300u);
  EXPECT_EQ(host.data[0].freshness, milliseconds(10000));
  i.name = Name("/ndn/dataSync/3/2");
  p.onInterest(i);
  EXPECT_EQ(host.data.size(), 1u);
  EXPECT_EQ(host.log.count(MetricKind::DataProduced), 1u);
}

TEST(SyncProducer, StopsAtDuration)
{
  FakeHost host;
  ProducerConfig cfg{producerPrefix(3), 1, 10, 300, milliseconds(1000)};
  SyncProducer p(host, cfg, Random(5), 2);
  p.start();
  host.sched.runUntil(sec(100));
  ASSERT_FALSE(p.generationTimes().empty());
  for (SimTime t : p.generationTimes())
    EXPECT_LT(t, sec(10));
  host.sched.runUntil(sec(10));
  p.tick();
  EXPECT_EQ(p.produced(), p.generationTimes().size());
}

TEST(SyncProducerProperty, PoissonCount)
{
  // 800 s at one item per 40 s: Poisson(20) per run
  const int runs = 200;
  double total = 0;
  for (int seed = 1; seed <= runs; ++seed) {
    FakeHost host;
    SyncProducer p(host, ProducerConfig{producerPrefix(3), 40, 800, 300, milliseconds(1000)},
                   Random(static_cast<uint64_t>(seed)), 2);
    p.start();
    host.sched.runUntil(sec(1000));
    total += static_cast<double>(p.produced());
  }
  double mean = total / runs;
  double sigma = std::sqrt(20.0 / runs);
  EXPECT_NEAR(mean, 20.0, 3 * sigma);
}

TEST(Payload, DeterministicAndSized)
{
  EXPECT_EQ(makePayload(Name("/a"), 300), makePayload(Name("/a"), 300));
  EXPECT_NE(makePayload(Name("/a"), 300), makePayload(Name("/b"), 300));
  EXPECT_EQ(makePayload(Name("/a"), 0).size(), 0u);
}

TEST(CbrProducer, AnswersOnlyItsPrefix)
{
  FakeHost host;
  CbrProducer p(host, producerPrefix(3), 100, 2);
  ndn::Interest i;
  i.name = Name("/ndn/dataSync/3/7");
  p.onInterest(i);
  i.name = Name("/ndn/dataSync/4/7");
  p.onInterest(i);
  ASSERT_EQ(host.data.size(), 1u);
  EXPECT_EQ(host.data[0].name, Name("/ndn/dataSync/3/7"));
  EXPECT_EQ(host.data[0].content.size(), 100u);
}

// ---- consumers ------------------------------------------------------------

TEST(SyncConsumer, FetchesNewRemoteItemsOnce)
{
  FakeHost host(3);
  SyncConsumer c(host, 3, producerPrefix(3));
  c.onRouteLearned(Name("/ndn/dataSync/1/1"));
  c.onRouteLearned(Name("/ndn/dataSync/1/1"));
  c.onRouteLearned(Name("/ndn/dataSync/3/1")); // own
  c.onRouteLearned(Name("/other/x"));
  ASSERT_EQ(host.interests.size(), 1u);
  EXPECT_EQ(host.interests[0].second.name, Name("/ndn/dataSync/1/1"));
  EXPECT_EQ(host.interests[0].second.lifetime, milliseconds(1000));
}

TEST(SyncConsumer, DelayMeasuredFromFirstInterest)
{
  FakeHost host(3);
  SyncConsumer c(host, 3, producerPrefix(3));
  host.sched.runUntil(sec(1));
  c.onRouteLearned(Name("/ndn/dataSync/1/1"));
  host.sched.runUntil(sec(2.5)); // one retransmission at 2 s
  EXPECT_EQ(host.interests.size(), 2u);
  ndn::Data d;
  d.name = Name("/ndn/dataSync/1/1");
  d.content.resize(300);
  c.onData(d);
  c.onData(d); // duplicate ignored
  auto s = summarize(host.log, 10, {3});
  ASSERT_EQ(s.delays.size(), 1u);
  EXPECT_EQ(s.delays[0].delayUs, 1'500'000);
  EXPECT_EQ(c.pendingCount(), 0u);
}

TEST(SyncConsumer, GivesUpAfterRetries)
{
  FakeHost host(3);
  SyncConsumer c(host, 3, producerPrefix(3), SyncConsumerConfig{3, milliseconds(1000)});
  c.onRouteLearned(Name("/ndn/dataSync/1/1"));
  host.sched.runUntil(sec(10));
  EXPECT_EQ(host.interests.size(), 4u); // first plus three retries
  EXPECT_EQ(host.log.undelivered().size(), 1u);
  EXPECT_EQ(host.log.count(MetricKind::InterestSent), 1u);
  EXPECT_EQ(c.pendingCount(), 0u);
}

TEST(CbrConsumer, OneInterestPerTargetPerTick)
{
  FakeHost host(0);
  CbrConfig cfg;
  cfg.idt = milliseconds(100);
  cfg.durationS = 1;
  cfg.targets = {producerPrefix(1), producerPrefix(2)};
  CbrConsumer c(host, 3, cfg, Random(1));
  c.start();
  host.sched.runUntil(sec(5));
  EXPECT_EQ(host.interests.size(), 20u);
  std::set<Name> names;
  for (const auto& [t, i] : host.interests)
    names.insert(i.name);
  EXPECT_EQ(names.size(), 20u);
}

TEST(CbrConsumer, LateDataNotCounted)
{
  FakeHost host(0);
  CbrConfig cfg;
  cfg.idt = milliseconds(100);
  cfg.durationS = 0.05;
  cfg.targets = {producerPrefix(1)};
  CbrConsumer c(host, 3, cfg, Random(1));
  c.tick();
  ndn::Data d;
  d.name = host.interests.at(0).second.name;
  host.sched.runUntil(sec(1.5));
  c.onData(d);
  EXPECT_EQ(host.log.count(MetricKind::DataDelivered), 0u);
}

// ---- metrics --------------------------------------------------------------

TEST(Summary, EmptyLog)
{
  MetricsLog log;
  auto s = summarize(log, 100, {0, 1});
  EXPECT_EQ(s.delivered, 0u);
  EXPECT_EQ(s.deliveryRatePps, 0);
  EXPECT_TRUE(s.cdf.empty());
  EXPECT_EQ(s.meanNodeDeliveryRate(), 0);
}

TEST(Summary, ThreeDeliveries)
{
  MetricsLog log;
  auto deliver = [&] (NodeId n, int64_t sent, int64_t got) {
    MetricEvent e{MetricKind::DataDelivered, SimTime(got), n, Name("/x/" + std::to_string(got)), 10};
    e.interestTime = SimTime(sent);
    log.append(e);
  };
  deliver(0, 0, 300);
  deliver(1, 100, 200);
  deliver(1, 100, 300);
  log.append({MetricKind::PktForwarded, SimTime(1), 0, Name("/x"), 50});
  log.append({MetricKind::NdvrPkt, SimTime(1), 0, Name("/localhop/ndvr/ehlo"), 50});
  auto s = summarize(log, 2, {0, 1});
  EXPECT_EQ(s.delivered, 3u);
  EXPECT_DOUBLE_EQ(s.deliveryRatePps, 1.5);
  EXPECT_DOUBLE_EQ(s.deliveryRatePerNode.at(0), 0.5);
  EXPECT_DOUBLE_EQ(s.deliveryRatePerNode.at(1), 1.0);
  EXPECT_EQ(s.forwardedPkts, 1u);
  EXPECT_EQ(s.overheadPkts, 1u);
  ASSERT_EQ(s.cdf.size(), 3u);
  EXPECT_EQ(s.cdf[0].delayUs, 100);
  EXPECT_EQ(s.cdf[2].delayUs, 300);
  EXPECT_DOUBLE_EQ(s.cdf[0].fraction, 1.0 / 3);
  EXPECT_DOUBLE_EQ(s.cdf[2].fraction, 1.0);
  // transmissions are counted but not kept as events
  EXPECT_EQ(log.events().size(), 3u);
}

TEST(CdfProperty, MonotoneAndEndsAtOne)
{
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<int64_t> d(1 + rng() % 200);
    for (auto& x : d)
      x = static_cast<int64_t>(rng() % 1000);
    auto cdf = empiricalCdf(d);
    ASSERT_EQ(cdf.size(), d.size());
    for (size_t i = 1; i < cdf.size(); ++i) {
      ASSERT_LE(cdf[i - 1].delayUs, cdf[i].delayUs);
      ASSERT_LT(cdf[i - 1].fraction, cdf[i].fraction);
    }
    ASSERT_DOUBLE_EQ(cdf.back().fraction, 1.0);
    // fraction at a point is at least the share of samples not above it
    size_t k = rng() % cdf.size();
    double share = static_cast<double>(std::count_if(d.begin(), d.end(), [&] (int64_t x) {
                     return x <= cdf[k].delayUs;
                   })) / static_cast<double>(d.size());
    ASSERT_GE(share + 1e-12, cdf[k].fraction);
  }
}

TEST(SummaryCsv, Layout)
{
  MetricsLog log;
  auto s = summarize(log, 10, {0});
  std::ostringstream os;
  writeSummaryCsv(os, s);
  EXPECT_EQ(os.str().substr(0, 13), "metric,value\n");
  EXPECT_NE(os.str().find("delivery_rate_pps_node_0,0.0000\n"), std::string::npos);
  std::ostringstream d, c;
  writeDelaysCsv(d, s);
  writeCdfCsv(c, s);
  EXPECT_EQ(d.str(), "node,name,delay_us\n");
  EXPECT_EQ(c.str(), "delay_us,fraction\n");
}

// ---- whole network ----------------------------------------------------------

TEST(SyncWorkload, ItemsReachEveryOtherNodeOnAStaticLine)
{
  scenario::ScenarioConfig cfg;
  cfg.arena = {200, 20};
  for (int i = 0; i < 4; ++i)
    cfg.nodes.push_back({std::string(1, static_cast<char>('A' + i)), sim::Vec2{10.0 + 50 * i, 10}, std::nullopt});
  cfg.workload.type = scenario::WorkloadType::SyncPoisson;
  cfg.workload.meanIntervalS = 4;
  cfg.workload.producerDurationS = 40;
  cfg.durationS = 60;
  cfg.seed = 3;
  cfg.traceLevel = sim::TraceLevel::None;
  scenario::Simulation sim(cfg, 3);
  sim.run();
  EXPECT_NO_THROW(sim.checkInvariants());
  uint64_t produced = sim.metrics().count(MetricKind::DataProduced);
  ASSERT_GT(produced, 0u);
  auto s = sim.summary();
  EXPECT_EQ(s.delivered, produced * 3) << "undelivered " << s.undelivered;
  for (const auto& d : s.delays)
    EXPECT_GT(d.delayUs, 0);
}
