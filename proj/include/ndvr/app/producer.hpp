/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_APP_PRODUCER_HPP
#define NDVR_APP_PRODUCER_HPP

#include "ndvr/app/host.hpp"
#include "ndvr/random.hpp"

#include <map>

namespace ndvr::app {

struct ProducerConfig
{
  Name basePrefix;
  double meanIntervalS = 40;
  double durationS = 800;
  size_t payloadSize = 300;
  milliseconds freshness{10000};
};

/// Deterministic filler so Data sizes are exact without allocating randomness.
inline Buffer
makePayload(const Name& name, size_t size)
{
  Buffer out(size);
  size_t h = name.hash();
  for (size_t i = 0; i < size; ++i)
    out[i] = static_cast<uint8_t>((h >> ((i % 8) * 8)) ^ i);
  return out;
}

/**
 * @brief Publishes items as a Poisson process and announces each one through routing.
 *
 * Item k is named `<basePrefix>/<k>` and is advertised as a prefix of its own.
 */
class SyncProducer
{
public:
  SyncProducer(AppHost& host, ProducerConfig cfg, Random rng, FaceId face)
    : m_host(host)
    , m_cfg(std::move(cfg))
    , m_rng(std::move(rng))
    , m_face(face)
  {
  }

  void
  start()
  {
    scheduleNext();
  }

  /// One generation; does nothing once the configured duration has elapsed.
  void
  tick()
  {
    SimTime now = m_host.now();
    if (now >= durationTime())
      return;
    Name name = m_cfg.basePrefix;
    name.appendNumber(++m_seq);
    ndn::Data d;
    d.name = name;
    d.content = makePayload(name, m_cfg.payloadSize);
    d.freshness = m_cfg.freshness;
    m_items[name] = d;
    m_generated.push_back(now);
    m_host.metrics().append({MetricKind::DataProduced, now, m_host.nodeId(), name, m_cfg.payloadSize});
    m_host.advertise(name);
    scheduleNext();
  }

  void
  onInterest(const ndn::Interest& interest)
  {
    auto it = m_items.find(interest.name);
    if (it != m_items.end())
      m_host.putData(m_face, it->second);
  }

  const std::vector<SimTime>& generationTimes() const { return m_generated; }
  uint64_t produced() const { return m_seq; }

private:
  SimTime
  durationTime() const
  {
    return SimTime(static_cast<int64_t>(m_cfg.durationS * 1e6));
  }

  void
  scheduleNext()
  {
    auto gap = SimTime(static_cast<int64_t>(std::llround(m_rng.exponential(m_cfg.meanIntervalS) * 1e6)));
    if (m_host.now() + gap >= durationTime())
      return;
    m_host.schedule(gap, [this] { tick(); });
  }

private:
  AppHost& m_host;
  ProducerConfig m_cfg;
  Random m_rng;
  FaceId m_face;
  uint64_t m_seq = 0;
  std::map<Name, ndn::Data> m_items;
  std::vector<SimTime> m_generated;
};

/// Answers every Interest under its prefix with a fixed-size payload.
class CbrProducer
{
public:
  CbrProducer(AppHost& host, Name prefix, size_t payloadSize, FaceId face,
              milliseconds freshness = milliseconds(1000))
    : m_host(host)
    , m_prefix(std::move(prefix))
    , m_payloadSize(payloadSize)
    , m_face(face)
    , m_freshness(freshness)
  {
  }

  const Name& prefix() const { return m_prefix; }

  void
  onInterest(const ndn::Interest& interest)
  {
    if (!m_prefix.isPrefixOf(interest.name))
      return;
    ndn::Data d;
    d.name = interest.name;
    d.content = makePayload(interest.name, m_payloadSize);
    d.freshness = m_freshness;
    m_host.metrics().append({MetricKind::DataProduced, m_host.now(), m_host.nodeId(), d.name, m_payloadSize});
    m_host.putData(m_face, std::move(d));
  }

private:
  AppHost& m_host;
  Name m_prefix;
  size_t m_payloadSize;
  FaceId m_face;
  milliseconds m_freshness;
};

} // namespace ndvr::app

#endif // NDVR_APP_PRODUCER_HPP
