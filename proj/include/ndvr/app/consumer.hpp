/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_APP_CONSUMER_HPP
#define NDVR_APP_CONSUMER_HPP

#include "ndvr/app/host.hpp"
#include "ndvr/random.hpp"

#include <map>
#include <set>

namespace ndvr::app {

struct SyncConsumerConfig
{
  uint32_t retries = 3;
  milliseconds spacing{1000};
};

/**
 * @brief Fetches every data name that routing announces.
 *
 * Delay is measured from the first Interest; after the configured number of
 * retransmissions without Data the item is recorded as undelivered.
 */
class SyncConsumer
{
public:
  SyncConsumer(AppHost& host, FaceId face, Name ownPrefix, SyncConsumerConfig cfg = {})
    : m_host(host)
    , m_face(face)
    , m_ownPrefix(std::move(ownPrefix))
    , m_cfg(cfg)
  {
  }

  /// Called when routing installs a route for a prefix it did not have before.
  void
  onRouteLearned(const Name& prefix)
  {
    if (!dataSyncPrefix().isPrefixOf(prefix) || m_ownPrefix.isPrefixOf(prefix))
      return;
    if (!m_seen.insert(prefix).second)
      return;
    SimTime now = m_host.now();
    m_pending[prefix] = Pending{now, 0};
    m_host.metrics().append({MetricKind::InterestSent, now, m_host.nodeId(), prefix, 0});
    send(prefix);
  }

  void
  onData(const ndn::Data& data)
  {
    auto it = m_pending.find(data.name);
    if (it == m_pending.end())
      return;
    MetricEvent e{MetricKind::DataDelivered, m_host.now(), m_host.nodeId(), data.name, data.content.size()};
    e.interestTime = it->second.firstSent;
    m_host.metrics().append(std::move(e));
    m_pending.erase(it);
  }

  size_t pendingCount() const { return m_pending.size(); }

private:
  struct Pending
  {
    SimTime firstSent;
    uint32_t attempts;
  };

  void
  send(const Name& name)
  {
    auto& p = m_pending.at(name);
    ++p.attempts;
    ndn::Interest i;
    i.name = name;
    i.nonce = m_host.nonce();
    i.lifetime = m_cfg.spacing;
    m_host.expressInterest(m_face, std::move(i));
    uint32_t attempt = p.attempts;
    m_host.schedule(m_cfg.spacing, [this, name, attempt] { onTimeout(name, attempt); });
  }

  void
  onTimeout(const Name& name, uint32_t attempt)
  {
    auto it = m_pending.find(name);
    if (it == m_pending.end() || it->second.attempts != attempt)
      return;
    if (it->second.attempts > m_cfg.retries) {
      m_host.metrics().noteUndelivered(m_host.nodeId(), name);
      m_pending.erase(it);
      return;
    }
    send(name);
  }

private:
  AppHost& m_host;
  FaceId m_face;
  Name m_ownPrefix;
  SyncConsumerConfig m_cfg;
  std::set<Name> m_seen;
  std::map<Name, Pending> m_pending;
};

struct CbrConfig
{
  milliseconds idt{100};
  size_t payloadSize = 300;
  double durationS = 100;
  std::vector<Name> targets;
  milliseconds lifetime{1000};
};

/// One Interest per target per inter-departure tick, no retransmission.
class CbrConsumer
{
public:
  CbrConsumer(AppHost& host, FaceId face, CbrConfig cfg, Random rng)
    : m_host(host)
    , m_face(face)
    , m_cfg(std::move(cfg))
    , m_rng(std::move(rng))
  {
  }

  /// First tick after a random phase within one IDT so that nodes do not fire in lockstep.
  void
  start()
  {
    auto idtUs = std::chrono::duration_cast<microseconds>(m_cfg.idt).count();
    m_host.schedule(SimTime(m_rng.uniformInt(0, idtUs - 1)), [this] { tick(); });
  }

  void
  tick()
  {
    SimTime now = m_host.now();
    if (now >= SimTime(static_cast<int64_t>(m_cfg.durationS * 1e6)))
      return;
    expire(now);
    for (const auto& target : m_cfg.targets) {
      Name name = target;
      name.appendNumber(++m_seq[target]);
      ndn::Interest i;
      i.name = name;
      i.nonce = m_host.nonce();
      i.lifetime = m_cfg.lifetime;
      m_pending[name] = now;
      m_host.metrics().append({MetricKind::InterestSent, now, m_host.nodeId(), name, 0});
      m_host.expressInterest(m_face, std::move(i));
    }
    m_host.schedule(m_cfg.idt, [this] { tick(); });
  }

  void
  onData(const ndn::Data& data)
  {
    auto it = m_pending.find(data.name);
    if (it == m_pending.end())
      return;
    if (m_host.now() - it->second > m_cfg.lifetime) {
      m_pending.erase(it);
      return;
    }
    MetricEvent e{MetricKind::DataDelivered, m_host.now(), m_host.nodeId(), data.name, data.content.size()};
    e.interestTime = it->second;
    m_host.metrics().append(std::move(e));
    m_pending.erase(it);
  }

private:
  void
  expire(SimTime now)
  {
    for (auto it = m_pending.begin(); it != m_pending.end();) {
      if (now - it->second > m_cfg.lifetime)
        it = m_pending.erase(it);
      else
        ++it;
    }
  }

private:
  AppHost& m_host;
  FaceId m_face;
  CbrConfig m_cfg;
  Random m_rng;
  std::map<Name, uint64_t> m_seq;
  std::map<Name, SimTime> m_pending;
};

} // namespace ndvr::app

#endif // NDVR_APP_CONSUMER_HPP
