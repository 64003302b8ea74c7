/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SIM_RADIO_HPP
#define NDVR_SIM_RADIO_HPP

#include "ndvr/ndn/packet.hpp"
#include "ndvr/sim/mobility.hpp"
#include "ndvr/sim/scheduler.hpp"

#include <deque>
#include <memory>

namespace ndvr::sim {

/**
 * Optional shared-channel model. Off by default, the radio is a pure unit
 * disk: every transmission reaches every node in range after txDelay and
 * concurrent transmissions never interfere.
 */
struct ContentionConfig
{
  bool enabled = false;
  size_t queueCapacity = 100;  ///< per-sender FIFO, drop-tail; 0 means unbounded
  SimTime slot{20};
  SimTime difs{50};
  uint32_t cwMin = 31;
  uint32_t cwMax = 1023;
  uint32_t unicastRetries = 7; ///< link-layer retransmissions of a unicast frame
};

struct RadioConfig
{
  double range = 60;            ///< meters, inclusive
  double lossProb = 0;          ///< independent per-reception loss
  SimTime preamble{192};
  uint64_t bitrate = 11'000'000;
  uint64_t broadcastBitrate = 0; ///< rate of frames without a destination; 0 means bitrate
  ContentionConfig contention;
};

/// Air time of a frame: fixed preamble plus serialization at the configured bit rate.
inline SimTime
txDelay(size_t bytes, const RadioConfig& cfg = {}, bool broadcast = false)
{
  uint64_t rate = broadcast && cfg.broadcastBitrate > 0 ? cfg.broadcastBitrate : cfg.bitrate;
  uint64_t bits = static_cast<uint64_t>(bytes) * 8;
  uint64_t us = (bits * 1'000'000 + rate - 1) / rate;
  return cfg.preamble + SimTime(static_cast<int64_t>(us));
}

struct Frame
{
  NodeId sender = 0;
  std::optional<NodeId> dest; ///< unset for broadcast
  std::shared_ptr<const ndn::Packet> packet;
  size_t size = 0;
  bool fromRadio = false; ///< the sender is relaying a packet it received over the radio
};

enum class ChannelDrop {
  Loss,
  Collision,
  QueueOverflow,
  RetryLimit,
};

inline const char*
toString(ChannelDrop d)
{
  switch (d) {
  case ChannelDrop::Loss: return "loss";
  case ChannelDrop::Collision: return "collision";
  case ChannelDrop::QueueOverflow: return "queue-overflow";
  case ChannelDrop::RetryLimit: return "retry-limit";
  }
  return "unknown";
}

struct RadioCounters
{
  uint64_t transmissions = 0; ///< frames put on the air, retries excluded
  uint64_t retries = 0;
  uint64_t deliveries = 0;
  uint64_t losses = 0;
  uint64_t collisions = 0;
  uint64_t queueDrops = 0;
  uint64_t retryDrops = 0;
};

/**
 * @brief Wireless medium shared by all nodes.
 *
 * A node hears a sender iff their distance is within the sender's range at
 * the moment transmission starts, so per-node ranges give asymmetric links.
 */
class Medium
{
public:
  using ReceiveFn = std::function<void(NodeId receiver, const Frame&)>;
  using TxFn = std::function<void(const Frame&)>;
  using DropFn = std::function<void(NodeId node, const Frame&, ChannelDrop)>;
  /// Extra per-direction link predicate on top of range; lets tests script arbitrary graphs and cuts.
  using LinkFilter = std::function<bool(NodeId sender, NodeId receiver)>;

  Medium(Scheduler& sched, const MobilityManager& mobility, RadioConfig cfg, uint64_t seed)
    : m_sched(sched)
    , m_mobility(mobility)
    , m_cfg(cfg)
    , m_ranges(mobility.size(), cfg.range)
    , m_nodes(mobility.size())
  {
    for (size_t i = 0; i < m_nodes.size(); ++i) {
      m_nodes[i].lossRng = Random::substream(seed, i, "radio-loss");
      m_nodes[i].macRng = Random::substream(seed, i, "mac-backoff");
      m_nodes[i].cw = m_cfg.contention.cwMin;
    }
  }

  void onReceive(ReceiveFn f) { m_onReceive = std::move(f); }
  void onTransmit(TxFn f) { m_onTx = std::move(f); }
  void onDrop(DropFn f) { m_onDrop = std::move(f); }
  void setLinkFilter(LinkFilter f) { m_linkFilter = std::move(f); }

  const RadioConfig& config() const { return m_cfg; }
  const RadioCounters& counters() const { return m_counters; }

  void
  setRange(NodeId node, double range)
  {
    m_ranges.at(node) = range;
  }

  double
  range(NodeId node) const
  {
    return m_ranges.at(node);
  }

  /// Whether @p receiver is inside @p sender's range right now.
  bool
  reaches(NodeId sender, NodeId receiver) const
  {
    return sender != receiver &&
           distance(m_mobility.position(sender), m_mobility.position(receiver)) <= m_ranges[sender] &&
           (!m_linkFilter || m_linkFilter(sender, receiver));
  }

  void
  send(Frame frame)
  {
    if (!m_cfg.contention.enabled) {
      startTransmission(std::make_shared<Transmission>(Transmission{std::move(frame)}));
      return;
    }
    NodeState& n = m_nodes.at(frame.sender);
    if (m_cfg.contention.queueCapacity > 0 && n.queue.size() >= m_cfg.contention.queueCapacity) {
      ++m_counters.queueDrops;
      if (m_onDrop)
        m_onDrop(frame.sender, frame, ChannelDrop::QueueOverflow);
      return;
    }
    NodeId s = frame.sender;
    n.queue.push_back(std::make_shared<Transmission>(Transmission{std::move(frame)}));
    if (!n.busy)
      beginAccess(s);
  }

  size_t
  queueLength(NodeId node) const
  {
    return m_nodes.at(node).queue.size();
  }

private:
  struct Transmission
  {
    Frame frame;
    uint32_t attempt = 0;
    bool destReached = false;
  };
  using TxPtr = std::shared_ptr<Transmission>;

  struct Reception
  {
    const Transmission* tx;
    SimTime end;
    bool corrupted;
  };

  struct NodeState
  {
    std::deque<TxPtr> queue;
    bool busy = false;
    SimTime txEnd{0};
    uint32_t cw = 31;
    std::vector<Reception> receiving;
    Random lossRng{0};
    Random macRng{0};
  };

  bool
  addressedTo(const Frame& f, NodeId r) const
  {
    return !f.dest || *f.dest == r;
  }

  void
  beginAccess(NodeId s)
  {
    NodeState& n = m_nodes[s];
    n.busy = true;
    auto slots = n.macRng.uniformInt(0, n.cw);
    SimTime wait = m_cfg.contention.difs + m_cfg.contention.slot * slots;
    m_sched.scheduleAfter(wait, [this, s] { tryTransmit(s); });
  }

  /// Latest end among transmissions currently audible at @p s, or nullopt if the channel is idle.
  std::optional<SimTime>
  channelBusyUntil(NodeId s) const
  {
    std::optional<SimTime> until;
    SimTime now = m_sched.now();
    for (NodeId m = 0; m < m_nodes.size(); ++m) {
      if (m == s || m_nodes[m].txEnd <= now || !reaches(m, s))
        continue;
      if (!until || m_nodes[m].txEnd > *until)
        until = m_nodes[m].txEnd;
    }
    return until;
  }

  void
  tryTransmit(NodeId s)
  {
    if (auto until = channelBusyUntil(s)) {
      m_sched.schedule(*until, [this, s] { beginAccess(s); });
      return;
    }
    NodeState& n = m_nodes[s];
    TxPtr tx = n.queue.front();
    n.queue.pop_front();
    startTransmission(tx);
  }

  void
  startTransmission(const TxPtr& tx)
  {
    const Frame& f = tx->frame;
    const NodeId s = f.sender;
    const SimTime now = m_sched.now();
    const SimTime end = now + txDelay(f.size, m_cfg, !f.dest);
    const bool contention = m_cfg.contention.enabled;

    if (tx->attempt == 0) {
      ++m_counters.transmissions;
      if (m_onTx)
        m_onTx(f);
    }
    else {
      ++m_counters.retries;
    }

    if (contention) {
      NodeState& sn = m_nodes[s];
      sn.txEnd = end;
      // half duplex: whatever the sender was receiving is lost
      for (auto& r : sn.receiving)
        r.corrupted = true;
    }

    for (NodeId r = 0; r < m_nodes.size(); ++r) {
      if (!reaches(s, r))
        continue;
      bool corrupted = false;
      if (contention) {
        NodeState& rn = m_nodes[r];
        if (rn.txEnd > now)
          corrupted = true;
        for (auto& other : rn.receiving) {
          if (other.end > now) {
            other.corrupted = true;
            corrupted = true;
          }
        }
        rn.receiving.push_back(Reception{tx.get(), end, corrupted});
      }
      m_sched.schedule(end, [this, r, tx] { arrive(r, tx); });
    }
    if (contention)
      m_sched.schedule(end, [this, tx] { finishTransmission(tx); });
  }

  void
  arrive(NodeId r, const TxPtr& tx)
  {
    const Frame& f = tx->frame;
    bool corrupted = false;
    if (m_cfg.contention.enabled) {
      auto& rec = m_nodes[r].receiving;
      auto it = std::find_if(rec.begin(), rec.end(), [&] (const Reception& x) { return x.tx == tx.get(); });
      if (it != rec.end()) {
        corrupted = it->corrupted;
        rec.erase(it);
      }
    }
    if (!addressedTo(f, r))
      return;
    if (corrupted) {
      ++m_counters.collisions;
      if (m_onDrop)
        m_onDrop(r, f, ChannelDrop::Collision);
      return;
    }
    if (m_cfg.lossProb > 0 && m_nodes[r].lossRng.uniform() < m_cfg.lossProb) {
      ++m_counters.losses;
      if (m_onDrop)
        m_onDrop(r, f, ChannelDrop::Loss);
      return;
    }
    if (f.dest)
      tx->destReached = true;
    ++m_counters.deliveries;
    if (m_onReceive)
      m_onReceive(r, f);
  }

  void
  finishTransmission(const TxPtr& tx)
  {
    const NodeId s = tx->frame.sender;
    NodeState& n = m_nodes[s];
    if (tx->frame.dest && !tx->destReached) {
      if (tx->attempt < m_cfg.contention.unicastRetries) {
        ++tx->attempt;
        n.cw = std::min(2 * n.cw + 1, m_cfg.contention.cwMax);
        n.queue.push_front(tx);
        beginAccess(s);
        return;
      }
      ++m_counters.retryDrops;
      if (m_onDrop)
        m_onDrop(s, tx->frame, ChannelDrop::RetryLimit);
    }
    n.cw = m_cfg.contention.cwMin;
    n.busy = false;
    if (!n.queue.empty())
      beginAccess(s);
  }

private:
  Scheduler& m_sched;
  const MobilityManager& m_mobility;
  RadioConfig m_cfg;
  std::vector<double> m_ranges;
  std::vector<NodeState> m_nodes;
  RadioCounters m_counters;
  ReceiveFn m_onReceive;
  TxFn m_onTx;
  DropFn m_onDrop;
  LinkFilter m_linkFilter;
};

} // namespace ndvr::sim

#endif // NDVR_SIM_RADIO_HPP
