/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SIM_NODE_HPP
#define NDVR_SIM_NODE_HPP

#include "ndvr/app/consumer.hpp"
#include "ndvr/app/producer.hpp"
#include "ndvr/ndn/forwarder.hpp"
#include "ndvr/routing/router.hpp"
#include "ndvr/sim/radio.hpp"
#include "ndvr/sim/trace.hpp"

#include <memory>

namespace ndvr::sim {

// fixed face ids on every node
constexpr FaceId ROUTER_FACE = 1;
constexpr FaceId PRODUCER_FACE = 2;
constexpr FaceId CONSUMER_FACE = 3;
constexpr FaceId ADHOC_FACE = 10;
constexpr FaceId UNICAST_FACE_BASE = 256;

/// Point-to-point face toward one neighbor: the base id plus its node id.
inline FaceId
unicastFaceOf(NodeId neighbor)
{
  return UNICAST_FACE_BASE + neighbor;
}

inline bool
isUnicastFace(FaceId f)
{
  return f >= UNICAST_FACE_BASE;
}

/// Routing control traffic: EHLO, DVINFO and router key exchange.
inline bool
isRoutingName(const ndn::Name& name)
{
  static const ndn::Name ndvrPrefix{"localhop", "ndvr"};
  return ndvrPrefix.isPrefixOf(name) || trust::routerOfKeyName(name).has_value();
}

struct NodeEnv
{
  Scheduler& sched;
  Medium& medium;
  Tracer& tracer;
  app::MetricsLog& metrics;
};

struct NodeOptions
{
  size_t csCapacity = 256;
  bool cacheUnsolicited = true;
  bool unicastFaces = true; ///< learned routes use a per-neighbor face instead of the broadcast one
  bool defaultRoute = false; ///< FIB `/` toward the radio
};

struct NodeCounters
{
  uint64_t routesAdded = 0;
  uint64_t routesUpdated = 0;
  uint64_t routesRemoved = 0;
  uint64_t validationRejects = 0;
};

/**
 * @brief One simulated node: forwarder, optional routing daemon and applications.
 *
 * Deliveries from the forwarder to local applications are deferred to a
 * zero-delay event so that no handler ever re-enters another.
 */
class Node : public app::AppHost
{
public:
  Node(NodeId id, std::string label, NodeEnv env, NodeOptions opts, uint64_t seed)
    : m_id(id)
    , m_label(std::move(label))
    , m_env(env)
    , m_opts(opts)
    , m_seed(seed)
    , m_fw(opts.csCapacity, opts.cacheUnsolicited)
    , m_nonceRng(Random::substream(seed, id, "nonce"))
    , m_routerRng(Random::substream(seed, id, "ndvr"))
  {
    using ndn::FaceScope;
    using ndn::LinkType;
    m_fw.addFace({ROUTER_FACE, FaceScope::Local, LinkType::PointToPoint});
    m_fw.addFace({PRODUCER_FACE, FaceScope::Local, LinkType::PointToPoint});
    m_fw.addFace({CONSUMER_FACE, FaceScope::Local, LinkType::PointToPoint});
    m_fw.addFace({ADHOC_FACE, FaceScope::NonLocal, LinkType::AdHoc});
    if (opts.defaultRoute)
      m_fw.fib().addNextHop(ndn::Name(), ADHOC_FACE);
  }

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  const std::string& label() const { return m_label; }
  ndn::Forwarder& forwarder() { return m_fw; }
  const ndn::Forwarder& forwarder() const { return m_fw; }
  routing::Router* router() { return m_router.get(); }
  const routing::Router* router() const { return m_router.get(); }
  const NodeCounters& counters() const { return m_counters; }
  app::SyncProducer* syncProducer() { return m_syncProducer.get(); }
  app::SyncConsumer* syncConsumer() { return m_syncConsumer.get(); }

  void
  enableRouting(routing::RouterName name, routing::NdvrConfig cfg,
                std::optional<routing::RouterSecurity> security = std::nullopt)
  {
    m_router = std::make_unique<routing::Router>(std::move(name), cfg,
                                                 routing::RouterFaces{ROUTER_FACE, ADHOC_FACE},
                                                 m_routerRng, std::move(security));
  }

  /// A prefix advertised at start without any application behind it.
  void
  announce(ndn::Name prefix)
  {
    m_announced.push_back(std::move(prefix));
  }

  void
  addSyncProducer(app::ProducerConfig cfg)
  {
    m_syncProducer = std::make_unique<app::SyncProducer>(*this, std::move(cfg),
                                                         Random::substream(m_seed, m_id, "producer"),
                                                         PRODUCER_FACE);
  }

  void
  addSyncConsumer(app::SyncConsumerConfig cfg)
  {
    m_syncConsumer = std::make_unique<app::SyncConsumer>(*this, CONSUMER_FACE, app::producerPrefix(m_id), cfg);
  }

  void
  addCbrProducer(ndn::Name prefix, size_t payloadSize)
  {
    m_cbrProducer = std::make_unique<app::CbrProducer>(*this, prefix, payloadSize, PRODUCER_FACE);
    m_fw.fib().addNextHop(prefix, PRODUCER_FACE);
    m_announced.push_back(std::move(prefix));
  }

  void
  addCbrConsumer(app::CbrConfig cfg)
  {
    m_cbrConsumer = std::make_unique<app::CbrConsumer>(*this, CONSUMER_FACE, std::move(cfg),
                                                       Random::substream(m_seed, m_id, "cbr"));
  }

  void
  start()
  {
    if (m_router)
      exec(m_router->start(now()));
    for (const auto& p : m_announced)
      if (m_router)
        exec(m_router->advertise(p, now()));
    if (m_syncProducer)
      m_syncProducer->start();
    if (m_cbrConsumer)
      m_cbrConsumer->start();
  }

  /// A frame addressed to this node (or broadcast) survived the channel.
  void
  receiveFrame(const Frame& f)
  {
    FaceId in = f.dest ? ensureUnicastFace(f.sender) : ADHOC_FACE;
    const ndn::Packet& pkt = *f.packet;
    if (m_env.tracer.active()) {
      TraceRecord r = makeRecord(TraceDir::Rx, pkt, f.size);
      r.face = in;
      r.peer = f.sender;
      m_env.tracer.record(r);
    }
    if (const auto* i = std::get_if<ndn::Interest>(&pkt))
      runForwarder(m_fw.onIncomingInterest(*i, in, now()), f.sender);
    else
      runForwarder(m_fw.onIncomingData(std::get<ndn::Data>(pkt), in, now()), f.sender);
  }

  /// The medium started the first transmission of a frame sent by this node.
  void
  onTransmitted(const Frame& f)
  {
    const ndn::Packet& pkt = *f.packet;
    const ndn::Name& name = ndn::packetName(pkt);
    if (f.fromRadio && ndn::localhopPrefix().isPrefixOf(name))
      throw InvariantError("node " + std::to_string(m_id) + " relayed localhop packet " + name.toUri());

    app::MetricEvent e{app::MetricKind::PktForwarded, now(), m_id, name, f.size};
    if (isRoutingName(name)) {
      e.kind = app::MetricKind::NdvrPkt;
      m_env.metrics.append(e);
      e.kind = app::MetricKind::PktForwarded;
    }
    m_env.metrics.append(std::move(e));

    if (m_env.tracer.active()) {
      TraceRecord r = makeRecord(TraceDir::Tx, pkt, f.size);
      r.face = f.dest ? unicastFaceOf(*f.dest) : ADHOC_FACE;
      r.peer = f.dest;
      r.fromRadio = f.fromRadio;
      m_env.tracer.record(r);
    }
  }

  /// @p f was lost in the channel at this node (as receiver, or as sender for queue and retry drops).
  void
  onChannelDrop(const Frame& f, ChannelDrop reason)
  {
    if (!m_env.tracer.active())
      return;
    TraceRecord r = makeRecord(TraceDir::Drop, *f.packet, f.size);
    r.peer = f.sender == m_id ? f.dest : std::optional<NodeId>(f.sender);
    r.reason = toString(reason);
    r.channel = true;
    m_env.tracer.record(r);
  }

  // AppHost
  NodeId nodeId() const override { return m_id; }
  SimTime now() const override { return m_env.sched.now(); }
  uint32_t nonce() override { return m_nonceRng.nextU32(); }
  app::MetricsLog& metrics() override { return m_env.metrics; }

  void
  schedule(SimTime delay, std::function<void()> fn) override
  {
    m_env.sched.scheduleAfter(delay, std::move(fn));
  }

  void
  expressInterest(FaceId appFace, ndn::Interest interest) override
  {
    runForwarder(m_fw.onIncomingInterest(interest, appFace, now()), std::nullopt);
  }

  void
  putData(FaceId appFace, ndn::Data data) override
  {
    runForwarder(m_fw.onIncomingData(data, appFace, now()), std::nullopt);
  }

  void
  advertise(const ndn::Name& prefix) override
  {
    m_fw.fib().addNextHop(prefix, PRODUCER_FACE);
    if (m_router)
      exec(m_router->advertise(prefix, now()));
  }

private:
  TraceRecord
  makeRecord(TraceDir dir, const ndn::Packet& pkt, size_t size) const
  {
    TraceRecord r{now(), m_id, dir, std::holds_alternative<ndn::Interest>(pkt), ndn::packetName(pkt), size};
    if (const auto* i = std::get_if<ndn::Interest>(&pkt))
      r.nonce = i->nonce;
    return r;
  }

  FaceId
  ensureUnicastFace(NodeId neighbor)
  {
    FaceId f = unicastFaceOf(neighbor);
    if (!m_fw.hasFace(f))
      m_fw.addFace({f, ndn::FaceScope::NonLocal, ndn::LinkType::PointToPoint});
    return f;
  }

  /// Face the router should associate with a neighbor heard as @p sender.
  FaceId
  neighborFace(std::optional<NodeId> sender)
  {
    if (sender && m_opts.unicastFaces)
      return ensureUnicastFace(*sender);
    return ADHOC_FACE;
  }

  void
  runForwarder(ndn::ForwarderActions actions, std::optional<NodeId> sender)
  {
    using Kind = ndn::ForwarderAction::Kind;
    for (auto& a : actions) {
      switch (a.kind) {
      case Kind::Send:
        if (m_fw.isLocal(a.face))
          deliverLater(a.face, std::move(a.packet), sender);
        else
          transmit(a.face, std::move(a.packet), a.fromRadio);
        break;
      case Kind::Drop:
        if (m_env.tracer.active()) {
          TraceRecord r = makeRecord(TraceDir::Drop, a.packet, 0);
          r.reason = ndn::toString(a.reason);
          m_env.tracer.record(r);
        }
        break;
      case Kind::Cache:
        if (m_env.tracer.active()) {
          TraceRecord r = makeRecord(TraceDir::Cache, a.packet, ndn::encodePacket(a.packet).size());
          r.face = a.face;
          r.peer = sender;
          m_env.tracer.record(r);
        }
        break;
      }
    }
  }

  void
  transmit(FaceId face, ndn::Packet packet, bool fromRadio)
  {
    Frame f;
    f.sender = m_id;
    if (isUnicastFace(face))
      f.dest = static_cast<NodeId>(face - UNICAST_FACE_BASE);
    f.size = ndn::encodePacket(packet).size();
    f.packet = std::make_shared<const ndn::Packet>(std::move(packet));
    f.fromRadio = fromRadio;
    m_env.medium.send(std::move(f));
  }

  void
  deliverLater(FaceId face, ndn::Packet packet, std::optional<NodeId> sender)
  {
    m_env.sched.scheduleAfter(SimTime(0), [this, face, p = std::move(packet), sender] {
      deliver(face, p, sender);
    });
  }

  void
  deliver(FaceId face, const ndn::Packet& pkt, std::optional<NodeId> sender)
  {
    const auto* interest = std::get_if<ndn::Interest>(&pkt);
    const auto* data = std::get_if<ndn::Data>(&pkt);
    switch (face) {
    case ROUTER_FACE:
      if (!m_router)
        return;
      if (interest)
        exec(m_router->onInterest(*interest, neighborFace(sender), now()));
      else
        exec(m_router->onData(*data, now()));
      return;
    case PRODUCER_FACE:
      if (!interest)
        return;
      if (m_syncProducer)
        m_syncProducer->onInterest(*interest);
      if (m_cbrProducer && m_cbrProducer->prefix().isPrefixOf(interest->name))
        m_cbrProducer->onInterest(*interest);
      return;
    case CONSUMER_FACE:
      if (!data)
        return;
      if (m_syncConsumer)
        m_syncConsumer->onData(*data);
      if (m_cbrConsumer)
        m_cbrConsumer->onData(*data);
      return;
    default:
      return;
    }
  }

  void
  exec(routing::Actions actions)
  {
    for (auto& action : actions) {
      if (auto* si = std::get_if<routing::SendInterest>(&action)) {
        runForwarder(m_fw.onIncomingInterest(si->interest, ROUTER_FACE, now()), std::nullopt);
      }
      else if (auto* sd = std::get_if<routing::SendData>(&action)) {
        runForwarder(m_fw.onIncomingData(sd->data, ROUTER_FACE, now()), std::nullopt);
      }
      else if (auto* st = std::get_if<routing::StartTimer>(&action)) {
        m_env.sched.scheduleAfter(st->delay, [this, t = st->timer] { exec(m_router->onTimer(t, now())); });
      }
      else if (auto* fc = std::get_if<routing::FibChange>(&action)) {
        if (isUnicastFace(fc->face))
          ensureUnicastFace(static_cast<NodeId>(fc->face - UNICAST_FACE_BASE));
        if (fc->op == routing::FibChange::Op::Add)
          m_fw.fib().addNextHop(fc->prefix, fc->face);
        else
          m_fw.fib().removeNextHop(fc->prefix, fc->face);
      }
      else if (auto* rn = std::get_if<routing::RouteNotice>(&action)) {
        switch (rn->kind) {
        case routing::RouteNotice::Kind::Added:
          ++m_counters.routesAdded;
          if (m_syncConsumer)
            m_syncConsumer->onRouteLearned(rn->entry.prefix);
          break;
        case routing::RouteNotice::Kind::Updated:
          ++m_counters.routesUpdated;
          break;
        case routing::RouteNotice::Kind::Removed:
          ++m_counters.routesRemoved;
          break;
        }
      }
      else if (auto* vn = std::get_if<routing::ValidationNotice>(&action)) {
        ++m_counters.validationRejects;
        if (m_env.tracer.active()) {
          TraceRecord r{now(), m_id, TraceDir::Drop, false, vn->dataName, 0};
          r.reason = trust::toString(vn->result.verdict);
          m_env.tracer.record(r);
        }
      }
    }
  }

private:
  NodeId m_id;
  std::string m_label;
  NodeEnv m_env;
  NodeOptions m_opts;
  uint64_t m_seed;
  ndn::Forwarder m_fw;
  Random m_nonceRng;
  Random m_routerRng;
  std::unique_ptr<routing::Router> m_router;
  std::vector<ndn::Name> m_announced;
  std::unique_ptr<app::SyncProducer> m_syncProducer;
  std::unique_ptr<app::SyncConsumer> m_syncConsumer;
  std::unique_ptr<app::CbrProducer> m_cbrProducer;
  std::unique_ptr<app::CbrConsumer> m_cbrConsumer;
  NodeCounters m_counters;
};

} // namespace ndvr::sim

#endif // NDVR_SIM_NODE_HPP
