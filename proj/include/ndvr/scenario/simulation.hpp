/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SCENARIO_SIMULATION_HPP
#define NDVR_SCENARIO_SIMULATION_HPP

#include "ndvr/scenario/config.hpp"
#include "ndvr/sim/node.hpp"

#include <cstdio>

namespace ndvr::scenario {

inline SimTime
secondsToTime(double s)
{
  return SimTime(static_cast<int64_t>(std::llround(s * 1e6)));
}

/**
 * @brief A whole network built from a scenario: scheduler, mobility, medium and nodes.
 *
 * Everything random derives from the one seed, so a run is a pure function
 * of (scenario, seed).
 */
class Simulation
{
public:
  Simulation(ScenarioConfig cfg, uint64_t seed)
    : m_cfg(std::move(cfg))
    , m_seed(seed)
    , m_metrics(false)
  {
    m_cfg.validate();
    const size_t n = m_cfg.nodes.size();

    Random placement = Random::substream(seed, 0, "placement");
    std::vector<sim::Vec2> initial;
    for (const auto& spec : m_cfg.nodes) {
      if (spec.position)
        initial.push_back(*spec.position);
      else
        initial.push_back({placement.uniform(0, m_cfg.arena.width), placement.uniform(0, m_cfg.arena.height)});
    }
    m_mobility = std::make_unique<sim::MobilityManager>(m_cfg.mobility, m_cfg.arena, initial, seed,
                                                        m_cfg.walk, m_cfg.rpgm);
    m_medium = std::make_unique<sim::Medium>(m_sched, *m_mobility, m_cfg.radio, seed);
    for (size_t i = 0; i < n; ++i)
      if (m_cfg.nodes[i].range)
        m_medium->setRange(static_cast<NodeId>(i), *m_cfg.nodes[i].range);

    const bool routed = m_cfg.forwarding == ForwardingMode::NdvrMulticast;
    std::optional<trust::GeneratedKeys> keys;
    if (routed && m_cfg.security) {
      std::vector<routing::RouterName> names;
      for (const auto& spec : m_cfg.nodes)
        names.emplace_back(m_cfg.network, ndn::Component(spec.label));
      keys = trust::generateKeys(m_cfg.network, names, seed);
    }

    sim::NodeOptions opts;
    opts.csCapacity = m_cfg.csCapacity;
    opts.cacheUnsolicited = m_cfg.cacheUnsolicited;
    opts.unicastFaces = m_cfg.unicastFaces;
    opts.defaultRoute = !routed;
    sim::NodeEnv env{m_sched, *m_medium, m_tracer, m_metrics};

    for (size_t i = 0; i < n; ++i) {
      const auto& spec = m_cfg.nodes[i];
      auto id = static_cast<NodeId>(i);
      auto node = std::make_unique<sim::Node>(id, spec.label, env, opts, seed);
      if (routed) {
        std::optional<routing::RouterSecurity> security;
        if (keys)
          security.emplace(keys->credentials[i]);
        node->enableRouting(routing::RouterName(m_cfg.network, ndn::Component(spec.label)), m_cfg.ndvr,
                            std::move(security));
      }
      m_nodes.push_back(std::move(node));
    }
    installWorkload();

    m_medium->onReceive([this] (NodeId r, const sim::Frame& f) { m_nodes[r]->receiveFrame(f); });
    m_medium->onTransmit([this] (const sim::Frame& f) { m_nodes[f.sender]->onTransmitted(f); });
    m_medium->onDrop([this] (NodeId at, const sim::Frame& f, sim::ChannelDrop why) {
      m_nodes[at]->onChannelDrop(f, why);
    });
  }

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const ScenarioConfig& config() const { return m_cfg; }
  uint64_t seed() const { return m_seed; }
  sim::Scheduler& scheduler() { return m_sched; }
  sim::MobilityManager& mobility() { return *m_mobility; }
  sim::Medium& medium() { return *m_medium; }
  sim::Tracer& tracer() { return m_tracer; }
  app::MetricsLog& metrics() { return m_metrics; }
  const app::MetricsLog& metrics() const { return m_metrics; }
  size_t size() const { return m_nodes.size(); }
  sim::Node& node(size_t i) { return *m_nodes.at(i); }
  const sim::Node& node(size_t i) const { return *m_nodes.at(i); }
  SimTime duration() const { return secondsToTime(m_cfg.durationS); }

  sim::Node&
  node(std::string_view label)
  {
    for (auto& n : m_nodes)
      if (n->label() == label)
        return *n;
    throw std::out_of_range("no node labelled " + std::string(label));
  }

  void
  setTraceOutput(std::ostream* os, sim::TraceLevel level)
  {
    m_tracer.setOutput(os, level);
  }

  /// Positions every second as `time_s,node_id,x_m,y_m`, starting at time zero.
  void
  setMobilityOutput(std::ostream* os)
  {
    m_mobilityOut = os;
    if (m_mobilityOut)
      *m_mobilityOut << "time_s,node_id,x_m,y_m\n";
  }

  /// Schedules node start-up, mobility and position logging; idempotent.
  void
  start()
  {
    if (m_started)
      return;
    m_started = true;
    for (auto& n : m_nodes)
      m_sched.schedule(SimTime(0), [node = n.get()] { node->start(); });
    if (m_cfg.mobility != sim::MobilityModel::Static)
      m_sched.scheduleAfter(m_cfg.mobilityStep, [this] { mobilityStep(); });
    if (m_mobilityOut)
      m_sched.schedule(SimTime(0), [this] { logPositions(); });
  }

  void
  runUntil(SimTime end)
  {
    start();
    m_sched.runUntil(end);
  }

  void
  run()
  {
    runUntil(duration());
  }

  std::vector<NodeId>
  nodeIds() const
  {
    std::vector<NodeId> out;
    for (size_t i = 0; i < m_nodes.size(); ++i)
      out.push_back(static_cast<NodeId>(i));
    return out;
  }

  app::Summary
  summary() const
  {
    return app::summarize(m_metrics, m_cfg.durationS, nodeIds());
  }

  /// Post-run consistency checks over the metric log; throws InvariantError.
  void
  checkInvariants() const
  {
    std::map<std::pair<NodeId, ndn::Name>, int> sent;
    for (const auto& e : m_metrics.events()) {
      if (e.kind == app::MetricKind::InterestSent) {
        ++sent[{e.node, e.name}];
      }
      else if (e.kind == app::MetricKind::DataDelivered) {
        auto it = sent.find({e.node, e.name});
        if (it == sent.end() || it->second != 1)
          throw InvariantError("delivery of " + e.name.toUri() + " at node " + std::to_string(e.node) +
                               " lacks exactly one matching request");
        if (e.interestTime > e.time)
          throw InvariantError("delivery of " + e.name.toUri() + " precedes its request");
      }
    }
    for (size_t i = 0; i < m_mobility->size(); ++i)
      if (!m_cfg.arena.contains(m_mobility->position(i)))
        throw InvariantError("node " + std::to_string(i) + " left the arena");
  }

  /// Final routing table of one node as CSV; only the header without routing.
  std::string
  routesCsv(size_t i) const
  {
    const auto* r = m_nodes.at(i)->router();
    return r ? r->table().toCsv() : "prefix,cost,seqnum,nexthop,face\n";
  }

private:
  void
  installWorkload()
  {
    const auto& wl = m_cfg.workload;
    const size_t n = m_nodes.size();
    for (size_t i = 0; i < n; ++i) {
      sim::Node& node = *m_nodes[i];
      auto id = static_cast<NodeId>(i);
      switch (wl.type) {
      case WorkloadType::None:
        break;
      case WorkloadType::Announce: {
        ndn::Name p = wl.announcePrefix;
        p.append(ndn::Component(m_cfg.nodes[i].label));
        node.announce(std::move(p));
        break;
      }
      case WorkloadType::SyncPoisson: {
        app::ProducerConfig pc;
        pc.basePrefix = app::producerPrefix(id);
        pc.meanIntervalS = wl.meanIntervalS;
        pc.durationS = wl.producerDurationS;
        pc.payloadSize = wl.payloadSize;
        pc.freshness = wl.freshness;
        node.addSyncProducer(std::move(pc));
        node.addSyncConsumer(app::SyncConsumerConfig{wl.syncRetries, wl.syncSpacing});
        break;
      }
      case WorkloadType::Cbr: {
        node.addCbrProducer(app::producerPrefix(id), wl.payloadSize);
        app::CbrConfig cc;
        cc.idt = wl.idt;
        cc.payloadSize = wl.payloadSize;
        cc.durationS = wl.cbrDurationS;
        cc.lifetime = wl.cbrLifetime;
        for (size_t j = 0; j < n; ++j)
          if (j != i)
            cc.targets.push_back(app::producerPrefix(static_cast<NodeId>(j)));
        node.addCbrConsumer(std::move(cc));
        break;
      }
      }
    }
  }

  void
  mobilityStep()
  {
    double dt = std::chrono::duration<double>(m_cfg.mobilityStep).count();
    m_mobility->step(dt);
    m_sched.scheduleAfter(m_cfg.mobilityStep, [this] { mobilityStep(); });
  }

  void
  logPositions()
  {
    const auto t = std::chrono::duration<double>(m_sched.now()).count();
    char buf[96];
    for (size_t i = 0; i < m_mobility->size(); ++i) {
      auto p = m_mobility->position(i);
      std::snprintf(buf, sizeof(buf), "%.3f,%zu,%.3f,%.3f\n", t, i, p.x, p.y);
      *m_mobilityOut << buf;
    }
    m_sched.scheduleAfter(seconds(1), [this] { logPositions(); });
  }

private:
  ScenarioConfig m_cfg;
  uint64_t m_seed;
  sim::Scheduler m_sched;
  sim::Tracer m_tracer;
  app::MetricsLog m_metrics;
  std::unique_ptr<sim::MobilityManager> m_mobility;
  std::unique_ptr<sim::Medium> m_medium;
  std::vector<std::unique_ptr<sim::Node>> m_nodes;
  std::ostream* m_mobilityOut = nullptr;
  bool m_started = false;
};

} // namespace ndvr::scenario

#endif // NDVR_SCENARIO_SIMULATION_HPP
