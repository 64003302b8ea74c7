/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_APP_METRICS_HPP
#define NDVR_APP_METRICS_HPP

#include "ndvr/ndn/name.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace ndvr::app {

using ndn::Name;

enum class MetricKind {
  InterestSent,
  DataProduced,
  DataDelivered,
  PktForwarded,
  NdvrPkt,
};

inline const char*
toString(MetricKind k)
{
  switch (k) {
  case MetricKind::InterestSent: return "INTEREST_SENT";
  case MetricKind::DataProduced: return "DATA_PRODUCED";
  case MetricKind::DataDelivered: return "DATA_DELIVERED";
  case MetricKind::PktForwarded: return "PKT_FORWARDED";
  case MetricKind::NdvrPkt: return "NDVR_PKT";
  }
  return "?";
}

struct MetricEvent
{
  MetricKind kind;
  SimTime time;
  NodeId node;
  Name name;
  size_t size = 0;
  SimTime interestTime{0}; ///< DATA_DELIVERED: when the first Interest for it was sent
};

/**
 * @brief Append-only metric log for one run.
 *
 * Per-packet transmission events can be aggregated into counters only; a
 * long flooding run produces millions of them.
 */
class MetricsLog
{
public:
  explicit
  MetricsLog(bool keepTransmissions = false)
    : m_keepTx(keepTransmissions)
  {
  }

  void
  append(MetricEvent e)
  {
    auto k = static_cast<size_t>(e.kind);
    ++m_total[k];
    ++m_perNode[e.node][k];
    if (!m_keepTx && (e.kind == MetricKind::PktForwarded || e.kind == MetricKind::NdvrPkt))
      return;
    m_events.push_back(std::move(e));
  }

  void
  noteUndelivered(NodeId node, const Name& name)
  {
    m_undelivered.emplace_back(node, name);
  }

  const std::vector<MetricEvent>& events() const { return m_events; }
  const std::vector<std::pair<NodeId, Name>>& undelivered() const { return m_undelivered; }

  uint64_t
  count(MetricKind k) const
  {
    return m_total[static_cast<size_t>(k)];
  }

  uint64_t
  count(MetricKind k, NodeId node) const
  {
    auto it = m_perNode.find(node);
    return it == m_perNode.end() ? 0 : it->second[static_cast<size_t>(k)];
  }

  std::vector<NodeId>
  nodes() const
  {
    std::vector<NodeId> out;
    for (const auto& [n, _] : m_perNode)
      out.push_back(n);
    return out;
  }

private:
  using Counts = std::array<uint64_t, 5>;

  bool m_keepTx;
  std::vector<MetricEvent> m_events;
  Counts m_total{};
  std::map<NodeId, Counts> m_perNode;
  std::vector<std::pair<NodeId, Name>> m_undelivered;
};

struct DelayRecord
{
  NodeId node;
  Name name;
  int64_t delayUs;
};

struct CdfPoint
{
  int64_t delayUs;
  double fraction;
};

struct Summary
{
  uint64_t overheadPkts = 0;
  uint64_t delivered = 0;
  uint64_t undelivered = 0;
  uint64_t interestsSent = 0;
  uint64_t forwardedPkts = 0;
  double durationS = 0;
  double deliveryRatePps = 0;
  std::map<NodeId, double> deliveryRatePerNode;
  std::vector<DelayRecord> delays; ///< in delivery order
  std::vector<CdfPoint> cdf;

  double
  meanNodeDeliveryRate() const
  {
    if (deliveryRatePerNode.empty())
      return 0;
    double s = 0;
    for (const auto& [_, r] : deliveryRatePerNode)
      s += r;
    return s / static_cast<double>(deliveryRatePerNode.size());
  }
};

/// Empirical CDF: sorted delays, the i-th of n at fraction i/n.
inline std::vector<CdfPoint>
empiricalCdf(std::vector<int64_t> delays)
{
  std::sort(delays.begin(), delays.end());
  std::vector<CdfPoint> out;
  out.reserve(delays.size());
  const double n = static_cast<double>(delays.size());
  for (size_t i = 0; i < delays.size(); ++i)
    out.push_back({delays[i], static_cast<double>(i + 1) / n});
  return out;
}

inline Summary
summarize(const MetricsLog& log, double durationS, const std::vector<NodeId>& nodes = {})
{
  Summary s;
  s.durationS = durationS;
  s.overheadPkts = log.count(MetricKind::NdvrPkt);
  s.delivered = log.count(MetricKind::DataDelivered);
  s.interestsSent = log.count(MetricKind::InterestSent);
  s.forwardedPkts = log.count(MetricKind::PktForwarded);
  s.undelivered = log.undelivered().size();
  s.deliveryRatePps = durationS > 0 ? static_cast<double>(s.delivered) / durationS : 0;
  for (NodeId n : nodes)
    s.deliveryRatePerNode[n] = durationS > 0
                               ? static_cast<double>(log.count(MetricKind::DataDelivered, n)) / durationS
                               : 0;
  std::vector<int64_t> raw;
  for (const auto& e : log.events()) {
    if (e.kind != MetricKind::DataDelivered)
      continue;
    int64_t d = (e.time - e.interestTime).count();
    s.delays.push_back({e.node, e.name, d});
    raw.push_back(d);
  }
  s.cdf = empiricalCdf(std::move(raw));
  return s;
}

inline void
writeDelaysCsv(std::ostream& os, const Summary& s)
{
  os << "node,name,delay_us\n";
  for (const auto& d : s.delays)
    os << d.node << ',' << d.name.toUri() << ',' << d.delayUs << '\n';
}

inline void
writeCdfCsv(std::ostream& os, const Summary& s)
{
  os << "delay_us,fraction\n";
  for (const auto& p : s.cdf) {
    std::ostringstream f;
    f << std::setprecision(6) << p.fraction;
    os << p.delayUs << ',' << f.str() << '\n';
  }
}

inline std::string
formatNumber(double v)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

inline void
writeSummaryCsv(std::ostream& os, const Summary& s)
{
  os << "metric,value\n";
  os << "overhead_pkts," << s.overheadPkts << '\n';
  os << "delivered," << s.delivered << '\n';
  os << "delivery_rate_pps," << formatNumber(s.deliveryRatePps) << '\n';
  os << "forwarded_pkts," << s.forwardedPkts << '\n';
  os << "undelivered," << s.undelivered << '\n';
  os << "interests_sent," << s.interestsSent << '\n';
  os << "delivery_rate_pps_node_mean," << formatNumber(s.meanNodeDeliveryRate()) << '\n';
  for (const auto& [n, r] : s.deliveryRatePerNode)
    os << "delivery_rate_pps_node_" << n << ',' << formatNumber(r) << '\n';
}

} // namespace ndvr::app

#endif // NDVR_APP_METRICS_HPP
