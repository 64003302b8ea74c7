/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SIM_TRACE_HPP
#define NDVR_SIM_TRACE_HPP

#include "ndvr/ndn/packet.hpp"

#include <functional>
#include <ostream>

namespace ndvr::sim {

enum class TraceDir {
  Tx,
  Rx,
  Drop,
  Cache,
};

inline const char*
toString(TraceDir d)
{
  switch (d) {
  case TraceDir::Tx: return "TX";
  case TraceDir::Rx: return "RX";
  case TraceDir::Drop: return "DROP";
  case TraceDir::Cache: return "CACHE";
  }
  return "?";
}

enum class TraceLevel {
  None,
  Pkt,  ///< radio TX/RX, forwarder drops, unsolicited caching
  Full, ///< also channel losses (collision, loss, queue overflow, retry limit)
};

/**
 * One packet event. The file form keeps only the first six fields; the rest
 * serve in-process checks.
 */
struct TraceRecord
{
  SimTime time;
  NodeId node;
  TraceDir dir;
  bool isInterest;
  ndn::Name name;
  size_t size;

  FaceId face = INVALID_FACE;
  uint32_t nonce = 0;            ///< Interests only
  bool fromRadio = false;        ///< TX of a packet this node had received over the radio
  std::optional<NodeId> peer = std::nullopt; ///< sender on RX, unicast destination on TX
  std::string reason = {};       ///< drop reason
  bool channel = false;          ///< drop happened in the medium rather than the forwarder
};

/// `time_us,node_id,dir,pkt,name,size_bytes`
inline void
writeTraceLine(std::ostream& os, const TraceRecord& r)
{
  os << r.time.count() << ',' << r.node << ',' << toString(r.dir) << ','
     << (r.isInterest ? 'I' : 'D') << ',' << r.name.toUri() << ',' << r.size << '\n';
}

inline const char*
traceHeader()
{
  return "time_us,node_id,dir,pkt,name,size_bytes\n";
}

/// Fans records out to a file writer and any number of in-process observers.
class Tracer
{
public:
  using Observer = std::function<void(const TraceRecord&)>;

  void
  setOutput(std::ostream* os, TraceLevel level)
  {
    m_out = os;
    m_level = level;
    if (m_out && m_level != TraceLevel::None)
      *m_out << traceHeader();
  }

  void
  addObserver(Observer o)
  {
    m_observers.push_back(std::move(o));
  }

  bool
  active() const
  {
    return !m_observers.empty() || (m_out && m_level != TraceLevel::None);
  }

  void
  record(const TraceRecord& r)
  {
    if (m_out && m_level != TraceLevel::None && (!r.channel || m_level == TraceLevel::Full))
      writeTraceLine(*m_out, r);
    for (const auto& o : m_observers)
      o(r);
  }

private:
  std::ostream* m_out = nullptr;
  TraceLevel m_level = TraceLevel::None;
  std::vector<Observer> m_observers;
};

} // namespace ndvr::sim

#endif // NDVR_SIM_TRACE_HPP
