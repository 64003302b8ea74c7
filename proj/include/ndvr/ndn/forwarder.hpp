/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_FORWARDER_HPP
#define NDVR_NDN_FORWARDER_HPP

#include "ndvr/ndn/content-store.hpp"
#include "ndvr/ndn/fib.hpp"
#include "ndvr/ndn/pit.hpp"

#include <map>

namespace ndvr::ndn {

enum class FaceScope {
  Local,    ///< application face on this node
  NonLocal, ///< radio face
};

enum class LinkType {
  PointToPoint,
  AdHoc, ///< wireless broadcast medium; a packet may leave on the face it arrived on
};

struct FaceInfo
{
  FaceId id;
  FaceScope scope;
  LinkType linkType;
};

enum class DropReason {
  DuplicateNonce,
  NoRoute,
  LocalhopScope,
  Unsolicited,
};

inline const char*
toString(DropReason r)
{
  switch (r) {
  case DropReason::DuplicateNonce: return "duplicate-nonce";
  case DropReason::NoRoute: return "no-route";
  case DropReason::LocalhopScope: return "localhop-scope";
  case DropReason::Unsolicited: return "unsolicited";
  }
  return "unknown";
}

/// One forwarding decision emitted by the Forwarder; the host carries out sends.
struct ForwarderAction
{
  enum class Kind { Send, Drop, Cache };

  Kind kind;
  FaceId face = INVALID_FACE;
  Packet packet;
  DropReason reason = DropReason::NoRoute;
  bool fromRadio = false; ///< the packet being sent was itself received over the radio
};

using ForwarderActions = std::vector<ForwarderAction>;

struct ForwarderCounters
{
  uint64_t inInterests = 0;
  uint64_t inData = 0;
  uint64_t csHits = 0;
  uint64_t aggregated = 0;
  uint64_t drops = 0;
  uint64_t unsolicitedCached = 0;
};

inline const Name&
localhopPrefix()
{
  static const Name prefix{"localhop"};
  return prefix;
}

/**
 * @brief Per-node NDN forwarder: PIT, FIB, Content Store and the multicast strategy.
 *
 * Single-threaded; one instance per simulated node with no shared state.
 */
class Forwarder
{
public:
  explicit
  Forwarder(size_t csCapacity = 256, bool cacheUnsolicited = false, size_t deadNonceCapacity = 1024)
    : m_cs(csCapacity, cacheUnsolicited)
    , m_deadNonces(deadNonceCapacity)
  {
  }

  void
  addFace(FaceInfo face)
  {
    m_faces[face.id] = face;
  }

  void
  removeFace(FaceId id)
  {
    m_faces.erase(id);
    m_fib.removeFace(id);
  }

  bool
  hasFace(FaceId id) const
  {
    return m_faces.count(id) > 0;
  }

  const FaceInfo&
  face(FaceId id) const
  {
    auto it = m_faces.find(id);
    if (it == m_faces.end())
      throw std::out_of_range("unknown face " + std::to_string(id));
    return it->second;
  }

  bool
  isLocal(FaceId id) const
  {
    return face(id).scope == FaceScope::Local;
  }

  Fib& fib() { return m_fib; }
  const Fib& fib() const { return m_fib; }
  Pit& pit() { return m_pit; }
  ContentStore& cs() { return m_cs; }
  const ContentStore& cs() const { return m_cs; }
  const ForwarderCounters& counters() const { return m_counters; }

  ForwarderActions
  onIncomingInterest(const Interest& interest, FaceId inFace, SimTime now)
  {
    ForwarderActions out;
    ++m_counters.inInterests;
    if (m_pit.purgeDue())
      m_pit.purge(now);

    const bool fromRadio = !isLocal(inFace);
    const bool localhop = localhopPrefix().isPrefixOf(interest.name);

    // candidate next hops; a localhop Interest heard on the radio may only reach local apps
    const FibEntry* fibEntry = m_fib.findLongestPrefixMatch(interest.name);
    std::vector<FaceId> nextHops;
    if (fibEntry) {
      for (FaceId f : fibEntry->nextHops) {
        if (!hasFace(f))
          continue;
        if (localhop && fromRadio && !isLocal(f))
          continue;
        if (f == inFace && face(f).linkType != LinkType::AdHoc)
          continue;
        nextHops.push_back(f);
      }
    }
    if (localhop && fromRadio && nextHops.empty()) {
      drop(out, interest, DropReason::LocalhopScope);
      return out;
    }

    if (m_deadNonces.contains(interest.name, interest.nonce)) {
      drop(out, interest, DropReason::DuplicateNonce);
      return out;
    }
    m_deadNonces.add(interest.name, interest.nonce);

    if (const auto* hit = m_cs.find(interest.name);
        hit && !(localhop && fromRadio && hit->fromRadio)) {
      ++m_counters.csHits;
      out.push_back({ForwarderAction::Kind::Send, inFace, hit->data, DropReason::NoRoute, hit->fromRadio});
      return out;
    }

    PitEntry* entry = m_pit.find(interest.name, now);
    if (entry != nullptr && !entry->inRecords.count(inFace)) {
      entry->inRecords[inFace] = InRecord{interest.nonce, now + interest.lifetime};
      ++m_counters.aggregated;
      return out;
    }
    // a new nonce from a face already waiting is a retransmission and is forwarded again

    if (nextHops.empty()) {
      if (entry == nullptr)
        drop(out, interest, DropReason::NoRoute);
      else
        entry->inRecords[inFace] = InRecord{interest.nonce, now + interest.lifetime};
      return out;
    }
    if (entry == nullptr)
      entry = &m_pit.insert(interest.name);
    entry->inRecords[inFace] = InRecord{interest.nonce, now + interest.lifetime};
    for (FaceId f : nextHops) {
      entry->outFaces.insert(f);
      out.push_back({ForwarderAction::Kind::Send, f, interest, DropReason::NoRoute, fromRadio});
    }
    return out;
  }

  ForwarderActions
  onIncomingData(const Data& data, FaceId inFace, SimTime now)
  {
    ForwarderActions out;
    ++m_counters.inData;
    const bool fromRadio = !isLocal(inFace);
    const bool localhop = localhopPrefix().isPrefixOf(data.name);

    PitEntry* entry = m_pit.find(data.name, now);
    if (entry == nullptr) {
      if (fromRadio && m_cs.admitsUnsolicited(data.name)) {
        m_cs.insert(data, now, true);
        ++m_counters.unsolicitedCached;
        out.push_back({ForwarderAction::Kind::Cache, inFace, data, DropReason::NoRoute, true});
      }
      else {
        drop(out, data, DropReason::Unsolicited);
      }
      return out;
    }

    m_cs.insert(data, now, fromRadio);
    for (const auto& [f, rec] : entry->inRecords) {
      if (rec.expiry <= now || !hasFace(f))
        continue;
      if (f == inFace && face(f).linkType != LinkType::AdHoc)
        continue;
      if (localhop && fromRadio && !isLocal(f))
        continue;
      out.push_back({ForwarderAction::Kind::Send, f, data, DropReason::NoRoute, fromRadio});
    }
    m_pit.erase(data.name);
    return out;
  }

private:
  void
  drop(ForwarderActions& out, Packet pkt, DropReason reason)
  {
    ++m_counters.drops;
    out.push_back({ForwarderAction::Kind::Drop, INVALID_FACE, std::move(pkt), reason});
  }

private:
  std::map<FaceId, FaceInfo> m_faces;
  Fib m_fib;
  Pit m_pit;
  ContentStore m_cs;
  DeadNonceList m_deadNonces;
  ForwarderCounters m_counters;
};

} // namespace ndvr::ndn

#endif // NDVR_NDN_FORWARDER_HPP
