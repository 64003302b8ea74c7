/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_ROUTER_HPP
#define NDVR_ROUTING_ROUTER_HPP

#include "ndvr/ndn/packet.hpp"
#include "ndvr/random.hpp"
#include "ndvr/routing/ehlo.hpp"
#include "ndvr/routing/process-dvinfo.hpp"
#include "ndvr/trust/key-chain.hpp"
#include "ndvr/trust/validator.hpp"

#include <set>
#include <variant>

namespace ndvr::routing {

using ndn::Data;
using ndn::Interest;

// timers the host must schedule and hand back through onTimer()
struct EhloTimer
{
  friend bool operator==(const EhloTimer&, const EhloTimer&) = default;
};

struct FetchTimer
{
  RouterName neighbor;
  uint64_t version;
  friend bool operator==(const FetchTimer&, const FetchTimer&) = default;
};

struct FetchTimeout
{
  RouterName neighbor;
  uint64_t version;
  friend bool operator==(const FetchTimeout&, const FetchTimeout&) = default;
};

struct ReplyTimer
{
  Name name;
  friend bool operator==(const ReplyTimer&, const ReplyTimer&) = default;
};

struct KeyFetchTimeout
{
  Name keyName;
  friend bool operator==(const KeyFetchTimeout&, const KeyFetchTimeout&) = default;
};

using Timer = std::variant<EhloTimer, FetchTimer, FetchTimeout, ReplyTimer, KeyFetchTimeout>;

// actions the router asks its host to perform
struct SendInterest
{
  Interest interest;
};

struct SendData
{
  Data data;
};

struct StartTimer
{
  SimTime delay;
  Timer timer;
};

struct RouteNotice
{
  enum class Kind { Added, Updated, Removed };

  Kind kind;
  RouteEntry entry;
};

struct ValidationNotice
{
  Name dataName;
  trust::ValidationResult result;
};

using Action = std::variant<SendInterest, SendData, StartTimer, FibChange, RouteNotice, ValidationNotice>;
using Actions = std::vector<Action>;

struct RouterFaces
{
  FaceId app;   ///< face between the routing daemon and its forwarder
  FaceId adhoc; ///< wireless broadcast face
};

struct RouterCounters
{
  uint64_t ehloSent = 0;
  uint64_t ehloReceived = 0;
  uint64_t ehloMalformed = 0;
  uint64_t fetchImmediate = 0;
  uint64_t fetchDeferred = 0;
  uint64_t fetchTimeouts = 0;
  uint64_t dvinfoProcessed = 0;
  uint64_t dvinfoMalformedEntries = 0;
  uint64_t dvinfoFromUnknown = 0;
  uint64_t repliesSent = 0;
  uint64_t repliesSuppressed = 0;
  uint64_t repliesRefused = 0;
  uint64_t keyFetches = 0;
  uint64_t keysServed = 0;
  uint64_t validationRejects = 0;
  uint64_t neighborsRemoved = 0;
};

struct RouterSecurity
{
  trust::RouterCredentials credentials;
  trust::TrustStore store;

  explicit
  RouterSecurity(trust::RouterCredentials creds)
    : credentials(std::move(creds))
    , store(credentials.makeStore())
  {
  }
};

/**
 * @brief NDVR routing daemon for one node, as a pure state machine.
 *
 * The router owns no clock and no sockets: each entry point receives the
 * current time and returns the actions the host must carry out. All
 * randomness comes from the injected stream.
 */
class Router
{
public:
  Router(RouterName self, NdvrConfig cfg, RouterFaces faces, Random& rng,
         std::optional<RouterSecurity> security = std::nullopt)
    : m_self(std::move(self))
    , m_cfg(cfg)
    , m_faces(faces)
    , m_rng(rng)
    , m_security(std::move(security))
  {
    m_cfg.validate();
    if (m_security && !(m_security->credentials.router == m_self))
      throw std::invalid_argument("credentials belong to " + m_security->credentials.router.toUri());
  }

  const RouterName& self() const { return m_self; }
  const NdvrConfig& config() const { return m_cfg; }
  const DvTable& table() const { return m_table; }
  const NeighborTable& neighbors() const { return m_neighbors; }
  const RouterCounters& counters() const { return m_counters; }
  size_t subgroupCursor() const { return m_cursor; }
  bool secured() const { return m_security.has_value(); }

  const trust::TrustStore*
  trustStore() const
  {
    return m_security ? &m_security->store : nullptr;
  }

  /// Test hook: position the round-robin cursor.
  void
  setSubgroupCursor(size_t cursor)
  {
    m_cursor = cursor;
  }

  Name
  dvinfoRequestPrefix() const
  {
    Name n = dvinfoPrefix();
    n.append(m_self.full());
    return n;
  }

  /// Registers the protocol prefixes and schedules the first EHLO after a random jitter.
  Actions
  start(SimTime /*now*/)
  {
    Actions out;
    out.push_back(FibChange{FibChange::Op::Add, ehloPrefix(), m_faces.app});
    out.push_back(FibChange{FibChange::Op::Add, ehloPrefix(), m_faces.adhoc});
    out.push_back(FibChange{FibChange::Op::Add, dvinfoPrefix(), m_faces.adhoc});
    out.push_back(FibChange{FibChange::Op::Add, dvinfoRequestPrefix(), m_faces.app});
    if (m_security)
      out.push_back(FibChange{FibChange::Op::Add, m_security->credentials.keyName(), m_faces.app});
    auto jitter = SimTime(m_rng.uniformInt(0, microsecondsOf(m_cfg.startJitterMax)));
    out.push_back(StartTimer{jitter, EhloTimer{}});
    return out;
  }

  /// Announces a locally produced prefix; the next EHLO carries the new state.
  Actions
  advertise(const Name& prefix, SimTime /*now*/)
  {
    const RouteEntry* before = m_table.find(prefix);
    Actions out;
    if (before != nullptr && !before->isLocal())
      out.push_back(FibChange{FibChange::Op::Remove, prefix, before->faceId});
    m_table.advertiseLocalPrefix(prefix);
    return out;
  }

  /// Periodic work: drop silent neighbors, then beacon.
  Actions
  onEhloTimer(SimTime now)
  {
    Actions out = sweepNeighbors(now);

    auto ordered = m_neighbors.ordered();
    auto sub = selectPrioritySubgroup(ordered, m_cursor, m_cfg.subgroupSize);
    m_cursor = sub.cursor;

    Interest ehlo;
    ehlo.name = makeEhloName(m_self, m_table.size(), m_table.version(), m_table.digest());
    ehlo.nonce = m_rng.nextU32();
    ehlo.lifetime = m_cfg.ehloInterval;
    ehlo.appParameters = encodeSubgroup(sub.members);
    ++m_counters.ehloSent;
    out.push_back(SendInterest{std::move(ehlo)});
    out.push_back(StartTimer{m_cfg.ehloInterval, EhloTimer{}});
    return out;
  }

  /// Neighbor-timeout sweep; also run from onEhloTimer.
  Actions
  sweepNeighbors(SimTime now)
  {
    Actions out;
    auto removed = m_neighbors.removeExpired(now, m_cfg.neighborTimeout());
    if (removed.empty())
      return out;

    std::set<Name> gone;
    for (const auto& n : removed) {
      gone.insert(n.router.full());
      ++m_counters.neighborsRemoved;
      if (m_security)
        out.push_back(FibChange{FibChange::Op::Remove, n.router.keyName(), n.faceId});
    }
    std::vector<RouteEntry> dead;
    for (const auto& [prefix, e] : m_table.entries())
      if (!e.isLocal() && gone.count(e.nextHop->full()))
        dead.push_back(e);
    for (const auto& e : dead) {
      m_table.erase(e.prefix);
      out.push_back(FibChange{FibChange::Op::Remove, e.prefix, e.faceId});
      out.push_back(RouteNotice{RouteNotice::Kind::Removed, e});
    }
    // origin re-announces its own prefixes so stale paths through the lost link get superseded
    std::vector<Name> local;
    for (const auto& [prefix, e] : m_table.entries())
      if (e.isLocal())
        local.push_back(prefix);
    for (const auto& p : local) {
      RouteEntry e = *m_table.find(p);
      ++e.seqNum;
      m_table.put(e);
    }
    m_table.commit();
    return out;
  }

  /// An Interest delivered to the routing app face. @p neighborFace is the face toward the sender.
  Actions
  onInterest(const Interest& interest, FaceId neighborFace, SimTime now)
  {
    if (ehloPrefix().isPrefixOf(interest.name))
      return onEhlo(interest, neighborFace, now);
    if (dvinfoPrefix().isPrefixOf(interest.name))
      return onDvInfoRequest(interest, now);
    if (m_security && interest.name == m_security->credentials.keyName()) {
      ++m_counters.keysServed;
      return {SendData{m_security->credentials.ownKey.toData()}};
    }
    return {};
  }

  /// A Data delivered to the routing app face.
  Actions
  onData(const Data& data, SimTime now)
  {
    if (dvinfoPrefix().isPrefixOf(data.name))
      return onDvInfoData(data, now);
    if (m_security && trust::routerOfKeyName(data.name))
      return onKeyData(data, now);
    return {};
  }

  Actions
  onTimer(const Timer& timer, SimTime now)
  {
    return std::visit([&] (const auto& t) { return handleTimer(t, now); }, timer);
  }

private:
  static int64_t
  microsecondsOf(milliseconds ms)
  {
    return std::chrono::duration_cast<microseconds>(ms).count();
  }

  bool
  inSubgroup(const EhloInfo& info) const
  {
    for (const auto& r : info.prioritySubgroup)
      if (r == m_self)
        return true;
    return false;
  }

  Actions
  onEhlo(const Interest& interest, FaceId face, SimTime now)
  {
    EhloInfo info;
    try {
      info = parseEhlo(interest.name, interest.appParameters);
    }
    catch (const ParseError&) {
      ++m_counters.ehloMalformed;
      return {};
    }
    if (info.router == m_self)
      return {};
    ++m_counters.ehloReceived;

    Actions out;
    FaceId oldFace = INVALID_FACE;
    if (const auto* existing = m_neighbors.find(info.router))
      oldFace = existing->faceId;
    auto [nb, isNew] = m_neighbors.upsert(info.router, face, now);
    if (m_security && (isNew || oldFace != face)) {
      if (!isNew)
        out.push_back(FibChange{FibChange::Op::Remove, info.router.keyName(), oldFace});
      out.push_back(FibChange{FibChange::Op::Add, info.router.keyName(), face});
    }
    if (!isNew && oldFace != face)
      moveRoutesOfNeighbor(info.router, oldFace, face, out);

    nb->advertisedVersion = info.version;
    nb->advertisedPrefixes = info.prefixCount;
    nb->advertisedDigest = info.digest;

    bool wanted = info.prefixCount > 0
                  && info.version > nb->lastVersion
                  && info.digest != m_table.digest();
    if (!wanted || nb->fetchPending)
      return out;

    nb->fetchPending = true;
    nb->fetchVersion = info.version;
    if (inSubgroup(info) || info.prefixCount > m_table.size()) {
      ++m_counters.fetchImmediate;
      sendFetch(*nb, out);
    }
    else {
      ++m_counters.fetchDeferred;
      auto delay = SimTime(m_rng.uniformInt(microsecondsOf(m_cfg.backoffMin),
                                            microsecondsOf(m_cfg.backoffMax)));
      out.push_back(StartTimer{delay, FetchTimer{info.router, info.version}});
    }
    return out;
  }

  void
  moveRoutesOfNeighbor(const RouterName& r, FaceId oldFace, FaceId newFace, Actions& out)
  {
    std::vector<RouteEntry> moved;
    for (const auto& [prefix, e] : m_table.entries())
      if (!e.isLocal() && *e.nextHop == r)
        moved.push_back(e);
    for (auto e : moved) {
      out.push_back(FibChange{FibChange::Op::Remove, e.prefix, oldFace});
      out.push_back(FibChange{FibChange::Op::Add, e.prefix, newFace});
      e.faceId = newFace;
      m_table.put(e);
    }
    m_table.commit();
  }

  void
  sendFetch(const NeighborEntry& nb, Actions& out)
  {
    Interest i;
    i.name = makeDvInfoName(nb.router, nb.fetchVersion);
    i.nonce = m_rng.nextU32();
    i.lifetime = m_cfg.fetchLifetime;
    out.push_back(SendInterest{std::move(i)});
    out.push_back(StartTimer{m_cfg.fetchLifetime, FetchTimeout{nb.router, nb.fetchVersion}});
  }

  Actions
  onDvInfoRequest(const Interest& interest, SimTime now)
  {
    auto parsed = tryParseDvInfoName(interest.name);
    if (!parsed || !(parsed->router == m_self))
      return {};
    if (parsed->version > m_table.version()) {
      ++m_counters.repliesRefused;
      return {};
    }
    if (m_pendingReplies.count(interest.name)) {
      ++m_counters.repliesSuppressed;
      return {};
    }
    if (auto it = m_lastReply.find(interest.name);
        it != m_lastReply.end() && now - it->second < m_cfg.replyDelay) {
      ++m_counters.repliesSuppressed;
      return {};
    }
    m_pendingReplies.insert(interest.name);
    return {StartTimer{m_cfg.replyDelay, ReplyTimer{interest.name}}};
  }

  Actions
  onDvInfoData(const Data& data, SimTime now)
  {
    auto parsed = tryParseDvInfoName(data.name);
    if (!parsed || parsed->router == m_self)
      return {};
    if (!m_security)
      return acceptDvInfo(data, *parsed, now);

    auto result = trust::validate(data, m_security->store, now);
    if (result.accepted())
      return acceptDvInfo(data, *parsed, now);

    Actions out;
    if (result.verdict == trust::Verdict::NeedKey) {
      m_security->store.suspend(data, result.keyName, now);
      if (!m_keyFetches.count(result.keyName)) {
        m_keyFetches.insert(result.keyName);
        ++m_counters.keyFetches;
        Interest i;
        i.name = result.keyName;
        i.nonce = m_rng.nextU32();
        i.lifetime = m_cfg.fetchLifetime;
        out.push_back(SendInterest{std::move(i)});
        out.push_back(StartTimer{m_cfg.fetchLifetime, KeyFetchTimeout{result.keyName}});
      }
      return out;
    }
    ++m_counters.validationRejects;
    out.push_back(ValidationNotice{data.name, result});
    return out;
  }

  Actions
  onKeyData(const Data& data, SimTime now)
  {
    m_keyFetches.erase(data.name);
    auto arrival = trust::onKeyData(data, m_security->store, now);
    Actions out;
    if (!arrival.keyResult.accepted()) {
      ++m_counters.validationRejects;
      out.push_back(ValidationNotice{data.name, arrival.keyResult});
    }
    for (const auto& r : arrival.resumed) {
      if (r.result.accepted()) {
        auto parsed = parseDvInfoName(r.data.name);
        auto more = acceptDvInfo(r.data, parsed, now);
        out.insert(out.end(), more.begin(), more.end());
      }
      else {
        ++m_counters.validationRejects;
        out.push_back(ValidationNotice{r.data.name, r.result});
      }
    }
    return out;
  }

  Actions
  acceptDvInfo(const Data& data, const DvInfoName& name, SimTime /*now*/)
  {
    NeighborEntry* nb = m_neighbors.find(name.router);
    if (nb == nullptr) {
      ++m_counters.dvinfoFromUnknown;
      return {};
    }
    auto decoded = decodeDvInfo(data.content);
    m_counters.dvinfoMalformedEntries += decoded.malformed;
    auto res = processDvInfo(decoded.entries, *nb, m_table, m_cfg.costStrategy);
    ++m_counters.dvinfoProcessed;

    nb->lastVersion = std::max(nb->lastVersion, name.version);
    if (nb->fetchPending && nb->fetchVersion <= name.version)
      nb->fetchPending = false;

    Actions out;
    for (auto& f : res.fib)
      out.push_back(std::move(f));
    for (auto& c : res.changes)
      out.push_back(RouteNotice{c.before ? RouteNotice::Kind::Updated : RouteNotice::Kind::Added,
                                std::move(c.after)});
    return out;
  }

  Actions
  handleTimer(const EhloTimer&, SimTime now)
  {
    return onEhloTimer(now);
  }

  Actions
  handleTimer(const FetchTimer& t, SimTime /*now*/)
  {
    NeighborEntry* nb = m_neighbors.find(t.neighbor);
    if (nb == nullptr || !nb->fetchPending || nb->fetchVersion != t.version)
      return {};
    if (nb->lastVersion >= t.version) {
      nb->fetchPending = false;
      return {};
    }
    // goes through the local forwarder first; an overheard reply in the CS answers it there
    Actions out;
    sendFetch(*nb, out);
    return out;
  }

  Actions
  handleTimer(const FetchTimeout& t, SimTime /*now*/)
  {
    NeighborEntry* nb = m_neighbors.find(t.neighbor);
    if (nb != nullptr && nb->fetchPending && nb->fetchVersion == t.version) {
      nb->fetchPending = false;
      ++m_counters.fetchTimeouts;
    }
    return {};
  }

  Actions
  handleTimer(const ReplyTimer& t, SimTime now)
  {
    if (!m_pendingReplies.erase(t.name))
      return {};
    Data d;
    d.name = t.name;
    d.content = m_table.encode();
    d.freshness = m_cfg.dvinfoFreshness;
    if (m_security)
      m_security->credentials.keyChain.sign(d, m_security->credentials.keyName());
    pruneReplies(now);
    m_lastReply[t.name] = now;
    ++m_counters.repliesSent;
    return {SendData{std::move(d)}};
  }

  Actions
  handleTimer(const KeyFetchTimeout& t, SimTime /*now*/)
  {
    m_keyFetches.erase(t.keyName);
    return {};
  }

  void
  pruneReplies(SimTime now)
  {
    for (auto it = m_lastReply.begin(); it != m_lastReply.end();) {
      if (now - it->second >= m_cfg.replyDelay)
        it = m_lastReply.erase(it);
      else
        ++it;
    }
  }

private:
  RouterName m_self;
  NdvrConfig m_cfg;
  RouterFaces m_faces;
  Random& m_rng;
  std::optional<RouterSecurity> m_security;

  DvTable m_table;
  NeighborTable m_neighbors;
  size_t m_cursor = 0;
  std::set<Name> m_pendingReplies;
  std::map<Name, SimTime> m_lastReply;
  std::set<Name> m_keyFetches;
  RouterCounters m_counters;
};

} // namespace ndvr::routing

#endif // NDVR_ROUTING_ROUTER_HPP
