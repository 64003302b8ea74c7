/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_DV_TABLE_HPP
#define NDVR_ROUTING_DV_TABLE_HPP

#include "ndvr/routing/router-name.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace ndvr::routing {

constexpr uint32_t COST_INFINITY = std::numeric_limits<uint32_t>::max();

struct RouteEntry
{
  Name prefix;
  uint32_t cost = 0;
  uint64_t seqNum = 0;
  std::optional<RouterName> nextHop; ///< nullopt means LOCAL
  FaceId faceId = INVALID_FACE;      ///< INVALID_FACE for local entries

  bool
  isLocal() const
  {
    return !nextHop.has_value();
  }

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

/// One advertised row as carried in DVINFO content.
struct DvInfoEntry
{
  Name prefix;
  uint32_t cost;
  uint64_t seqNum;

  friend bool operator==(const DvInfoEntry&, const DvInfoEntry&) = default;
};

/// Appends `0x80 <len> <Name TLV> <cost:4 BE> <seq:8 BE>`.
inline void
encodeDvInfoEntry(Buffer& out, const Name& prefix, uint32_t cost, uint64_t seqNum)
{
  Buffer inner;
  prefix.wireEncode(inner);
  ndn::tlv::appendBigEndian<uint32_t>(inner, cost);
  ndn::tlv::appendBigEndian<uint64_t>(inner, seqNum);
  ndn::tlv::appendBlock(out, ndn::tlv::DvInfoEntry, inner);
}

struct DecodedDvInfo
{
  std::vector<DvInfoEntry> entries;
  size_t malformed = 0;
};

/**
 * @brief Decodes DVINFO content.
 *
 * A malformed entry is skipped and counted. If the outer framing itself is
 * broken the rest of the buffer is counted as one malformed entry.
 */
inline DecodedDvInfo
decodeDvInfo(BufferView content)
{
  DecodedDvInfo out;
  ndn::tlv::Reader r(content);
  while (!r.atEnd()) {
    ndn::tlv::Element e;
    try {
      e = r.read();
    }
    catch (const ndn::DecodeError&) {
      ++out.malformed;
      break;
    }
    if (e.type != ndn::tlv::DvInfoEntry) {
      ++out.malformed;
      continue;
    }
    try {
      ndn::tlv::Reader inner(e.value);
      Name prefix = Name::fromValue(inner.expect(ndn::tlv::Name).value);
      uint32_t cost = ndn::tlv::readBigEndian<uint32_t>(inner.takeRaw(4));
      uint64_t seq = ndn::tlv::readBigEndian<uint64_t>(inner.takeRaw(8));
      if (!inner.atEnd())
        throw ndn::DecodeError("trailing bytes in DVINFO entry");
      out.entries.push_back({std::move(prefix), cost, seq});
    }
    catch (const ndn::DecodeError&) {
      ++out.malformed;
    }
  }
  return out;
}

/// 64-bit FNV-1a, rendered as 16 lowercase hex characters.
inline std::string
fnv1a64Hex(BufferView bytes)
{
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/**
 * @brief Distance-vector table: one route per prefix plus a version and digest.
 *
 * The version increases exactly when the entry set changes; the digest always
 * reflects the current entries.
 */
class DvTable
{
public:
  using Entries = std::map<Name, RouteEntry>;

  /// Lowest cost ever held for a prefix at its newest sequence number. Kept after the route is deleted.
  struct Feasibility
  {
    uint64_t seqNum;
    uint32_t cost;
  };

  DvTable()
  {
    refreshDigest();
  }

  const Entries&
  entries() const
  {
    return m_entries;
  }

  const RouteEntry*
  find(const Name& prefix) const
  {
    auto it = m_entries.find(prefix);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  size_t
  size() const
  {
    return m_entries.size();
  }

  uint64_t
  version() const
  {
    return m_version;
  }

  const std::string&
  digest() const
  {
    return m_digest;
  }

  /// Content bytes for a DVINFO reply, entries in canonical prefix order.
  Buffer
  encode() const
  {
    Buffer out;
    for (const auto& [prefix, e] : m_entries)
      encodeDvInfoEntry(out, prefix, e.cost, e.seqNum);
    return out;
  }

  const Feasibility*
  feasibility(const Name& prefix) const
  {
    auto it = m_feasible.find(prefix);
    return it == m_feasible.end() ? nullptr : &it->second;
  }

  /// Writes or replaces one entry without touching the version; callers batch via commit().
  void
  put(RouteEntry entry)
  {
    auto it = m_entries.find(entry.prefix);
    if (it != m_entries.end() && it->second == entry)
      return;
    auto [fd, fresh] = m_feasible.try_emplace(entry.prefix, Feasibility{entry.seqNum, entry.cost});
    if (!fresh) {
      if (entry.seqNum > fd->second.seqNum)
        fd->second = {entry.seqNum, entry.cost};
      else if (entry.seqNum == fd->second.seqNum)
        fd->second.cost = std::min(fd->second.cost, entry.cost);
    }
    auto prefix = entry.prefix;
    m_entries[prefix] = std::move(entry);
    m_dirty = true;
  }

  bool
  erase(const Name& prefix)
  {
    if (m_entries.erase(prefix) == 0)
      return false;
    m_dirty = true;
    return true;
  }

  /// Bumps the version once and recomputes the digest if anything changed since the last commit.
  bool
  commit()
  {
    if (!m_dirty)
      return false;
    ++m_version;
    refreshDigest();
    m_dirty = false;
    return true;
  }

  /**
   * @brief Announces a locally produced prefix.
   *
   * A new prefix starts at sequence number 1; a re-announcement increments it.
   * A learned route for the same prefix is replaced.
   */
  const RouteEntry&
  advertiseLocalPrefix(const Name& prefix)
  {
    auto it = m_entries.find(prefix);
    uint64_t seq = 1;
    if (it != m_entries.end())
      seq = it->second.seqNum + 1;
    put(RouteEntry{prefix, 0, seq, std::nullopt, INVALID_FACE});
    commit();
    return m_entries.at(prefix);
  }

  /// Routing-table dump, `prefix,cost,seqnum,nexthop,face`.
  std::string
  toCsv() const
  {
    std::ostringstream os;
    os << "prefix,cost,seqnum,nexthop,face\n";
    for (const auto& [prefix, e] : m_entries) {
      os << prefix.toUri() << ',' << e.cost << ',' << e.seqNum << ',';
      if (e.isLocal())
        os << "LOCAL,LOCAL\n";
      else
        os << e.nextHop->toUri() << ',' << e.faceId << '\n';
    }
    return os.str();
  }

private:
  void
  refreshDigest()
  {
    m_digest = fnv1a64Hex(encode());
  }

private:
  Entries m_entries;
  std::map<Name, Feasibility> m_feasible;
  uint64_t m_version = 0;
  std::string m_digest;
  bool m_dirty = false;
};

/// Digest over a set of entries, independent of insertion order.
inline std::string
computeDigest(std::vector<DvInfoEntry> entries)
{
  std::sort(entries.begin(), entries.end(),
            [] (const auto& a, const auto& b) { return a.prefix < b.prefix; });
  Buffer bytes;
  for (const auto& e : entries)
    encodeDvInfoEntry(bytes, e.prefix, e.cost, e.seqNum);
  return fnv1a64Hex(bytes);
}

} // namespace ndvr::routing

#endif // NDVR_ROUTING_DV_TABLE_HPP
