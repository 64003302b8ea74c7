/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_NEIGHBOR_TABLE_HPP
#define NDVR_ROUTING_NEIGHBOR_TABLE_HPP

#include "ndvr/routing/router-name.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace ndvr::routing {

struct NeighborEntry
{
  RouterName router;
  uint64_t lastVersion = 0; ///< version of the last DVINFO processed from this neighbor
  SimTime lastSeen{0};
  SimTime firstSeen{0};
  FaceId faceId = INVALID_FACE;

  // state advertised in the most recent EHLO
  uint64_t advertisedVersion = 0;
  uint64_t advertisedPrefixes = 0;
  std::string advertisedDigest;

  // outstanding DVINFO fetch (scheduled or in flight)
  bool fetchPending = false;
  uint64_t fetchVersion = 0;
};

/// Live neighbors keyed by full router name.
class NeighborTable
{
public:
  using Map = std::map<Name, NeighborEntry>;

  NeighborEntry*
  find(const RouterName& r)
  {
    auto it = m_entries.find(r.full());
    return it == m_entries.end() ? nullptr : &it->second;
  }

  const NeighborEntry*
  find(const RouterName& r) const
  {
    auto it = m_entries.find(r.full());
    return it == m_entries.end() ? nullptr : &it->second;
  }

  /// Inserts or refreshes a neighbor; returns the entry and whether it is new.
  std::pair<NeighborEntry*, bool>
  upsert(const RouterName& r, FaceId face, SimTime now)
  {
    auto [it, isNew] = m_entries.try_emplace(r.full());
    NeighborEntry& e = it->second;
    if (isNew) {
      e.router = r;
      e.firstSeen = now;
    }
    e.lastSeen = now;
    e.faceId = face;
    return {&e, isNew};
  }

  bool
  erase(const RouterName& r)
  {
    return m_entries.erase(r.full()) > 0;
  }

  /// Removes every neighbor with now - lastSeen > timeout.
  std::vector<NeighborEntry>
  removeExpired(SimTime now, SimTime timeout)
  {
    std::vector<NeighborEntry> removed;
    for (auto it = m_entries.begin(); it != m_entries.end();) {
      if (now - it->second.lastSeen > timeout) {
        removed.push_back(std::move(it->second));
        it = m_entries.erase(it);
      }
      else {
        ++it;
      }
    }
    return removed;
  }

  size_t
  size() const
  {
    return m_entries.size();
  }

  bool
  empty() const
  {
    return m_entries.empty();
  }

  const Map&
  entries() const
  {
    return m_entries;
  }

  /// Neighbors ordered by firstSeen, ties broken by router name.
  std::vector<RouterName>
  ordered() const
  {
    std::vector<const NeighborEntry*> v;
    v.reserve(m_entries.size());
    for (const auto& [_, e] : m_entries)
      v.push_back(&e);
    std::stable_sort(v.begin(), v.end(), [] (const auto* a, const auto* b) {
      if (a->firstSeen != b->firstSeen)
        return a->firstSeen < b->firstSeen;
      return a->router < b->router;
    });
    std::vector<RouterName> out;
    out.reserve(v.size());
    for (const auto* e : v)
      out.push_back(e->router);
    return out;
  }

private:
  Map m_entries;
};

struct Subgroup
{
  std::vector<RouterName> members;
  size_t cursor;
};

/**
 * @brief Round-robin choice of the neighbors asked to fetch immediately.
 *
 * Takes `size` neighbors cyclically from `cursor`; the cursor advances by
 * `size` modulo the neighbor count. With no more neighbors than `size` the
 * whole list is returned and the cursor is left in place.
 */
inline Subgroup
selectPrioritySubgroup(const std::vector<RouterName>& neighbors, size_t cursor, size_t size)
{
  if (size < 1)
    throw std::invalid_argument("subgroup size must be >= 1");
  const size_t n = neighbors.size();
  if (n == 0)
    return {{}, 0};
  cursor %= n;
  if (n <= size)
    return {neighbors, cursor};
  Subgroup out{{}, (cursor + size) % n};
  out.members.reserve(size);
  for (size_t i = 0; i < size; ++i)
    out.members.push_back(neighbors[(cursor + i) % n]);
  return out;
}

} // namespace ndvr::routing

#endif // NDVR_ROUTING_NEIGHBOR_TABLE_HPP
