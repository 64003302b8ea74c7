/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_PIT_HPP
#define NDVR_NDN_PIT_HPP

#include "ndvr/ndn/name.hpp"

#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>

namespace ndvr::ndn {

struct InRecord
{
  uint32_t nonce;
  SimTime expiry;
};

struct PitEntry
{
  Name name;
  std::map<FaceId, InRecord> inRecords;
  std::set<FaceId> outFaces;

  SimTime
  expiry() const
  {
    SimTime latest{0};
    for (const auto& [face, rec] : inRecords)
      latest = std::max(latest, rec.expiry);
    return latest;
  }

  bool
  isExpired(SimTime now) const
  {
    return expiry() <= now;
  }
};

/// Pending Interest Table, exact-name keyed. Expired entries are invisible to lookups.
class Pit
{
public:
  PitEntry*
  find(const Name& name, SimTime now)
  {
    auto it = m_entries.find(name);
    if (it == m_entries.end())
      return nullptr;
    if (it->second.isExpired(now)) {
      m_entries.erase(it);
      return nullptr;
    }
    return &it->second;
  }

  PitEntry&
  insert(const Name& name)
  {
    if (++m_insertsSincePurge >= PURGE_PERIOD)
      m_insertsSincePurge = 0, m_purgeDue = true;
    auto& e = m_entries[name];
    e.name = name;
    return e;
  }

  void
  erase(const Name& name)
  {
    m_entries.erase(name);
  }

  /// Drops expired entries; the forwarder calls this periodically.
  void
  purge(SimTime now)
  {
    for (auto it = m_entries.begin(); it != m_entries.end();) {
      if (it->second.isExpired(now))
        it = m_entries.erase(it);
      else
        ++it;
    }
    m_purgeDue = false;
  }

  bool
  purgeDue() const
  {
    return m_purgeDue;
  }

  size_t
  size() const
  {
    return m_entries.size();
  }

private:
  static constexpr size_t PURGE_PERIOD = 512;
  std::unordered_map<Name, PitEntry> m_entries;
  size_t m_insertsSincePurge = 0;
  bool m_purgeDue = false;
};

/// Remembers the most recent (name, nonce) pairs, FIFO-bounded.
class DeadNonceList
{
public:
  explicit
  DeadNonceList(size_t capacity = 1024)
    : m_capacity(capacity)
  {
  }

  bool
  contains(const Name& name, uint32_t nonce) const
  {
    return m_set.count({name, nonce}) > 0;
  }

  void
  add(const Name& name, uint32_t nonce)
  {
    if (!m_set.insert({name, nonce}).second)
      return;
    m_order.emplace_back(name, nonce);
    if (m_order.size() > m_capacity) {
      m_set.erase(m_order.front());
      m_order.pop_front();
    }
  }

  size_t
  size() const
  {
    return m_order.size();
  }

private:
  size_t m_capacity;
  std::deque<std::pair<Name, uint32_t>> m_order;
  std::set<std::pair<Name, uint32_t>> m_set;
};

} // namespace ndvr::ndn

#endif // NDVR_NDN_PIT_HPP
