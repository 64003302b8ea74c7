/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_CONTENT_STORE_HPP
#define NDVR_NDN_CONTENT_STORE_HPP

#include "ndvr/ndn/packet.hpp"

#include <deque>
#include <unordered_map>

namespace ndvr::ndn {

/// NDVR protocol namespace; overheard Data under it may be cached unsolicited.
inline const Name&
ndvrUnsolicitedPrefix()
{
  static const Name prefix{"localhop", "ndvr"};
  return prefix;
}

/**
 * @brief FIFO-evicting Content Store.
 *
 * Entries remember whether the Data arrived over the radio, so that a
 * localhop Interest from a neighbor is never answered with relayed Data.
 */
class ContentStore
{
public:
  struct Entry
  {
    Data data;
    SimTime inserted;
    bool fromRadio;
  };

  explicit
  ContentStore(size_t capacity = 256, bool cacheUnsolicited = false)
    : m_capacity(capacity)
    , m_cacheUnsolicited(cacheUnsolicited)
  {
  }

  bool
  cacheUnsolicited() const
  {
    return m_cacheUnsolicited;
  }

  void
  setCacheUnsolicited(bool on)
  {
    m_cacheUnsolicited = on;
  }

  /// Policy decision for Data that matched no PIT entry.
  bool
  admitsUnsolicited(const Name& name) const
  {
    return m_cacheUnsolicited && ndvrUnsolicitedPrefix().isPrefixOf(name);
  }

  void
  insert(const Data& data, SimTime now, bool fromRadio)
  {
    if (m_capacity == 0)
      return;
    auto it = m_entries.find(data.name);
    if (it != m_entries.end()) {
      it->second.data = data;
      it->second.fromRadio = it->second.fromRadio && fromRadio;
      return;
    }
    m_entries.emplace(data.name, Entry{data, now, fromRadio});
    m_fifo.push_back(data.name);
    while (m_entries.size() > m_capacity) {
      m_entries.erase(m_fifo.front());
      m_fifo.pop_front();
    }
  }

  const Entry*
  find(const Name& name) const
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  size_t
  size() const
  {
    return m_entries.size();
  }

  size_t
  capacity() const
  {
    return m_capacity;
  }

private:
  size_t m_capacity;
  bool m_cacheUnsolicited;
  std::unordered_map<Name, Entry> m_entries;
  std::deque<Name> m_fifo;
};

} // namespace ndvr::ndn

#endif // NDVR_NDN_CONTENT_STORE_HPP
