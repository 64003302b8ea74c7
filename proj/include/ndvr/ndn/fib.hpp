/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_FIB_HPP
#define NDVR_NDN_FIB_HPP

#include "ndvr/ndn/name.hpp"

#include <map>
#include <set>
#include <unordered_map>

namespace ndvr::ndn {

using FaceSet = std::set<FaceId>;

struct FibEntry
{
  Name prefix;
  FaceSet nextHops;
};

/// Forwarding Information Base with longest-prefix match. The default route is the entry for `/`.
class Fib
{
public:
  void
  addNextHop(const Name& prefix, FaceId face)
  {
    auto& entry = m_entries[prefix];
    entry.prefix = prefix;
    entry.nextHops.insert(face);
  }

  void
  removeNextHop(const Name& prefix, FaceId face)
  {
    auto it = m_entries.find(prefix);
    if (it == m_entries.end())
      return;
    it->second.nextHops.erase(face);
    if (it->second.nextHops.empty())
      m_entries.erase(it);
  }

  /// Removes @p face from every entry.
  void
  removeFace(FaceId face)
  {
    for (auto it = m_entries.begin(); it != m_entries.end();) {
      it->second.nextHops.erase(face);
      if (it->second.nextHops.empty())
        it = m_entries.erase(it);
      else
        ++it;
    }
  }

  /// Longest-prefix match; nullptr when nothing matches.
  const FibEntry*
  findLongestPrefixMatch(const Name& name) const
  {
    for (ptrdiff_t len = static_cast<ptrdiff_t>(name.size()); len >= 0; --len) {
      auto it = m_entries.find(len == static_cast<ptrdiff_t>(name.size()) ? name : name.getPrefix(len));
      if (it != m_entries.end())
        return &it->second;
    }
    return nullptr;
  }

  FaceSet
  lookup(const Name& name) const
  {
    auto entry = findLongestPrefixMatch(name);
    return entry ? entry->nextHops : FaceSet{};
  }

  const FaceSet*
  findExact(const Name& prefix) const
  {
    auto it = m_entries.find(prefix);
    return it == m_entries.end() ? nullptr : &it->second.nextHops;
  }

  size_t
  size() const
  {
    return m_entries.size();
  }

  /// Entries in canonical name order, for dumps.
  std::vector<FibEntry>
  entries() const
  {
    std::vector<FibEntry> out;
    for (const auto& [prefix, entry] : m_entries)
      out.push_back(entry);
    std::sort(out.begin(), out.end(), [] (const auto& a, const auto& b) { return a.prefix < b.prefix; });
    return out;
  }

private:
  std::unordered_map<Name, FibEntry> m_entries;
};

inline FaceSet
fibLookup(const Fib& fib, const Name& name)
{
  return fib.lookup(name);
}

} // namespace ndvr::ndn

#endif // NDVR_NDN_FIB_HPP
