/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_TRUST_TRUST_STORE_HPP
#define NDVR_TRUST_TRUST_STORE_HPP

#include "ndvr/trust/key-record.hpp"

#include <map>

namespace ndvr::trust {

/// A Data whose validation is waiting for a key to arrive.
struct PendingValidation
{
  Data data;
  Name neededKey;
  SimTime since;
};

/**
 * @brief Per-node key storage.
 *
 * Anchors are installed at setup. Cached keys are only ever added after the
 * validator has walked their chain to an anchor.
 */
class TrustStore
{
public:
  void
  addAnchor(KeyRecord anchor)
  {
    if (!anchor.isAnchor())
      throw std::invalid_argument("anchor record must have an empty signer: " + anchor.keyName.toUri());
    auto name = anchor.keyName;
    m_anchors[name] = std::move(anchor);
  }

  const KeyRecord*
  findAnchor(const Name& keyName) const
  {
    auto it = m_anchors.find(keyName);
    return it == m_anchors.end() ? nullptr : &it->second;
  }

  const std::map<Name, KeyRecord>&
  anchors() const
  {
    return m_anchors;
  }

  void
  cacheTrustedKey(KeyRecord key)
  {
    auto name = key.keyName;
    m_cached[name] = std::move(key);
  }

  const KeyRecord*
  findCached(const Name& keyName) const
  {
    auto it = m_cached.find(keyName);
    return it == m_cached.end() ? nullptr : &it->second;
  }

  const std::map<Name, KeyRecord>&
  cachedKeys() const
  {
    return m_cached;
  }

  /// Parks @p data until @p keyName arrives; a later Data with the same name replaces it.
  void
  suspend(const Data& data, const Name& keyName, SimTime now)
  {
    m_pending[data.name] = PendingValidation{data, keyName, now};
  }

  bool
  isWaitingFor(const Name& keyName) const
  {
    for (const auto& [_, p] : m_pending)
      if (p.neededKey == keyName)
        return true;
    return false;
  }

  /// Removes and returns every suspended validation waiting on @p keyName.
  std::vector<PendingValidation>
  takePending(const Name& keyName)
  {
    std::vector<PendingValidation> out;
    for (auto it = m_pending.begin(); it != m_pending.end();) {
      if (it->second.neededKey == keyName) {
        out.push_back(std::move(it->second));
        it = m_pending.erase(it);
      }
      else {
        ++it;
      }
    }
    return out;
  }

  const std::map<Name, PendingValidation>&
  pending() const
  {
    return m_pending;
  }

private:
  std::map<Name, KeyRecord> m_anchors;
  std::map<Name, KeyRecord> m_cached;
  std::map<Name, PendingValidation> m_pending;
};

} // namespace ndvr::trust

#endif // NDVR_TRUST_TRUST_STORE_HPP
