/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_TRUST_KEY_CHAIN_HPP
#define NDVR_TRUST_KEY_CHAIN_HPP

#include "ndvr/trust/trust-store.hpp"

#include <set>

namespace ndvr::trust {

class SigningError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SetupError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Private keys held by one party, indexed by key name.
class KeyChain
{
public:
  void
  add(const Name& keyName, KeyPair key)
  {
    m_keys[keyName] = std::move(key);
  }

  bool
  has(const Name& keyName) const
  {
    return m_keys.count(keyName) > 0;
  }

  const KeyPair&
  get(const Name& keyName) const
  {
    auto it = m_keys.find(keyName);
    if (it == m_keys.end())
      throw SigningError("no private key for " + keyName.toUri());
    return it->second;
  }

  /// Sets the KeyLocator and signs the canonical signed portion.
  void
  sign(Data& data, const Name& keyName) const
  {
    const KeyPair& key = get(keyName);
    data.keyLocator = keyName;
    data.signature = trust::sign(data.signedPortion(), key);
  }

private:
  std::map<Name, KeyPair> m_keys;
};

/// Free-function form of KeyChain::sign.
inline Data
signData(Data data, const KeyChain& keys, const Name& keyName)
{
  keys.sign(data, keyName);
  return data;
}

/// Material one router needs: its signing key, its served key record and the anchor.
struct RouterCredentials
{
  RouterName router;
  KeyChain keyChain;
  KeyRecord ownKey;
  KeyRecord anchor;

  Name
  keyName() const
  {
    return ownKey.keyName;
  }

  /// A store with just the anchor installed; neighbor keys are fetched on demand.
  TrustStore
  makeStore() const
  {
    TrustStore store;
    store.addAnchor(anchor);
    return store;
  }
};

struct GeneratedKeys
{
  KeyRecord anchor;
  KeyChain keyChain; ///< every private key, anchor included
  std::map<Name, KeyRecord> routerKeys;
  std::vector<RouterCredentials> credentials;

  TrustStore
  makeStore() const
  {
    TrustStore store;
    store.addAnchor(anchor);
    return store;
  }
};

/// Signs @p record with @p signer and fills its signature and signer fields.
inline void
certify(KeyRecord& record, const Name& signerName, const KeyPair& signer)
{
  record.signerKeyName = signerName;
  Data d = record.toData();
  record.signature = trust::sign(d.signedPortion(), signer);
}

/**
 * @brief Builds the two-level hierarchy: one network anchor and one
 * anchor-signed key per router. Keys are a pure function of @p seed.
 */
inline GeneratedKeys
generateKeys(const Name& network, const std::vector<RouterName>& routers, uint64_t seed,
             std::optional<SimTime> routerKeyExpiry = std::nullopt)
{
  std::set<Name> seen;
  for (const auto& r : routers) {
    if (!(r.network == network))
      throw SetupError("router " + r.toUri() + " is outside network " + network.toUri());
    if (!seen.insert(r.full()).second)
      throw SetupError("duplicate router name " + r.toUri());
  }

  GeneratedKeys out;
  Name anchorName = anchorKeyName(network);
  KeyPair anchorKey = deriveKeyPair(seed, anchorName.toUri());
  out.anchor.keyName = anchorName;
  out.anchor.publicKey = anchorKey.publicKey;
  // self-signed so the record carries integrity, but trust is by installation only
  out.anchor.signature = trust::sign(out.anchor.toData().signedPortion(), anchorKey);
  out.keyChain.add(anchorName, anchorKey);

  for (const auto& r : routers) {
    Name keyName = r.keyName();
    KeyPair kp = deriveKeyPair(seed, keyName.toUri());
    KeyRecord rec;
    rec.keyName = keyName;
    rec.publicKey = kp.publicKey;
    rec.expiry = routerKeyExpiry;
    certify(rec, anchorName, anchorKey);

    out.keyChain.add(keyName, kp);
    out.routerKeys[keyName] = rec;

    RouterCredentials cred{r, {}, rec, out.anchor};
    cred.keyChain.add(keyName, kp);
    out.credentials.push_back(std::move(cred));
  }
  return out;
}

} // namespace ndvr::trust

#endif // NDVR_TRUST_KEY_CHAIN_HPP
