/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_TRUST_KEY_RECORD_HPP
#define NDVR_TRUST_KEY_RECORD_HPP

#include "ndvr/ndn/packet.hpp"
#include "ndvr/routing/router-name.hpp"
#include "ndvr/trust/crypto.hpp"

#include <optional>

namespace ndvr::trust {

using ndn::Data;
using ndn::Name;
using routing::RouterName;

constexpr milliseconds KEY_DATA_FRESHNESS{3600000};

/// `/<network>/KEY`
inline Name
anchorKeyName(const Name& network)
{
  Name n = network;
  n.append("KEY");
  return n;
}

/// Router owning a key name `/<network>/<network>/%C1.Router/<label>/KEY`, if it is one.
inline std::optional<RouterName>
routerOfKeyName(const Name& keyName)
{
  if (keyName.size() < 5 || keyName.at(-1) != "KEY")
    return std::nullopt;
  Name body = keyName.getPrefix(-1);
  if (body.size() % 2 != 0)
    return std::nullopt;
  size_t k = (body.size() - 2) / 2;
  Name net = body.getPrefix(static_cast<ptrdiff_t>(k));
  if (body.getSubName(k, k) != net || body.at(-2) != routing::routerMarker())
    return std::nullopt;
  return RouterName(net, body.at(-1));
}

struct KeyRecord
{
  Name keyName;
  Buffer publicKey;
  Name signerKeyName;              ///< empty for a trust anchor
  Buffer signature;                ///< signer's signature over the key Data signed portion
  std::optional<SimTime> expiry;

  bool
  isAnchor() const
  {
    return signerKeyName.empty();
  }

  /// Content is the raw public key, followed by an 8-byte big-endian expiry (µs) when present.
  Buffer
  content() const
  {
    Buffer out = publicKey;
    if (expiry)
      ndn::tlv::appendBigEndian<uint64_t>(out, static_cast<uint64_t>(expiry->count()));
    return out;
  }

  /// The key as a Data packet, ready to be served on an Interest for its name.
  Data
  toData() const
  {
    Data d;
    d.name = keyName;
    d.content = content();
    d.keyLocator = signerKeyName;
    d.freshness = KEY_DATA_FRESHNESS;
    d.signature = signature;
    return d;
  }

  /// Throws DecodeError when the content is not a key.
  static KeyRecord
  fromData(const Data& d)
  {
    KeyRecord k;
    k.keyName = d.name;
    k.signerKeyName = d.keyLocator;
    k.signature = d.signature;
    if (d.content.size() == PUBLIC_KEY_SIZE) {
      k.publicKey = d.content;
    }
    else if (d.content.size() == PUBLIC_KEY_SIZE + 8) {
      k.publicKey.assign(d.content.begin(), d.content.begin() + PUBLIC_KEY_SIZE);
      auto raw = ndn::tlv::readBigEndian<uint64_t>(BufferView(d.content).subspan(PUBLIC_KEY_SIZE));
      k.expiry = SimTime(static_cast<int64_t>(raw));
    }
    else {
      throw ndn::DecodeError("key content has size " + std::to_string(d.content.size()));
    }
    return k;
  }

  friend bool operator==(const KeyRecord&, const KeyRecord&) = default;
};

} // namespace ndvr::trust

#endif // NDVR_TRUST_KEY_RECORD_HPP
