/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_PACKET_HPP
#define NDVR_NDN_PACKET_HPP

#include "ndvr/ndn/name.hpp"

#include <optional>
#include <variant>

namespace ndvr::ndn {

constexpr milliseconds DEFAULT_INTEREST_LIFETIME{4000};

struct Interest
{
  Name name;
  uint32_t nonce = 0;
  milliseconds lifetime = DEFAULT_INTEREST_LIFETIME;
  std::optional<Buffer> appParameters;

  friend bool operator==(const Interest&, const Interest&) = default;
};

struct Data
{
  Name name;
  Buffer content;
  Name keyLocator;
  Buffer signature;
  milliseconds freshness{0};

  friend bool operator==(const Data&, const Data&) = default;

  /// Bytes covered by the signature: Name, Content, KeyLocator and FreshnessPeriod TLVs, in that order.
  Buffer
  signedPortion() const
  {
    Buffer out;
    name.wireEncode(out);
    tlv::appendBlock(out, tlv::Content, content);
    Buffer locator;
    keyLocator.wireEncode(locator);
    tlv::appendBlock(out, tlv::KeyLocator, locator);
    Buffer fresh;
    tlv::appendBigEndian<uint32_t>(fresh, static_cast<uint32_t>(freshness.count()));
    tlv::appendBlock(out, tlv::FreshnessPeriod, fresh);
    return out;
  }
};

using Packet = std::variant<Interest, Data>;

inline Buffer
encodeInterest(const Interest& interest)
{
  Buffer inner;
  interest.name.wireEncode(inner);
  Buffer field;
  tlv::appendBigEndian<uint32_t>(field, interest.nonce);
  tlv::appendBlock(inner, tlv::Nonce, field);
  field.clear();
  auto lifetime = interest.lifetime.count();
  if (lifetime < 0 || lifetime > UINT32_MAX)
    throw EncodingError("interest lifetime out of range");
  tlv::appendBigEndian<uint32_t>(field, static_cast<uint32_t>(lifetime));
  tlv::appendBlock(inner, tlv::InterestLifetime, field);
  if (interest.appParameters)
    tlv::appendBlock(inner, tlv::ApplicationParameters, *interest.appParameters);
  Buffer out;
  tlv::appendBlock(out, tlv::Interest, inner);
  return out;
}

inline Buffer
encodeData(const Data& data)
{
  if (data.freshness.count() < 0 || data.freshness.count() > UINT32_MAX)
    throw EncodingError("freshness period out of range");
  Buffer inner = data.signedPortion();
  tlv::appendBlock(inner, tlv::SignatureValue, data.signature);
  Buffer out;
  tlv::appendBlock(out, tlv::Data, inner);
  return out;
}

inline Buffer
encodePacket(const Packet& p)
{
  return std::visit([] (const auto& pkt) -> Buffer {
    if constexpr (std::is_same_v<std::decay_t<decltype(pkt)>, Interest>)
      return encodeInterest(pkt);
    else
      return encodeData(pkt);
  }, p);
}

namespace detail {

inline uint32_t
decodeU32(const tlv::Element& e)
{
  if (e.value.size() != 4)
    throw DecodeError("expected a 4-byte field");
  return tlv::readBigEndian<uint32_t>(e.value);
}

inline Interest
decodeInterestValue(BufferView value)
{
  tlv::Reader r(value);
  Interest interest;
  interest.name = Name::fromValue(r.expect(tlv::Name).value);
  interest.nonce = decodeU32(r.expect(tlv::Nonce));
  interest.lifetime = milliseconds(decodeU32(r.expect(tlv::InterestLifetime)));
  if (!r.atEnd()) {
    auto params = r.expect(tlv::ApplicationParameters);
    interest.appParameters = Buffer(params.value.begin(), params.value.end());
  }
  if (!r.atEnd())
    throw DecodeError("unexpected trailing field in Interest");
  return interest;
}

inline Data
decodeDataValue(BufferView value)
{
  tlv::Reader r(value);
  Data data;
  data.name = Name::fromValue(r.expect(tlv::Name).value);
  auto content = r.expect(tlv::Content);
  data.content.assign(content.value.begin(), content.value.end());
  data.keyLocator = Name::wireDecode(r.expect(tlv::KeyLocator).value);
  data.freshness = milliseconds(decodeU32(r.expect(tlv::FreshnessPeriod)));
  auto sig = r.expect(tlv::SignatureValue);
  data.signature.assign(sig.value.begin(), sig.value.end());
  if (!r.atEnd())
    throw DecodeError("unexpected trailing field in Data");
  return data;
}

} // namespace detail

/// Decodes one Interest or Data; trailing bytes or an unknown outer type throw DecodeError.
inline Packet
decodePacket(BufferView wire)
{
  tlv::Reader r(wire);
  auto outer = r.read();
  if (!r.atEnd())
    throw DecodeError("trailing bytes after packet");
  switch (outer.type) {
  case tlv::Interest:
    return detail::decodeInterestValue(outer.value);
  case tlv::Data:
    return detail::decodeDataValue(outer.value);
  default:
    throw DecodeError("unknown packet type " + std::to_string(outer.type));
  }
}

inline const Name&
packetName(const Packet& p)
{
  return std::visit([] (const auto& pkt) -> const Name& { return pkt.name; }, p);
}

} // namespace ndvr::ndn

#endif // NDVR_NDN_PACKET_HPP
