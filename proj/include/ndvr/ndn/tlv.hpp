/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_TLV_HPP
#define NDVR_NDN_TLV_HPP

#include "ndvr/common.hpp"

#include <stdexcept>

namespace ndvr::ndn {

class EncodingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// TLV type numbers. The full layout is described in docs/wire-format.md.
namespace tlv {

enum : uint8_t {
  Interest = 0x05,
  Data = 0x06,
  Name = 0x07,
  NameComponent = 0x08,
  Nonce = 0x0A,
  InterestLifetime = 0x0C,
  Content = 0x15,
  SignatureValue = 0x17,
  FreshnessPeriod = 0x19,
  KeyLocator = 0x1C,
  ApplicationParameters = 0x24,
  DvInfoEntry = 0x80,
};

/// Largest length the two-byte form can carry.
constexpr size_t MAX_LENGTH = 0xFFFF;

inline void
appendLength(Buffer& out, size_t length)
{
  if (length < 253) {
    out.push_back(static_cast<uint8_t>(length));
  }
  else if (length <= MAX_LENGTH) {
    out.push_back(0xFD);
    out.push_back(static_cast<uint8_t>(length >> 8));
    out.push_back(static_cast<uint8_t>(length & 0xFF));
  }
  else {
    throw EncodingError("TLV length " + std::to_string(length) + " exceeds 65535");
  }
}

inline void
appendBlock(Buffer& out, uint8_t type, BufferView value)
{
  out.push_back(type);
  appendLength(out, value.size());
  out.insert(out.end(), value.begin(), value.end());
}

template<typename T>
void
appendBigEndian(Buffer& out, T value)
{
  for (int shift = (sizeof(T) - 1) * 8; shift >= 0; shift -= 8)
    out.push_back(static_cast<uint8_t>(value >> shift));
}

template<typename T>
T
readBigEndian(BufferView bytes)
{
  T value = 0;
  for (uint8_t b : bytes)
    value = static_cast<T>((value << 8) | b);
  return value;
}

/// One parsed element: type plus a view of its value.
struct Element
{
  uint8_t type;
  BufferView value;
};

/**
 * @brief Sequential reader over a TLV byte string.
 *
 * Lengths must use the shortest form; 0xFE/0xFF length prefixes are rejected.
 */
class Reader
{
public:
  explicit
  Reader(BufferView input)
    : m_input(input)
  {
  }

  bool
  atEnd() const
  {
    return m_pos == m_input.size();
  }

  uint8_t
  peekType() const
  {
    if (atEnd())
      throw DecodeError("unexpected end of input");
    return m_input[m_pos];
  }

  Element
  read()
  {
    uint8_t type = peekType();
    ++m_pos;
    size_t length = readLength();
    if (m_input.size() - m_pos < length)
      throw DecodeError("truncated TLV value");
    Element e{type, m_input.subspan(m_pos, length)};
    m_pos += length;
    return e;
  }

  Element
  expect(uint8_t type)
  {
    Element e = read();
    if (e.type != type)
      throw DecodeError("expected TLV type " + std::to_string(type) + ", got " + std::to_string(e.type));
    return e;
  }

  BufferView
  takeRaw(size_t n)
  {
    if (m_input.size() - m_pos < n)
      throw DecodeError("truncated fixed-width field");
    auto v = m_input.subspan(m_pos, n);
    m_pos += n;
    return v;
  }

  size_t
  position() const
  {
    return m_pos;
  }

private:
  size_t
  readLength()
  {
    if (atEnd())
      throw DecodeError("missing TLV length");
    uint8_t first = m_input[m_pos++];
    if (first < 253)
      return first;
    if (first != 0xFD)
      throw DecodeError("TLV length form not supported");
    if (m_input.size() - m_pos < 2)
      throw DecodeError("truncated TLV length");
    size_t length = (size_t(m_input[m_pos]) << 8) | m_input[m_pos + 1];
    m_pos += 2;
    if (length < 253)
      throw DecodeError("non-minimal TLV length");
    return length;
  }

private:
  BufferView m_input;
  size_t m_pos = 0;
};

} // namespace tlv
} // namespace ndvr::ndn

#endif // NDVR_NDN_TLV_HPP
