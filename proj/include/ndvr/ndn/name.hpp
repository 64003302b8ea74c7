/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_NDN_NAME_HPP
#define NDVR_NDN_NAME_HPP

#include "ndvr/ndn/tlv.hpp"

#include <algorithm>
#include <compare>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ndvr::ndn {

/// A name component: a non-empty byte string.
using Component = std::string;

/**
 * @brief Hierarchical NDN name.
 *
 * Text form is `/c1/c2/...`; the bytes `/`, `%`, `,` and anything outside
 * 0x21..0x7E are percent-escaped (`,` so names can sit in CSV columns).
 */
class Name
{
public:
  class Error : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  Name() = default;

  /// Parses the text form. Throws Name::Error on malformed input.
  Name(std::string_view uri)
  {
    if (uri.empty() || uri.front() != '/')
      throw Error("name URI must start with '/': " + std::string(uri));
    size_t pos = 1;
    while (pos < uri.size()) {
      size_t end = uri.find('/', pos);
      if (end == std::string_view::npos)
        end = uri.size();
      if (end == pos) {
        // a single trailing slash is tolerated
        if (end == uri.size() - 1)
          break;
        throw Error("empty name component in " + std::string(uri));
      }
      m_components.push_back(unescape(uri.substr(pos, end - pos)));
      pos = end + 1;
    }
  }

  Name(const char* uri)
    : Name(std::string_view(uri))
  {
  }

  Name(const std::string& uri)
    : Name(std::string_view(uri))
  {
  }

  Name(std::initializer_list<Component> components)
  {
    for (const auto& c : components)
      append(c);
  }

  size_t
  size() const
  {
    return m_components.size();
  }

  bool
  empty() const
  {
    return m_components.empty();
  }

  const Component&
  operator[](size_t i) const
  {
    return m_components[i];
  }

  const Component&
  at(ptrdiff_t i) const
  {
    if (i < 0)
      i += static_cast<ptrdiff_t>(size());
    if (i < 0 || static_cast<size_t>(i) >= size())
      throw Error("name component index out of range");
    return m_components[i];
  }

  auto begin() const { return m_components.begin(); }
  auto end() const { return m_components.end(); }

  Name&
  append(Component component)
  {
    if (component.empty())
      throw Error("name components must be non-empty");
    m_components.push_back(std::move(component));
    return *this;
  }

  Name&
  append(const char* component)
  {
    return append(Component(component));
  }

  Name&
  append(const Name& suffix)
  {
    m_components.insert(m_components.end(), suffix.begin(), suffix.end());
    return *this;
  }

  Name&
  appendNumber(uint64_t n)
  {
    return append(std::to_string(n));
  }

  /// First @p n components; a negative @p n drops that many from the end.
  Name
  getPrefix(ptrdiff_t n) const
  {
    if (n < 0)
      n += static_cast<ptrdiff_t>(size());
    n = std::clamp<ptrdiff_t>(n, 0, static_cast<ptrdiff_t>(size()));
    Name out;
    out.m_components.assign(m_components.begin(), m_components.begin() + n);
    return out;
  }

  Name
  getSubName(size_t start, size_t count = std::string::npos) const
  {
    Name out;
    if (start >= size())
      return out;
    size_t last = count == std::string::npos ? size() : std::min(size(), start + count);
    out.m_components.assign(m_components.begin() + start, m_components.begin() + last);
    return out;
  }

  bool
  isPrefixOf(const Name& other) const
  {
    if (size() > other.size())
      return false;
    return std::equal(begin(), end(), other.begin());
  }

  /// NDN canonical order: component-wise; shorter component sorts first, then bytewise.
  int
  compare(const Name& other) const
  {
    size_t n = std::min(size(), other.size());
    for (size_t i = 0; i < n; ++i) {
      const auto& a = m_components[i];
      const auto& b = other.m_components[i];
      if (a.size() != b.size())
        return a.size() < b.size() ? -1 : 1;
      int c = a.compare(b);
      if (c != 0)
        return c < 0 ? -1 : 1;
    }
    if (size() == other.size())
      return 0;
    return size() < other.size() ? -1 : 1;
  }

  friend bool
  operator==(const Name& a, const Name& b)
  {
    return a.m_components == b.m_components;
  }

  friend std::strong_ordering
  operator<=>(const Name& a, const Name& b)
  {
    return a.compare(b) <=> 0;
  }

  std::string
  toUri() const
  {
    if (empty())
      return "/";
    std::string out;
    for (const auto& c : m_components) {
      out.push_back('/');
      escapeTo(out, c);
    }
    return out;
  }

  void
  wireEncode(Buffer& out) const
  {
    Buffer inner;
    for (const auto& c : m_components) {
      if (c.size() > tlv::MAX_LENGTH)
        throw EncodingError("name component longer than 65535 bytes");
      tlv::appendBlock(inner, tlv::NameComponent,
                       BufferView(reinterpret_cast<const uint8_t*>(c.data()), c.size()));
    }
    tlv::appendBlock(out, tlv::Name, inner);
  }

  Buffer
  wireEncode() const
  {
    Buffer out;
    wireEncode(out);
    return out;
  }

  /// Decodes the value part of a Name TLV.
  static Name
  fromValue(BufferView value)
  {
    Name n;
    tlv::Reader r(value);
    while (!r.atEnd()) {
      auto e = r.expect(tlv::NameComponent);
      if (e.value.empty())
        throw DecodeError("empty name component");
      n.m_components.emplace_back(reinterpret_cast<const char*>(e.value.data()), e.value.size());
    }
    return n;
  }

  /// Decodes a complete Name TLV; trailing bytes are an error.
  static Name
  wireDecode(BufferView wire)
  {
    tlv::Reader r(wire);
    auto e = r.expect(tlv::Name);
    if (!r.atEnd())
      throw DecodeError("trailing bytes after Name");
    return fromValue(e.value);
  }

  size_t
  hash() const
  {
    size_t h = 1469598103934665603ULL;
    for (const auto& c : m_components)
      h = (h ^ std::hash<std::string>{}(c)) * 1099511628211ULL;
    return h;
  }

private:
  static bool
  isPlain(uint8_t b)
  {
    return b >= 0x21 && b <= 0x7E && b != '/' && b != '%' && b != ',';
  }

  static void
  escapeTo(std::string& out, const Component& c)
  {
    static constexpr char hex[] = "0123456789ABCDEF";
    for (char ch : c) {
      auto b = static_cast<uint8_t>(ch);
      if (isPlain(b)) {
        out.push_back(ch);
      }
      else {
        out.push_back('%');
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0x0F]);
      }
    }
  }

  static int
  hexValue(char c)
  {
    if (c >= '0' && c <= '9')
      return c - '0';
    if (c >= 'a' && c <= 'f')
      return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
      return c - 'A' + 10;
    return -1;
  }

  static Component
  unescape(std::string_view s)
  {
    Component out;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '%') {
        out.push_back(s[i]);
        continue;
      }
      if (i + 2 >= s.size())
        throw Error("truncated percent escape");
      int hi = hexValue(s[i + 1]);
      int lo = hexValue(s[i + 2]);
      if (hi < 0 || lo < 0)
        throw Error("bad percent escape");
      out.push_back(static_cast<char>((hi << 4) | lo));
      i += 2;
    }
    return out;
  }

private:
  std::vector<Component> m_components;
};

inline std::ostream&
operator<<(std::ostream& os, const Name& name)
{
  return os << name.toUri();
}

inline Buffer
encodeName(const Name& n)
{
  return n.wireEncode();
}

inline Name
decodeName(BufferView wire)
{
  return Name::wireDecode(wire);
}

} // namespace ndvr::ndn

template<>
struct std::hash<ndvr::ndn::Name>
{
  size_t
  operator()(const ndvr::ndn::Name& n) const noexcept
  {
    return n.hash();
  }
};

#endif // NDVR_NDN_NAME_HPP
