/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_EHLO_HPP
#define NDVR_ROUTING_EHLO_HPP

#include "ndvr/routing/router-name.hpp"

#include <charconv>
#include <vector>

namespace ndvr::routing {

inline const Name&
ehloPrefix()
{
  static const Name prefix{"localhop", "ndvr", "ehlo"};
  return prefix;
}

inline const Name&
dvinfoPrefix()
{
  static const Name prefix{"localhop", "ndvr", "dvinfo"};
  return prefix;
}

/// Strict unsigned decimal: digits only, no sign, no overflow.
inline uint64_t
parseDecimal(const ndn::Component& c)
{
  uint64_t v = 0;
  if (c.empty() || c.front() == '+' || c.front() == '-')
    throw ParseError("not a decimal number: " + c);
  auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
  if (ec != std::errc() || ptr != c.data() + c.size())
    throw ParseError("not a decimal number: " + c);
  return v;
}

struct EhloInfo
{
  RouterName router;
  uint64_t prefixCount = 0;
  uint64_t version = 0;
  std::string digest;
  std::vector<RouterName> prioritySubgroup;

  friend bool operator==(const EhloInfo&, const EhloInfo&) = default;
};

/// `/localhop/ndvr/ehlo/<router>/<#prefixes>/<#ver>/<digest>`
inline Name
makeEhloName(const RouterName& router, uint64_t prefixCount, uint64_t version, const std::string& digest)
{
  Name n = ehloPrefix();
  n.append(router.full());
  n.appendNumber(prefixCount);
  n.appendNumber(version);
  n.append(digest);
  return n;
}

/// Application parameters: the subgroup as a sequence of Name TLVs.
inline Buffer
encodeSubgroup(const std::vector<RouterName>& subgroup)
{
  Buffer out;
  for (const auto& r : subgroup)
    r.full().wireEncode(out);
  return out;
}

inline std::vector<RouterName>
decodeSubgroup(BufferView params)
{
  std::vector<RouterName> out;
  try {
    ndn::tlv::Reader r(params);
    while (!r.atEnd())
      out.push_back(RouterName::parse(Name::fromValue(r.expect(ndn::tlv::Name).value)));
  }
  catch (const ndn::DecodeError& e) {
    throw ParseError(std::string("bad EHLO parameters: ") + e.what());
  }
  return out;
}

/// Throws ParseError when the name or parameters are malformed.
inline EhloInfo
parseEhlo(const Name& name, const std::optional<Buffer>& params)
{
  // prefix (3) + network (>= 1) + marker + label + 3 trailing fields
  if (name.size() < 9 || !ehloPrefix().isPrefixOf(name))
    throw ParseError("malformed EHLO name: " + name.toUri());
  EhloInfo info;
  info.router = RouterName::parse(name.getSubName(3, name.size() - 6));
  info.prefixCount = parseDecimal(name.at(-3));
  info.version = parseDecimal(name.at(-2));
  info.digest = name.at(-1);
  if (params)
    info.prioritySubgroup = decodeSubgroup(*params);
  return info;
}

/// `/localhop/ndvr/dvinfo/<router>/<#ver>`
inline Name
makeDvInfoName(const RouterName& router, uint64_t version)
{
  Name n = dvinfoPrefix();
  n.append(router.full());
  n.appendNumber(version);
  return n;
}

struct DvInfoName
{
  RouterName router;
  uint64_t version;
};

inline DvInfoName
parseDvInfoName(const Name& name)
{
  if (name.size() < 7 || !dvinfoPrefix().isPrefixOf(name))
    throw ParseError("malformed DVINFO name: " + name.toUri());
  return {RouterName::parse(name.getSubName(3, name.size() - 4)), parseDecimal(name.at(-1))};
}

inline std::optional<DvInfoName>
tryParseDvInfoName(const Name& name)
{
  try {
    return parseDvInfoName(name);
  }
  catch (const ParseError&) {
    return std::nullopt;
  }
}

} // namespace ndvr::routing

#endif // NDVR_ROUTING_EHLO_HPP
