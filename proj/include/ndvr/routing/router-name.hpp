/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_ROUTER_NAME_HPP
#define NDVR_ROUTING_ROUTER_NAME_HPP

#include "ndvr/ndn/name.hpp"

#include <optional>

namespace ndvr::routing {

using ndn::Name;

/// The router command marker component, bytes C1 2E 52 6F 75 74 65 72 ("%C1.Router").
inline const ndn::Component&
routerMarker()
{
  static const ndn::Component marker = Name("/%C1.Router")[0];
  return marker;
}

class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// `<network>/%C1.Router/<label>`, e.g. `/ufba/%C1.Router/A`.
struct RouterName
{
  Name network;
  ndn::Component label;

  RouterName() = default;

  RouterName(Name net, ndn::Component lbl)
    : network(std::move(net))
    , label(std::move(lbl))
  {
    if (network.empty())
      throw ParseError("router network prefix must be non-empty");
    if (label.empty())
      throw ParseError("router label must be non-empty");
  }

  Name
  full() const
  {
    Name n = network;
    n.append(routerMarker());
    n.append(label);
    return n;
  }

  /// `/<network>/<RouterName>/KEY`
  Name
  keyName() const
  {
    Name n = network;
    n.append(full());
    n.append("KEY");
    return n;
  }

  std::string
  toUri() const
  {
    return full().toUri();
  }

  /// Parses a full router name; the marker must be the second-to-last component.
  static RouterName
  parse(const Name& full)
  {
    if (full.size() < 3 || full.at(-2) != routerMarker())
      throw ParseError("not a router name: " + full.toUri());
    return RouterName(full.getPrefix(-2), full.at(-1));
  }

  static std::optional<RouterName>
  tryParse(const Name& full)
  {
    try {
      return parse(full);
    }
    catch (const ParseError&) {
      return std::nullopt;
    }
  }

  friend bool
  operator==(const RouterName& a, const RouterName& b)
  {
    return a.network == b.network && a.label == b.label;
  }

  friend std::strong_ordering
  operator<=>(const RouterName& a, const RouterName& b)
  {
    return a.full() <=> b.full();
  }
};

} // namespace ndvr::routing

#endif // NDVR_ROUTING_ROUTER_NAME_HPP
