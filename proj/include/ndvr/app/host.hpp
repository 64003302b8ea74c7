/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_APP_HOST_HPP
#define NDVR_APP_HOST_HPP

#include "ndvr/app/metrics.hpp"
#include "ndvr/ndn/packet.hpp"

#include <functional>

namespace ndvr::app {

/// What a node offers to the applications running on it.
class AppHost
{
public:
  virtual ~AppHost() = default;

  virtual NodeId nodeId() const = 0;
  virtual SimTime now() const = 0;
  virtual void schedule(SimTime delay, std::function<void()> fn) = 0;
  virtual uint32_t nonce() = 0;
  virtual void expressInterest(FaceId appFace, ndn::Interest interest) = 0;
  virtual void putData(FaceId appFace, ndn::Data data) = 0;
  /// Tells the routing daemon about a locally produced prefix; a no-op without one.
  virtual void advertise(const ndn::Name& prefix) = 0;
  virtual MetricsLog& metrics() = 0;
};

inline const Name&
dataSyncPrefix()
{
  static const Name prefix{"ndn", "dataSync"};
  return prefix;
}

/// `/ndn/dataSync/<id>`
inline Name
producerPrefix(NodeId id)
{
  Name n = dataSyncPrefix();
  n.appendNumber(id);
  return n;
}

} // namespace ndvr::app

#endif // NDVR_APP_HOST_HPP
