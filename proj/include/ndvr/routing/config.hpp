/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_CONFIG_HPP
#define NDVR_ROUTING_CONFIG_HPP

#include "ndvr/common.hpp"

namespace ndvr::routing {

enum class CostStrategy {
  HopCount,
};

struct NdvrConfig
{
  milliseconds ehloInterval{1000};
  uint32_t ehloMultiplier = 2;
  uint32_t subgroupSize = 2;
  milliseconds backoffMin{100};
  milliseconds backoffMax{300};
  milliseconds replyDelay{10};
  milliseconds startJitterMax{100};
  CostStrategy costStrategy = CostStrategy::HopCount;
  /// Lifetime of DVINFO and KEY Interests; an unanswered fetch is retried on a later EHLO.
  milliseconds fetchLifetime{1000};
  milliseconds dvinfoFreshness{1000};

  milliseconds
  neighborTimeout() const
  {
    return ehloInterval * ehloMultiplier;
  }

  /// Throws std::invalid_argument on an inconsistent configuration.
  void
  validate() const
  {
    if (ehloInterval.count() <= 0)
      throw std::invalid_argument("ehloInterval must be positive");
    if (ehloMultiplier < 1)
      throw std::invalid_argument("ehloMultiplier must be >= 1");
    if (subgroupSize < 1)
      throw std::invalid_argument("subgroupSize must be >= 1");
    if (backoffMin.count() < 0 || backoffMin > backoffMax)
      throw std::invalid_argument("backoffMin must be <= backoffMax");
    if (replyDelay.count() < 0 || startJitterMax.count() < 0)
      throw std::invalid_argument("delays must be non-negative");
    if (fetchLifetime.count() <= 0)
      throw std::invalid_argument("fetchLifetime must be positive");
  }
};

} // namespace ndvr::routing

#endif // NDVR_ROUTING_CONFIG_HPP
