/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_ROUTING_PROCESS_DVINFO_HPP
#define NDVR_ROUTING_PROCESS_DVINFO_HPP

#include "ndvr/routing/config.hpp"
#include "ndvr/routing/dv-table.hpp"
#include "ndvr/routing/neighbor-table.hpp"

namespace ndvr::routing {

/// Cost through @p neighbor; COST_INFINITY means "do not install".
inline uint32_t
calculateCost(const RouterName& /*neighbor*/, uint32_t advertisedCost,
              CostStrategy strategy = CostStrategy::HopCount)
{
  switch (strategy) {
  case CostStrategy::HopCount:
    if (advertisedCost >= COST_INFINITY - 1)
      return COST_INFINITY;
    return advertisedCost + 1;
  }
  return COST_INFINITY;
}

struct FibChange
{
  enum class Op { Add, Remove };

  Op op;
  Name prefix;
  FaceId face;

  friend bool operator==(const FibChange&, const FibChange&) = default;
};

struct RouteChange
{
  std::optional<RouteEntry> before;
  RouteEntry after;
};

struct ProcessResult
{
  std::vector<RouteChange> changes;
  std::vector<FibChange> fib;
  size_t skippedLocal = 0;
  size_t skippedInfinite = 0;
  size_t skippedInfeasible = 0;
  bool versionBumped = false;
};

/// FIB edits that move @p prefix from its old next hop (if any) to @p now.
inline void
appendFibMove(std::vector<FibChange>& fib, const std::optional<RouteEntry>& before, const RouteEntry& now)
{
  if (before && !before->isLocal() && before->faceId == now.faceId)
    return;
  if (before && !before->isLocal())
    fib.push_back({FibChange::Op::Remove, now.prefix, before->faceId});
  if (!now.isLocal())
    fib.push_back({FibChange::Op::Add, now.prefix, now.faceId});
}

/**
 * @brief Applies one neighbor's distance vector to the local table.
 *
 * An entry is installed when the prefix is unknown, when the neighbor's
 * sequence number is newer, or when it is equal and the incremented cost is
 * strictly lower. Local entries are never replaced by learned ones. A prefix
 * whose route was deleted is not new: see DvTable::feasibility().
 */
inline ProcessResult
processDvInfo(const std::vector<DvInfoEntry>& entries, const NeighborEntry& from, DvTable& table,
              CostStrategy strategy = CostStrategy::HopCount)
{
  ProcessResult res;
  for (const auto& d : entries) {
    const RouteEntry* mine = table.find(d.prefix);
    if (mine != nullptr && mine->isLocal()) {
      ++res.skippedLocal;
      continue;
    }
    // a deleted route may only come back at its old seq through a neighbor no farther than we were;
    // anything farther could be routing through us
    if (mine == nullptr) {
      const auto* fd = table.feasibility(d.prefix);
      if (fd != nullptr && (d.seqNum < fd->seqNum || (d.seqNum == fd->seqNum && d.cost > fd->cost))) {
        ++res.skippedInfeasible;
        continue;
      }
    }
    uint32_t c = calculateCost(from.router, d.cost, strategy);
    if (c == COST_INFINITY) {
      ++res.skippedInfinite;
      continue;
    }
    bool install = mine == nullptr
                   || mine->seqNum < d.seqNum
                   || (mine->seqNum == d.seqNum && c < mine->cost);
    if (!install)
      continue;
    std::optional<RouteEntry> before;
    if (mine != nullptr)
      before = *mine;
    RouteEntry next{d.prefix, c, d.seqNum, from.router, from.faceId};
    if (before && *before == next)
      continue;
    table.put(next);
    appendFibMove(res.fib, before, next);
    res.changes.push_back({std::move(before), std::move(next)});
  }
  res.versionBumped = table.commit();
  return res;
}

} // namespace ndvr::routing

#endif // NDVR_ROUTING_PROCESS_DVINFO_HPP
