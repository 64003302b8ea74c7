/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SIM_MOBILITY_HPP
#define NDVR_SIM_MOBILITY_HPP

#include "ndvr/random.hpp"
#include "ndvr/common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace ndvr::sim {

struct Vec2
{
  double x = 0;
  double y = 0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double
distance(Vec2 a, Vec2 b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Arena
{
  double width = 300;
  double height = 300;

  bool
  contains(Vec2 p) const
  {
    return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height;
  }

  Vec2
  clamp(Vec2 p) const
  {
    return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
  }
};

enum class MobilityModel {
  Static,
  RandomWalk,
  Rpgm,
};

struct WalkParams
{
  double speedMin = 1;
  double speedMax = 20;
  double legSeconds = 20;
};

struct WalkState
{
  Vec2 position;
  double speed = 0;
  double direction = 0; ///< radians in [0, 2pi)
  double legRemaining = 0;
};

inline double
normalizeAngle(double a)
{
  constexpr double twoPi = 2 * std::numbers::pi;
  a = std::fmod(a, twoPi);
  if (a < 0)
    a += twoPi;
  if (a >= twoPi)
    a = 0;
  return a;
}

inline void
drawLeg(WalkState& s, const WalkParams& p, Random& rng)
{
  s.speed = rng.uniform(p.speedMin, p.speedMax);
  s.direction = rng.uniform(0, 2 * std::numbers::pi);
  s.legRemaining = p.legSeconds;
}

/// Mirrors a coordinate back into [0, limit]; returns the number of wall hits.
inline int
reflect(double& v, double limit)
{
  int hits = 0;
  // loop handles steps longer than the arena itself
  while (v < 0 || v > limit) {
    ++hits;
    v = v < 0 ? -v : 2 * limit - v;
  }
  return hits;
}

/**
 * @brief Advances one random-walk step of @p dt seconds.
 *
 * Walls reflect the trajectory. When the current leg runs out a new speed
 * and direction are drawn and the step continues on the new leg.
 */
inline void
randomWalkStep(WalkState& s, const Arena& arena, const WalkParams& p, Random& rng, double dt)
{
  while (dt > 0) {
    if (s.legRemaining <= 0)
      drawLeg(s, p, rng);
    double t = std::min(dt, s.legRemaining);
    double ux = std::cos(s.direction);
    double uy = std::sin(s.direction);
    s.position.x += s.speed * t * ux;
    s.position.y += s.speed * t * uy;
    if (reflect(s.position.x, arena.width) % 2 == 1)
      ux = -ux;
    if (reflect(s.position.y, arena.height) % 2 == 1)
      uy = -uy;
    s.direction = normalizeAngle(std::atan2(uy, ux));
    s.legRemaining -= t;
    dt -= t;
  }
}

/// Uniform point in a disk of radius @p r.
inline Vec2
drawOffset(Random& rng, double r)
{
  double rho = r * std::sqrt(rng.uniform());
  double theta = rng.uniform(0, 2 * std::numbers::pi);
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

/// Group sizes from Normal(mean, stddev), rounded, at least 1, until @p nodes are placed.
inline std::vector<size_t>
drawGroupSizes(size_t nodes, double mean, double stddev, Random& rng)
{
  std::vector<size_t> sizes;
  size_t placed = 0;
  while (placed < nodes) {
    long s = std::lround(rng.normal(mean, stddev));
    size_t size = static_cast<size_t>(std::max(1L, s));
    size = std::min(size, nodes - placed);
    sizes.push_back(size);
    placed += size;
  }
  return sizes;
}

struct RpgmParams
{
  WalkParams walk;
  double groupMean = 3;
  double groupStddev = 0.2;
  double offsetBound = 10;
};

/**
 * @brief Positions of all nodes under one mobility model.
 *
 * Every node (and every RPGM group) draws from its own stream so that
 * changing one node's trajectory never shifts another's.
 */
class MobilityManager
{
public:
  struct Group
  {
    std::vector<size_t> members;
    WalkState reference;
    Random rng{0};
  };

  MobilityManager(MobilityModel model, Arena arena, std::vector<Vec2> initial, uint64_t seed,
                  WalkParams walk = {}, RpgmParams rpgm = {})
    : m_model(model)
    , m_arena(arena)
    , m_walk(walk)
    , m_rpgm(rpgm)
  {
    const size_t n = initial.size();
    m_positions = initial;
    m_nodeRng.reserve(n);
    for (size_t i = 0; i < n; ++i)
      m_nodeRng.push_back(Random::substream(seed, i, "mobility"));

    if (model == MobilityModel::RandomWalk) {
      m_walkers.resize(n);
      for (size_t i = 0; i < n; ++i) {
        m_walkers[i].position = m_arena.clamp(initial[i]);
        drawLeg(m_walkers[i], m_walk, m_nodeRng[i]);
        m_positions[i] = m_walkers[i].position;
      }
    }
    else if (model == MobilityModel::Rpgm) {
      Random setup = Random::substream(seed, 0, "rpgm-groups");
      auto sizes = drawGroupSizes(n, m_rpgm.groupMean, m_rpgm.groupStddev, setup);
      m_offsets.resize(n);
      m_groupOf.resize(n);
      size_t next = 0;
      for (size_t g = 0; g < sizes.size(); ++g) {
        Group grp;
        grp.rng = Random::substream(seed, g, "rpgm-reference");
        for (size_t k = 0; k < sizes[g]; ++k) {
          grp.members.push_back(next);
          m_groupOf[next] = g;
          ++next;
        }
        // the first member's configured position anchors the group
        grp.reference.position = m_arena.clamp(initial[grp.members.front()]);
        m_groups.push_back(std::move(grp));
        newRpgmLeg(m_groups.back());
      }
    }
  }

  MobilityModel model() const { return m_model; }
  const Arena& arena() const { return m_arena; }
  size_t size() const { return m_positions.size(); }
  const std::vector<Group>& groups() const { return m_groups; }

  Vec2
  position(size_t node) const
  {
    return m_positions.at(node);
  }

  const std::vector<Vec2>&
  positions() const
  {
    return m_positions;
  }

  /// Group reference point of @p node under RPGM.
  Vec2
  reference(size_t node) const
  {
    return m_groups.at(m_groupOf.at(node)).reference.position;
  }

  size_t
  groupOf(size_t node) const
  {
    return m_groupOf.at(node);
  }

  /// Scripted placement, used by tests to move a node by hand.
  void
  setPosition(size_t node, Vec2 p)
  {
    m_positions.at(node) = p;
    if (m_model == MobilityModel::RandomWalk)
      m_walkers.at(node).position = p;
  }

  void
  step(double dt)
  {
    switch (m_model) {
    case MobilityModel::Static:
      return;
    case MobilityModel::RandomWalk:
      for (size_t i = 0; i < m_walkers.size(); ++i) {
        randomWalkStep(m_walkers[i], m_arena, m_walk, m_nodeRng[i], dt);
        m_positions[i] = m_walkers[i].position;
      }
      return;
    case MobilityModel::Rpgm:
      for (auto& g : m_groups) {
        bool newLeg = g.reference.legRemaining <= dt;
        double remaining = dt;
        if (newLeg) {
          // finish the current leg, then start the next one with fresh offsets
          double rest = g.reference.legRemaining;
          randomWalkStep(g.reference, m_arena, m_rpgm.walk, g.rng, rest);
          newRpgmLeg(g);
          remaining = dt - rest;
        }
        randomWalkStep(g.reference, m_arena, m_rpgm.walk, g.rng, remaining);
        placeMembers(g);
      }
      return;
    }
  }

private:
  void
  newRpgmLeg(Group& g)
  {
    drawLeg(g.reference, m_rpgm.walk, g.rng);
    for (size_t m : g.members)
      m_offsets[m] = g.members.size() == 1 ? Vec2{} : drawOffset(m_nodeRng[m], m_rpgm.offsetBound);
    placeMembers(g);
  }

  void
  placeMembers(const Group& g)
  {
    for (size_t m : g.members) {
      Vec2 p{g.reference.position.x + m_offsets[m].x, g.reference.position.y + m_offsets[m].y};
      m_positions[m] = m_arena.clamp(p);
    }
  }

private:
  MobilityModel m_model;
  Arena m_arena;
  WalkParams m_walk;
  RpgmParams m_rpgm;
  std::vector<Vec2> m_positions;
  std::vector<Random> m_nodeRng;
  std::vector<WalkState> m_walkers;
  std::vector<Group> m_groups;
  std::vector<size_t> m_groupOf;
  std::vector<Vec2> m_offsets;
};

} // namespace ndvr::sim

#endif // NDVR_SIM_MOBILITY_HPP
