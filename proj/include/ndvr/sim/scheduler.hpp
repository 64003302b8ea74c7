/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_SIM_SCHEDULER_HPP
#define NDVR_SIM_SCHEDULER_HPP

#include "ndvr/common.hpp"

#include <functional>
#include <optional>
#include <queue>
#include <unordered_map>

namespace ndvr::sim {

class SchedulerError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

using EventId = uint64_t;

/**
 * @brief Discrete-event kernel.
 *
 * Events run in (time, seq) order, seq being assigned at scheduling time, so
 * two events at the same instant run in the order they were scheduled.
 */
class Scheduler
{
public:
  using Handler = std::function<void()>;

  SimTime
  now() const
  {
    return m_now;
  }

  EventId
  schedule(SimTime at, Handler h)
  {
    if (at < m_now)
      throw SchedulerError("event scheduled in the past: " + std::to_string(at.count()) +
                           " < " + std::to_string(m_now.count()));
    EventId id = m_nextSeq++;
    m_queue.push(Key{at, id});
    m_handlers.emplace(id, std::move(h));
    return id;
  }

  EventId
  scheduleAfter(SimTime delay, Handler h)
  {
    return schedule(m_now + delay, std::move(h));
  }

  /// Cancelling an already-run or unknown event is a no-op.
  void
  cancel(EventId id)
  {
    m_handlers.erase(id);
  }

  /// Runs every event with time <= @p end, then advances the clock to @p end.
  void
  runUntil(SimTime end)
  {
    while (!m_queue.empty() && m_queue.top().time <= end)
      step();
    if (end > m_now)
      m_now = end;
  }

  /// Runs the next event, if any; returns false when the queue is empty.
  bool
  step()
  {
    while (!m_queue.empty()) {
      Key k = m_queue.top();
      m_queue.pop();
      auto it = m_handlers.find(k.seq);
      if (it == m_handlers.end())
        continue;
      Handler h = std::move(it->second);
      m_handlers.erase(it);
      m_now = k.time;
      ++m_processed;
      h();
      return true;
    }
    return false;
  }

  /// Time of the next event still to run, if any.
  std::optional<SimTime>
  nextEventTime()
  {
    while (!m_queue.empty() && !m_handlers.count(m_queue.top().seq))
      m_queue.pop();
    if (m_queue.empty())
      return std::nullopt;
    return m_queue.top().time;
  }

  size_t
  pending() const
  {
    return m_handlers.size();
  }

  uint64_t
  processed() const
  {
    return m_processed;
  }

private:
  struct Key
  {
    SimTime time;
    EventId seq;

    bool
    operator>(const Key& o) const
    {
      return time != o.time ? time > o.time : seq > o.seq;
    }
  };

  SimTime m_now{0};
  EventId m_nextSeq = 1;
  uint64_t m_processed = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> m_queue;
  std::unordered_map<EventId, Handler> m_handlers;
};

} // namespace ndvr::sim

#endif // NDVR_SIM_SCHEDULER_HPP
