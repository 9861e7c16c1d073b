/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */
/*
 * This program is free software; you can redistribute it and/or modify
 * it under the terms of the GNU General Public License version 2 as
 * published by the Free Software Foundation;
 *
 * This program is distributed in the hope that it will be useful,
 * but WITHOUT ANY WARRANTY; without even the implied warranty of
 * MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
 * GNU General Public License for more details.
 *
 * You should have received a copy of the GNU General Public License
 * along with this program; if not, write to the Free Software
 * Foundation, Inc., 59 Temple Place, Suite 330, Boston, MA  02111-1307  USA
 */

#ifndef AMISIM_SCHEDULER_H
#define AMISIM_SCHEDULER_H

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace amisim
{

/**
 * Discrete-event queue.  Events run in (time, insertion order); two events
 * never share both keys, so dispatch order is fully determined by the order
 * in which they were scheduled.
 */
class Scheduler
{
  public:
    using Action = std::function<void()>;

    double Now() const
    {
        return m_now;
    }

    /// \throws std::logic_error if \p delay is negative (events cannot go back in time).
    uint64_t Schedule(double delay, Action action);
    uint64_t ScheduleAt(double time, Action action);

    /// Runs events until the queue empties, \p until is passed, or Stop() is called.
    void Run(double until);
    void Stop()
    {
        m_stopped = true;
    }

    bool Empty() const
    {
        return m_queue.empty();
    }

    uint64_t Dispatched() const
    {
        return m_dispatched;
    }

  private:
    struct Event
    {
        double time;
        uint64_t seq;
        Action action;
    };

    struct Later
    {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.time != b.time)
            {
                return a.time > b.time;
            }
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> m_queue;
    double m_now{0.0};
    uint64_t m_nextSeq{0};
    uint64_t m_dispatched{0};
    bool m_stopped{false};
};

} // namespace amisim

#endif /* AMISIM_SCHEDULER_H */
