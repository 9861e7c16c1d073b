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

#include "amisim/scheduler.h"

#include <cmath>
#include <stdexcept>

namespace amisim
{

uint64_t
Scheduler::Schedule(double delay, Action action)
{
    if (!(delay >= 0.0))
    {
        throw std::logic_error("event scheduled in the past");
    }
    return ScheduleAt(m_now + delay, std::move(action));
}

uint64_t
Scheduler::ScheduleAt(double time, Action action)
{
    if (!(time >= m_now) || !std::isfinite(time))
    {
        throw std::logic_error("event scheduled in the past");
    }
    const uint64_t seq = m_nextSeq++;
    m_queue.push(Event{time, seq, std::move(action)});
    return seq;
}

void
Scheduler::Run(double until)
{
    m_stopped = false;
    while (!m_queue.empty() && !m_stopped)
    {
        if (m_queue.top().time > until)
        {
            break;
        }
        // priority_queue::top is const; the action is moved out before pop.
        Event ev = std::move(const_cast<Event&>(m_queue.top()));
        m_queue.pop();
        m_now = ev.time;
        ++m_dispatched;
        ev.action();
    }
}

} // namespace amisim
