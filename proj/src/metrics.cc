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

#include "amisim/metrics.h"

#include <algorithm>
#include <stdexcept>

namespace amisim
{

FrameLedger::Record&
FrameLedger::Get(FrameKey key)
{
    auto it = m_frames.find(key.Packed());
    if (it == m_frames.end())
    {
        throw std::logic_error("frame not in ledger");
    }
    return it->second;
}

const FrameLedger::Record&
FrameLedger::Get(FrameKey key) const
{
    auto it = m_frames.find(key.Packed());
    if (it == m_frames.end())
    {
        throw std::logic_error("frame not in ledger");
    }
    return it->second;
}

void
FrameLedger::Resolve(Record& r)
{
    if (!r.resolved)
    {
        r.resolved = true;
        ++m_resolved;
    }
}

void
FrameLedger::Generated(FrameKey key)
{
    auto [it, inserted] = m_frames.try_emplace(key.Packed());
    if (!inserted)
    {
        throw std::logic_error("frame generated twice");
    }
    ++m_generated;
}

void
FrameLedger::AddHolder(FrameKey key, NodeId node)
{
    auto& r = Get(key);
    if (std::find(r.holders.begin(), r.holders.end(), node) == r.holders.end())
    {
        r.holders.push_back(node);
    }
}

void
FrameLedger::RemoveHolder(FrameKey key, NodeId node)
{
    auto& r = Get(key);
    std::erase(r.holders, node);
    if (r.holders.empty() && !r.delivered)
    {
        Resolve(r);
    }
}

bool
FrameLedger::HeldElsewhere(FrameKey key, NodeId except, NodeId alsoExcept) const
{
    const auto& r = Get(key);
    return std::any_of(r.holders.begin(), r.holders.end(), [&](NodeId n) {
        return n != except && n != alsoExcept;
    });
}

bool
FrameLedger::HeldBy(FrameKey key, NodeId node) const
{
    const auto& r = Get(key);
    return std::find(r.holders.begin(), r.holders.end(), node) != r.holders.end();
}

bool
FrameLedger::MarkDelivered(FrameKey key, NodeId lastHop)
{
    auto& r = Get(key);
    if (r.delivered)
    {
        return false;
    }
    r.delivered = true;
    r.firstHop = lastHop;
    Resolve(r);
    return true;
}

bool
FrameLedger::IsDelivered(FrameKey key) const
{
    return Get(key).delivered;
}

NodeId
FrameLedger::FirstDeliveryHop(FrameKey key) const
{
    return Get(key).firstHop;
}

void
FrameLedger::MarkDropped(FrameKey key, DropReason reason)
{
    auto& r = Get(key);
    (reason == DropReason::kRetry ? r.retryDrop : r.queueDrop) = true;
}

FrameLedger::Tally
FrameLedger::Classify() const
{
    Tally t;
    for (const auto& [_, r] : m_frames)
    {
        if (r.delivered)
        {
            ++t.delivered;
        }
        else if (!r.holders.empty())
        {
            ++t.inFlight;
        }
        else if (r.retryDrop)
        {
            ++t.droppedRetry;
        }
        else if (r.queueDrop)
        {
            ++t.droppedQueue;
        }
        else
        {
            throw std::logic_error("frame vanished without a drop record");
        }
    }
    return t;
}

} // namespace amisim
