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

#include "amisim/csma-mac.h"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace amisim
{

std::string_view
VariantName(Variant v)
{
    switch (v)
    {
    case Variant::kRpl:
        return "rpl";
    case Variant::kOrpl:
        return "orpl";
    case Variant::kOrplx:
        return "orplx";
    case Variant::kOrplxP:
        return "orplx-p";
    case Variant::kOrplxCh:
        return "orplx-ch";
    }
    return "?";
}

const std::array<Variant, 5>&
AllVariants()
{
    static const std::array<Variant, 5> all{Variant::kRpl,
                                            Variant::kOrpl,
                                            Variant::kOrplx,
                                            Variant::kOrplxP,
                                            Variant::kOrplxCh};
    return all;
}

std::optional<Variant>
ParseVariant(std::string_view name)
{
    for (Variant v : AllVariants())
    {
        if (VariantName(v) == name)
        {
            return v;
        }
    }
    return std::nullopt;
}

RetryLimit
RetryLimitFor(Variant variant,
              std::span<const std::optional<LinkStats>> parentStats,
              const CollisionHistory& collisions,
              Probability target)
{
    const RetryLimit fixed(kFixedRetryLimit);
    if (variant == Variant::kRpl || variant == Variant::kOrpl || parentStats.empty())
    {
        return fixed;
    }
    std::vector<Probability> links;
    links.reserve(parentStats.size());
    for (const auto& s : parentStats)
    {
        if (!s)
        {
            return fixed;
        }
        if (variant == Variant::kOrplxP)
        {
            if (s->probesSent == 0)
            {
                return fixed;
            }
            links.push_back(ProbeLinkEstimate(*s));
        }
        else
        {
            if (!s->hasSample)
            {
                return fixed;
            }
            links.push_back(RssiToPdr(s->rssiAvg));
        }
    }
    Probability p = AnycastProbability(links);
    if (variant == Variant::kOrplxCh)
    {
        p = CollisionAdjustedProbability(p, collisions.pcEst);
    }
    return RetryLimitApprox(p, target);
}

double
BackoffState::NextDelay(double unitJitter) const
{
    return baseDelay * attemptNumber + baseDelay * std::clamp(unitJitter, 0.0, 1.0);
}

double
BackoffState::NextDelay(RngStream& rng) const
{
    return NextDelay(rng.Uniform01());
}

CsmaMac::CsmaMac(NodeId self, Host& host, MacConfig config)
    : m_self(self),
      m_host(host),
      m_config(config)
{
}

double
CsmaMac::AckWindow(const MacFrame& frame, const MacConfig& config)
{
    return static_cast<double>(frame.anycastMembers.size() + 1) * config.ackSlot;
}

bool
CsmaMac::Enqueue(MacFrame frame)
{
    if (m_queue.size() >= m_config.queueCapacity)
    {
        return false;
    }
    Outgoing out;
    out.frame = std::move(frame);
    out.backoff.baseDelay = m_config.baseBackoff;
    m_queue.push_back(std::move(out));
    if (m_state == State::kIdle)
    {
        ServeHead();
    }
    return true;
}

void
CsmaMac::ServeHead()
{
    if (m_queue.empty())
    {
        m_state = State::kIdle;
        return;
    }
    Backoff();
}

void
CsmaMac::Backoff()
{
    m_state = State::kBackoff;
    const double delay = m_queue.front().backoff.NextDelay(m_host.Rng());
    const uint64_t token = ++m_backoffToken;
    m_host.Schedule(delay, [this, token] {
        if (token == m_backoffToken)
        {
            OnBackoffExpired();
        }
    });
}

void
CsmaMac::OnBackoffExpired()
{
    Outgoing& head = m_queue.front();
    if (HasPendingAck() || m_host.ChannelBusy())
    {
        ++head.backoff.attemptNumber;
        Backoff();
        return;
    }
    if (!head.limitSet)
    {
        head.retry.limit = m_host.ComputeRetryLimit(head.frame);
        head.limitSet = true;
    }
    m_host.OnTransmission(head.frame, head.retry.attempts);
    ++head.retry.attempts;
    m_state = State::kTransmitting;
    const double airtime = m_host.StartTransmission(head.frame);
    m_host.Schedule(airtime, [this] { OnTransmitEnd(); });
}

void
CsmaMac::OnTransmitEnd()
{
    m_state = State::kAwaitingAck;
    m_acked = false;
    m_host.Schedule(AckWindow(m_queue.front().frame, m_config), [this] { OnWindowEnd(); });
}

void
CsmaMac::OnWindowEnd()
{
    Outgoing& head = m_queue.front();
    if (m_acked || head.retry.Exhausted())
    {
        MacFrame done = std::move(head.frame);
        const bool acked = m_acked;
        m_queue.pop_front();
        m_state = State::kIdle;
        m_host.OnSendDone(done, acked);
        if (m_state == State::kIdle)
        {
            ServeHead();
        }
        return;
    }
    ++head.backoff.attemptNumber;
    Backoff();
}

void
CsmaMac::OnAckDecoded(const MacFrame& ack)
{
    if (ack.kind != FrameKind::kAck)
    {
        return;
    }
    if (m_state == State::kAwaitingAck && ack.ackFor == m_self)
    {
        const MacFrame& head = m_queue.front().frame;
        if (head.origin == ack.origin && head.seq == ack.seq && head.kind == ack.ackedKind &&
            head.PriorityOf(ack.transmitter) >= 0)
        {
            m_acked = true;
        }
    }
    for (auto& p : m_pendingAcks)
    {
        if (p.cancelled || p.data.origin != ack.origin || p.data.seq != ack.seq ||
            p.data.kind != ack.ackedKind || p.data.transmitter != ack.ackFor)
        {
            continue;
        }
        const int ackerPriority = p.data.PriorityOf(ack.transmitter);
        if (ackerPriority >= 0 && ackerPriority < p.priority)
        {
            p.cancelled = true;
        }
    }
}

bool
CsmaMac::Withdraw(NodeId origin, uint32_t seq)
{
    auto it = std::find_if(m_queue.begin(), m_queue.end(), [&](const Outgoing& o) {
        return o.frame.kind == FrameKind::kData && o.frame.origin == origin && o.frame.seq == seq &&
               o.retry.attempts == 0;
    });
    if (it == m_queue.end())
    {
        return false;
    }
    if (it != m_queue.begin())
    {
        m_queue.erase(it);
        return true;
    }
    if (m_state != State::kBackoff)
    {
        return false;
    }
    m_queue.pop_front();
    ++m_backoffToken; // cancels the pending backoff expiry
    ServeHead();
    return true;
}

void
CsmaMac::ScheduleAck(const MacFrame& frame,
                     double frameEnd,
                     std::function<void()> onSent,
                     std::function<void(bool overheard)> onSuppressed)
{
    const int priority = frame.PriorityOf(m_self);
    if (priority < 0)
    {
        throw std::logic_error("ACK scheduled by a node outside the anycast set");
    }
    PendingAck p{m_nextAckId++, frame, priority, false, std::move(onSent), std::move(onSuppressed)};
    const uint64_t id = p.id;
    m_pendingAcks.push_back(std::move(p));
    const double slotStart = frameEnd + (priority + 1) * m_config.ackSlot;
    m_host.Schedule(std::max(0.0, slotStart - m_host.Now()), [this, id] { FireAck(id); });
}

void
CsmaMac::FireAck(uint64_t id)
{
    auto it = std::find_if(m_pendingAcks.begin(), m_pendingAcks.end(), [id](const PendingAck& p) {
        return p.id == id;
    });
    if (it == m_pendingAcks.end())
    {
        return;
    }
    PendingAck p = std::move(*it);
    m_pendingAcks.erase(it);
    if (p.cancelled || m_state == State::kTransmitting)
    {
        p.onSuppressed(p.cancelled);
        return;
    }
    m_host.StartTransmission(MacFrame::AckFor(p.data, m_self));
    p.onSent();
}

} // namespace amisim
