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

#ifndef AMISIM_CSMA_MAC_H
#define AMISIM_CSMA_MAC_H

#include "amisim/anycast-math.h"
#include "amisim/link-estimation.h"
#include "amisim/mac-frame.h"
#include "amisim/random.h"
#include "amisim/types.h"

#include <array>
#include <deque>
#include <functional>
#include <list>
#include <optional>
#include <span>
#include <string_view>

namespace amisim
{

enum class Variant
{
    kRpl,
    kOrpl,
    kOrplx,
    kOrplxP,
    kOrplxCh,
};

std::string_view VariantName(Variant v);
std::optional<Variant> ParseVariant(std::string_view name);
const std::array<Variant, 5>& AllVariants();

/// Every variant except plain RPL addresses the whole parent set.
constexpr bool
UsesAnycast(Variant v)
{
    return v != Variant::kRpl;
}

/// Transmissions per frame for the non-adaptive variants.
inline constexpr uint32_t kFixedRetryLimit = 3;

/**
 * Per-frame transmission limit for \p variant.
 *
 * RPL and ORPL use kFixedRetryLimit.  The adaptive variants feed the anycast
 * probability of the parent set into RetryLimitApprox: ORPLx from RSSI-mapped
 * link estimates, ORPLx-P from probe ratios, ORPLx-CH from RSSI estimates
 * discounted by the collision history.  A parent without usable statistics
 * makes the result fall back to kFixedRetryLimit.
 */
RetryLimit RetryLimitFor(Variant variant,
                         std::span<const std::optional<LinkStats>> parentStats,
                         const CollisionHistory& collisions,
                         Probability target);

struct RetryState
{
    RetryLimit limit{kFixedRetryLimit};
    uint32_t attempts{0};

    bool Exhausted() const
    {
        return attempts >= limit.Value();
    }
};

/// Linear backoff: baseDelay * attemptNumber + Uniform[0, baseDelay].
struct BackoffState
{
    double baseDelay{0.01};
    uint32_t attemptNumber{0};

    double NextDelay(RngStream& rng) const;
    double NextDelay(double unitJitter) const;
};

struct MacConfig
{
    double baseBackoff{0.01}; ///< s
    double ackSlot{0.001};    ///< s
    size_t queueCapacity{8};
};

/**
 * CSMA MAC with linear backoff and prioritised anycast acknowledgements.
 *
 * Sending: the head of the queue waits a backoff, senses the carrier and
 * transmits, then listens for an ACK until every member's slot has passed.
 * A missed ACK triggers another backoff until the per-frame limit is spent.
 *
 * Receiving: an anycast member with priority i answers at
 * frameEnd + (i + 1) * ackSlot unless it has already heard a higher-priority
 * member acknowledge the same frame.
 */
class CsmaMac
{
  public:
    class Host
    {
      public:
        virtual ~Host() = default;
        virtual double Now() const = 0;
        virtual void Schedule(double delay, std::function<void()> fn) = 0;
        virtual bool ChannelBusy() = 0;
        /// Puts a frame on air and returns its airtime.
        virtual double StartTransmission(const MacFrame& frame) = 0;
        virtual RetryLimit ComputeRetryLimit(const MacFrame& frame) = 0;
        /// Called for every data/probe transmission; attemptIndex starts at 0.
        virtual void OnTransmission(const MacFrame& frame, uint32_t attemptIndex) = 0;
        /// The head frame left the queue, acknowledged or dropped.
        virtual void OnSendDone(const MacFrame& frame, bool acked) = 0;
        virtual RngStream& Rng() = 0;
    };

    CsmaMac(NodeId self, Host& host, MacConfig config = {});

    CsmaMac(const CsmaMac&) = delete;
    CsmaMac& operator=(const CsmaMac&) = delete;

    /// \return false (and drops \p frame) when the queue is full.
    bool Enqueue(MacFrame frame);

    size_t QueueLength() const
    {
        return m_queue.size();
    }

    bool Idle() const
    {
        return m_state == State::kIdle;
    }

    const MacConfig& Config() const
    {
        return m_config;
    }

    /// Time after the end of \p frame during which ACKs may arrive.
    static double AckWindow(const MacFrame& frame, const MacConfig& config);

    /**
     * Arms our ACK slot for a decoded frame that lists us as a member.
     * Exactly one of \p onSent / \p onSuppressed is called later; the
     * latter learns whether a higher-priority ACK was overheard (as opposed
     * to the slot being lost to our own transmission).
     */
    void ScheduleAck(const MacFrame& frame,
                     double frameEnd,
                     std::function<void()> onSent,
                     std::function<void(bool overheard)> onSuppressed);

    /// Handles any decoded ACK: completion of our own frame and suppression of our slots.
    void OnAckDecoded(const MacFrame& ack);

    bool HasPendingAck() const
    {
        return !m_pendingAcks.empty();
    }

    /**
     * Removes a queued data frame that has not been transmitted yet.
     * \return false if no such frame is waiting.
     */
    bool Withdraw(NodeId origin, uint32_t seq);

  private:
    enum class State
    {
        kIdle,
        kBackoff,
        kTransmitting,
        kAwaitingAck,
    };

    struct Outgoing
    {
        MacFrame frame;
        RetryState retry;
        BackoffState backoff;
        bool limitSet{false};
    };

    struct PendingAck
    {
        uint64_t id;
        MacFrame data;
        int priority;
        bool cancelled{false};
        std::function<void()> onSent;
        std::function<void(bool)> onSuppressed;
    };

    void ServeHead();
    void Backoff();
    void OnBackoffExpired();
    void OnTransmitEnd();
    void OnWindowEnd();
    void FireAck(uint64_t id);

    NodeId m_self;
    Host& m_host;
    MacConfig m_config;
    State m_state{State::kIdle};
    std::deque<Outgoing> m_queue;
    bool m_acked{false};
    std::list<PendingAck> m_pendingAcks;
    uint64_t m_nextAckId{1};
    uint64_t m_backoffToken{0};
};

} // namespace amisim

#endif /* AMISIM_CSMA_MAC_H */
