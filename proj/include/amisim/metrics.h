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

#ifndef AMISIM_METRICS_H
#define AMISIM_METRICS_H

#include "amisim/types.h"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace amisim
{

struct NodeMetrics
{
    uint64_t generated{0};
    uint64_t delivered{0}; ///< frames originated here that reached the sink
    uint64_t macTx{0};
    uint64_t retransmissions{0};
    uint64_t probeTx{0};
    uint64_t droppedRetry{0}; ///< copies dropped here after the retry limit
    uint64_t droppedQueue{0}; ///< copies dropped here on a full queue
};

struct Metrics
{
    uint64_t generated{0};
    uint64_t delivered{0};
    uint64_t duplicatesAtSink{0};
    uint64_t droppedRetry{0};
    uint64_t droppedQueue{0};
    uint64_t inFlight{0};

    uint64_t macTx{0};
    uint64_t uniqueForwards{0};
    uint64_t retransmissions{0};
    uint64_t probeTx{0};
    uint64_t cooperationErrors{0};
    uint64_t collisions{0};

    double endTime{0.0};
    std::vector<NodeMetrics> perNode;

    double Pdr() const
    {
        return generated == 0 ? 0.0 : static_cast<double>(delivered) / static_cast<double>(generated);
    }

    /// delivered + dropped + in flight == generated
    bool ConservationHolds() const
    {
        return delivered + droppedRetry + droppedQueue + inFlight == generated;
    }

    /// mac_tx == unique forwards + retransmissions + probes
    bool TransmissionIdentityHolds() const
    {
        return macTx == uniqueForwards + retransmissions + probeTx;
    }
};

/// End-to-end identity of a generated frame.
struct FrameKey
{
    NodeId origin;
    uint32_t seq;

    uint64_t Packed() const
    {
        return (static_cast<uint64_t>(origin) << 32) | seq;
    }

    friend bool operator==(const FrameKey&, const FrameKey&) = default;
};

enum class DropReason
{
    kRetry,
    kQueue,
};

/**
 * Tracks every copy of every generated frame so that each frame can be
 * classified exactly once at the end of a run: delivered, dropped (retry or
 * queue), or still buffered somewhere.
 */
class FrameLedger
{
  public:
    void Generated(FrameKey key);
    void AddHolder(FrameKey key, NodeId node);
    void RemoveHolder(FrameKey key, NodeId node);
    /// True if some node other than \p except and \p alsoExcept holds a copy.
    bool HeldElsewhere(FrameKey key, NodeId except, NodeId alsoExcept = kNoNode) const;
    bool HeldBy(FrameKey key, NodeId node) const;

    /// \return true on the first delivery of \p key.
    bool MarkDelivered(FrameKey key, NodeId lastHop);
    bool IsDelivered(FrameKey key) const;
    NodeId FirstDeliveryHop(FrameKey key) const;

    void MarkDropped(FrameKey key, DropReason reason);

    uint64_t GeneratedCount() const
    {
        return m_generated;
    }

    /// Frames neither delivered nor dead.
    uint64_t Unresolved() const
    {
        return m_generated - m_resolved;
    }

    struct Tally
    {
        uint64_t delivered{0};
        uint64_t droppedRetry{0};
        uint64_t droppedQueue{0};
        uint64_t inFlight{0};
    };

    Tally Classify() const;

  private:
    struct Record
    {
        std::vector<NodeId> holders;
        bool delivered{false};
        NodeId firstHop{kNoNode};
        bool retryDrop{false};
        bool queueDrop{false};
        bool resolved{false};
    };

    Record& Get(FrameKey key);
    const Record& Get(FrameKey key) const;
    void Resolve(Record& r);

    std::unordered_map<uint64_t, Record> m_frames;
    uint64_t m_generated{0};
    uint64_t m_resolved{0};
};

} // namespace amisim

#endif /* AMISIM_METRICS_H */
