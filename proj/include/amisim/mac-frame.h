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

#ifndef AMISIM_MAC_FRAME_H
#define AMISIM_MAC_FRAME_H

#include "amisim/types.h"

#include <cstdint>
#include <string_view>
#include <vector>

namespace amisim
{

enum class FrameKind
{
    kData,
    kAck,
    kDio,
    kProbe,
};

std::string_view FrameKindName(FrameKind kind);

// Payload sizes in bytes.
inline constexpr uint32_t kDataPayloadBytes = 60;
inline constexpr uint32_t kProbePayloadBytes = 16;
inline constexpr uint32_t kAckPayloadBytes = 5;
inline constexpr uint32_t kDioPayloadBytes = 12;
/// MAC header, FCS and PHY preamble added to every payload.
inline constexpr uint32_t kMacPhyOverheadBytes = 17;

struct MacFrame
{
    FrameKind kind{FrameKind::kData};
    NodeId origin{kNoNode};
    uint32_t seq{0};
    NodeId transmitter{kNoNode};
    /// Intended receivers in priority order (index 0 is the default parent).
    std::vector<NodeId> anycastMembers;
    /// For ACKs: the node whose frame is being acknowledged, and its kind.
    NodeId ackFor{kNoNode};
    FrameKind ackedKind{FrameKind::kData};
    uint32_t payloadBytes{0};

    uint32_t TotalBytes() const
    {
        return payloadBytes + kMacPhyOverheadBytes;
    }

    /// Index of \p node in anycastMembers, or -1.
    int PriorityOf(NodeId node) const;

    static MacFrame Data(NodeId origin, uint32_t seq, NodeId transmitter, std::vector<NodeId> members);
    static MacFrame Probe(NodeId origin, uint32_t seq, NodeId target);
    /// ACK sent by \p acker for \p frame.
    static MacFrame AckFor(const MacFrame& frame, NodeId acker);
    static MacFrame Dio(NodeId sender);
};

/// Seconds on air at \p bitrate bits/s.
double Airtime(const MacFrame& frame, double bitrate);

} // namespace amisim

#endif /* AMISIM_MAC_FRAME_H */
