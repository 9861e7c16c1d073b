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

#include "amisim/mac-frame.h"

#include <algorithm>

namespace amisim
{

std::string_view
FrameKindName(FrameKind kind)
{
    switch (kind)
    {
    case FrameKind::kData:
        return "data";
    case FrameKind::kAck:
        return "ack";
    case FrameKind::kDio:
        return "dio";
    case FrameKind::kProbe:
        return "probe";
    }
    return "?";
}

int
MacFrame::PriorityOf(NodeId node) const
{
    auto it = std::find(anycastMembers.begin(), anycastMembers.end(), node);
    if (it == anycastMembers.end())
    {
        return -1;
    }
    return static_cast<int>(it - anycastMembers.begin());
}

MacFrame
MacFrame::Data(NodeId origin, uint32_t seq, NodeId transmitter, std::vector<NodeId> members)
{
    MacFrame f;
    f.kind = FrameKind::kData;
    f.origin = origin;
    f.seq = seq;
    f.transmitter = transmitter;
    f.anycastMembers = std::move(members);
    f.payloadBytes = kDataPayloadBytes;
    return f;
}

MacFrame
MacFrame::Probe(NodeId origin, uint32_t seq, NodeId target)
{
    MacFrame f;
    f.kind = FrameKind::kProbe;
    f.origin = origin;
    f.seq = seq;
    f.transmitter = origin;
    f.anycastMembers = {target};
    f.payloadBytes = kProbePayloadBytes;
    return f;
}

MacFrame
MacFrame::AckFor(const MacFrame& frame, NodeId acker)
{
    MacFrame f;
    f.kind = FrameKind::kAck;
    f.origin = frame.origin;
    f.seq = frame.seq;
    f.transmitter = acker;
    f.ackFor = frame.transmitter;
    f.ackedKind = frame.kind;
    f.payloadBytes = kAckPayloadBytes;
    return f;
}

MacFrame
MacFrame::Dio(NodeId sender)
{
    MacFrame f;
    f.kind = FrameKind::kDio;
    f.origin = sender;
    f.transmitter = sender;
    f.payloadBytes = kDioPayloadBytes;
    return f;
}

double
Airtime(const MacFrame& frame, double bitrate)
{
    return static_cast<double>(frame.TotalBytes()) * 8.0 / bitrate;
}

} // namespace amisim
