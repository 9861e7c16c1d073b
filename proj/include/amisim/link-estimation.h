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

#ifndef AMISIM_LINK_ESTIMATION_H
#define AMISIM_LINK_ESTIMATION_H

#include "amisim/anycast-math.h"
#include "amisim/random.h"
#include "amisim/types.h"

#include <cstdint>

namespace amisim
{

/// Weight of the newest RSSI sample in the running average.
inline constexpr double kRssiAlpha = 0.25;
/// Weight of the newest indicator in the collision-rate average.
inline constexpr double kCollisionWeight = 0.1;

/// Empirical RSSI to delivery-ratio ramp (dBm).
inline constexpr double kPdrFullRssi = -87.0;
inline constexpr double kPdrZeroRssi = -94.0;

inline constexpr double kProbeIntervalMin = 20.0;
inline constexpr double kProbeIntervalMax = 25.0;

/// What a node knows about the link towards one neighbour.
struct LinkStats
{
    NodeId neighbor{kNoNode};
    double rssiAvg{0.0}; ///< dBm; meaningful only when hasSample is set
    bool hasSample{false};
    uint32_t probesSent{0};
    uint32_t probesAcked{0};
    Probability estPdr{};
};

/// Running estimate of the probability that a frame is lost to a collision.
struct CollisionHistory
{
    Probability pcEst{};
    uint64_t observations{0};
};

/**
 * Folds an RSSI sample into the exponential average
 * (avg = 0.25 * sample + 0.75 * avg).  The first sample seeds the average.
 * estPdr is refreshed from the new average.
 */
LinkStats UpdateRssiAverage(LinkStats stats, double sampleDbm);

/// Piecewise-linear map: 1 at or above -87 dBm, 0 at or below -94 dBm.
Probability RssiToPdr(double rssiDbm);

/// EWMA of collision indicators with weight kCollisionWeight.
CollisionHistory RecordChannelEvent(CollisionHistory hist, bool collided);

/// Laplace-smoothed probe success ratio (acked + 1) / (sent + 2).
Probability ProbeLinkEstimate(const LinkStats& stats);

/// now + 20 + 5 * unit, for unit in [0, 1].
double NextProbeTime(double now, double unit);
/// now + Uniform[20, 25].
double NextProbeTime(double now, RngStream& rng);

} // namespace amisim

#endif /* AMISIM_LINK_ESTIMATION_H */
