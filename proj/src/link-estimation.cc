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

#include "amisim/link-estimation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amisim
{

LinkStats
UpdateRssiAverage(LinkStats stats, double sampleDbm)
{
    if (!std::isfinite(sampleDbm))
    {
        throw std::invalid_argument("non-finite RSSI sample");
    }
    if (!stats.hasSample)
    {
        stats.rssiAvg = sampleDbm;
        stats.hasSample = true;
    }
    else
    {
        stats.rssiAvg = kRssiAlpha * sampleDbm + (1.0 - kRssiAlpha) * stats.rssiAvg;
    }
    stats.estPdr = RssiToPdr(stats.rssiAvg);
    return stats;
}

Probability
RssiToPdr(double rssiDbm)
{
    if (rssiDbm >= kPdrFullRssi)
    {
        return Probability(1.0);
    }
    if (rssiDbm <= kPdrZeroRssi)
    {
        return Probability(0.0);
    }
    const double v = (rssiDbm - kPdrZeroRssi) / (kPdrFullRssi - kPdrZeroRssi);
    return Probability(std::clamp(v, 0.0, 1.0));
}

CollisionHistory
RecordChannelEvent(CollisionHistory hist, bool collided)
{
    const double x = collided ? 1.0 : 0.0;
    const double next = kCollisionWeight * x + (1.0 - kCollisionWeight) * hist.pcEst.Value();
    hist.pcEst = Probability(std::clamp(next, 0.0, 1.0));
    ++hist.observations;
    return hist;
}

Probability
ProbeLinkEstimate(const LinkStats& stats)
{
    return Probability((stats.probesAcked + 1.0) / (stats.probesSent + 2.0));
}

double
NextProbeTime(double now, double unit)
{
    unit = std::clamp(unit, 0.0, 1.0);
    return now + kProbeIntervalMin + (kProbeIntervalMax - kProbeIntervalMin) * unit;
}

double
NextProbeTime(double now, RngStream& rng)
{
    return now + rng.Uniform(kProbeIntervalMin, kProbeIntervalMax);
}

} // namespace amisim
