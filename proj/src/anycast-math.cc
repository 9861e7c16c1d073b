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

#include "amisim/anycast-math.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace amisim
{

Probability::Probability(double value)
    : m_value(value)
{
    if (!(value >= 0.0 && value <= 1.0))
    {
        throw std::out_of_range("probability out of [0,1]: " + std::to_string(value));
    }
}

RetryLimit::RetryLimit(uint32_t transmissions)
    : m_value(transmissions)
{
    if (transmissions < 1 || transmissions > kMaxTransmissions)
    {
        throw std::out_of_range("retry limit out of [1," + std::to_string(kMaxTransmissions) +
                                "]: " + std::to_string(transmissions));
    }
}

EmptyParentSetError::EmptyParentSetError()
    : std::invalid_argument("anycast probability of an empty parent set")
{
}

Probability
AnycastProbability(std::span<const Probability> linkProbs)
{
    if (linkProbs.empty())
    {
        throw EmptyParentSetError();
    }
    double miss = 1.0;
    for (const auto& p : linkProbs)
    {
        miss *= 1.0 - p.Value();
    }
    return Probability(std::clamp(1.0 - miss, 0.0, 1.0));
}

Probability
CollisionAdjustedProbability(Probability anycast, Probability collision)
{
    return Probability(anycast.Value() * (1.0 - collision.Value()));
}

namespace
{

bool
MeetsTarget(double p, double target, uint32_t k)
{
    return 1.0 - std::pow(1.0 - p, static_cast<double>(k)) >= target;
}

} // namespace

uint32_t
MinTransmissions(Probability p, Probability target)
{
    const double pv = p.Value();
    const double tv = target.Value();
    if (pv >= 1.0 || tv <= 0.0)
    {
        return 1;
    }
    if (pv <= 0.0 || tv >= 1.0)
    {
        return std::numeric_limits<uint32_t>::max();
    }
    double k = std::ceil(std::log(1.0 - tv) / std::log(1.0 - pv));
    if (!(k < 1.0e9))
    {
        return std::numeric_limits<uint32_t>::max();
    }
    auto n = static_cast<uint32_t>(std::max(1.0, k));
    // The ratio of logarithms can land one ulp off an exact boundary.
    while (n > 1 && MeetsTarget(pv, tv, n - 1))
    {
        --n;
    }
    while (!MeetsTarget(pv, tv, n))
    {
        ++n;
    }
    return n;
}

RetryLimit
RetryLimitExact(Probability p, Probability target)
{
    return RetryLimit(std::min(MinTransmissions(p, target), kMaxTransmissions));
}

double
ApproxTheta(Probability p, Probability target)
{
    const double pv = p.Value();
    const double tv = target.Value();
    const double denom = pv + pv * pv / 2.0;
    if (denom <= 0.0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return (tv + tv * tv / 2.0) / denom;
}

RetryLimit
RetryLimitApprox(Probability p, Probability target)
{
    const double theta = ApproxTheta(p, target);
    if (!std::isfinite(theta))
    {
        return RetryLimit(kMaxTransmissions);
    }
    double k;
    if (theta < 1.0)
    {
        k = 1.0;
    }
    else if (theta < 1.5)
    {
        k = std::floor(theta + 1.0);
    }
    else
    {
        k = std::ceil(theta + 1.0);
    }
    k = std::clamp(k, 1.0, static_cast<double>(kMaxTransmissions));
    return RetryLimit(static_cast<uint32_t>(k));
}

} // namespace amisim
