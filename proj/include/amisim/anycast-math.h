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

#ifndef AMISIM_ANYCAST_MATH_H
#define AMISIM_ANYCAST_MATH_H

#include <cstdint>
#include <span>
#include <stdexcept>

namespace amisim
{

/// A probability value, always within [0, 1].
class Probability
{
  public:
    constexpr Probability() = default;

    /// \throws std::out_of_range when \p value is outside [0, 1] or NaN.
    explicit Probability(double value);

    constexpr double Value() const
    {
        return m_value;
    }

    friend constexpr auto operator<=>(const Probability&, const Probability&) = default;

  private:
    double m_value{0.0};
};

/// Upper bound on the number of MAC transmissions per frame and hop.
inline constexpr uint32_t kMaxTransmissions = 8;

/// Number of MAC transmissions allowed for one frame at one hop, in [1, kMaxTransmissions].
class RetryLimit
{
  public:
    /// \throws std::out_of_range when \p transmissions is 0 or above kMaxTransmissions.
    explicit RetryLimit(uint32_t transmissions);

    constexpr uint32_t Value() const
    {
        return m_value;
    }

    friend constexpr auto operator<=>(const RetryLimit&, const RetryLimit&) = default;

  private:
    uint32_t m_value;
};

/// Raised when an anycast probability is requested for an empty parent set.
class EmptyParentSetError : public std::invalid_argument
{
  public:
    EmptyParentSetError();
};

/**
 * Probability that at least one member of the anycast set decodes a single
 * transmission: 1 - prod(1 - p_j), with independent links.
 *
 * \throws EmptyParentSetError if \p linkProbs is empty.
 */
Probability AnycastProbability(std::span<const Probability> linkProbs);

/// Anycast success discounted by an independent collision probability: pA * (1 - pc).
Probability CollisionAdjustedProbability(Probability anycast, Probability collision);

/**
 * Smallest k with 1 - (1 - p)^k >= target, without the kMaxTransmissions cap.
 * Returns UINT32_MAX when p is 0 and 1 when p is 1.
 */
uint32_t MinTransmissions(Probability p, Probability target);

/// MinTransmissions clamped to [1, kMaxTransmissions].
RetryLimit RetryLimitExact(Probability p, Probability target);

/**
 * Ratio of the two-term power series of the target and link terms,
 * (pt + pt^2/2) / (p + p^2/2).  Infinite when \p p is 0.
 */
double ApproxTheta(Probability p, Probability target);

/**
 * Logarithm-free retry limit:
 *   1            if theta < 1
 *   floor(theta+1) if 1 <= theta < 1.5
 *   ceil(theta+1)  otherwise
 * clamped to kMaxTransmissions.  Branch boundaries are compared exactly.
 */
RetryLimit RetryLimitApprox(Probability p, Probability target);

} // namespace amisim

#endif /* AMISIM_ANYCAST_MATH_H */
