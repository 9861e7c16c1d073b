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

#include "amisim/radio-channel.h"

#include "amisim/link-estimation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace amisim
{

namespace
{
constexpr double kSpeedOfLight = 299792458.0;
} // namespace

double
Distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

void
RadioParams::Validate() const
{
    if (!(frequencyHz > 0.0) || !(bitrate > 0.0))
    {
        throw std::invalid_argument("radio frequency and bitrate must be positive");
    }
    if (!(sensitivityDbm <= senseThresholdDbm))
    {
        throw std::invalid_argument("sense threshold below receive sensitivity");
    }
    if (!(senseThresholdDbm <= txPowerDbm))
    {
        throw std::invalid_argument("sense threshold above transmit power");
    }
}

double
FsplRssi(double distance, const RadioParams& params)
{
    if (!(distance > 0.0))
    {
        throw std::domain_error("free-space loss needs a positive distance");
    }
    const double loss = 20.0 * std::log10(distance) + 20.0 * std::log10(params.frequencyHz) +
                        20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLight);
    return params.txPowerDbm - loss;
}

Probability
LinkProbability(const Position& a, const Position& b, const RadioParams& params)
{
    const double d = std::max(Distance(a, b), kMinDistance);
    return RssiToPdr(FsplRssi(d, params));
}

ChannelState
CarrierSense(std::span<const double> activeRxPowersDbm, const RadioParams& params)
{
    for (double p : activeRxPowersDbm)
    {
        if (p >= params.senseThresholdDbm)
        {
            return ChannelState::kBusy;
        }
    }
    return ChannelState::kIdle;
}

ReceptionOutcome
ResolveReception(double targetRxDbm,
                 std::span<const double> interfererRxDbm,
                 Probability linkProb,
                 const RadioParams& params,
                 RngStream& rng)
{
    if (targetRxDbm < params.sensitivityDbm)
    {
        return ReceptionOutcome::kSilence;
    }
    for (double p : interfererRxDbm)
    {
        if (p >= params.sensitivityDbm)
        {
            return ReceptionOutcome::kCollision;
        }
    }
    return rng.Bernoulli(linkProb.Value()) ? ReceptionOutcome::kDelivered : ReceptionOutcome::kLost;
}

Channel::Channel(std::vector<Position> positions,
                 RadioParams params,
                 std::optional<double> forcedLinkProbability)
    : m_positions(std::move(positions)),
      m_params(params),
      m_forced(forcedLinkProbability)
{
    m_params.Validate();
    if (m_forced)
    {
        static_cast<void>(Probability(*m_forced)); // range check
    }
    const size_t n = m_positions.size();
    m_rxPower.assign(n * n, -std::numeric_limits<double>::infinity());
    m_linkProb.assign(n * n, Probability(0.0));
    m_neighbors.assign(n, {});
    for (size_t a = 0; a < n; ++a)
    {
        for (size_t b = 0; b < n; ++b)
        {
            if (a == b)
            {
                continue;
            }
            const double d = std::max(Distance(m_positions[a], m_positions[b]), kMinDistance);
            const double rx = FsplRssi(d, m_params);
            m_rxPower[a * n + b] = rx;
            m_linkProb[a * n + b] = RssiToPdr(rx);
            if (rx >= m_params.sensitivityDbm)
            {
                m_neighbors[a].push_back(static_cast<NodeId>(b));
            }
        }
    }
}

double
Channel::RxPower(NodeId from, NodeId to) const
{
    return m_rxPower.at(static_cast<size_t>(from) * NodeCount() + to);
}

Probability
Channel::GeometricLinkProb(NodeId from, NodeId to) const
{
    return m_linkProb.at(static_cast<size_t>(from) * NodeCount() + to);
}

Probability
Channel::LinkProb(NodeId from, NodeId to) const
{
    if (m_forced && InRange(from, to))
    {
        return Probability(*m_forced);
    }
    return GeometricLinkProb(from, to);
}

bool
Channel::InRange(NodeId a, NodeId b) const
{
    return a != b && RxPower(a, b) >= m_params.sensitivityDbm;
}

const std::vector<NodeId>&
Channel::Neighbors(NodeId node) const
{
    return m_neighbors.at(node);
}

double
Channel::Airtime(const MacFrame& frame) const
{
    return amisim::Airtime(frame, m_params.bitrate);
}

bool
Channel::IsTransmitting(NodeId node, double now) const
{
    return std::any_of(m_recent.begin(), m_recent.end(), [&](const Transmission& t) {
        return t.source == node && t.start <= now && now < t.End();
    });
}

bool
Channel::IsBusy(NodeId node, double now) const
{
    for (const auto& t : m_recent)
    {
        if (!(t.start <= now && now < t.End()))
        {
            continue;
        }
        if (t.source == node || RxPower(t.source, node) >= m_params.senseThresholdDbm)
        {
            return true;
        }
    }
    return false;
}

const Transmission&
Channel::Begin(NodeId source, MacFrame frame, double now)
{
    Transmission t;
    t.id = m_nextTxId++;
    t.source = source;
    t.start = now;
    t.duration = Airtime(frame);
    t.frame = std::move(frame);
    m_recent.push_back(std::move(t));
    return m_recent.back();
}

const Transmission&
Channel::Get(uint64_t txId) const
{
    auto it = std::find_if(m_recent.rbegin(), m_recent.rend(), [&](const Transmission& t) {
        return t.id == txId;
    });
    if (it == m_recent.rend())
    {
        throw std::logic_error("unknown transmission id");
    }
    return *it;
}

std::vector<Reception>
Channel::Resolve(uint64_t txId, const std::function<RngStream&(NodeId)>& rngFor)
{
    const Transmission target = Get(txId);
    std::vector<Reception> out;
    std::vector<double> interferers;
    for (NodeId r : m_neighbors.at(target.source))
    {
        bool halfDuplex = false;
        interferers.clear();
        for (const auto& o : m_recent)
        {
            if (o.id == target.id || !(o.start < target.End() && o.End() > target.start))
            {
                continue;
            }
            if (o.source == r)
            {
                halfDuplex = true;
                break;
            }
            if (o.source != target.source)
            {
                interferers.push_back(RxPower(o.source, r));
            }
        }
        if (halfDuplex)
        {
            out.push_back({r, ReceptionOutcome::kHalfDuplex});
            continue;
        }
        out.push_back({r,
                       ResolveReception(RxPower(target.source, r),
                                        interferers,
                                        LinkProb(target.source, r),
                                        m_params,
                                        rngFor(r))});
    }
    return out;
}

void
Channel::Prune(double horizon)
{
    std::erase_if(m_recent, [&](const Transmission& t) { return t.End() < horizon; });
}

} // namespace amisim
