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

#ifndef AMISIM_RADIO_CHANNEL_H
#define AMISIM_RADIO_CHANNEL_H

#include "amisim/anycast-math.h"
#include "amisim/mac-frame.h"
#include "amisim/random.h"
#include "amisim/types.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace amisim
{

struct Position
{
    double x{0.0}; ///< m
    double y{0.0}; ///< m
};

double Distance(const Position& a, const Position& b);

/// Co-located nodes are treated as this far apart.
inline constexpr double kMinDistance = 0.5;

struct RadioParams
{
    double txPowerDbm{0.0};
    double frequencyHz{2.4e9};
    double sensitivityDbm{-94.0};
    double senseThresholdDbm{-94.0};
    double bitrate{250000.0};

    /// \throws std::invalid_argument on inconsistent values.
    void Validate() const;
};

/**
 * Received power after free-space path loss:
 * tx - (20 log10 d + 20 log10 f + 20 log10(4 pi / c)).
 *
 * \throws std::domain_error if \p distance is not positive.
 */
double FsplRssi(double distance, const RadioParams& params);

/// Delivery probability of the link a-b: RssiToPdr(FsplRssi(|a-b|)).
Probability LinkProbability(const Position& a, const Position& b, const RadioParams& params);

enum class ChannelState
{
    kIdle,
    kBusy,
};

/// Busy iff any of the given received powers reaches the sense threshold.
ChannelState CarrierSense(std::span<const double> activeRxPowersDbm, const RadioParams& params);

enum class ReceptionOutcome
{
    kDelivered,
    kCollision,
    kSilence,    ///< below sensitivity
    kLost,       ///< in range, no collision, Bernoulli loss
    kHalfDuplex, ///< receiver was transmitting
};

/**
 * Capture-less reception: a frame arriving below sensitivity is silence;
 * any overlapping in-range interferer destroys it; otherwise it is decoded
 * with probability \p linkProb.
 */
ReceptionOutcome ResolveReception(double targetRxDbm,
                                  std::span<const double> interfererRxDbm,
                                  Probability linkProb,
                                  const RadioParams& params,
                                  RngStream& rng);

struct Transmission
{
    uint64_t id{0};
    NodeId source{kNoNode};
    double start{0.0};
    double duration{0.0};
    MacFrame frame;

    double End() const
    {
        return start + duration;
    }
};

struct Reception
{
    NodeId receiver;
    ReceptionOutcome outcome;
};

/**
 * Shared medium for a static topology.  Received powers and link
 * probabilities are precomputed; in-flight transmissions are kept until they
 * can no longer overlap anything being resolved.
 */
class Channel
{
  public:
    /**
     * \param forcedLinkProbability when set, every in-range link delivers
     *        with this probability instead of the geometric value.
     */
    Channel(std::vector<Position> positions,
            RadioParams params,
            std::optional<double> forcedLinkProbability = std::nullopt);

    size_t NodeCount() const
    {
        return m_positions.size();
    }

    const RadioParams& Params() const
    {
        return m_params;
    }

    const Position& PositionOf(NodeId node) const
    {
        return m_positions.at(node);
    }

    double RxPower(NodeId from, NodeId to) const;
    /// Probability used for reception draws (honours the forced value).
    Probability LinkProb(NodeId from, NodeId to) const;
    /// Probability implied by geometry alone.
    Probability GeometricLinkProb(NodeId from, NodeId to) const;
    /// Received power at least the receive sensitivity.
    bool InRange(NodeId a, NodeId b) const;
    const std::vector<NodeId>& Neighbors(NodeId node) const;

    double Airtime(const MacFrame& frame) const;

    bool IsTransmitting(NodeId node, double now) const;
    /// Carrier sense at \p node; a transmitting node also reports busy.
    bool IsBusy(NodeId node, double now) const;

    /// Puts \p frame on air at \p now.
    const Transmission& Begin(NodeId source, MacFrame frame, double now);

    /**
     * Resolves transmission \p txId at every in-range receiver.  Must be
     * called at or after its end.  Out-of-range nodes are not listed.
     */
    std::vector<Reception> Resolve(uint64_t txId, const std::function<RngStream&(NodeId)>& rngFor);

    const Transmission& Get(uint64_t txId) const;

    /// Drops bookkeeping for transmissions that ended before \p horizon.
    void Prune(double horizon);

  private:
    std::vector<Position> m_positions;
    RadioParams m_params;
    std::optional<double> m_forced;
    std::vector<double> m_rxPower;
    std::vector<Probability> m_linkProb;
    std::vector<std::vector<NodeId>> m_neighbors;
    std::vector<Transmission> m_recent;
    uint64_t m_nextTxId{1};
};

} // namespace amisim

#endif /* AMISIM_RADIO_CHANNEL_H */
