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

#ifndef AMISIM_SCENARIO_H
#define AMISIM_SCENARIO_H

#include "amisim/anycast-math.h"
#include "amisim/csma-mac.h"
#include "amisim/radio-channel.h"
#include "amisim/types.h"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amisim
{

enum class TopologyKind
{
    kPlannedGrid,
    kNeighborhood,
    kExplicit,
};

std::string_view TopologyKindName(TopologyKind kind);

struct TopologySpec
{
    TopologyKind kind{TopologyKind::kPlannedGrid};

    // planned grid; nodes counts the sink, which sits at the (0, 0) corner
    uint32_t nodes{20};
    uint32_t rows{4};
    uint32_t cols{5};
    double spacing{250.0}; ///< m

    // neighbourhood; nodes counts houses, the sink is added in the middle
    uint64_t layoutSeed{1};
    uint32_t housesPerRow{15};
    double houseSpacing{15.0}; ///< m, along a row
    double streetWidth{20.0};  ///< m, between the two rows of a street
    double gardenDepth{30.0};  ///< m, between back-to-back rows
    double jitter{2.0};        ///< m, uniform placement noise

    // explicit
    std::vector<Position> positions;
    NodeId sink{0};
};

struct Topology
{
    std::vector<Position> positions;
    NodeId sink{0};
};

struct ScenarioConfig
{
    std::string name{"custom"};
    TopologySpec topology;
    Variant variant{Variant::kOrplxCh};
    double frameInterval{5.0}; ///< s
    uint32_t framesPerNode{100};
    Probability targetPdr{0.99};
    uint64_t seed{1};
    RadioParams radio;
    MacConfig mac;
    double setupTime{60.0}; ///< s of lossless DAG formation before traffic
    double drainTime{120.0};
    /// Reading interval is split into this many slots; 0 means one per topology node.
    uint32_t trafficSlots{0};
    /// Overrides the delivery probability of every in-range link.
    std::optional<double> forcedLinkProbability;

    /// \throws std::invalid_argument on an unusable configuration.
    void Validate() const;

    uint32_t EffectiveSlots() const;
    double MaxSimTime() const
    {
        return setupTime + framesPerNode * frameInterval + drainTime;
    }
};

/// 4x5 grid (by default), sink at the corner, row-major node ids.
Topology GeneratePlannedGrid(const TopologySpec& layout);

/**
 * Synthetic street layout: pairs of house rows facing each other across a
 * street, streets stacked with back gardens in between, and the sink at the
 * centre of the bounding box.  A layout that is not connected under
 * \p radio is redrawn with the next sub-seed.
 */
Topology GenerateNeighborhood(const TopologySpec& layout, const RadioParams& radio);

Topology BuildTopology(const ScenarioConfig& config);

/// True if the in-range graph over \p positions is a single component.
bool IsConnected(const std::vector<Position>& positions, const RadioParams& radio);

/**
 * Generation times of \p node: setupTime + m * interval + node * (interval / slots)
 * for m in [0, framesPerNode).
 */
std::vector<double> ScheduleTraffic(const ScenarioConfig& config, NodeId node);

/// Scenario 1: 20-node planned grid.
/// Fractions of a reading slot that bound its quiet tail, after the slot's
/// own frame has normally reached the sink.
inline constexpr double kQuietSlotBegin = 0.5;
inline constexpr double kQuietSlotEnd = 0.9;

/**
 * A time in [earliest, latest] drawn uniformly (through \p unit in [0, 1])
 * over the quiet tails of the reading slots that overlap the window.  Falls
 * back to the whole window when no quiet tail overlaps it.
 */
double QuietSlotTime(const ScenarioConfig& config, double earliest, double latest, double unit);

ScenarioConfig Scenario1Preset();
/// Scenario 2: 120 houses in a synthetic neighbourhood.
ScenarioConfig Scenario2Preset();
/// "s1" or "s2".
std::optional<ScenarioConfig> PresetByName(std::string_view name);

/// Scenario-file problem, with the 1-based location when known.
class ScenarioError : public std::runtime_error
{
  public:
    ScenarioError(const std::string& what, int line = 0, int column = 0);
    int Line() const
    {
        return m_line;
    }
    int Column() const
    {
        return m_column;
    }

  private:
    int m_line;
    int m_column;
};

ScenarioConfig ParseScenario(const std::string& text, const std::string& sourceName = "<string>");
ScenarioConfig LoadScenarioFile(const std::string& path);

} // namespace amisim

#endif /* AMISIM_SCENARIO_H */
