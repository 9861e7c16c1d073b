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

#ifndef AMISIM_SIMULATION_H
#define AMISIM_SIMULATION_H

#include "amisim/link-estimation.h"
#include "amisim/metrics.h"
#include "amisim/radio-channel.h"
#include "amisim/rpl-routing.h"
#include "amisim/scenario.h"
#include "amisim/scheduler.h"

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace amisim
{

/// A run that cannot proceed, e.g. a node that never joins the DAG.
class SimulationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct DagSummary
{
    bool formed{false};
    uint32_t maxHops{0};    ///< longest default-parent path to the sink
    uint32_t dioRounds{0};  ///< DIO generations until the last rank change
    uint64_t dioCount{0};
    double lastChange{0.0}; ///< s
};

/**
 * One packet-level run of a scenario: lossless DAG formation during the
 * setup phase, then periodic meter readings routed to the sink over the
 * CSMA MAC and the shared channel.
 */
class Simulation
{
  public:
    explicit Simulation(ScenarioConfig config);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs the setup phase.  \throws SimulationError if a node stays detached.
    const DagSummary& FormDag();
    /// Forms the DAG if needed, then runs traffic until every frame is resolved or time runs out.
    Metrics Run();

    const ScenarioConfig& Config() const
    {
        return m_config;
    }
    const Topology& GetTopology() const
    {
        return m_topology;
    }
    const Channel& GetChannel() const
    {
        return *m_channel;
    }
    const NeighborTable& Neighbors() const
    {
        return m_neighbors;
    }
    const DagSummary& Dag() const
    {
        return m_dag;
    }
    size_t NodeCount() const;
    NodeId Sink() const
    {
        return m_topology.sink;
    }
    const RplRouter& Router(NodeId node) const;
    const CollisionHistory& Collisions(NodeId node) const;
    std::optional<LinkStats> Link(NodeId from, NodeId to) const;

  private:
    struct Node;
    friend struct Node;

    void BroadcastDio(NodeId sender, uint32_t generation);
    void DeliverDio(NodeId receiver, const DioMessage& dio, uint32_t generation);
    void StartTraffic();
    void Generate(NodeId node, uint32_t seq);
    void SendProbe(NodeId node, NodeId target);
    double Transmit(NodeId node, const MacFrame& frame);
    void EndTransmission(uint64_t txId);
    void OnDecoded(NodeId receiver, const Transmission& tx);
    void OnDataDecoded(Node& node, const Transmission& tx);
    void Accept(Node& node, const MacFrame& frame, double frameEnd);
    void Forward(Node& node, FrameKey key);
    void OverhearForward(Node& node, const MacFrame& frame);
    void SinkReceive(const MacFrame& frame);
    void CheckDone();
    void CheckLoopFree() const;

    ScenarioConfig m_config;
    Topology m_topology;
    std::unique_ptr<Channel> m_channel;
    NeighborTable m_neighbors;
    Scheduler m_scheduler;
    std::vector<std::unique_ptr<Node>> m_nodes;
    FrameLedger m_ledger;
    Metrics m_metrics;
    DagSummary m_dag;
    double m_maxAirtime{0.0};
    uint64_t m_pendingGenerations{0};
    bool m_trafficStarted{false};
    std::set<std::pair<uint64_t, NodeId>> m_sinkDuplicates; ///< (frame, last hop) pairs already counted
};

/// Convenience wrapper: Simulation(config).Run().
Metrics RunScenario(const ScenarioConfig& config);

} // namespace amisim

#endif /* AMISIM_SIMULATION_H */
