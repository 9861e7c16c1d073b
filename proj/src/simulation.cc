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

#include "amisim/simulation.h"

#include "amisim/csma-mac.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace amisim
{

struct Simulation::Node : public CsmaMac::Host
{
    Node(Simulation& owner, NodeId self, bool isRoot)
        : sim(owner),
          id(self),
          rng(RngStream::ForNode(owner.m_config.seed, self)),
          router(self, isRoot, owner.m_neighbors),
          mac(self, *this, owner.m_config.mac)
    {
    }

    double Now() const override
    {
        return sim.m_scheduler.Now();
    }

    void Schedule(double delay, std::function<void()> fn) override
    {
        sim.m_scheduler.Schedule(delay, std::move(fn));
    }

    bool ChannelBusy() override
    {
        return sim.m_channel->IsBusy(id, Now());
    }

    double StartTransmission(const MacFrame& frame) override
    {
        return sim.Transmit(id, frame);
    }

    RetryLimit ComputeRetryLimit(const MacFrame& frame) override
    {
        if (frame.kind == FrameKind::kProbe)
        {
            return RetryLimit(1);
        }
        std::vector<std::optional<LinkStats>> stats;
        for (NodeId m : frame.anycastMembers)
        {
            auto it = links.find(m);
            stats.push_back(it == links.end() ? std::nullopt : std::optional<LinkStats>(it->second));
        }
        return RetryLimitFor(sim.m_config.variant, stats, collisions, sim.m_config.targetPdr);
    }

    void OnTransmission(const MacFrame& frame, uint32_t attemptIndex) override
    {
        sim.m_metrics.macTx++;
        auto& pn = sim.m_metrics.perNode[id];
        pn.macTx++;
        if (frame.kind == FrameKind::kProbe)
        {
            sim.m_metrics.probeTx++;
            pn.probeTx++;
            return;
        }
        const FrameKey key{frame.origin, frame.seq};
        auto copy = copies.find(key.Packed());
        const bool duplicate = copy != copies.end() && copy->second.duplicate;
        if (attemptIndex > 0 || duplicate)
        {
            sim.m_metrics.retransmissions++;
            pn.retransmissions++;
            if (attemptIndex == 0)
            {
                sim.m_metrics.cooperationErrors++;
            }
        }
        else
        {
            sim.m_metrics.uniqueForwards++;
        }
    }

    void OnSendDone(const MacFrame& frame, bool acked) override
    {
        if (frame.kind == FrameKind::kProbe)
        {
            LinkStats& s = LinkTo(frame.anycastMembers.front());
            s.probesSent++;
            if (acked)
            {
                s.probesAcked++;
            }
            return;
        }
        const FrameKey key{frame.origin, frame.seq};
        if (!acked)
        {
            sim.m_ledger.MarkDropped(key, DropReason::kRetry);
            sim.m_metrics.perNode[id].droppedRetry++;
        }
        copies.erase(key.Packed());
        sim.m_ledger.RemoveHolder(key, id);
        sim.CheckDone();
    }

    RngStream& Rng() override
    {
        return rng;
    }

    LinkStats& LinkTo(NodeId neighbor)
    {
        auto [it, inserted] = links.try_emplace(neighbor);
        if (inserted)
        {
            it->second.neighbor = neighbor;
        }
        return it->second;
    }

    Simulation& sim;
    NodeId id;
    RngStream rng;
    RplRouter router;
    CsmaMac mac;
    std::map<NodeId, LinkStats> links;
    CollisionHistory collisions;
    uint32_t probeSeq{0};
    bool dioPending{false};
    /// Copies of frames this node currently buffers.
    struct Copy
    {
        bool duplicate{false}; ///< the upstream copy had already been handed to another node
        bool handedOff{false}; ///< some next hop has taken this copy over
        bool queued{false};
        std::vector<NodeId> preferred; ///< members that outranked us when we took the copy
    };
    std::unordered_map<uint64_t, Copy> copies;
    /// (frame, client) pairs for which we yielded to a higher-priority ACK.
    std::set<std::pair<uint64_t, NodeId>> yielded;
    /// Frames whose copy we dropped in favour of a higher-priority forwarder.
    std::unordered_set<uint64_t> abandoned;
};

Simulation::Simulation(ScenarioConfig config)
    : m_config(std::move(config))
{
    m_config.Validate();
    m_topology = BuildTopology(m_config);
    m_channel = std::make_unique<Channel>(m_topology.positions, m_config.radio, m_config.forcedLinkProbability);
    const size_t n = m_topology.positions.size();
    m_neighbors = NeighborTable(n);
    for (NodeId a = 0; a < n; ++a)
    {
        for (NodeId b : m_channel->Neighbors(a))
        {
            m_neighbors.AddLink(a, b);
        }
    }
    for (NodeId i = 0; i < n; ++i)
    {
        m_nodes.push_back(std::make_unique<Node>(*this, i, i == m_topology.sink));
    }
    m_metrics.perNode.assign(n, {});
    for (FrameKind k : {FrameKind::kData, FrameKind::kProbe, FrameKind::kAck})
    {
        MacFrame f;
        f.kind = k;
        f.payloadBytes = k == FrameKind::kData    ? kDataPayloadBytes
                         : k == FrameKind::kProbe ? kProbePayloadBytes
                                                  : kAckPayloadBytes;
        m_maxAirtime = std::max(m_maxAirtime, m_channel->Airtime(f));
    }
}

Simulation::~Simulation() = default;

size_t
Simulation::NodeCount() const
{
    return m_nodes.size();
}

const RplRouter&
Simulation::Router(NodeId node) const
{
    return m_nodes.at(node)->router;
}

const CollisionHistory&
Simulation::Collisions(NodeId node) const
{
    return m_nodes.at(node)->collisions;
}

std::optional<LinkStats>
Simulation::Link(NodeId from, NodeId to) const
{
    const auto& links = m_nodes.at(from)->links;
    auto it = links.find(to);
    if (it == links.end())
    {
        return std::nullopt;
    }
    return it->second;
}

void
Simulation::BroadcastDio(NodeId sender, uint32_t generation)
{
    Node& n = *m_nodes[sender];
    n.dioPending = false;
    const DioMessage dio{sender, n.router.GetRank()};
    m_dag.dioCount++;
    const double airtime = m_channel->Airtime(MacFrame::Dio(sender));
    for (NodeId r : m_channel->Neighbors(sender))
    {
        m_scheduler.Schedule(airtime, [this, r, dio, generation] { DeliverDio(r, dio, generation); });
    }
}

void
Simulation::DeliverDio(NodeId receiver, const DioMessage& dio, uint32_t generation)
{
    Node& n = *m_nodes[receiver];
    LinkStats& s = n.LinkTo(dio.sender);
    s = UpdateRssiAverage(s, m_channel->RxPower(dio.sender, receiver));
    const Probability p = m_config.forcedLinkProbability ? m_channel->LinkProb(receiver, dio.sender) : s.estPdr;
    if (!n.router.ProcessDio(dio, p))
    {
        return;
    }
    m_dag.dioRounds = std::max(m_dag.dioRounds, generation);
    m_dag.lastChange = m_scheduler.Now();
    if (!n.dioPending)
    {
        n.dioPending = true;
        m_scheduler.Schedule(n.rng.Uniform01(), [this, receiver, generation] {
            BroadcastDio(receiver, generation + 1);
        });
    }
}

const DagSummary&
Simulation::FormDag()
{
    if (m_dag.formed)
    {
        return m_dag;
    }
    m_scheduler.ScheduleAt(0.0, [this] { BroadcastDio(m_topology.sink, 1); });
    m_scheduler.Run(m_config.setupTime);

    for (const auto& n : m_nodes)
    {
        if (!n->router.Joined())
        {
            std::ostringstream os;
            os << "node " << n->id << " did not join the DAG within " << m_config.setupTime
               << " s (no usable path to the sink)";
            throw SimulationError(os.str());
        }
    }
    CheckLoopFree();
    for (const auto& n : m_nodes)
    {
        uint32_t hops = 0;
        NodeId cur = n->id;
        while (cur != m_topology.sink)
        {
            cur = m_nodes[cur]->router.Parents().Default().id;
            if (++hops > m_nodes.size())
            {
                throw SimulationError("default-parent chain does not reach the sink");
            }
        }
        m_dag.maxHops = std::max(m_dag.maxHops, hops);
    }
    m_dag.formed = true;
    return m_dag;
}

void
Simulation::CheckLoopFree() const
{
    for (const auto& n : m_nodes)
    {
        for (const auto& p : n->router.Parents().Entries())
        {
            if (!(m_nodes[p.id]->router.GetRank() < n->router.GetRank()))
            {
                std::ostringstream os;
                os << "parent " << p.id << " of node " << n->id << " does not have a lower rank";
                throw SimulationError(os.str());
            }
        }
    }
}

void
Simulation::StartTraffic()
{
    m_trafficStarted = true;
    for (const auto& n : m_nodes)
    {
        if (n->id == m_topology.sink)
        {
            continue;
        }
        const auto times = ScheduleTraffic(m_config, n->id);
        for (uint32_t m = 0; m < times.size(); ++m)
        {
            const NodeId id = n->id;
            m_scheduler.ScheduleAt(std::max(times[m], m_scheduler.Now()), [this, id, m] { Generate(id, m); });
            ++m_pendingGenerations;
        }
        if (m_config.variant == Variant::kOrplxP)
        {
            for (NodeId parent : n->router.ForwardingSet(true))
            {
                const NodeId id = n->id;
                const double first = QuietSlotTime(m_config,
                                                   m_config.setupTime,
                                                   m_config.setupTime + kProbeIntervalMax,
                                                   n->rng.Uniform01());
                m_scheduler.ScheduleAt(std::max(first, m_scheduler.Now()),
                                       [this, id, parent] { SendProbe(id, parent); });
            }
        }
    }
}

void
Simulation::Generate(NodeId id, uint32_t seq)
{
    Node& n = *m_nodes[id];
    const FrameKey key{id, seq};
    --m_pendingGenerations;
    m_ledger.Generated(key);
    m_metrics.generated++;
    m_metrics.perNode[id].generated++;
    m_ledger.AddHolder(key, id);
    n.copies[key.Packed()] = {};
    if (!n.mac.Enqueue(MacFrame::Data(id, seq, id, n.router.ForwardingSet(UsesAnycast(m_config.variant)))))
    {
        m_ledger.MarkDropped(key, DropReason::kQueue);
        m_metrics.perNode[id].droppedQueue++;
        n.copies.erase(key.Packed());
        m_ledger.RemoveHolder(key, id);
    }
    CheckDone();
}

void
Simulation::SendProbe(NodeId id, NodeId target)
{
    Node& n = *m_nodes[id];
    n.mac.Enqueue(MacFrame::Probe(id, n.probeSeq++, target));
    // Probes go out when the node has no scheduled job: in the quiet tail of
    // a reading slot, 20 to 25 s after the previous one.
    const double now = m_scheduler.Now();
    const double next = QuietSlotTime(m_config, now + kProbeIntervalMin, now + kProbeIntervalMax, n.rng.Uniform01());
    m_scheduler.ScheduleAt(next, [this, id, target] { SendProbe(id, target); });
}

double
Simulation::Transmit(NodeId node, const MacFrame& frame)
{
    const Transmission& tx = m_channel->Begin(node, frame, m_scheduler.Now());
    const uint64_t txId = tx.id;
    const double duration = tx.duration;
    m_scheduler.Schedule(duration, [this, txId] { EndTransmission(txId); });
    return duration;
}

void
Simulation::EndTransmission(uint64_t txId)
{
    const Transmission tx = m_channel->Get(txId);
    const auto receptions = m_channel->Resolve(txId, [this](NodeId r) -> RngStream& { return m_nodes[r]->rng; });
    const bool tracked = tx.frame.kind == FrameKind::kData || tx.frame.kind == FrameKind::kProbe;
    bool memberCollided = false;
    for (const auto& rx : receptions)
    {
        if (rx.outcome == ReceptionOutcome::kCollision && tx.frame.PriorityOf(rx.receiver) >= 0)
        {
            memberCollided = true;
        }
        switch (rx.outcome)
        {
        case ReceptionOutcome::kDelivered:
            OnDecoded(rx.receiver, tx);
            break;
        case ReceptionOutcome::kCollision:
            m_metrics.collisions++;
            m_nodes[rx.receiver]->collisions = RecordChannelEvent(m_nodes[rx.receiver]->collisions, true);
            break;
        default:
            break;
        }
    }
    if (tracked)
    {
        // The sender learns of collisions at its intended receivers.
        Node& src = *m_nodes[tx.source];
        src.collisions = RecordChannelEvent(src.collisions, memberCollided);
    }
    m_channel->Prune(m_scheduler.Now() - 2.0 * m_maxAirtime);
}

void
Simulation::OnDecoded(NodeId receiver, const Transmission& tx)
{
    Node& n = *m_nodes[receiver];
    LinkStats& s = n.LinkTo(tx.source);
    s = UpdateRssiAverage(s, m_channel->RxPower(tx.source, receiver));
    n.collisions = RecordChannelEvent(n.collisions, false);

    const MacFrame& f = tx.frame;
    switch (f.kind)
    {
    case FrameKind::kAck:
        n.mac.OnAckDecoded(f);
        break;
    case FrameKind::kData:
        OverhearForward(n, f);
        OnDataDecoded(n, tx);
        break;
    case FrameKind::kProbe:
        if (f.PriorityOf(n.id) >= 0)
        {
            n.mac.ScheduleAck(f, tx.End(), [] {}, [](bool) {});
        }
        break;
    case FrameKind::kDio:
        break;
    }
}

void
Simulation::OnDataDecoded(Node& n, const Transmission& tx)
{
    const MacFrame& f = tx.frame;
    if (f.PriorityOf(n.id) < 0)
    {
        return;
    }
    const double end = tx.End();
    Node* node = &n;
    if (n.id == m_topology.sink)
    {
        n.mac.ScheduleAck(
            f,
            end,
            [this, node, f] {
                node->router.MarkSeen(f.origin, f.seq);
                SinkReceive(f);
            },
            [](bool) {});
        return;
    }
    RxAction action = n.router.OnDataReceived(f);
    if (action == RxAction::kDiscardDuplicate && n.abandoned.contains(FrameKey{f.origin, f.seq}.Packed()))
    {
        // We hold nothing to vouch for: take the frame like a new one.
        action = RxAction::kAckAndForward;
    }
    if (action == RxAction::kAckAndForward && n.yielded.contains({FrameKey{f.origin, f.seq}.Packed(), f.transmitter}))
    {
        // A higher-priority parent took this frame from the same client;
        // leave its retransmission to that parent.
        return;
    }
    if (action == RxAction::kAckAndForward && !m_ledger.HeldBy({f.origin, f.seq}, n.id))
    {
        // A suppressed member knows a higher-priority parent took the frame.
        n.mac.ScheduleAck(
            f,
            end,
            [this, node, f, end] { Accept(*node, f, end); },
            [node, f](bool overheard) {
                if (overheard)
                {
                    node->yielded.emplace(FrameKey{f.origin, f.seq}.Packed(), f.transmitter);
                }
            });
    }
    else
    {
        // Already ours: acknowledge again so the sender stops retrying.
        n.mac.ScheduleAck(f, end, [] {}, [](bool) {});
    }
}

void
Simulation::OverhearForward(Node& n, const MacFrame& f)
{
    const FrameKey key{f.origin, f.seq};
    auto it = n.copies.find(key.Packed());
    if (it == n.copies.end() || f.PriorityOf(n.id) >= 0)
    {
        return;
    }
    const auto& preferred = it->second.preferred;
    if (std::find(preferred.begin(), preferred.end(), f.transmitter) == preferred.end())
    {
        return;
    }
    // A higher-priority parent is already forwarding this frame.
    if (it->second.queued && !n.mac.Withdraw(f.origin, f.seq))
    {
        return;
    }
    n.copies.erase(it);
    n.abandoned.insert(key.Packed());
    m_ledger.RemoveHolder(key, n.id);
    CheckDone();
}

void
Simulation::SinkReceive(const MacFrame& f)
{
    const FrameKey key{f.origin, f.seq};
    if (m_ledger.MarkDelivered(key, f.transmitter))
    {
        m_metrics.perNode[f.origin].delivered++;
        CheckDone();
    }
    else if (f.transmitter != m_ledger.FirstDeliveryHop(key))
    {
        m_sinkDuplicates.emplace(key.Packed(), f.transmitter);
    }
}

void
Simulation::Accept(Node& n, const MacFrame& f, double frameEnd)
{
    const FrameKey key{f.origin, f.seq};
    if (m_ledger.HeldBy(key, n.id))
    {
        return;
    }
    n.router.MarkSeen(f.origin, f.seq);
    n.abandoned.erase(key.Packed());
    // Every copy has exactly one legitimate successor; a second take-over of
    // the same upstream copy, and everything descending from it, is
    // cooperation-error traffic.
    auto& upstream = m_nodes[f.transmitter]->copies[key.Packed()];
    const bool duplicate = upstream.duplicate || upstream.handedOff;
    upstream.handedOff = true;
    m_ledger.AddHolder(key, n.id);
    Node::Copy copy;
    copy.duplicate = duplicate;
    for (NodeId m : f.anycastMembers)
    {
        if (m == n.id)
        {
            break;
        }
        copy.preferred.push_back(m);
    }
    n.copies[key.Packed()] = std::move(copy);
    const double forwardAt = frameEnd + CsmaMac::AckWindow(f, m_config.mac);
    Node* node = &n;
    m_scheduler.ScheduleAt(std::max(forwardAt, m_scheduler.Now()), [this, node, key] { Forward(*node, key); });
}

void
Simulation::Forward(Node& n, FrameKey key)
{
    auto copy = n.copies.find(key.Packed());
    if (copy == n.copies.end())
    {
        return;
    }
    copy->second.queued = true;
    MacFrame f = MacFrame::Data(key.origin, key.seq, n.id, n.router.ForwardingSet(UsesAnycast(m_config.variant)));
    if (!n.mac.Enqueue(std::move(f)))
    {
        m_ledger.MarkDropped(key, DropReason::kQueue);
        m_metrics.perNode[n.id].droppedQueue++;
        n.copies.erase(key.Packed());
        m_ledger.RemoveHolder(key, n.id);
        CheckDone();
    }
}

void
Simulation::CheckDone()
{
    if (m_trafficStarted && m_pendingGenerations == 0 && m_ledger.Unresolved() == 0)
    {
        m_scheduler.Stop();
    }
}

Metrics
Simulation::Run()
{
    FormDag();
    if (m_trafficStarted)
    {
        throw std::logic_error("Simulation::Run called twice");
    }
    StartTraffic();
    m_scheduler.Run(m_config.MaxSimTime());

    const auto tally = m_ledger.Classify();
    m_metrics.delivered = tally.delivered;
    m_metrics.droppedRetry = tally.droppedRetry;
    m_metrics.droppedQueue = tally.droppedQueue;
    m_metrics.inFlight = tally.inFlight;
    m_metrics.duplicatesAtSink = m_sinkDuplicates.size();
    m_metrics.endTime = m_scheduler.Now();
    if (!m_metrics.ConservationHolds() || !m_metrics.TransmissionIdentityHolds())
    {
        throw std::logic_error("metrics accounting identity violated");
    }
    return m_metrics;
}

Metrics
RunScenario(const ScenarioConfig& config)
{
    Simulation sim(config);
    return sim.Run();
}

} // namespace amisim
