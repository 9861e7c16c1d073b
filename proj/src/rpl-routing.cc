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

#include "amisim/rpl-routing.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amisim
{

std::optional<uint64_t>
LinkCost(Probability p)
{
    if (p.Value() <= 0.0)
    {
        return std::nullopt;
    }
    return static_cast<uint64_t>(std::llround(static_cast<double>(kMinHopRankIncrease) / p.Value()));
}

NeighborTable::NeighborTable(size_t nodes)
    : m_adjacent(nodes, std::vector<bool>(nodes, false))
{
}

void
NeighborTable::AddLink(NodeId a, NodeId b)
{
    if (a == b)
    {
        return;
    }
    m_adjacent.at(a).at(b) = true;
    m_adjacent.at(b).at(a) = true;
}

bool
NeighborTable::AreNeighbors(NodeId a, NodeId b) const
{
    if (a >= m_adjacent.size() || b >= m_adjacent.size())
    {
        return false;
    }
    return m_adjacent[a][b];
}

size_t
NeighborTable::Degree(NodeId node) const
{
    const auto& row = m_adjacent.at(node);
    return static_cast<size_t>(std::count(row.begin(), row.end(), true));
}

ParentSet::ParentSet(std::vector<ParentEntry> ordered)
    : m_entries(std::move(ordered))
{
    for (size_t i = 0; i < m_entries.size(); ++i)
    {
        m_entries[i].priority = static_cast<uint32_t>(i);
    }
}

const ParentEntry&
ParentSet::Default() const
{
    if (m_entries.empty())
    {
        throw std::logic_error("empty parent set has no default parent");
    }
    return m_entries.front();
}

std::vector<NodeId>
ParentSet::Members() const
{
    std::vector<NodeId> ids;
    ids.reserve(m_entries.size());
    for (const auto& e : m_entries)
    {
        ids.push_back(e.id);
    }
    return ids;
}

int
ParentSet::PriorityOf(NodeId id) const
{
    for (const auto& e : m_entries)
    {
        if (e.id == id)
        {
            return static_cast<int>(e.priority);
        }
    }
    return -1;
}

Rank
ComputeRank(const ParentSet& parents)
{
    Rank best = Rank::Infinite();
    for (const auto& e : parents.Entries())
    {
        best = std::min(best, Rank(e.PathCost()));
    }
    return best;
}

ParentSet
SelectParentSet(std::vector<ParentEntry> candidates, const NeighborTable& neighbors, size_t maxSize)
{
    std::sort(candidates.begin(), candidates.end(), [](const ParentEntry& a, const ParentEntry& b) {
        if (a.PathCost() != b.PathCost())
        {
            return a.PathCost() < b.PathCost();
        }
        return a.id < b.id;
    });
    std::vector<ParentEntry> chosen;
    for (const auto& c : candidates)
    {
        if (chosen.size() >= maxSize)
        {
            break;
        }
        bool compatible = std::all_of(chosen.begin(), chosen.end(), [&](const ParentEntry& m) {
            return neighbors.AreNeighbors(m.id, c.id);
        });
        if (compatible)
        {
            chosen.push_back(c);
        }
    }
    return ParentSet(std::move(chosen));
}

SeqCache::SeqCache(size_t capacity)
    : m_capacity(capacity)
{
}

bool
SeqCache::Contains(NodeId origin, uint32_t seq) const
{
    return std::find(m_entries.begin(), m_entries.end(), std::make_pair(origin, seq)) !=
           m_entries.end();
}

void
SeqCache::Insert(NodeId origin, uint32_t seq)
{
    auto key = std::make_pair(origin, seq);
    auto it = std::find(m_entries.begin(), m_entries.end(), key);
    if (it != m_entries.end())
    {
        m_entries.erase(it);
    }
    m_entries.push_front(key);
    while (m_entries.size() > m_capacity)
    {
        m_entries.pop_back();
    }
}

RplRouter::RplRouter(NodeId self, bool isRoot, const NeighborTable& neighbors, size_t maxParents)
    : m_self(self),
      m_isRoot(isRoot),
      m_neighbors(&neighbors),
      m_maxParents(maxParents),
      m_rank(isRoot ? Rank::Root() : Rank::Infinite())
{
}

bool
RplRouter::ProcessDio(const DioMessage& dio, Probability linkProb)
{
    if (m_isRoot || dio.sender == m_self || dio.senderRank.IsInfinite())
    {
        return false;
    }
    m_candidates[dio.sender] = Candidate{dio.senderRank, linkProb};
    const Rank before = m_rank;
    Recompute();
    return m_rank != before;
}

void
RplRouter::Recompute()
{
    std::vector<ParentEntry> all;
    for (const auto& [id, c] : m_candidates)
    {
        auto cost = LinkCost(c.linkProb);
        if (!cost)
        {
            continue;
        }
        ParentEntry e;
        e.id = id;
        e.advertisedRank = c.advertised;
        e.linkCost = *cost;
        e.linkProbability = c.linkProb;
        all.push_back(e);
    }
    Rank best = Rank::Infinite();
    for (const auto& e : all)
    {
        best = std::min(best, Rank(e.PathCost()));
    }
    // Only nodes strictly closer to the root than we are may become parents.
    std::erase_if(all, [&](const ParentEntry& e) { return !(e.advertisedRank < best); });
    m_parents = SelectParentSet(std::move(all), *m_neighbors, m_maxParents);
    m_rank = ComputeRank(m_parents);
}

std::vector<NodeId>
RplRouter::ForwardingSet(bool anycast) const
{
    if (m_parents.Empty())
    {
        return {};
    }
    if (!anycast)
    {
        return {m_parents.Default().id};
    }
    return m_parents.Members();
}

RxAction
RplRouter::OnDataReceived(const MacFrame& frame) const
{
    if (frame.kind != FrameKind::kData || frame.PriorityOf(m_self) < 0)
    {
        return RxAction::kNotAddressed;
    }
    if (m_seen.Contains(frame.origin, frame.seq))
    {
        return RxAction::kDiscardDuplicate;
    }
    return m_isRoot ? RxAction::kDeliver : RxAction::kAckAndForward;
}

void
RplRouter::MarkSeen(NodeId origin, uint32_t seq)
{
    m_seen.Insert(origin, seq);
}

} // namespace amisim
