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

#ifndef AMISIM_RPL_ROUTING_H
#define AMISIM_RPL_ROUTING_H

#include "amisim/anycast-math.h"
#include "amisim/mac-frame.h"
#include "amisim/types.h"

#include <compare>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace amisim
{

inline constexpr uint64_t kMinHopRankIncrease = 256;
inline constexpr uint64_t kRootRank = 256;
inline constexpr size_t kMaxParents = 3;
inline constexpr size_t kSeqCacheCapacity = 16;

/// DAG rank in MinHopRankIncrease units; default-constructed rank is infinite.
class Rank
{
  public:
    constexpr Rank() = default;

    constexpr explicit Rank(uint64_t value)
        : m_value(value)
    {
    }

    static constexpr Rank Infinite()
    {
        return Rank();
    }

    static constexpr Rank Root()
    {
        return Rank(kRootRank);
    }

    constexpr bool IsInfinite() const
    {
        return m_value == kInfinite;
    }

    constexpr uint64_t Value() const
    {
        return m_value;
    }

    friend constexpr auto operator<=>(const Rank&, const Rank&) = default;

  private:
    static constexpr uint64_t kInfinite = std::numeric_limits<uint64_t>::max();
    uint64_t m_value{kInfinite};
};

/// ETX-style cost round(256 / p); nullopt for a dead link.
std::optional<uint64_t> LinkCost(Probability p);

struct DioMessage
{
    NodeId sender{kNoNode};
    Rank senderRank;
};

struct ParentEntry
{
    NodeId id{kNoNode};
    Rank advertisedRank;
    uint64_t linkCost{0};
    Probability linkProbability{};
    uint32_t priority{0};

    uint64_t PathCost() const
    {
        return advertisedRank.Value() + linkCost;
    }
};

/// Symmetric radio adjacency known to every node.
class NeighborTable
{
  public:
    explicit NeighborTable(size_t nodes = 0);

    void AddLink(NodeId a, NodeId b);
    bool AreNeighbors(NodeId a, NodeId b) const;
    size_t NodeCount() const
    {
        return m_adjacent.size();
    }
    size_t Degree(NodeId node) const;

  private:
    std::vector<std::vector<bool>> m_adjacent;
};

/// Anycast set, default parent first.  Priorities are consecutive from 0.
class ParentSet
{
  public:
    ParentSet() = default;
    /// Takes entries in priority order and renumbers their priorities.
    explicit ParentSet(std::vector<ParentEntry> ordered);

    bool Empty() const
    {
        return m_entries.empty();
    }

    size_t Size() const
    {
        return m_entries.size();
    }

    const ParentEntry& Default() const;
    const std::vector<ParentEntry>& Entries() const
    {
        return m_entries;
    }

    std::vector<NodeId> Members() const;
    int PriorityOf(NodeId id) const;

  private:
    std::vector<ParentEntry> m_entries;
};

/// Minimum path cost over the set; infinite for an empty set.
Rank ComputeRank(const ParentSet& parents);

/**
 * Greedy anycast set: candidates by ascending path cost (ties by id); the
 * best is the default parent and each following candidate joins only if it
 * is a radio neighbour of every member already chosen.
 */
ParentSet SelectParentSet(std::vector<ParentEntry> candidates,
                          const NeighborTable& neighbors,
                          size_t maxSize = kMaxParents);

/// Recently seen (origin, seq) pairs with LRU eviction.
class SeqCache
{
  public:
    explicit SeqCache(size_t capacity = kSeqCacheCapacity);

    bool Contains(NodeId origin, uint32_t seq) const;
    /// Inserts or refreshes the pair as most recently used.
    void Insert(NodeId origin, uint32_t seq);
    size_t Size() const
    {
        return m_entries.size();
    }

  private:
    size_t m_capacity;
    std::deque<std::pair<NodeId, uint32_t>> m_entries; // front = most recent
};

enum class RxAction
{
    kNotAddressed,
    kDiscardDuplicate,
    kDeliver,
    kAckAndForward,
};

/**
 * Per-node RPL state: candidate parents learnt from DIOs, the selected
 * anycast set and the duplicate cache.
 */
class RplRouter
{
  public:
    RplRouter(NodeId self, bool isRoot, const NeighborTable& neighbors, size_t maxParents = kMaxParents);

    NodeId Id() const
    {
        return m_self;
    }

    bool IsRoot() const
    {
        return m_isRoot;
    }

    Rank GetRank() const
    {
        return m_rank;
    }

    bool Joined() const
    {
        return !m_rank.IsInfinite();
    }

    const ParentSet& Parents() const
    {
        return m_parents;
    }

    /**
     * Records the sender as a candidate and recomputes the parent set.
     * Senders whose rank is not below ours are remembered but never chosen.
     * \return true when our rank changed (a DIO rebroadcast is due).
     */
    bool ProcessDio(const DioMessage& dio, Probability linkProb);

    /// Receivers for our own transmissions: full set, or the default parent only.
    std::vector<NodeId> ForwardingSet(bool anycast) const;

    /// Classifies a decoded data frame; does not modify the duplicate cache.
    RxAction OnDataReceived(const MacFrame& frame) const;

    /// Remembers a frame we took responsibility for.
    void MarkSeen(NodeId origin, uint32_t seq);

  private:
    void Recompute();

    struct Candidate
    {
        Rank advertised;
        Probability linkProb;
    };

    NodeId m_self;
    bool m_isRoot;
    const NeighborTable* m_neighbors;
    size_t m_maxParents;
    Rank m_rank;
    ParentSet m_parents;
    std::map<NodeId, Candidate> m_candidates;
    SeqCache m_seen;
};

} // namespace amisim

#endif /* AMISIM_RPL_ROUTING_H */
