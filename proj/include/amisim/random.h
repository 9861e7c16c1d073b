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

#ifndef AMISIM_RANDOM_H
#define AMISIM_RANDOM_H

#include <cstdint>
#include <random>

namespace amisim
{

/**
 * Per-node pseudo-random stream.
 *
 * Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
 * converts raw draws to doubles itself, so a given seed yields the same
 * sequence on every standard library.
 */
class RngStream
{
  public:
    explicit RngStream(uint64_t seed);

    /// Derives the sub-stream of node \p id from the run seed.
    static RngStream ForNode(uint64_t runSeed, uint64_t id);

    uint64_t NextU64();
    /// Uniform in [0, 1).
    double Uniform01();
    double Uniform(double lo, double hi);
    bool Bernoulli(double p);

  private:
    std::mt19937_64 m_engine;
};

/// SplitMix64 finaliser, used to decorrelate seeds.
uint64_t MixSeed(uint64_t x);

} // namespace amisim

#endif /* AMISIM_RANDOM_H */
