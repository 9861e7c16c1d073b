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

#include "amisim/random.h"

namespace amisim
{

uint64_t
MixSeed(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(uint64_t seed)
    : m_engine(MixSeed(seed))
{
}

RngStream
RngStream::ForNode(uint64_t runSeed, uint64_t id)
{
    return RngStream(MixSeed(runSeed) ^ MixSeed(id + 0x5bd1e995ULL));
}

uint64_t
RngStream::NextU64()
{
    return m_engine();
}

double
RngStream::Uniform01()
{
    // 53 high bits -> [0, 1)
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double
RngStream::Uniform(double lo, double hi)
{
    return lo + (hi - lo) * Uniform01();
}

bool
RngStream::Bernoulli(double p)
{
    if (p >= 1.0)
    {
        return true;
    }
    if (p <= 0.0)
    {
        return false;
    }
    return Uniform01() < p;
}

} // namespace amisim
