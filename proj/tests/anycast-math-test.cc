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

#include "amisim/anycast-math.h"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace amisim;

namespace
{

// Independent oracle: smallest k with 1 - (1 - p)^k >= target, by counting up.
uint32_t
BruteForceTransmissions(double p, double target, uint32_t limit = 100000)
{
    double success = 0.0;
    for (uint32_t k = 1; k <= limit; ++k)
    {
        success = 1.0 - std::pow(1.0 - p, k);
        if (success >= target)
        {
            return k;
        }
    }
    return limit + 1;
}

double
Anycast(std::initializer_list<double> ps)
{
    std::vector<Probability> v;
    for (double p : ps)
    {
        v.emplace_back(p);
    }
    return AnycastProbability(v).Value();
}

} // namespace

TEST_CASE("Probability rejects values outside the unit interval")
{
    CHECK_NOTHROW(Probability(0.0));
    CHECK_NOTHROW(Probability(1.0));
    CHECK_THROWS_AS(Probability(-1e-9), std::out_of_range);
    CHECK_THROWS_AS(Probability(1.0 + 1e-9), std::out_of_range);
    CHECK_THROWS_AS(Probability(std::nan("")), std::out_of_range);
}

TEST_CASE("RetryLimit enforces the transmission cap")
{
    CHECK_THROWS_AS(RetryLimit(0), std::out_of_range);
    CHECK_THROWS_AS(RetryLimit(kMaxTransmissions + 1), std::out_of_range);
    CHECK(RetryLimit(kMaxTransmissions).Value() == kMaxTransmissions);
}

TEST_CASE("anycast probability examples")
{
    CHECK(Anycast({0.5}) == doctest::Approx(0.5));
    CHECK(Anycast({1.0, 0.2}) == doctest::Approx(1.0));
    CHECK(Anycast({0.7, 0.8, 0.9}) == doctest::Approx(0.994).epsilon(1e-12));
    std::vector<Probability> empty;
    CHECK_THROWS_AS(AnycastProbability(empty), EmptyParentSetError);
}

TEST_CASE("anycast probability of {0.7, 0.8, 0.9} agrees with Bernoulli sampling")
{
    std::mt19937_64 gen(20240601);
    std::bernoulli_distribution a(0.7), b(0.8), c(0.9);
    const int trials = 1000000;
    int hits = 0;
    for (int i = 0; i < trials; ++i)
    {
        bool ra = a(gen), rb = b(gen), rc = c(gen);
        hits += (ra || rb || rc) ? 1 : 0;
    }
    const double freq = static_cast<double>(hits) / trials;
    const double p = Anycast({0.7, 0.8, 0.9});
    const double se = std::sqrt(p * (1.0 - p) / trials);
    CHECK(std::abs(freq - p) <= 3.0 * se);
}

TEST_CASE("anycast probability is monotone under appending a link")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int set = 0; set < 2000; ++set)
    {
        std::vector<Probability> links;
        double prev = 0.0;
        for (int n = 0; n < 5; ++n)
        {
            links.emplace_back(u(gen));
            const double now = AnycastProbability(links).Value();
            CHECK(now >= prev);
            prev = now;
        }
    }
}

TEST_CASE("collision-adjusted probability examples")
{
    CHECK(CollisionAdjustedProbability(Probability(0.994), Probability(0.0)).Value() ==
          doctest::Approx(0.994));
    CHECK(CollisionAdjustedProbability(Probability(0.9), Probability(1.0)).Value() ==
          doctest::Approx(0.0));
    CHECK(CollisionAdjustedProbability(Probability(0.9), Probability(0.2)).Value() ==
          doctest::Approx(0.72));

    std::mt19937_64 gen(99);
    std::bernoulli_distribution channel(0.9), collision(0.2);
    const int trials = 1000000;
    int ok = 0;
    for (int i = 0; i < trials; ++i)
    {
        bool hit = collision(gen);
        bool rx = channel(gen);
        ok += (!hit && rx) ? 1 : 0;
    }
    const double se = std::sqrt(0.72 * 0.28 / trials);
    CHECK(std::abs(static_cast<double>(ok) / trials - 0.72) <= 3.0 * se);
}

TEST_CASE("exact retry limit examples")
{
    CHECK(RetryLimitExact(Probability(0.99), Probability(0.99)).Value() == 1);
    CHECK(RetryLimitExact(Probability(0.7), Probability(0.99)).Value() == 4);
    CHECK(RetryLimitExact(Probability(0.994), Probability(0.99)).Value() == 1);
    CHECK(RetryLimitExact(Probability(0.0), Probability(0.99)).Value() == kMaxTransmissions);
    CHECK(RetryLimitExact(Probability(1.0), Probability(0.99)).Value() == 1);
}

TEST_CASE("uncapped minimum transmissions at low link probability")
{
    // 0.3 needs 13 transmissions for 99 %; the capped limit stops at the cap.
    CHECK(MinTransmissions(Probability(0.3), Probability(0.99)) == 13);
    CHECK(BruteForceTransmissions(0.3, 0.99) == 13);
    CHECK(RetryLimitExact(Probability(0.3), Probability(0.99)).Value() == kMaxTransmissions);
}

TEST_CASE("exact retry limit matches brute force on the grid")
{
    for (double t : {0.90, 0.95, 0.99})
    {
        for (int i = 1; i <= 19; ++i)
        {
            const double p = 0.05 * i;
            CAPTURE(p);
            CAPTURE(t);
            CHECK(MinTransmissions(Probability(p), Probability(t)) == BruteForceTransmissions(p, t));
        }
    }
}

TEST_CASE("exact retry limit is monotone in link probability and target")
{
    const std::vector<double> targets{0.5, 0.8, 0.9, 0.95, 0.99, 0.999};
    for (size_t ti = 0; ti < targets.size(); ++ti)
    {
        uint32_t prev = std::numeric_limits<uint32_t>::max();
        for (int i = 1; i < 1000; ++i)
        {
            const double p = i / 1000.0;
            const uint32_t k = MinTransmissions(Probability(p), Probability(targets[ti]));
            CHECK(k <= prev);
            prev = k;
            if (ti > 0)
            {
                CHECK(k >= MinTransmissions(Probability(p), Probability(targets[ti - 1])));
            }
        }
    }
}

TEST_CASE("approximate retry limit examples")
{
    CHECK(ApproxTheta(Probability(0.99), Probability(0.99)) == 1.0);
    CHECK(RetryLimitApprox(Probability(0.99), Probability(0.99)).Value() == 2);
    CHECK(ApproxTheta(Probability(0.995), Probability(0.99)) == doctest::Approx(1.48005 / 1.4900125));
    CHECK(RetryLimitApprox(Probability(0.995), Probability(0.99)).Value() == 1);
    CHECK(ApproxTheta(Probability(0.5), Probability(0.99)) == doctest::Approx(1.48005 / 0.625));
    CHECK(RetryLimitApprox(Probability(0.5), Probability(0.99)).Value() == 4);
    CHECK(RetryLimitApprox(Probability(0.0), Probability(0.99)).Value() == kMaxTransmissions);
}

TEST_CASE("theta of exactly 1.5 takes the ceiling branch")
{
    // A pair whose quotient rounds to exactly 1.5 in double precision.
    const Probability p(0.012);
    const double t = 0.01794695343126795;
    REQUIRE(ApproxTheta(p, Probability(t)) == 1.5);
    CHECK(RetryLimitApprox(p, Probability(t)).Value() == 3);
    const double below = std::nextafter(t, 0.0);
    REQUIRE(ApproxTheta(p, Probability(below)) < 1.5);
    CHECK(RetryLimitApprox(p, Probability(below)).Value() == 2);
    // 1.03125 / 0.625 = 1.65 -> ceil(2.65) = 3; 0.86125 / 0.625 = 1.378 -> floor(2.378).
    CHECK(RetryLimitApprox(Probability(0.5), Probability(0.75)).Value() == 3);
    CHECK(RetryLimitApprox(Probability(0.5), Probability(0.65)).Value() == 2);
}

TEST_CASE("approximation stays within one transmission of the exact limit near the target")
{
    const Probability target(0.99);
    for (int i = 0; i < 1000; ++i)
    {
        const double p = 0.90 + (0.9999 - 0.90) * i / 999.0;
        const int exact = static_cast<int>(RetryLimitExact(Probability(p), target).Value());
        const int approx = static_cast<int>(RetryLimitApprox(Probability(p), target).Value());
        CAPTURE(p);
        CHECK(std::abs(exact - approx) <= 1);
    }
}

TEST_CASE("approximation diverges for weak links")
{
    // Documented behaviour rather than agreement: 0.3 gives 6 where 13 are needed.
    CHECK(RetryLimitApprox(Probability(0.3), Probability(0.99)).Value() == 6);
}

TEST_CASE("both retry limits stay within [1, cap]")
{
    for (int i = 0; i <= 200; ++i)
    {
        for (int j = 0; j <= 200; ++j)
        {
            const Probability p(i / 200.0);
            const Probability t(j / 200.0);
            const auto e = RetryLimitExact(p, t).Value();
            const auto a = RetryLimitApprox(p, t).Value();
            CHECK((e >= 1 && e <= kMaxTransmissions));
            CHECK((a >= 1 && a <= kMaxTransmissions));
        }
    }
}
