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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace amisim;

namespace
{

// Independent oracle: Friis free-space loss written as 20 log10(4 pi d f / c).
double
FriisRssi(double tx, double d, double f)
{
    return tx - 20.0 * std::log10(4.0 * std::numbers::pi * d * f / 299792458.0);
}

// Distance at which the free-space RSSI equals \p rssi.
double
DistanceForRssi(double tx, double rssi, double f)
{
    return std::pow(10.0, (tx - rssi) / 20.0) * 299792458.0 / (4.0 * std::numbers::pi * f);
}

RadioParams
ZeroDbm()
{
    RadioParams r;
    r.txPowerDbm = 0.0;
    return r;
}

} // namespace

TEST_CASE("free-space RSSI examples")
{
    const RadioParams r = ZeroDbm();
    CHECK(FsplRssi(1.0, r) == doctest::Approx(-40.05).epsilon(1e-4));
    CHECK(FsplRssi(10.0, r) == doctest::Approx(-60.05).epsilon(1e-4));
    for (double d : {0.5, 3.0, 47.0, 250.0, 1234.5})
    {
        CHECK(FsplRssi(d, r) == doctest::Approx(FriisRssi(0.0, d, 2.4e9)).epsilon(1e-12));
        CHECK(FsplRssi(d, r) - FsplRssi(2.0 * d, r) == doctest::Approx(20.0 * std::log10(2.0)));
    }
    CHECK_THROWS_AS(FsplRssi(0.0, r), std::domain_error);
    CHECK_THROWS_AS(FsplRssi(-1.0, r), std::domain_error);
}

TEST_CASE("link probability examples")
{
    const RadioParams r = ZeroDbm();
    const Position a{0.0, 0.0};
    CHECK(LinkProbability(a, Position{0.5, 0.0}, r).Value() == 1.0);
    CHECK(LinkProbability(a, a, r).Value() == 1.0);
    const double dFloor = DistanceForRssi(0.0, -94.0, 2.4e9);
    CHECK(LinkProbability(a, Position{dFloor * 1.0001, 0.0}, r).Value() == 0.0);
    const double d07 = DistanceForRssi(0.0, -89.1, 2.4e9);
    CHECK(LinkProbability(a, Position{d07, 0.0}, r).Value() == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("link probability is non-increasing in distance")
{
    const RadioParams r = ZeroDbm();
    double prev = 1.0;
    for (double d = 0.1; d < 800.0; d *= 1.01)
    {
        const double p = LinkProbability(Position{}, Position{d, 0.0}, r).Value();
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("radio parameter validation")
{
    RadioParams r = ZeroDbm();
    CHECK_NOTHROW(r.Validate());
    r.senseThresholdDbm = -95.0;
    CHECK_THROWS_AS(r.Validate(), std::invalid_argument);
    r = ZeroDbm();
    r.bitrate = 0.0;
    CHECK_THROWS_AS(r.Validate(), std::invalid_argument);
    r = ZeroDbm();
    r.txPowerDbm = -100.0;
    CHECK_THROWS_AS(r.Validate(), std::invalid_argument);
}

TEST_CASE("carrier sense examples")
{
    const RadioParams r = ZeroDbm();
    CHECK(CarrierSense(std::vector<double>{}, r) == ChannelState::kIdle);
    CHECK(CarrierSense(std::vector<double>{FsplRssi(1.0, r)}, r) == ChannelState::kBusy);
    CHECK(CarrierSense(std::vector<double>{-100.0}, r) == ChannelState::kIdle);
    CHECK(CarrierSense(std::vector<double>{-100.0, -94.0}, r) == ChannelState::kBusy);
}

TEST_CASE("reception outcome examples")
{
    const RadioParams r = ZeroDbm();
    RngStream rng(1);
    const std::vector<double> none;
    CHECK(ResolveReception(-60.0, none, Probability(1.0), r, rng) == ReceptionOutcome::kDelivered);
    CHECK(ResolveReception(-100.0, none, Probability(1.0), r, rng) == ReceptionOutcome::kSilence);
    CHECK(ResolveReception(-60.0, std::vector<double>{-90.0}, Probability(1.0), r, rng) ==
          ReceptionOutcome::kCollision);
    // An interferer below sensitivity does not destroy the frame.
    CHECK(ResolveReception(-60.0, std::vector<double>{-99.0}, Probability(1.0), r, rng) ==
          ReceptionOutcome::kDelivered);
    // No capture: a much stronger frame is lost just the same.
    CHECK(ResolveReception(-20.0, std::vector<double>{-93.0}, Probability(1.0), r, rng) ==
          ReceptionOutcome::kCollision);

    int delivered = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
    {
        delivered += ResolveReception(-60.0, none, Probability(0.7), r, rng) == ReceptionOutcome::kDelivered;
    }
    CHECK(std::abs(static_cast<double>(delivered) / trials - 0.7) <= 0.01);
}

TEST_CASE("channel: airtime follows frame size and bitrate")
{
    Channel ch({Position{0, 0}, Position{1, 0}}, ZeroDbm());
    const MacFrame data = MacFrame::Data(0, 0, 0, {1});
    CHECK(ch.Airtime(data) == doctest::Approx((60.0 + 17.0) * 8.0 / 250000.0));
    CHECK(ch.Airtime(MacFrame::Probe(0, 0, 1)) == doctest::Approx(33.0 * 8.0 / 250000.0));
}

TEST_CASE("channel: overlapping frames collide symmetrically at a shared receiver")
{
    // 0 and 2 are hidden from each other; 1 hears both.
    const RadioParams r = ZeroDbm();
    const double reach = DistanceForRssi(0.0, -90.0, 2.4e9);
    Channel ch({Position{0, 0}, Position{reach, 0}, Position{2.0 * reach, 0}}, r);
    REQUIRE(ch.InRange(0, 1));
    REQUIRE(ch.InRange(2, 1));
    REQUIRE_FALSE(ch.InRange(0, 2));
    REQUIRE_FALSE(ch.IsBusy(2, 0.0));

    std::vector<RngStream> rngs{RngStream(1), RngStream(2), RngStream(3)};
    auto rngFor = [&](NodeId n) -> RngStream& { return rngs[n]; };

    const uint64_t a = ch.Begin(0, MacFrame::Data(0, 0, 0, {1}), 0.0).id;
    CHECK(ch.IsBusy(1, 0.001));
    CHECK_FALSE(ch.IsBusy(2, 0.001));
    const uint64_t b = ch.Begin(2, MacFrame::Data(2, 0, 2, {1}), 0.001).id;
    for (uint64_t id : {a, b})
    {
        const auto rx = ch.Resolve(id, rngFor);
        REQUIRE(rx.size() == 1);
        CHECK(rx[0].receiver == 1);
        CHECK(rx[0].outcome == ReceptionOutcome::kCollision);
    }
}

TEST_CASE("channel: non-overlapping frames do not collide")
{
    const double reach = DistanceForRssi(0.0, -91.0, 2.4e9);
    Channel ch({Position{0, 0}, Position{reach, 0}, Position{2.0 * reach, 0}}, ZeroDbm(), 1.0);
    REQUIRE_FALSE(ch.InRange(0, 2));
    std::vector<RngStream> rngs{RngStream(1), RngStream(2), RngStream(3)};
    auto rngFor = [&](NodeId n) -> RngStream& { return rngs[n]; };
    const auto& first = ch.Begin(0, MacFrame::Data(0, 0, 0, {1}), 0.0);
    const uint64_t a = first.id;
    const double end = first.End();
    const uint64_t b = ch.Begin(2, MacFrame::Data(2, 0, 2, {1}), end).id;
    for (uint64_t id : {a, b})
    {
        const auto rx = ch.Resolve(id, rngFor);
        REQUIRE(rx.size() == 1);
        CHECK(rx[0].outcome == ReceptionOutcome::kDelivered);
    }
}

TEST_CASE("channel: half-duplex and no self-reception")
{
    Channel ch({Position{0, 0}, Position{1, 0}}, ZeroDbm());
    std::vector<RngStream> rngs{RngStream(1), RngStream(2)};
    auto rngFor = [&](NodeId n) -> RngStream& { return rngs[n]; };
    const uint64_t a = ch.Begin(0, MacFrame::Data(0, 0, 0, {1}), 0.0).id;
    const uint64_t b = ch.Begin(1, MacFrame::Data(1, 0, 1, {0}), 0.0001).id;
    CHECK(ch.IsTransmitting(0, 0.0001));
    CHECK(ch.IsBusy(0, 0.0001));
    for (uint64_t id : {a, b})
    {
        const auto rx = ch.Resolve(id, rngFor);
        REQUIRE(rx.size() == 1);
        CHECK(rx[0].receiver != ch.Get(id).source);
        CHECK(rx[0].outcome == ReceptionOutcome::kHalfDuplex);
    }
}

TEST_CASE("channel: forced link probability overrides geometry in range only")
{
    const double reach = DistanceForRssi(0.0, -90.0, 2.4e9);
    Channel ch({Position{0, 0}, Position{reach, 0}, Position{3.0 * reach, 0}}, ZeroDbm(), 1.0);
    CHECK(ch.LinkProb(0, 1).Value() == 1.0);
    CHECK(ch.GeometricLinkProb(0, 1).Value() == doctest::Approx(4.0 / 7.0));
    CHECK(ch.LinkProb(0, 2).Value() == 0.0);
    CHECK_THROWS_AS(Channel({Position{}, Position{1, 0}}, ZeroDbm(), 1.5), std::out_of_range);
}

TEST_CASE("channel: reception draws are reproducible from the seed")
{
    const double d = DistanceForRssi(0.0, -90.0, 2.4e9);
    auto run = [&] {
        Channel ch({Position{0, 0}, Position{d, 0}}, ZeroDbm());
        std::vector<RngStream> rngs{RngStream::ForNode(9, 0), RngStream::ForNode(9, 1)};
        auto rngFor = [&](NodeId n) -> RngStream& { return rngs[n]; };
        std::vector<ReceptionOutcome> outcomes;
        double t = 0.0;
        for (int i = 0; i < 2000; ++i)
        {
            const auto& tx = ch.Begin(0, MacFrame::Data(0, i, 0, {1}), t);
            const uint64_t id = tx.id;
            t = tx.End() + 0.001;
            outcomes.push_back(ch.Resolve(id, rngFor).at(0).outcome);
            ch.Prune(t);
        }
        return outcomes;
    };
    CHECK(run() == run());
}
