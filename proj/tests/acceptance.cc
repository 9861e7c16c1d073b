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

// End-to-end acceptance checks.  Prints one PASS/FAIL line per criterion and
// exits non-zero if any of them fails.  Every tolerance is pinned below.

#include "amisim/anycast-math.h"
#include "amisim/link-estimation.h"
#include "amisim/radio-channel.h"
#include "amisim/report.h"
#include "amisim/scenario.h"
#include "amisim/simulation.h"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace amisim;

namespace
{

// Pinned limits.
constexpr double kFormulaBudget = 1.0;          // s
constexpr double kApproxBudget = 1.0;           // s
constexpr double kApproxMaxGap = 1.0;           // transmissions
constexpr double kApproxLow = 0.90;
constexpr double kApproxHigh = 0.9999;
constexpr int kApproxPoints = 1000;
constexpr int kAnycastSets = 20;
constexpr int kAnycastTrials = 100000;
constexpr double kAnycastSigmas = 3.0;
constexpr int kCalibrationFrames = 100000;
constexpr double kCalibrationTolerance = 0.01;
constexpr double kS1MinChPdr = 0.97;
constexpr double kS1RatioLow = 1.0;
constexpr double kS1RatioHigh = 1.5;
constexpr double kS1SlowAgreement = 0.15;
constexpr double kS1Budget = 300.0;             // s
constexpr double kProbeMaxGain = 0.01;          // PDR, absolute
constexpr double kS2ChWithinX = 0.15;
constexpr double kS2MinChPdrSlow = 0.99;
constexpr double kS2Budget = 1200.0;            // s

int g_failures = 0;

void
Report(bool ok, const std::string& name, const std::string& detail)
{
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << ": " << detail << std::endl;
    if (!ok)
    {
        ++g_failures;
    }
}

double
Seconds(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string
Fixed(double v, int digits = 4)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

// Smallest k with 1 - (1 - p)^k >= target, counted upwards.
uint32_t
BruteForceTransmissions(double p, double target)
{
    for (uint32_t k = 1;; ++k)
    {
        if (1.0 - std::pow(1.0 - p, static_cast<double>(k)) >= target)
        {
            return k;
        }
    }
}

void
FormulaOracle()
{
    const auto start = std::chrono::steady_clock::now();
    int mismatches = 0;
    int cases = 0;
    for (int i = 1; i <= 19; ++i)
    {
        const double p = i / 20.0;
        for (double t : {0.90, 0.95, 0.99})
        {
            const uint32_t brute = BruteForceTransmissions(p, t);
            const uint32_t uncapped = MinTransmissions(Probability(p), Probability(t));
            const uint32_t capped = RetryLimitExact(Probability(p), Probability(t)).Value();
            mismatches += uncapped != brute;
            mismatches += capped != std::min(brute, kMaxTransmissions);
            ++cases;
        }
    }
    const double elapsed = Seconds(start);
    Report(mismatches == 0 && elapsed < kFormulaBudget,
           "formula oracle",
           std::to_string(cases) + " grid points, " + std::to_string(mismatches) + " mismatches, " +
               Fixed(elapsed, 6) + " s");
}

void
ApproximationProperty()
{
    const auto start = std::chrono::steady_clock::now();
    const Probability target(0.99);
    double worst = 0.0;
    for (int i = 0; i < kApproxPoints; ++i)
    {
        const double p = kApproxLow + (kApproxHigh - kApproxLow) * i / (kApproxPoints - 1);
        const double gap = std::abs(static_cast<double>(RetryLimitApprox(Probability(p), target).Value()) -
                                    static_cast<double>(RetryLimitExact(Probability(p), target).Value()));
        worst = std::max(worst, gap);
    }
    const double elapsed = Seconds(start);
    const uint32_t smallApprox = RetryLimitApprox(Probability(0.3), target).Value();
    const uint32_t smallExact = MinTransmissions(Probability(0.3), target);
    Report(worst <= kApproxMaxGap && elapsed < kApproxBudget,
           "approximation property",
           "max |approx - exact| " + Fixed(worst, 0) + " over " + std::to_string(kApproxPoints) + " points, " +
               Fixed(elapsed, 6) + " s (p = 0.3 diverges: approx " + std::to_string(smallApprox) + ", exact " +
               std::to_string(smallExact) + ")");
}

void
AnycastMonteCarlo()
{
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    std::uniform_int_distribution<int> size(1, 3);
    double worstSigmas = 0.0;
    for (int s = 0; s < kAnycastSets; ++s)
    {
        std::vector<Probability> links;
        std::vector<double> raw;
        const int n = size(rng);
        for (int j = 0; j < n; ++j)
        {
            raw.push_back(prob(rng));
            links.emplace_back(raw.back());
        }
        const double expected = AnycastProbability(links).Value();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int hits = 0;
        for (int t = 0; t < kAnycastTrials; ++t)
        {
            bool any = false;
            for (double p : raw)
            {
                any = (u(rng) < p) || any;
            }
            hits += any;
        }
        const double freq = static_cast<double>(hits) / kAnycastTrials;
        const double se = std::sqrt(expected * (1.0 - expected) / kAnycastTrials);
        worstSigmas = std::max(worstSigmas, std::abs(freq - expected) / se);
    }
    Report(worstSigmas <= kAnycastSigmas,
           "anycast probability Monte Carlo",
           std::to_string(kAnycastSets) + " sets x " + std::to_string(kAnycastTrials) +
               " trials, worst deviation " + Fixed(worstSigmas, 2) + " standard errors");
}

void
ChannelCalibration()
{
    const RadioParams radio;
    bool ok = true;
    std::string detail;
    for (double p : {0.7, 0.8, 0.9})
    {
        // Free-space distance whose received power maps to p on the RSSI ramp.
        const double rssi = kPdrZeroRssi + p * (kPdrFullRssi - kPdrZeroRssi);
        const double d = std::pow(10.0, (radio.txPowerDbm - rssi) / 20.0) * 299792458.0 /
                         (4.0 * std::numbers::pi * radio.frequencyHz);
        Channel channel({Position{0.0, 0.0}, Position{d, 0.0}}, radio);
        RngStream stream(static_cast<uint64_t>(p * 1000.0));
        auto rngFor = [&stream](NodeId) -> RngStream& { return stream; };
        int delivered = 0;
        double now = 0.0;
        for (int i = 0; i < kCalibrationFrames; ++i)
        {
            const uint64_t id = channel.Begin(0, MacFrame::Data(0, static_cast<uint32_t>(i), 0, {1}), now).id;
            for (const auto& rx : channel.Resolve(id, rngFor))
            {
                delivered += rx.receiver == 1 && rx.outcome == ReceptionOutcome::kDelivered;
            }
            now += 0.01;
            channel.Prune(now);
        }
        const double freq = static_cast<double>(delivered) / kCalibrationFrames;
        const double model = channel.LinkProb(0, 1).Value();
        ok = ok && std::abs(freq - p) <= kCalibrationTolerance && std::abs(model - p) <= 1e-9;
        detail += (detail.empty() ? "" : ", ") + Fixed(p, 1) + " -> " + Fixed(freq);
    }
    Report(ok, "channel calibration", detail + " over " + std::to_string(kCalibrationFrames) + " frames each");
}

void
PerfectChannel()
{
    bool ok = true;
    std::string detail;
    for (Variant v : AllVariants())
    {
        ScenarioConfig config = Scenario1Preset();
        config.variant = v;
        config.forcedLinkProbability = 1.0;
        Simulation sim(config);
        const Metrics m = sim.Run();
        const bool good = m.Pdr() == 1.0 && m.retransmissions == 0 && m.duplicatesAtSink == 0;
        ok = ok && good;
        detail += (detail.empty() ? "" : "; ") + std::string(VariantName(v)) + " pdr " + Fixed(m.Pdr(), 3) +
                  " retx " + std::to_string(m.retransmissions) + " dup " + std::to_string(m.duplicatesAtSink);
    }
    Report(ok, "perfect-channel invariants", detail);
}

const Cell&
Find(const std::vector<Cell>& cells, Variant v, double interval)
{
    for (const auto& c : cells)
    {
        if (c.variant == v && c.interval == interval)
        {
            return c;
        }
    }
    throw std::logic_error("missing cell " + std::string(VariantName(v)));
}

double
Ratio(uint64_t a, uint64_t b)
{
    return b == 0 ? INFINITY : static_cast<double>(a) / static_cast<double>(b);
}

std::vector<RunResult>
Scenario1(std::vector<ScenarioConfig>& configs)
{
    const auto start = std::chrono::steady_clock::now();
    configs = *ReplicateSuite("s1");
    auto results = RunBatch(configs, 1);
    const double elapsed = Seconds(start);
    const auto cells = Aggregate(results);

    const Cell& x5 = Find(cells, Variant::kOrplx, 5.0);
    const Cell& ch5 = Find(cells, Variant::kOrplxCh, 5.0);
    const Cell& x15 = Find(cells, Variant::kOrplx, 15.0);
    const Cell& ch15 = Find(cells, Variant::kOrplxCh, 15.0);
    const double ratio = Ratio(ch5.retransmissions, x5.retransmissions);
    const double slowGap = std::abs(Ratio(ch15.retransmissions, x15.retransmissions) - 1.0);
    const bool chAtLeastX = ch5.meanPdr >= x5.meanPdr;
    const bool chFloor = ch5.meanPdr >= kS1MinChPdr;
    const bool ratioOk = ratio >= kS1RatioLow && ratio <= kS1RatioHigh;
    const bool slowOk = slowGap <= kS1SlowAgreement;
    Report(chAtLeastX && chFloor && ratioOk && slowOk && elapsed < kS1Budget,
           "scenario 1 trends",
           "5 s PDR orplx-ch " + Fixed(ch5.meanPdr) + (chAtLeastX ? " >= " : " < ") + "orplx " +
               Fixed(x5.meanPdr) + (chFloor ? ", >= " : ", < ") + Fixed(kS1MinChPdr, 2) +
               "; retx ratio " + Fixed(ratio, 3) + (ratioOk ? " in " : " outside ") + "[" +
               Fixed(kS1RatioLow, 1) + ", " + Fixed(kS1RatioHigh, 1) + "]; 15 s retx gap " + Fixed(slowGap * 100.0, 1) +
               " %" + (slowOk ? " <= " : " > ") + Fixed(kS1SlowAgreement * 100.0, 0) + " %; " + Fixed(elapsed, 1) + " s");

    bool probeOk = true;
    std::string detail;
    for (double interval : {5.0, 15.0})
    {
        const Cell& x = Find(cells, Variant::kOrplx, interval);
        const Cell& p = Find(cells, Variant::kOrplxP, interval);
        const bool more = p.macTx > x.macTx;
        const bool noGain = p.meanPdr <= x.meanPdr + kProbeMaxGain;
        probeOk = probeOk && more && noGain;
        detail += (detail.empty() ? "" : "; ") + Fixed(interval, 0) + " s: tx orplx-p " + std::to_string(p.macTx) +
                  (more ? " > " : " <= ") + "orplx " + std::to_string(x.macTx) + ", PDR gain " +
                  Fixed((p.meanPdr - x.meanPdr) * 100.0, 2) + " points" + (noGain ? " <= " : " > ") +
                  Fixed(kProbeMaxGain * 100.0, 0);
    }
    Report(probeOk, "scenario 1 probing overhead", detail);
    return results;
}

void
Scenario2()
{
    const auto start = std::chrono::steady_clock::now();
    const auto results = RunBatch(*ReplicateSuite("s2"), 1);
    const double elapsed = Seconds(start);
    const auto cells = Aggregate(results);

    const Cell& rpl = Find(cells, Variant::kRpl, 15.0);
    const Cell& orpl = Find(cells, Variant::kOrpl, 15.0);
    const Cell& x = Find(cells, Variant::kOrplx, 15.0);
    const Cell& ch = Find(cells, Variant::kOrplxCh, 15.0);
    const Cell& chSlow = Find(cells, Variant::kOrplxCh, 30.0);

    const bool pdrChOrpl = ch.meanPdr > orpl.meanPdr;
    const bool pdrOrplX = orpl.meanPdr > x.meanPdr;
    const bool pdrChRpl = ch.meanPdr > rpl.meanPdr;
    const bool txRplOrpl = rpl.retransmissions > orpl.retransmissions;
    const bool txOrplCh = orpl.retransmissions > ch.retransmissions;
    const double chOverX = std::abs(Ratio(ch.retransmissions, x.retransmissions) - 1.0);
    const bool txChX = chOverX <= kS2ChWithinX;
    const bool slowFloor = chSlow.meanPdr >= kS2MinChPdrSlow;

    auto mark = [](bool ok) { return ok ? std::string(" ok") : std::string(" VIOLATED"); };
    Report(pdrChOrpl && pdrOrplX && pdrChRpl && txRplOrpl && txOrplCh && txChX && slowFloor && elapsed < kS2Budget,
           "scenario 2 ordering",
           "15 s PDR rpl " + Fixed(rpl.meanPdr) + " orpl " + Fixed(orpl.meanPdr) + " orplx " + Fixed(x.meanPdr) +
               " orplx-ch " + Fixed(ch.meanPdr) + " [ch>orpl" + mark(pdrChOrpl) + ", orpl>orplx" + mark(pdrOrplX) +
               ", ch>rpl" + mark(pdrChRpl) + "]; retx rpl " + std::to_string(rpl.retransmissions) + " orpl " +
               std::to_string(orpl.retransmissions) + " orplx-ch " + std::to_string(ch.retransmissions) + " orplx " +
               std::to_string(x.retransmissions) + " [rpl>orpl" + mark(txRplOrpl) + ", orpl>ch" + mark(txOrplCh) +
               ", |ch/x-1| " + Fixed(chOverX * 100.0, 1) + " %" + mark(txChX) + "]; 30 s PDR orplx-ch " +
               Fixed(chSlow.meanPdr) + mark(slowFloor) + "; " + Fixed(elapsed, 1) + " s");
}

void
Determinism(const std::vector<ScenarioConfig>& configs, const std::vector<RunResult>& first)
{
    const std::string a = ToCsv(first);
    const std::string b = ToCsv(RunBatch(configs, 2));
    Report(a == b && !a.empty(),
           "replicate determinism",
           "s1 suite rerun with 2 workers: " + std::to_string(first.size()) + " rows, " +
               (a == b ? "byte-identical CSV" : "CSV differs"));
}

} // namespace

int
main()
{
    FormulaOracle();
    ApproximationProperty();
    AnycastMonteCarlo();
    ChannelCalibration();
    PerfectChannel();
    std::vector<ScenarioConfig> s1;
    const auto s1Results = Scenario1(s1);
    Scenario2();
    Determinism(s1, s1Results);
    std::cout << (g_failures == 0 ? "all acceptance criteria met" : std::to_string(g_failures) + " criteria not met")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
