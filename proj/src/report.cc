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

#include "amisim/report.h"

#include "amisim/simulation.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace amisim
{

std::string
FormatNumber(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace
{

std::string
FormatFixed(double v, int digits)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

} // namespace

RunResult
MakeResult(const ScenarioConfig& config, Metrics metrics)
{
    return RunResult{config.name, config.variant, config.frameInterval, config.seed, std::move(metrics)};
}

const std::vector<std::string>&
CsvColumns()
{
    static const std::vector<std::string> cols{"scenario",
                                               "variant",
                                               "interval_s",
                                               "seed",
                                               "generated",
                                               "delivered",
                                               "pdr",
                                               "duplicates",
                                               "mac_tx",
                                               "retransmissions",
                                               "probe_tx",
                                               "cooperation_errors",
                                               "dropped_retry",
                                               "dropped_queue"};
    return cols;
}

std::string
CsvHeader()
{
    std::string out;
    for (const auto& c : CsvColumns())
    {
        if (!out.empty())
        {
            out += ',';
        }
        out += c;
    }
    return out;
}

std::string
CsvRow(const RunResult& r)
{
    const Metrics& m = r.metrics;
    std::ostringstream os;
    os << r.scenario << ',' << VariantName(r.variant) << ',' << FormatNumber(r.interval) << ',' << r.seed << ','
       << m.generated << ',' << m.delivered << ',' << FormatFixed(m.Pdr(), 6) << ',' << m.duplicatesAtSink << ','
       << m.macTx << ',' << m.retransmissions << ',' << m.probeTx << ',' << m.cooperationErrors << ','
       << m.droppedRetry << ',' << m.droppedQueue;
    return os.str();
}

std::string
ToCsv(const std::vector<RunResult>& results)
{
    std::string out = CsvHeader() + "\n";
    for (const auto& r : results)
    {
        out += CsvRow(r) + "\n";
    }
    return out;
}

nlohmann::ordered_json
ToJson(const RunResult& r)
{
    const Metrics& m = r.metrics;
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["variant"] = std::string(VariantName(r.variant));
    j["interval_s"] = r.interval;
    j["seed"] = r.seed;
    j["generated"] = m.generated;
    j["delivered"] = m.delivered;
    j["pdr"] = m.Pdr();
    j["duplicates"] = m.duplicatesAtSink;
    j["mac_tx"] = m.macTx;
    j["unique_forwards"] = m.uniqueForwards;
    j["retransmissions"] = m.retransmissions;
    j["probe_tx"] = m.probeTx;
    j["cooperation_errors"] = m.cooperationErrors;
    j["dropped_retry"] = m.droppedRetry;
    j["dropped_queue"] = m.droppedQueue;
    j["in_flight"] = m.inFlight;
    j["collisions"] = m.collisions;
    j["end_time_s"] = m.endTime;
    auto nodes = nlohmann::ordered_json::array();
    for (size_t i = 0; i < m.perNode.size(); ++i)
    {
        const auto& n = m.perNode[i];
        nlohmann::ordered_json jn;
        jn["node"] = i;
        jn["generated"] = n.generated;
        jn["delivered"] = n.delivered;
        jn["mac_tx"] = n.macTx;
        jn["retransmissions"] = n.retransmissions;
        jn["probe_tx"] = n.probeTx;
        jn["dropped_retry"] = n.droppedRetry;
        jn["dropped_queue"] = n.droppedQueue;
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

std::string
Summary(const RunResult& r)
{
    const Metrics& m = r.metrics;
    std::ostringstream os;
    os << r.scenario << " / " << VariantName(r.variant) << " / interval " << FormatNumber(r.interval)
       << " s / seed " << r.seed << "\n"
       << "  delivered " << m.delivered << " of " << m.generated << " (PDR " << FormatFixed(100.0 * m.Pdr(), 2)
       << " %)\n"
       << "  MAC transmissions " << m.macTx << ": " << m.uniqueForwards << " first sends, " << m.retransmissions
       << " retransmissions (" << m.cooperationErrors << " cooperation errors), " << m.probeTx << " probes\n"
       << "  dropped: " << m.droppedRetry << " retry limit, " << m.droppedQueue << " queue full; " << m.inFlight
       << " still buffered\n"
       << "  duplicates at sink " << m.duplicatesAtSink << ", receiver-side collisions " << m.collisions
       << ", ended at " << FormatFixed(m.endTime, 1) << " s\n";
    return os.str();
}

std::vector<RunResult>
RunBatch(const std::vector<ScenarioConfig>& configs, unsigned jobs)
{
    std::vector<std::optional<RunResult>> slots(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < configs.size(); i = next++)
        {
            try
            {
                slots[i] = MakeResult(configs[i], RunScenario(configs[i]));
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    if (n == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t)
        {
            pool.emplace_back(worker);
        }
    }
    std::vector<RunResult> out;
    out.reserve(configs.size());
    for (size_t i = 0; i < configs.size(); ++i)
    {
        if (errors[i])
        {
            std::rethrow_exception(errors[i]);
        }
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

std::vector<ScenarioConfig>
ExpandSweep(const ScenarioConfig& base,
            const std::vector<Variant>& variants,
            const std::vector<double>& intervals,
            const std::vector<uint64_t>& seeds)
{
    std::vector<ScenarioConfig> out;
    for (Variant v : variants)
    {
        for (double interval : intervals)
        {
            for (uint64_t seed : seeds)
            {
                ScenarioConfig c = base;
                c.variant = v;
                c.frameInterval = interval;
                c.seed = seed;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

std::vector<uint64_t>
ConsecutiveSeeds(uint32_t count)
{
    std::vector<uint64_t> seeds(count);
    for (uint32_t i = 0; i < count; ++i)
    {
        seeds[i] = i + 1;
    }
    return seeds;
}

std::optional<std::vector<ScenarioConfig>>
ReplicateSuite(const std::string& name, std::optional<uint32_t> seedCount)
{
    if (name == "s1")
    {
        const auto& all = AllVariants();
        return ExpandSweep(Scenario1Preset(),
                           std::vector<Variant>(all.begin(), all.end()),
                           {5.0, 15.0},
                           ConsecutiveSeeds(seedCount.value_or(10)));
    }
    if (name == "s2")
    {
        return ExpandSweep(Scenario2Preset(),
                           {Variant::kRpl, Variant::kOrpl, Variant::kOrplx, Variant::kOrplxCh},
                           {15.0, 30.0},
                           ConsecutiveSeeds(seedCount.value_or(5)));
    }
    return std::nullopt;
}

std::vector<Cell>
Aggregate(const std::vector<RunResult>& results)
{
    std::vector<Cell> cells;
    std::vector<double> pdrSums;
    for (const auto& r : results)
    {
        auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) {
            return c.scenario == r.scenario && c.variant == r.variant && c.interval == r.interval;
        });
        if (it == cells.end())
        {
            Cell c;
            c.scenario = r.scenario;
            c.variant = r.variant;
            c.interval = r.interval;
            c.minPdr = 1.0;
            c.maxPdr = 0.0;
            cells.push_back(c);
            pdrSums.push_back(0.0);
            it = cells.end() - 1;
        }
        const Metrics& m = r.metrics;
        const double pdr = m.Pdr();
        Cell& c = *it;
        c.runs++;
        pdrSums[it - cells.begin()] += pdr;
        c.minPdr = std::min(c.minPdr, pdr);
        c.maxPdr = std::max(c.maxPdr, pdr);
        c.generated += m.generated;
        c.delivered += m.delivered;
        c.macTx += m.macTx;
        c.retransmissions += m.retransmissions;
        c.probeTx += m.probeTx;
        c.cooperationErrors += m.cooperationErrors;
        c.duplicates += m.duplicatesAtSink;
    }
    for (size_t i = 0; i < cells.size(); ++i)
    {
        cells[i].meanPdr = pdrSums[i] / cells[i].runs;
    }
    return cells;
}

std::string
CellsToCsv(const std::vector<Cell>& cells)
{
    std::ostringstream os;
    os << "scenario,variant,interval_s,runs,mean_pdr,min_pdr,max_pdr,generated,delivered,mac_tx,"
          "retransmissions,probe_tx,cooperation_errors,duplicates\n";
    for (const auto& c : cells)
    {
        os << c.scenario << ',' << VariantName(c.variant) << ',' << FormatNumber(c.interval) << ',' << c.runs << ','
           << FormatFixed(c.meanPdr, 6) << ',' << FormatFixed(c.minPdr, 6) << ',' << FormatFixed(c.maxPdr, 6) << ','
           << c.generated << ',' << c.delivered << ',' << c.macTx << ',' << c.retransmissions << ',' << c.probeTx
           << ',' << c.cooperationErrors << ',' << c.duplicates << '\n';
    }
    return os.str();
}

std::string
CellsTable(const std::vector<Cell>& cells)
{
    std::ostringstream os;
    os << std::left << std::setw(6) << "suite" << std::setw(10) << "variant" << std::right << std::setw(9)
       << "interval" << std::setw(6) << "runs" << std::setw(10) << "PDR %" << std::setw(10) << "MAC tx"
       << std::setw(10) << "retx" << std::setw(8) << "probes" << std::setw(8) << "coop" << '\n';
    for (const auto& c : cells)
    {
        os << std::left << std::setw(6) << c.scenario << std::setw(10) << VariantName(c.variant) << std::right
           << std::setw(9) << FormatNumber(c.interval) << std::setw(6) << c.runs << std::setw(10)
           << FormatFixed(100.0 * c.meanPdr, 2) << std::setw(10) << c.macTx << std::setw(10) << c.retransmissions
           << std::setw(8) << c.probeTx << std::setw(8) << c.cooperationErrors << '\n';
    }
    return os.str();
}

nlohmann::ordered_json
ToJson(const Cell& c)
{
    nlohmann::ordered_json j;
    j["scenario"] = c.scenario;
    j["variant"] = std::string(VariantName(c.variant));
    j["interval_s"] = c.interval;
    j["runs"] = c.runs;
    j["mean_pdr"] = c.meanPdr;
    j["min_pdr"] = c.minPdr;
    j["max_pdr"] = c.maxPdr;
    j["generated"] = c.generated;
    j["delivered"] = c.delivered;
    j["mac_tx"] = c.macTx;
    j["retransmissions"] = c.retransmissions;
    j["probe_tx"] = c.probeTx;
    j["cooperation_errors"] = c.cooperationErrors;
    j["duplicates"] = c.duplicates;
    return j;
}

} // namespace amisim
