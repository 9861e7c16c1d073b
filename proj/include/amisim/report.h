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

#ifndef AMISIM_REPORT_H
#define AMISIM_REPORT_H

#include "amisim/csma-mac.h"
#include "amisim/metrics.h"
#include "amisim/scenario.h"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amisim
{

struct RunResult
{
    std::string scenario;
    Variant variant{Variant::kRpl};
    double interval{0.0};
    uint64_t seed{0};
    Metrics metrics;
};

RunResult MakeResult(const ScenarioConfig& config, Metrics metrics);

/// Column names of the per-run CSV, in output order.
const std::vector<std::string>& CsvColumns();
std::string CsvHeader();
std::string CsvRow(const RunResult& result);
std::string ToCsv(const std::vector<RunResult>& results);

nlohmann::ordered_json ToJson(const RunResult& result);
/// Multi-line human-readable summary of one run.
std::string Summary(const RunResult& result);

/// Runs every configuration, at most \p jobs at a time; results keep the input order.
std::vector<RunResult> RunBatch(const std::vector<ScenarioConfig>& configs, unsigned jobs = 1);

/// Cartesian product variants x intervals x seeds over \p base, in that nesting order.
std::vector<ScenarioConfig> ExpandSweep(const ScenarioConfig& base,
                                        const std::vector<Variant>& variants,
                                        const std::vector<double>& intervals,
                                        const std::vector<uint64_t>& seeds);

/// Seeds 1..count.
std::vector<uint64_t> ConsecutiveSeeds(uint32_t count);

/**
 * Built-in replication suites:
 *   s1: all five variants x {5, 15} s x seeds 1..10
 *   s2: rpl, orpl, orplx, orplx-ch x {15, 30} s x seeds 1..5
 * \p seedCount overrides the number of seeds.
 */
std::optional<std::vector<ScenarioConfig>> ReplicateSuite(const std::string& name,
                                                          std::optional<uint32_t> seedCount = std::nullopt);

/// Results of all seeds of one (scenario, variant, interval) combination.
struct Cell
{
    std::string scenario;
    Variant variant{Variant::kRpl};
    double interval{0.0};
    uint32_t runs{0};
    double meanPdr{0.0};
    double minPdr{0.0};
    double maxPdr{0.0};
    uint64_t generated{0};
    uint64_t delivered{0};
    uint64_t macTx{0};
    uint64_t retransmissions{0};
    uint64_t probeTx{0};
    uint64_t cooperationErrors{0};
    uint64_t duplicates{0};
};

/// Groups results into cells, ordered by first appearance.
std::vector<Cell> Aggregate(const std::vector<RunResult>& results);
std::string CellsToCsv(const std::vector<Cell>& cells);
std::string CellsTable(const std::vector<Cell>& cells);
nlohmann::ordered_json ToJson(const Cell& cell);

/// Shortest decimal text that reads back to \p v.
std::string FormatNumber(double v);

} // namespace amisim

#endif /* AMISIM_REPORT_H */
