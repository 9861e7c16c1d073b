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

#include "cli.h"

#include "amisim/report.h"
#include "amisim/scenario.h"
#include "amisim/simulation.h"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace amisim
{

namespace
{

class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string preset;
    std::string scenario;
    std::vector<std::string> variants;
    std::vector<double> intervals;
    std::vector<uint64_t> seedList;
    std::optional<uint32_t> seedCount;
    std::optional<uint32_t> frames;
    unsigned jobs{1};
    std::string out;
    std::string cells;
    std::string format{"csv"};
    std::string suite;
};

std::string
VariantList()
{
    std::string s;
    for (Variant v : AllVariants())
    {
        s += (s.empty() ? "" : ", ") + std::string(VariantName(v));
    }
    return s;
}

Variant
VariantOrThrow(const std::string& name)
{
    auto v = ParseVariant(name);
    if (!v)
    {
        throw UsageError("unknown variant '" + name + "'; valid variants: " + VariantList());
    }
    return *v;
}

ScenarioConfig
BaseConfig(const Options& o)
{
    if (!o.preset.empty() && !o.scenario.empty())
    {
        throw UsageError("--preset and --scenario are mutually exclusive");
    }
    ScenarioConfig c;
    if (!o.scenario.empty())
    {
        c = LoadScenarioFile(o.scenario);
    }
    else
    {
        const std::string name = o.preset.empty() ? "s1" : o.preset;
        auto p = PresetByName(name);
        if (!p)
        {
            throw UsageError("unknown preset '" + name + "'; valid presets: s1, s2");
        }
        c = *p;
    }
    if (o.frames)
    {
        c.framesPerNode = *o.frames;
    }
    return c;
}

void
AddCommon(CLI::App* cmd, Options& o)
{
    cmd->add_option("--out", o.out, "Write results to this file instead of stdout");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void
AddScenario(CLI::App* cmd, Options& o)
{
    cmd->add_option("--preset", o.preset, "Built-in scenario: s1 (20-node grid) or s2 (120-house neighbourhood)");
    cmd->add_option("--scenario", o.scenario, "Scenario file (YAML)");
    cmd->add_option("--frames", o.frames, "Override frames per node")->check(CLI::PositiveNumber);
}

void
Emit(const Options& o, std::ostream& out, const std::string& text)
{
    if (o.out.empty())
    {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
    {
        throw UsageError("cannot write " + o.out);
    }
    f << text;
}

void
EmitCells(const Options& o, const std::vector<Cell>& cells)
{
    if (o.cells.empty())
    {
        return;
    }
    std::ofstream f(o.cells, std::ios::binary);
    if (!f)
    {
        throw UsageError("cannot write " + o.cells);
    }
    f << CellsToCsv(cells);
}

std::string
BatchText(const Options& o, const std::vector<RunResult>& results, const std::vector<Cell>& cells)
{
    if (o.format == "csv")
    {
        return ToCsv(results);
    }
    nlohmann::ordered_json j;
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : results)
    {
        j["runs"].push_back(ToJson(r));
    }
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : cells)
    {
        j["cells"].push_back(ToJson(c));
    }
    return j.dump(2) + "\n";
}

int
CmdRun(const Options& o, std::ostream& out, std::ostream& err)
{
    ScenarioConfig c = BaseConfig(o);
    if (!o.variants.empty())
    {
        if (o.variants.size() > 1)
        {
            throw UsageError("run takes a single --variant");
        }
        c.variant = VariantOrThrow(o.variants.front());
    }
    if (!o.intervals.empty())
    {
        c.frameInterval = o.intervals.front();
    }
    if (!o.seedList.empty())
    {
        c.seed = o.seedList.front();
    }
    c.Validate();
    const RunResult r = MakeResult(c, RunScenario(c));
    if (o.format == "csv")
    {
        Emit(o, out, CsvHeader() + "\n" + CsvRow(r) + "\n");
    }
    else
    {
        Emit(o, out, ToJson(r).dump(2) + "\n");
    }
    err << Summary(r);
    return kExitOk;
}

int
CmdSweep(const Options& o, std::ostream& out, std::ostream& err)
{
    const ScenarioConfig base = BaseConfig(o);
    std::vector<Variant> variants;
    for (const auto& v : o.variants)
    {
        variants.push_back(VariantOrThrow(v));
    }
    if (variants.empty())
    {
        variants.assign(AllVariants().begin(), AllVariants().end());
    }
    std::vector<double> intervals = o.intervals;
    if (intervals.empty())
    {
        intervals.push_back(base.frameInterval);
    }
    std::vector<uint64_t> seeds = o.seedList;
    if (o.seedCount)
    {
        if (!seeds.empty())
        {
            throw UsageError("--seed and --seeds are mutually exclusive");
        }
        seeds = ConsecutiveSeeds(*o.seedCount);
    }
    if (seeds.empty())
    {
        seeds.push_back(base.seed);
    }
    auto configs = ExpandSweep(base, variants, intervals, seeds);
    for (const auto& c : configs)
    {
        c.Validate();
    }
    const auto results = RunBatch(configs, o.jobs);
    const auto cells = Aggregate(results);
    Emit(o, out, BatchText(o, results, cells));
    EmitCells(o, cells);
    err << CellsTable(cells);
    return kExitOk;
}

int
CmdReplicate(const Options& o, std::ostream& out, std::ostream& err)
{
    auto configs = ReplicateSuite(o.suite, o.seedCount);
    if (!configs)
    {
        throw UsageError("unknown suite '" + o.suite + "'; valid suites: s1, s2");
    }
    if (o.frames)
    {
        for (auto& c : *configs)
        {
            c.framesPerNode = *o.frames;
        }
    }
    const auto results = RunBatch(*configs, o.jobs);
    const auto cells = Aggregate(results);
    Emit(o, out, BatchText(o, results, cells));
    EmitCells(o, cells);
    err << CellsTable(cells);
    return kExitOk;
}

} // namespace

int
RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Packet-level simulator of RPL and opportunistic anycast routing for metering networks", "amisim"};
    app.require_subcommand(1);
    Options o;
    o.jobs = std::max(1u, std::thread::hardware_concurrency());

    auto* run = app.add_subcommand("run", "Run one scenario and print one CSV row (or a JSON summary)");
    AddScenario(run, o);
    run->add_option("--variant", o.variants, "rpl, orpl, orplx, orplx-p or orplx-ch")->expected(1);
    run->add_option("--interval", o.intervals, "Meter reading interval in seconds")
        ->expected(1)
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", o.seedList, "Run seed")->expected(1);
    AddCommon(run, o);

    auto* sweep = app.add_subcommand("sweep", "Run the product of variants, intervals and seeds");
    AddScenario(sweep, o);
    sweep->add_option("--variant", o.variants, "Variants (repeat or comma-separate); default all")->delimiter(',');
    sweep->add_option("--interval", o.intervals, "Intervals in seconds (repeat or comma-separate)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", o.seedList, "Explicit seeds (repeat or comma-separate)")->delimiter(',');
    sweep->add_option("--seeds", o.seedCount, "Use seeds 1..N")->check(CLI::PositiveNumber);
    sweep->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    sweep->add_option("--cells", o.cells, "Also write per-cell aggregates as CSV to this file");
    AddCommon(sweep, o);

    auto* rep = app.add_subcommand("replicate", "Run a built-in replication suite (s1 or s2)");
    rep->add_option("suite", o.suite, "s1 or s2")->required();
    rep->add_option("--seeds", o.seedCount, "Use seeds 1..N instead of the suite default")->check(CLI::PositiveNumber);
    rep->add_option("--frames", o.frames, "Override frames per node")->check(CLI::PositiveNumber);
    rep->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    rep->add_option("--cells", o.cells, "Also write per-cell aggregates as CSV to this file");
    AddCommon(rep, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (app.got_subcommand(run))
        {
            return CmdRun(o, out, err);
        }
        if (app.got_subcommand(sweep))
        {
            return CmdSweep(o, out, err);
        }
        return CmdReplicate(o, out, err);
    }
    catch (const ScenarioError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const UsageError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::invalid_argument& e)
    {
        err << "error: invalid configuration: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::out_of_range& e)
    {
        err << "error: invalid configuration: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const SimulationError& e)
    {
        err << "simulation aborted: " << e.what() << '\n';
        return kExitSimulation;
    }
    catch (const std::exception& e)
    {
        err << "simulation aborted: " << e.what() << '\n';
        return kExitSimulation;
    }
}

} // namespace amisim
