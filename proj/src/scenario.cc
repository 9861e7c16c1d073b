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

#include "amisim/scenario.h"

#include "amisim/random.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace amisim
{

std::string_view
TopologyKindName(TopologyKind kind)
{
    switch (kind)
    {
    case TopologyKind::kPlannedGrid:
        return "planned-grid";
    case TopologyKind::kNeighborhood:
        return "neighborhood";
    case TopologyKind::kExplicit:
        return "explicit";
    }
    return "?";
}

void
ScenarioConfig::Validate() const
{
    if (!(frameInterval > 0.0))
    {
        throw std::invalid_argument("frame_interval must be positive");
    }
    if (framesPerNode < 1)
    {
        throw std::invalid_argument("frames_per_node must be at least 1");
    }
    if (!(setupTime >= 0.0) || !(drainTime >= 0.0))
    {
        throw std::invalid_argument("setup_time and drain_time must be non-negative");
    }
    if (!(mac.baseBackoff > 0.0) || !(mac.ackSlot > 0.0) || mac.queueCapacity < 1)
    {
        throw std::invalid_argument("mac parameters must be positive");
    }
    if (forcedLinkProbability && !(*forcedLinkProbability >= 0.0 && *forcedLinkProbability <= 1.0))
    {
        throw std::invalid_argument("forced_link_probability out of [0,1]");
    }
    radio.Validate();
    switch (topology.kind)
    {
    case TopologyKind::kPlannedGrid:
        if (topology.rows * topology.cols != topology.nodes || topology.nodes < 2)
        {
            throw std::invalid_argument("planned grid needs rows * cols == nodes >= 2");
        }
        if (!(topology.spacing > 0.0))
        {
            throw std::invalid_argument("grid spacing must be positive");
        }
        break;
    case TopologyKind::kNeighborhood:
        if (topology.nodes < 1 || topology.housesPerRow < 1)
        {
            throw std::invalid_argument("neighborhood needs at least one house");
        }
        break;
    case TopologyKind::kExplicit:
        if (topology.positions.size() < 2)
        {
            throw std::invalid_argument("explicit topology needs at least two positions");
        }
        if (topology.sink >= topology.positions.size())
        {
            throw std::invalid_argument("sink index outside the position list");
        }
        for (const auto& p : topology.positions)
        {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
            {
                throw std::invalid_argument("non-finite position");
            }
        }
        break;
    }
}

uint32_t
ScenarioConfig::EffectiveSlots() const
{
    if (trafficSlots > 0)
    {
        return trafficSlots;
    }
    if (topology.kind == TopologyKind::kExplicit)
    {
        return static_cast<uint32_t>(topology.positions.size());
    }
    return topology.nodes;
}

Topology
GeneratePlannedGrid(const TopologySpec& layout)
{
    Topology t;
    t.sink = 0;
    for (uint32_t r = 0; r < layout.rows; ++r)
    {
        for (uint32_t c = 0; c < layout.cols; ++c)
        {
            t.positions.push_back({c * layout.spacing, r * layout.spacing});
        }
    }
    return t;
}

bool
IsConnected(const std::vector<Position>& positions, const RadioParams& radio)
{
    const size_t n = positions.size();
    if (n == 0)
    {
        return true;
    }
    std::vector<bool> seen(n, false);
    std::vector<size_t> stack{0};
    seen[0] = true;
    size_t reached = 1;
    while (!stack.empty())
    {
        size_t a = stack.back();
        stack.pop_back();
        for (size_t b = 0; b < n; ++b)
        {
            if (seen[b])
            {
                continue;
            }
            const double d = std::max(Distance(positions[a], positions[b]), kMinDistance);
            if (FsplRssi(d, radio) >= radio.sensitivityDbm)
            {
                seen[b] = true;
                ++reached;
                stack.push_back(b);
            }
        }
    }
    return reached == n;
}

namespace
{

Topology
DrawNeighborhood(const TopologySpec& layout, uint64_t subSeed)
{
    RngStream rng(MixSeed(layout.layoutSeed) ^ MixSeed(subSeed + 0x9e37ULL));
    const uint32_t perRow = layout.housesPerRow;
    const uint32_t rows = (layout.nodes + perRow - 1) / perRow;

    // Row y offsets: street, garden, street, garden, ...
    std::vector<double> rowY(rows, 0.0);
    for (uint32_t r = 1; r < rows; ++r)
    {
        rowY[r] = rowY[r - 1] + (r % 2 == 1 ? layout.streetWidth : layout.gardenDepth);
    }

    Topology t;
    t.sink = 0;
    t.positions.push_back({}); // sink, placed below
    double maxX = 0.0;
    for (uint32_t h = 0; h < layout.nodes; ++h)
    {
        const uint32_t r = h / perRow;
        const uint32_t c = h % perRow;
        Position p{c * layout.houseSpacing + rng.Uniform(-layout.jitter, layout.jitter),
                   rowY[r] + rng.Uniform(-layout.jitter, layout.jitter)};
        maxX = std::max(maxX, c * layout.houseSpacing);
        t.positions.push_back(p);
    }
    t.positions[0] = {maxX / 2.0, rowY.back() / 2.0};
    return t;
}

} // namespace

Topology
GenerateNeighborhood(const TopologySpec& layout, const RadioParams& radio)
{
    for (uint64_t sub = 0; sub < 1000; ++sub)
    {
        Topology t = DrawNeighborhood(layout, sub);
        if (IsConnected(t.positions, radio))
        {
            return t;
        }
    }
    throw std::runtime_error("could not draw a connected neighborhood layout");
}

Topology
BuildTopology(const ScenarioConfig& config)
{
    switch (config.topology.kind)
    {
    case TopologyKind::kPlannedGrid:
        return GeneratePlannedGrid(config.topology);
    case TopologyKind::kNeighborhood:
        return GenerateNeighborhood(config.topology, config.radio);
    case TopologyKind::kExplicit:
        return Topology{config.topology.positions, config.topology.sink};
    }
    throw std::logic_error("unknown topology kind");
}

std::vector<double>
ScheduleTraffic(const ScenarioConfig& config, NodeId node)
{
    const double slot = config.frameInterval / config.EffectiveSlots();
    std::vector<double> times;
    times.reserve(config.framesPerNode);
    for (uint32_t m = 0; m < config.framesPerNode; ++m)
    {
        times.push_back(config.setupTime + m * config.frameInterval + node * slot);
    }
    return times;
}

double
QuietSlotTime(const ScenarioConfig& config, double earliest, double latest, double unit)
{
    unit = std::clamp(unit, 0.0, 1.0);
    const double fallback = earliest + unit * (latest - earliest);
    const double slot = config.frameInterval / config.EffectiveSlots();
    if (!(latest > earliest) || !(slot > 0.0) || (latest - earliest) / slot > 1.0e5)
    {
        return fallback;
    }
    std::vector<std::pair<double, double>> quiet;
    double total = 0.0;
    const double origin = config.setupTime;
    for (double k = std::floor((earliest - origin) / slot); origin + k * slot < latest; k += 1.0)
    {
        const double a = std::max(earliest, origin + (k + kQuietSlotBegin) * slot);
        const double b = std::min(latest, origin + (k + kQuietSlotEnd) * slot);
        if (b > a)
        {
            quiet.emplace_back(a, b);
            total += b - a;
        }
    }
    if (quiet.empty())
    {
        return fallback;
    }
    double left = unit * total;
    for (const auto& [a, b] : quiet)
    {
        if (left <= b - a)
        {
            return a + left;
        }
        left -= b - a;
    }
    return quiet.back().second;
}

ScenarioConfig
Scenario1Preset()
{
    ScenarioConfig c;
    c.name = "s1";
    c.topology.kind = TopologyKind::kPlannedGrid;
    c.topology.nodes = 20;
    c.topology.rows = 4;
    c.topology.cols = 5;
    c.topology.spacing = 250.0;
    c.frameInterval = 5.0;
    return c;
}

ScenarioConfig
Scenario2Preset()
{
    ScenarioConfig c;
    c.name = "s2";
    c.topology.kind = TopologyKind::kNeighborhood;
    c.topology.nodes = 120;
    c.topology.layoutSeed = 1;
    c.radio.txPowerDbm = -22.0;
    c.frameInterval = 15.0;
    return c;
}

std::optional<ScenarioConfig>
PresetByName(std::string_view name)
{
    if (name == "s1")
    {
        return Scenario1Preset();
    }
    if (name == "s2")
    {
        return Scenario2Preset();
    }
    return std::nullopt;
}

ScenarioError::ScenarioError(const std::string& what, int line, int column)
    : std::runtime_error(what),
      m_line(line),
      m_column(column)
{
}

namespace
{

class Reader
{
  public:
    explicit Reader(std::string source)
        : m_source(std::move(source))
    {
    }

    [[noreturn]] void Fail(const YAML::Node& node, const std::string& msg) const
    {
        const auto mark = node.Mark();
        const int line = mark.line >= 0 ? mark.line + 1 : 0;
        const int col = mark.column >= 0 ? mark.column + 1 : 0;
        std::ostringstream os;
        os << m_source << ":" << line << ":" << col << ": " << msg;
        throw ScenarioError(os.str(), line, col);
    }

    template <typename T>
    T As(const YAML::Node& node, const std::string& key) const
    {
        try
        {
            return node.as<T>();
        }
        catch (const YAML::Exception&)
        {
            Fail(node, "bad value for '" + key + "'");
        }
    }

    void CheckKeys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) const
    {
        if (!map.IsMap())
        {
            Fail(map, "'" + where + "' must be a mapping");
        }
        for (const auto& kv : map)
        {
            const auto key = kv.first.as<std::string>();
            if (!allowed.contains(key))
            {
                Fail(kv.first, "unknown key '" + key + "' in " + where);
            }
        }
    }

  private:
    std::string m_source;
};

void
ReadTopology(const Reader& rd, const YAML::Node& n, TopologySpec& t)
{
    rd.CheckKeys(n,
                 {"kind",
                  "nodes",
                  "rows",
                  "cols",
                  "spacing",
                  "seed",
                  "houses_per_row",
                  "house_spacing",
                  "street_width",
                  "garden_depth",
                  "jitter",
                  "positions",
                  "sink"},
                 "topology");
    if (n["kind"])
    {
        const auto kind = rd.As<std::string>(n["kind"], "kind");
        if (kind == "planned-grid")
        {
            t.kind = TopologyKind::kPlannedGrid;
        }
        else if (kind == "neighborhood")
        {
            t.kind = TopologyKind::kNeighborhood;
        }
        else if (kind == "explicit")
        {
            t.kind = TopologyKind::kExplicit;
        }
        else
        {
            rd.Fail(n["kind"], "unknown topology kind '" + kind + "' (planned-grid, neighborhood, explicit)");
        }
    }
    if (n["nodes"]) t.nodes = rd.As<uint32_t>(n["nodes"], "nodes");
    if (n["rows"]) t.rows = rd.As<uint32_t>(n["rows"], "rows");
    if (n["cols"]) t.cols = rd.As<uint32_t>(n["cols"], "cols");
    if (n["spacing"]) t.spacing = rd.As<double>(n["spacing"], "spacing");
    if (n["seed"]) t.layoutSeed = rd.As<uint64_t>(n["seed"], "seed");
    if (n["houses_per_row"]) t.housesPerRow = rd.As<uint32_t>(n["houses_per_row"], "houses_per_row");
    if (n["house_spacing"]) t.houseSpacing = rd.As<double>(n["house_spacing"], "house_spacing");
    if (n["street_width"]) t.streetWidth = rd.As<double>(n["street_width"], "street_width");
    if (n["garden_depth"]) t.gardenDepth = rd.As<double>(n["garden_depth"], "garden_depth");
    if (n["jitter"]) t.jitter = rd.As<double>(n["jitter"], "jitter");
    if (n["sink"]) t.sink = rd.As<uint32_t>(n["sink"], "sink");
    if (n["positions"])
    {
        const auto& list = n["positions"];
        if (!list.IsSequence())
        {
            rd.Fail(list, "'positions' must be a list of [x, y] pairs");
        }
        t.positions.clear();
        for (const auto& p : list)
        {
            if (!p.IsSequence() || p.size() != 2)
            {
                rd.Fail(p, "position must be [x, y]");
            }
            t.positions.push_back({rd.As<double>(p[0], "x"), rd.As<double>(p[1], "y")});
        }
    }
}

void
ReadRadio(const Reader& rd, const YAML::Node& n, RadioParams& r)
{
    rd.CheckKeys(n, {"tx_power_dbm", "frequency_hz", "sensitivity_dbm", "sense_threshold_dbm", "bitrate"}, "radio");
    if (n["tx_power_dbm"]) r.txPowerDbm = rd.As<double>(n["tx_power_dbm"], "tx_power_dbm");
    if (n["frequency_hz"]) r.frequencyHz = rd.As<double>(n["frequency_hz"], "frequency_hz");
    if (n["sensitivity_dbm"]) r.sensitivityDbm = rd.As<double>(n["sensitivity_dbm"], "sensitivity_dbm");
    if (n["sense_threshold_dbm"])
        r.senseThresholdDbm = rd.As<double>(n["sense_threshold_dbm"], "sense_threshold_dbm");
    if (n["bitrate"]) r.bitrate = rd.As<double>(n["bitrate"], "bitrate");
}

void
ReadMac(const Reader& rd, const YAML::Node& n, MacConfig& m)
{
    rd.CheckKeys(n, {"base_backoff", "ack_slot", "queue_capacity"}, "mac");
    if (n["base_backoff"]) m.baseBackoff = rd.As<double>(n["base_backoff"], "base_backoff");
    if (n["ack_slot"]) m.ackSlot = rd.As<double>(n["ack_slot"], "ack_slot");
    if (n["queue_capacity"]) m.queueCapacity = rd.As<size_t>(n["queue_capacity"], "queue_capacity");
}

} // namespace

ScenarioConfig
ParseScenario(const std::string& text, const std::string& sourceName)
{
    Reader rd(sourceName);
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException& e)
    {
        std::ostringstream os;
        os << sourceName << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
        throw ScenarioError(os.str(), e.mark.line + 1, e.mark.column + 1);
    }
    if (!root.IsMap())
    {
        throw ScenarioError(sourceName + ": scenario must be a mapping", 1, 1);
    }
    rd.CheckKeys(root,
                 {"preset",
                  "name",
                  "variant",
                  "frame_interval",
                  "frames_per_node",
                  "target_pdr",
                  "seed",
                  "setup_time",
                  "drain_time",
                  "traffic_slots",
                  "forced_link_probability",
                  "topology",
                  "radio",
                  "mac"},
                 "scenario");

    ScenarioConfig c;
    if (root["preset"])
    {
        const auto name = rd.As<std::string>(root["preset"], "preset");
        auto preset = PresetByName(name);
        if (!preset)
        {
            rd.Fail(root["preset"], "unknown preset '" + name + "' (s1, s2)");
        }
        c = *preset;
    }
    if (root["name"]) c.name = rd.As<std::string>(root["name"], "name");
    if (root["variant"])
    {
        const auto v = rd.As<std::string>(root["variant"], "variant");
        auto parsed = ParseVariant(v);
        if (!parsed)
        {
            rd.Fail(root["variant"], "unknown variant '" + v + "' (rpl, orpl, orplx, orplx-p, orplx-ch)");
        }
        c.variant = *parsed;
    }
    if (root["frame_interval"]) c.frameInterval = rd.As<double>(root["frame_interval"], "frame_interval");
    if (root["frames_per_node"]) c.framesPerNode = rd.As<uint32_t>(root["frames_per_node"], "frames_per_node");
    if (root["target_pdr"])
    {
        const double v = rd.As<double>(root["target_pdr"], "target_pdr");
        if (!(v > 0.0 && v < 1.0))
        {
            rd.Fail(root["target_pdr"], "target_pdr must be in (0, 1)");
        }
        c.targetPdr = Probability(v);
    }
    if (root["seed"]) c.seed = rd.As<uint64_t>(root["seed"], "seed");
    if (root["setup_time"]) c.setupTime = rd.As<double>(root["setup_time"], "setup_time");
    if (root["drain_time"]) c.drainTime = rd.As<double>(root["drain_time"], "drain_time");
    if (root["traffic_slots"]) c.trafficSlots = rd.As<uint32_t>(root["traffic_slots"], "traffic_slots");
    if (root["forced_link_probability"])
        c.forcedLinkProbability = rd.As<double>(root["forced_link_probability"], "forced_link_probability");
    if (root["topology"]) ReadTopology(rd, root["topology"], c.topology);
    if (root["radio"]) ReadRadio(rd, root["radio"], c.radio);
    if (root["mac"]) ReadMac(rd, root["mac"], c.mac);

    try
    {
        c.Validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw ScenarioError(sourceName + ": " + e.what());
    }
    return c;
}

ScenarioConfig
LoadScenarioFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ScenarioError(path + ": cannot open scenario file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return ParseScenario(buf.str(), path);
}

} // namespace amisim
