#include "ladderbus/topology.hpp"

#include <cmath>

#include <json.hpp>

#include "ladderbus/error.hpp"

namespace ladderbus
{

const char *to_string(SwitchState s)
{
    switch (s)
    {
    case SwitchState::idle:
        return "idle";
    case SwitchState::left_right:
        return "left-right";
    case SwitchState::left_rung:
        return "left-rung";
    case SwitchState::right_rung:
        return "right-rung";
    }
    return "?";
}

std::string to_string(const Resource &r)
{
    switch (r.kind)
    {
    case ResourceKind::rung:
        return "rung:" + std::to_string(r.column);
    case ResourceKind::segment:
        return "seg:" + std::to_string(r.lane) + ":" + std::to_string(r.column);
    case ResourceKind::switch_:
        return "sw:" + std::to_string(r.lane) + ":" + std::to_string(r.column);
    }
    return "?";
}

LadderTopology::LadderTopology(std::size_t n_tiles, std::size_t n_lanes, std::size_t lane_width_bits)
    : tiles_(n_tiles), lanes_(n_lanes), lane_width_bits_(lane_width_bits)
{
    if (n_tiles < 2)
    {
        throw ConfigError("topology needs at least 2 tiles, got " + std::to_string(n_tiles));
    }
    if (n_lanes == 0)
    {
        throw ConfigError("topology needs at least 1 lane");
    }
}

std::size_t LadderTopology::column_of(TileId tile) const
{
    if (tile >= tiles_)
    {
        throw ConfigError("tile " + std::to_string(tile) + " out of range (" + std::to_string(tiles_) +
                          " tiles)");
    }
    return tile / 2;
}

std::size_t default_lane_count(std::size_t n_tiles)
{
    return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_tiles)) + 0.5));
}

LadderTopology build_topology(std::size_t n_tiles, std::optional<std::size_t> n_lanes,
                              std::size_t lane_width_bits)
{
    if (n_tiles < 2)
    {
        throw ConfigError("topology needs at least 2 tiles, got " + std::to_string(n_tiles));
    }
    return {n_tiles, n_lanes.value_or(default_lane_count(n_tiles)), lane_width_bits};
}

TileCoord tile_coordinates(const LadderTopology &topo, TileId tile)
{
    return {tile % 2U, topo.column_of(tile)};
}

std::string to_json(const LadderTopology &topo)
{
    nlohmann::ordered_json j;
    j["tiles"] = topo.tiles();
    j["lanes"] = topo.lanes();
    j["columns"] = topo.columns();
    j["lane_width_bits"] = topo.lane_width_bits();
    j["switches"] = topo.switch_count();
    j["segments"] = topo.segment_count();
    j["rungs"] = topo.rung_count();
    return j.dump(2) + "\n";
}

LadderTopology parse_topology(const std::string &text)
{
    try
    {
        const auto j = nlohmann::json::parse(text);
        return build_topology(j.at("tiles").get<std::size_t>(), j.at("lanes").get<std::size_t>(),
                              j.at("lane_width_bits").get<std::size_t>());
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError("topology", e.what());
    }
}

} // namespace ladderbus
