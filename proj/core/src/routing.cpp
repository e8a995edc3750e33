#include "ladderbus/routing.hpp"

#include <algorithm>

#include <json.hpp>

#include "ladderbus/error.hpp"

namespace ladderbus
{

std::size_t LaneLoad::overlap(std::size_t lane, std::size_t cmin, std::size_t cmax) const
{
    std::size_t total = 0;
    for (std::size_t c = cmin; c <= cmax; ++c)
    {
        total += load_[lane * columns_ + c];
    }
    return total;
}

void LaneLoad::add(std::size_t lane, std::size_t cmin, std::size_t cmax)
{
    for (std::size_t c = cmin; c <= cmax; ++c)
    {
        ++load_[lane * columns_ + c];
    }
}

RoutedPath route_connection(const LadderTopology &topo, TileId src, TileId dst, LaneLoad &load,
                            std::size_t edge)
{
    if (src == dst)
    {
        throw ConfigError("route_connection: source and destination are both tile " + std::to_string(src));
    }
    RoutedPath p;
    p.edge = edge;
    p.src_tile = src;
    p.dst_tile = dst;
    p.src_column = topo.column_of(src);
    p.dst_column = topo.column_of(dst);
    p.cmin = std::min(p.src_column, p.dst_column);
    p.cmax = std::max(p.src_column, p.dst_column);
    if (!p.uses_lane())
    {
        return p;
    }
    std::size_t best = 0;
    std::size_t best_load = load.overlap(0, p.cmin, p.cmax);
    for (std::size_t lane = 1; lane < topo.lanes(); ++lane)
    {
        const auto l = load.overlap(lane, p.cmin, p.cmax);
        if (l < best_load)
        {
            best = lane;
            best_load = l;
        }
    }
    p.lane = best;
    load.add(best, p.cmin, p.cmax);
    return p;
}

std::vector<RoutedPath> extract_paths(const ClusterGraph &g, const LadderTopology &topo, const TilePlacement &p)
{
    if (p.size() != g.cluster_count())
    {
        throw ConfigError("extract_paths: placement covers " + std::to_string(p.size()) + " of " +
                          std::to_string(g.cluster_count()) + " clusters");
    }
    LaneLoad load(topo);
    std::vector<RoutedPath> paths;
    paths.reserve(g.edge_count());
    for (std::size_t i = 0; i < g.edges().size(); ++i)
    {
        const auto &e = g.edges()[i];
        paths.push_back(route_connection(topo, p.tile_of(e.src), p.tile_of(e.dst), load, i));
    }
    return paths;
}

bool paths_intersect(const RoutedPath &a, const RoutedPath &b)
{
    const bool shared_rung = a.src_column == b.src_column || a.src_column == b.dst_column ||
                             a.dst_column == b.src_column || a.dst_column == b.dst_column;
    if (shared_rung)
    {
        return true;
    }
    return a.uses_lane() && b.uses_lane() && a.lane == b.lane && a.cmin <= b.cmax && b.cmin <= a.cmax;
}

std::vector<Resource> path_resources(const RoutedPath &p)
{
    std::vector<Resource> out;
    out.push_back({ResourceKind::rung, 0, p.cmin});
    if (!p.uses_lane())
    {
        return out;
    }
    out.push_back({ResourceKind::rung, 0, p.cmax});
    for (std::size_t c = p.cmin; c <= p.cmax; ++c)
    {
        out.push_back({ResourceKind::switch_, p.lane, c});
        if (c < p.cmax)
        {
            out.push_back({ResourceKind::segment, p.lane, c});
        }
    }
    return out;
}

std::vector<std::pair<std::size_t, SwitchState>> path_switch_settings(const LadderTopology &topo,
                                                                       const RoutedPath &p)
{
    std::vector<std::pair<std::size_t, SwitchState>> out;
    if (!p.uses_lane())
    {
        return out;
    }
    out.emplace_back(topo.switch_index(p.lane, p.cmin), SwitchState::right_rung);
    for (std::size_t c = p.cmin + 1; c < p.cmax; ++c)
    {
        out.emplace_back(topo.switch_index(p.lane, c), SwitchState::left_right);
    }
    out.emplace_back(topo.switch_index(p.lane, p.cmax), SwitchState::left_rung);
    return out;
}

std::string to_json(std::span<const RoutedPath> paths)
{
    std::string out = "{\n  \"paths\": [";
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const auto &p = paths[i];
        out += i == 0 ? "\n    " : ",\n    ";
        out += "{\"edge\": " + std::to_string(p.edge) + ", \"src\": " + std::to_string(p.src_tile) +
               ", \"dst\": " + std::to_string(p.dst_tile) + ", \"lane\": " + std::to_string(p.lane) +
               ", \"cmin\": " + std::to_string(p.cmin) + ", \"cmax\": " + std::to_string(p.cmax) + "}";
    }
    out += paths.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::vector<RoutedPath> parse_paths(const std::string &text, const LadderTopology &topo)
{
    std::vector<RoutedPath> out;
    try
    {
        const auto j = nlohmann::json::parse(text);
        for (const auto &item : j.at("paths"))
        {
            RoutedPath p;
            p.edge = item.at("edge").get<std::size_t>();
            p.src_tile = item.at("src").get<TileId>();
            p.dst_tile = item.at("dst").get<TileId>();
            p.lane = item.at("lane").get<std::size_t>();
            p.cmin = item.at("cmin").get<std::size_t>();
            p.cmax = item.at("cmax").get<std::size_t>();
            const std::string where = "paths[" + std::to_string(out.size()) + "]";
            if (p.src_tile >= topo.tiles() || p.dst_tile >= topo.tiles())
            {
                throw FormatError(where, "tile out of range");
            }
            p.src_column = topo.column_of(p.src_tile);
            p.dst_column = topo.column_of(p.dst_tile);
            if (p.cmin != std::min(p.src_column, p.dst_column) || p.cmax != std::max(p.src_column, p.dst_column) ||
                p.lane >= topo.lanes())
            {
                throw FormatError(where, "inconsistent with topology");
            }
            out.push_back(p);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError("paths", e.what());
    }
    return out;
}

} // namespace ladderbus
