// routing.hpp
//
//  Every connection is realised on the ladder as: source tile -> rung of its
//  column -> one lane across the column interval [cmin, cmax] -> rung of the
//  destination column -> destination tile. The interval is fixed by the
//  placement; the lane is the only routing choice. A connection whose tiles
//  share a column uses the rung alone and touches no lane resources.

#ifndef LADDERBUS_ROUTING_HPP
#define LADDERBUS_ROUTING_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/placement.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

struct RoutedPath
{
    std::size_t edge{0};
    TileId src_tile{0};
    TileId dst_tile{0};
    std::size_t lane{0};
    std::size_t cmin{0};
    std::size_t cmax{0};
    std::size_t src_column{0};
    std::size_t dst_column{0};

    /// False for same-column connections (rung only).
    [[nodiscard]] bool uses_lane() const noexcept { return cmin != cmax; }

    friend bool operator==(const RoutedPath &, const RoutedPath &) = default;
};

/// Per-lane, per-column count of routed connections crossing each switch.
class LaneLoad
{
public:
    explicit LaneLoad(const LadderTopology &topo)
        : lanes_(topo.lanes()), columns_(topo.columns()), load_(lanes_ * columns_, 0)
    {
    }

    [[nodiscard]] std::size_t at(std::size_t lane, std::size_t column) const
    {
        return load_[lane * columns_ + column];
    }
    /// Sum of load on `lane` over columns cmin..cmax.
    [[nodiscard]] std::size_t overlap(std::size_t lane, std::size_t cmin, std::size_t cmax) const;
    void add(std::size_t lane, std::size_t cmin, std::size_t cmax);

private:
    std::size_t lanes_;
    std::size_t columns_;
    std::vector<std::size_t> load_;
};

/// Least-loaded lane over the interval (ties: lowest lane); updates `load`.
/// Throws ConfigError when src == dst.
RoutedPath route_connection(const LadderTopology &topo, TileId src, TileId dst, LaneLoad &load,
                            std::size_t edge = 0);

/// One path per edge, in edge-id order, sharing one LaneLoad.
std::vector<RoutedPath> extract_paths(const ClusterGraph &g, const LadderTopology &topo,
                                      const TilePlacement &p);

/// True iff the two paths share a rung, or both occupy lane resources on the
/// same lane over overlapping column intervals.
bool paths_intersect(const RoutedPath &a, const RoutedPath &b);

/// Every rung, switch and segment the path occupies.
std::vector<Resource> path_resources(const RoutedPath &p);

/// (switch index, state) pairs realising the path.
std::vector<std::pair<std::size_t, SwitchState>> path_switch_settings(const LadderTopology &topo,
                                                                       const RoutedPath &p);

std::string to_json(std::span<const RoutedPath> paths);
std::vector<RoutedPath> parse_paths(const std::string &text, const LadderTopology &topo);

} // namespace ladderbus

#endif // LADDERBUS_ROUTING_HPP
