#ifndef LADDERBUS_PLACEMENT_HPP
#define LADDERBUS_PLACEMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

/// Injective map cluster -> tile.
class TilePlacement
{
public:
    TilePlacement() = default;
    /// tile_of[c] is the tile of cluster c. Throws ConfigError when not
    /// injective or a tile is out of range.
    TilePlacement(std::vector<TileId> tile_of, std::size_t n_tiles);

    [[nodiscard]] std::size_t size() const noexcept { return tile_of_.size(); }
    [[nodiscard]] TileId tile_of(ClusterId c) const { return tile_of_.at(c); }
    [[nodiscard]] const std::vector<TileId> &tiles() const noexcept { return tile_of_; }

    friend bool operator==(const TilePlacement &, const TilePlacement &) = default;

private:
    std::vector<TileId> tile_of_;
};

/// Sum over edges of weight * (|column(src) - column(dst)| + 1).
std::uint64_t placement_cost(const ClusterGraph &g, const LadderTopology &topo, const TilePlacement &p);

/// Clusters in descending total degree (ties: lower id); each goes to the
/// free tile with the least incremental cost (ties: lower tile id).
TilePlacement place_greedy(const ClusterGraph &g, const LadderTopology &topo);

struct AnnealParams
{
    /// Defaults to initial cost / 10.
    std::optional<double> initial_temperature;
    /// Geometric factor applied once per sweep of n_clusters moves.
    double cooling{0.97};
    /// Defaults to 200 * n_clusters.
    std::optional<std::size_t> iterations;
};

/// Swap/move simulated annealing from `initial`. Returns the best placement
/// seen, so the result never costs more than `initial`.
TilePlacement place_anneal(const ClusterGraph &g, const LadderTopology &topo, const TilePlacement &initial,
                           std::uint64_t seed, const AnnealParams &params = {});

std::string to_json(const TilePlacement &p);
TilePlacement parse_placement(const std::string &text, std::size_t n_tiles);

} // namespace ladderbus

#endif // LADDERBUS_PLACEMENT_HPP
