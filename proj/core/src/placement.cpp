#include "ladderbus/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "ladderbus/error.hpp"
#include "ladderbus/rng.hpp"

namespace ladderbus
{

TilePlacement::TilePlacement(std::vector<TileId> tile_of, std::size_t n_tiles)
    : tile_of_(std::move(tile_of))
{
    std::vector<bool> used(n_tiles, false);
    for (std::size_t c = 0; c < tile_of_.size(); ++c)
    {
        const TileId t = tile_of_[c];
        if (t >= n_tiles)
        {
            throw ConfigError("placement: cluster " + std::to_string(c) + " on tile " + std::to_string(t) +
                              " beyond " + std::to_string(n_tiles) + " tiles");
        }
        if (used[t])
        {
            throw ConfigError("placement: tile " + std::to_string(t) + " assigned twice");
        }
        used[t] = true;
    }
}

namespace
{

std::uint64_t hop_cost(const LadderTopology &topo, TileId a, TileId b)
{
    const auto ca = topo.column_of(a);
    const auto cb = topo.column_of(b);
    return (ca > cb ? ca - cb : cb - ca) + 1;
}

struct Neighbor
{
    ClusterId other;
    std::uint64_t weight;
};

std::vector<std::vector<Neighbor>> undirected_adjacency(const ClusterGraph &g)
{
    std::vector<std::vector<Neighbor>> adj(g.cluster_count());
    for (const auto &e : g.edges())
    {
        adj[e.src].push_back({e.dst, e.weight});
        adj[e.dst].push_back({e.src, e.weight});
    }
    return adj;
}

void check_fits(const ClusterGraph &g, const LadderTopology &topo)
{
    if (g.cluster_count() > topo.tiles())
    {
        throw ConfigError("placement: " + std::to_string(g.cluster_count()) + " clusters do not fit on " +
                          std::to_string(topo.tiles()) + " tiles");
    }
}

} // namespace

std::uint64_t placement_cost(const ClusterGraph &g, const LadderTopology &topo, const TilePlacement &p)
{
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i < g.edges().size(); ++i)
    {
        const auto &e = g.edges()[i];
        if (e.src >= p.size() || e.dst >= p.size())
        {
            throw ConfigError("placement_cost: edge " + std::to_string(i) + " references an unplaced cluster");
        }
        cost += e.weight * hop_cost(topo, p.tile_of(e.src), p.tile_of(e.dst));
    }
    return cost;
}

TilePlacement place_greedy(const ClusterGraph &g, const LadderTopology &topo)
{
    check_fits(g, topo);
    const auto degree = g.total_degrees();
    std::vector<ClusterId> order(g.cluster_count());
    std::iota(order.begin(), order.end(), ClusterId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](ClusterId a, ClusterId b) { return degree[a] > degree[b]; });

    const auto adj = undirected_adjacency(g);
    constexpr TileId unplaced = UINT32_MAX;
    std::vector<TileId> tile_of(g.cluster_count(), unplaced);
    std::vector<bool> used(topo.tiles(), false);

    for (ClusterId c : order)
    {
        TileId best_tile = unplaced;
        std::uint64_t best_cost = UINT64_MAX;
        for (TileId t = 0; t < topo.tiles(); ++t)
        {
            if (used[t])
            {
                continue;
            }
            std::uint64_t cost = 0;
            for (const auto &nb : adj[c])
            {
                if (tile_of[nb.other] != unplaced)
                {
                    cost += nb.weight * hop_cost(topo, t, tile_of[nb.other]);
                }
            }
            if (cost < best_cost)
            {
                best_cost = cost;
                best_tile = t;
            }
        }
        tile_of[c] = best_tile;
        used[best_tile] = true;
    }
    return {std::move(tile_of), topo.tiles()};
}

TilePlacement place_anneal(const ClusterGraph &g, const LadderTopology &topo, const TilePlacement &initial,
                           std::uint64_t seed, const AnnealParams &params)
{
    check_fits(g, topo);
    const std::size_t n = g.cluster_count();
    const std::size_t iterations = params.iterations.value_or(200 * n);
    const std::uint64_t initial_cost = placement_cost(g, topo, initial);
    double temperature = params.initial_temperature.value_or(static_cast<double>(initial_cost) / 10.0);
    if (iterations == 0 || n == 0 || initial_cost == 0 || topo.tiles() < 2)
    {
        return initial;
    }

    const auto adj = undirected_adjacency(g);
    constexpr std::uint32_t vacant = UINT32_MAX;
    std::vector<TileId> tile_of = initial.tiles();
    std::vector<std::uint32_t> cluster_at(topo.tiles(), vacant);
    for (ClusterId c = 0; c < n; ++c)
    {
        cluster_at[tile_of[c]] = c;
    }

    // Cost of c's incident edges if c sat on tile t, with `skip` treated as
    // the cluster being swapped into c's old tile.
    auto local_cost = [&](ClusterId c, TileId t, std::uint32_t skip) {
        std::uint64_t cost = 0;
        for (const auto &nb : adj[c])
        {
            if (nb.other != skip)
            {
                cost += nb.weight * hop_cost(topo, t, tile_of[nb.other]);
            }
        }
        return static_cast<std::int64_t>(cost);
    };

    Rng rng(seed);
    std::int64_t current = static_cast<std::int64_t>(initial_cost);
    std::int64_t best = current;
    std::vector<TileId> best_tiles = tile_of;

    for (std::size_t it = 0; it < iterations; ++it)
    {
        const auto a = static_cast<ClusterId>(rng.below(n));
        auto target = static_cast<TileId>(rng.below(topo.tiles() - 1));
        if (target >= tile_of[a])
        {
            ++target;
        }
        const TileId from = tile_of[a];
        const std::uint32_t b = cluster_at[target];

        // The a-b edge (if any) keeps its length under a swap, so it is
        // excluded from both sides of the delta.
        std::int64_t delta = local_cost(a, target, b) - local_cost(a, from, b);
        if (b != vacant)
        {
            delta += local_cost(b, from, a) - local_cost(b, target, a);
        }

        const bool accept = delta <= 0 || (temperature > 0.0 &&
                                           rng.unit() < std::exp(-static_cast<double>(delta) / temperature));
        if (accept)
        {
            tile_of[a] = target;
            cluster_at[target] = a;
            cluster_at[from] = b;
            if (b != vacant)
            {
                tile_of[b] = from;
            }
            current += delta;
            if (current < best)
            {
                best = current;
                best_tiles = tile_of;
            }
        }
        if ((it + 1) % n == 0)
        {
            temperature *= params.cooling;
        }
    }
    return {std::move(best_tiles), topo.tiles()};
}

std::string to_json(const TilePlacement &p)
{
    nlohmann::ordered_json j;
    j["assignment"] = p.tiles();
    return j.dump() + "\n";
}

TilePlacement parse_placement(const std::string &text, std::size_t n_tiles)
{
    try
    {
        const auto j = nlohmann::json::parse(text);
        return {j.at("assignment").get<std::vector<TileId>>(), n_tiles};
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError("placement", e.what());
    }
}

} // namespace ladderbus
