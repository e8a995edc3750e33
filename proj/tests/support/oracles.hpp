// Brute-force reference implementations. Deliberately naive and
// independent of the library's algorithms; only used at small sizes.
#ifndef LADDERBUS_TESTS_ORACLES_HPP
#define LADDERBUS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <tuple>
#include <vector>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/conflict_graph.hpp"
#include "ladderbus/placement.hpp"
#include "ladderbus/routing.hpp"
#include "ladderbus/topology.hpp"

namespace oracle
{

// (kind, lane, column); kind 0 rung, 1 segment, 2 switch.
using Res = std::tuple<int, std::size_t, std::size_t>;

// Resources of a path, rebuilt from its endpoints and lane only.
inline std::set<Res> resources(const ladderbus::RoutedPath &p)
{
    std::set<Res> out{{0, 0, p.src_column}, {0, 0, p.dst_column}};
    const auto lo = std::min(p.src_column, p.dst_column);
    const auto hi = std::max(p.src_column, p.dst_column);
    if (lo != hi)
    {
        for (auto c = lo; c <= hi; ++c)
        {
            out.insert({2, p.lane, c});
            if (c < hi)
            {
                out.insert({1, p.lane, c});
            }
        }
    }
    return out;
}

inline bool intersect(const ladderbus::RoutedPath &a, const ladderbus::RoutedPath &b)
{
    const auto ra = resources(a);
    for (const auto &r : resources(b))
    {
        if (ra.contains(r))
        {
            return true;
        }
    }
    return false;
}

using Adjacency = std::vector<std::vector<bool>>;

inline Adjacency adjacency(const ladderbus::ConflictGraph &g)
{
    const auto n = g.vertex_count();
    Adjacency a(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            a[i][j] = i != j && g.adjacent(i, j);
        }
    }
    return a;
}

// Largest clique by enumerating every subset; among the largest, the
// lexicographically smallest sorted vertex list.
inline std::vector<std::size_t> max_clique(const Adjacency &a)
{
    const auto n = a.size();
    std::vector<std::size_t> best;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask)
    {
        std::vector<std::size_t> s;
        for (std::size_t v = 0; v < n; ++v)
        {
            if ((mask >> v) & 1U)
            {
                s.push_back(v);
            }
        }
        bool clique = true;
        for (std::size_t i = 0; i < s.size() && clique; ++i)
        {
            for (std::size_t j = i + 1; j < s.size() && clique; ++j)
            {
                clique = a[s[i]][s[j]];
            }
        }
        if (clique && (s.size() > best.size() || (s.size() == best.size() && s < best)))
        {
            best = s;
        }
    }
    return best;
}

// Chromatic number by dynamic programming over vertex subsets: the cost of
// a subset is one more than the best cost of the subset minus an
// independent set containing its lowest vertex.
inline std::size_t chromatic_number(const Adjacency &a)
{
    const auto n = a.size();
    if (n == 0)
    {
        return 0;
    }
    const std::uint32_t full = (1U << n) - 1;
    std::vector<bool> independent(full + 1, true);
    for (std::uint32_t mask = 1; mask <= full; ++mask)
    {
        for (std::size_t i = 0; i < n && independent[mask]; ++i)
        {
            for (std::size_t j = i + 1; j < n && independent[mask]; ++j)
            {
                if (((mask >> i) & 1U) && ((mask >> j) & 1U) && a[i][j])
                {
                    independent[mask] = false;
                }
            }
        }
    }
    std::vector<std::size_t> dp(full + 1, std::numeric_limits<std::size_t>::max());
    dp[0] = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask)
    {
        const std::uint32_t low = mask & (~mask + 1);
        for (std::uint32_t sub = mask; sub != 0; sub = (sub - 1) & mask)
        {
            if ((sub & low) && independent[sub] && dp[mask ^ sub] != std::numeric_limits<std::size_t>::max())
            {
                dp[mask] = std::min(dp[mask], dp[mask ^ sub] + 1);
            }
        }
    }
    return dp[full];
}

// Minimum placement cost over every injective cluster -> tile map.
inline std::uint64_t min_placement_cost(const ladderbus::ClusterGraph &g, const ladderbus::LadderTopology &topo)
{
    const auto n = g.cluster_count();
    std::vector<std::size_t> tiles(topo.tiles());
    for (std::size_t t = 0; t < tiles.size(); ++t)
    {
        tiles[t] = t;
    }
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::size_t> chosen(n);
    std::vector<bool> used(topo.tiles(), false);
    auto cost = [&] {
        std::uint64_t c = 0;
        for (const auto &e : g.edges())
        {
            const auto a = chosen[e.src] / 2;
            const auto b = chosen[e.dst] / 2;
            c += std::uint64_t{e.weight} * ((a > b ? a - b : b - a) + 1);
        }
        return c;
    };
    auto rec = [&](auto &&self, std::size_t i) -> void {
        if (i == n)
        {
            best = std::min(best, cost());
            return;
        }
        for (std::size_t t = 0; t < topo.tiles(); ++t)
        {
            if (!used[t])
            {
                used[t] = true;
                chosen[i] = t;
                self(self, i + 1);
                used[t] = false;
            }
        }
    };
    rec(rec, 0);
    return best;
}

// Lane choice recomputed from scratch: for each connection in order, count
// for every lane how many earlier paths on that lane cover each column of
// the interval, and take the least (lowest lane on ties).
inline std::vector<std::size_t> least_loaded_lanes(const ladderbus::LadderTopology &topo,
                                                   const std::vector<std::pair<std::size_t, std::size_t>> &intervals)
{
    std::vector<std::size_t> lanes;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> placed; // lane, lo, hi
    for (const auto &[lo, hi] : intervals)
    {
        if (lo == hi)
        {
            lanes.push_back(0);
            continue;
        }
        std::size_t best_lane = 0;
        std::size_t best_load = std::numeric_limits<std::size_t>::max();
        for (std::size_t l = 0; l < topo.lanes(); ++l)
        {
            std::size_t load = 0;
            for (auto c = lo; c <= hi; ++c)
            {
                for (const auto &[pl, plo, phi] : placed)
                {
                    load += (pl == l && plo <= c && c <= phi) ? 1 : 0;
                }
            }
            if (load < best_load)
            {
                best_load = load;
                best_lane = l;
            }
        }
        lanes.push_back(best_lane);
        placed.emplace_back(best_lane, lo, hi);
    }
    return lanes;
}

} // namespace oracle

#endif // LADDERBUS_TESTS_ORACLES_HPP
