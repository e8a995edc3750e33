// clique.hpp
//
//  Maximum-clique search on conflict graphs.
//
//  max_clique() is an exact branch and bound that walks candidate vertices in
//  ascending id order, so the first maximum clique it meets is the
//  lexicographically smallest one. Each node bounds every suffix of its
//  candidate list by a greedy colouring built back to front. The search is
//  seeded with a greedy clique and stops at a wall-clock budget, returning
//  the best clique found so far with `exact == false`.
//
//  for_each_maximal_clique() is plain Bron-Kerbosch with Tomita pivoting
//  under a degeneracy ordering; it enumerates every maximal clique and is
//  the independent reference for max_clique().

#ifndef LADDERBUS_CLIQUE_HPP
#define LADDERBUS_CLIQUE_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ladderbus/conflict_graph.hpp"
#include "ladderbus/vertex_set.hpp"

namespace ladderbus
{

struct CliqueOptions
{
    std::chrono::milliseconds budget{10'000};
};

struct CliqueResult
{
    std::vector<std::size_t> vertices; // ascending
    bool exact{true};
    std::uint64_t nodes{0};
};

/// Throws ConfigError on an empty candidate set.
CliqueResult max_clique(const ConflictGraph &g, const VertexSet &candidates, const CliqueOptions &options = {});
CliqueResult max_clique(const ConflictGraph &g, const CliqueOptions &options = {});

/// Vertices of `candidates` in smallest-last (degeneracy) order.
std::vector<std::size_t> degeneracy_order(const ConflictGraph &g, const VertexSet &candidates);

/// Calls `visit` once per maximal clique (ascending vertex ids).
void for_each_maximal_clique(const ConflictGraph &g,
                             const std::function<void(const std::vector<std::size_t> &)> &visit);

} // namespace ladderbus

#endif // LADDERBUS_CLIQUE_HPP
