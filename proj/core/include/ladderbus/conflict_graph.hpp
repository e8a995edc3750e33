#ifndef LADDERBUS_CONFLICT_GRAPH_HPP
#define LADDERBUS_CONFLICT_GRAPH_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ladderbus/routing.hpp"
#include "ladderbus/vertex_set.hpp"

namespace ladderbus
{

/// Undirected simple graph over routed paths; vertex i is the path of edge i.
class ConflictGraph
{
public:
    ConflictGraph() = default;
    explicit ConflictGraph(std::size_t n);
    ConflictGraph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

    void add_edge(std::size_t a, std::size_t b);

    [[nodiscard]] std::size_t vertex_count() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return m_; }
    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const { return rows_[a].contains(b); }
    [[nodiscard]] const VertexSet &neighbors(std::size_t v) const { return rows_[v]; }
    [[nodiscard]] std::size_t degree(std::size_t v) const { return degree_[v]; }
    [[nodiscard]] std::size_t max_degree() const;

private:
    std::vector<VertexSet> rows_;
    std::vector<std::size_t> degree_;
    std::size_t m_{0};
};

/// Edge between i and j iff paths_intersect(paths[i], paths[j]). Requires
/// paths[i].edge == i.
ConflictGraph build_conflict_graph(std::span<const RoutedPath> paths);

} // namespace ladderbus

#endif // LADDERBUS_CONFLICT_GRAPH_HPP
