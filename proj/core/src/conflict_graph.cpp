#include "ladderbus/conflict_graph.hpp"

#include <algorithm>

#include "ladderbus/error.hpp"

namespace ladderbus
{

ConflictGraph::ConflictGraph(std::size_t n) : rows_(n, VertexSet(n)), degree_(n, 0) {}

ConflictGraph::ConflictGraph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges)
    : ConflictGraph(n)
{
    for (const auto &[a, b] : edges)
    {
        add_edge(a, b);
    }
}

void ConflictGraph::add_edge(std::size_t a, std::size_t b)
{
    if (a == b || a >= rows_.size() || b >= rows_.size())
    {
        throw ConfigError("conflict graph: invalid edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    if (rows_[a].contains(b))
    {
        return;
    }
    rows_[a].insert(b);
    rows_[b].insert(a);
    ++degree_[a];
    ++degree_[b];
    ++m_;
}

std::size_t ConflictGraph::max_degree() const
{
    return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

ConflictGraph build_conflict_graph(std::span<const RoutedPath> paths)
{
    ConflictGraph g(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        if (paths[i].edge != i)
        {
            throw ConfigError("build_conflict_graph: path " + std::to_string(i) + " carries edge id " +
                              std::to_string(paths[i].edge));
        }
        for (std::size_t j = i + 1; j < paths.size(); ++j)
        {
            if (paths_intersect(paths[i], paths[j]))
            {
                g.add_edge(i, j);
            }
        }
    }
    return g;
}

} // namespace ladderbus
