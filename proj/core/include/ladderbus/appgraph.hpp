// appgraph.hpp
//
//  The application side of the flow: a directed, weighted graph of neuron
//  clusters where each edge is one spike connection that must be carried by
//  the bus. Graphs are loaded from a small JSON document or synthesised with
//  a seeded generator that is bit-reproducible across platforms.
//
//  Document format:
//      {
//        "name": "synth_40_160",
//        "n_clusters": 40,
//        "edges": [[src, dst, weight], ...]
//      }
//  All three fields are required and no other fields are accepted. Cluster
//  ids lie in 0..n_clusters-1, weights are non-negative integers, self-loops
//  and duplicate (src, dst) pairs are rejected.

#ifndef LADDERBUS_APPGRAPH_HPP
#define LADDERBUS_APPGRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ladderbus
{

using ClusterId = std::uint32_t;

struct Connection
{
    ClusterId src{0};
    ClusterId dst{0};
    std::uint32_t weight{1};

    friend bool operator==(const Connection &, const Connection &) = default;
};

class ClusterGraph
{
public:
    ClusterGraph() = default;
    /// Validates ids, self-loops and duplicates; throws FormatError.
    ClusterGraph(std::string name, std::size_t n_clusters, std::vector<Connection> edges);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] std::size_t cluster_count() const noexcept { return n_clusters_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    /// Edge id i is edges()[i].
    [[nodiscard]] const std::vector<Connection> &edges() const noexcept { return edges_; }

    [[nodiscard]] std::vector<std::size_t> out_degrees() const;
    [[nodiscard]] std::vector<std::size_t> in_degrees() const;
    /// in-degree + out-degree per cluster.
    [[nodiscard]] std::vector<std::size_t> total_degrees() const;

    friend bool operator==(const ClusterGraph &, const ClusterGraph &) = default;

private:
    std::string name_;
    std::size_t n_clusters_{0};
    std::vector<Connection> edges_;
};

struct GraphMetrics
{
    std::size_t clusters{0};
    std::size_t edges{0};
    double avg_degree{0.0}; // E / n
    double density{0.0};    // E / (n (n - 1))
    std::size_t max_total_degree{0};
    std::size_t max_out_degree{0};
    std::size_t max_in_degree{0};

    /// max(out, in): the per-direction "largest degree" of a cluster.
    [[nodiscard]] std::size_t largest_directed_degree() const
    {
        return max_out_degree > max_in_degree ? max_out_degree : max_in_degree;
    }
};

/// Throws ConfigError when the graph has fewer than two clusters.
GraphMetrics graph_metrics(const ClusterGraph &g);

ClusterGraph parse_cluster_graph(std::string_view text);
ClusterGraph load_cluster_graph(const std::filesystem::path &path);
/// Canonical serialisation; parse_cluster_graph(to_json(g)) == g.
std::string to_json(const ClusterGraph &g);

struct SynthesisOptions
{
    std::uint32_t weight_min{1};
    std::uint32_t weight_max{16};
    /// Cap on every cluster's out-degree and in-degree. One hub cluster is
    /// given exactly this out-degree so the cap is also the realised maximum.
    std::optional<std::size_t> max_directed_degree;
    std::string name;
};

/// Uniform sample of `n_edges` distinct directed pairs (without replacement),
/// edges sorted by (src, dst). Pure in (n, E, seed, options).
ClusterGraph generate_synthetic(std::size_t n_clusters, std::size_t n_edges, std::uint64_t seed,
                                const SynthesisOptions &options = {});

} // namespace ladderbus

#endif // LADDERBUS_APPGRAPH_HPP
