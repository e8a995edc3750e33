#include "ladderbus/appgraph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "ladderbus/error.hpp"
#include "ladderbus/rng.hpp"

namespace ladderbus
{

ClusterGraph::ClusterGraph(std::string name, std::size_t n_clusters, std::vector<Connection> edges)
    : name_(std::move(name)), n_clusters_(n_clusters), edges_(std::move(edges))
{
    if (n_clusters_ == 0)
    {
        throw FormatError("n_clusters", "must be positive");
    }
    std::set<std::pair<ClusterId, ClusterId>> seen;
    for (std::size_t i = 0; i < edges_.size(); ++i)
    {
        const auto &e = edges_[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (e.src >= n_clusters_ || e.dst >= n_clusters_)
        {
            throw FormatError(where, "cluster id out of range (n_clusters = " +
                                         std::to_string(n_clusters_) + ")");
        }
        if (e.src == e.dst)
        {
            throw FormatError(where, "self-loop on cluster " + std::to_string(e.src));
        }
        if (!seen.emplace(e.src, e.dst).second)
        {
            throw FormatError(where, "duplicate edge (" + std::to_string(e.src) + ", " +
                                         std::to_string(e.dst) + ")");
        }
    }
}

std::vector<std::size_t> ClusterGraph::out_degrees() const
{
    std::vector<std::size_t> d(n_clusters_, 0);
    for (const auto &e : edges_)
    {
        ++d[e.src];
    }
    return d;
}

std::vector<std::size_t> ClusterGraph::in_degrees() const
{
    std::vector<std::size_t> d(n_clusters_, 0);
    for (const auto &e : edges_)
    {
        ++d[e.dst];
    }
    return d;
}

std::vector<std::size_t> ClusterGraph::total_degrees() const
{
    std::vector<std::size_t> d(n_clusters_, 0);
    for (const auto &e : edges_)
    {
        ++d[e.src];
        ++d[e.dst];
    }
    return d;
}

GraphMetrics graph_metrics(const ClusterGraph &g)
{
    const std::size_t n = g.cluster_count();
    if (n < 2)
    {
        throw ConfigError("graph_metrics: density is undefined for fewer than 2 clusters");
    }
    GraphMetrics m;
    m.clusters = n;
    m.edges = g.edge_count();
    m.avg_degree = static_cast<double>(m.edges) / static_cast<double>(n);
    m.density = static_cast<double>(m.edges) / static_cast<double>(n * (n - 1));
    auto max_of = [](const std::vector<std::size_t> &v) {
        return v.empty() ? std::size_t{0} : *std::max_element(v.begin(), v.end());
    };
    m.max_total_degree = max_of(g.total_degrees());
    m.max_out_degree = max_of(g.out_degrees());
    m.max_in_degree = max_of(g.in_degrees());
    return m;
}

namespace
{

std::uint64_t require_uint(const nlohmann::json &v, const std::string &where)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    {
        throw FormatError(where, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

} // namespace

ClusterGraph parse_cluster_graph(std::string_view text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw FormatError("byte " + std::to_string(e.byte), "invalid JSON");
    }
    if (!doc.is_object())
    {
        throw FormatError("$", "expected an object");
    }
    for (const auto &[key, value] : doc.items())
    {
        if (key != "name" && key != "n_clusters" && key != "edges")
        {
            throw FormatError("$." + key, "unknown field");
        }
    }
    for (const char *key : {"name", "n_clusters", "edges"})
    {
        if (!doc.contains(key))
        {
            throw FormatError(std::string("$.") + key, "missing field");
        }
    }
    if (!doc["name"].is_string())
    {
        throw FormatError("$.name", "expected a string");
    }
    const auto n = require_uint(doc["n_clusters"], "$.n_clusters");
    if (!doc["edges"].is_array())
    {
        throw FormatError("$.edges", "expected an array");
    }
    std::vector<Connection> edges;
    edges.reserve(doc["edges"].size());
    for (std::size_t i = 0; i < doc["edges"].size(); ++i)
    {
        const auto &item = doc["edges"][i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (!item.is_array() || item.size() != 3)
        {
            throw FormatError(where, "expected [src, dst, weight]");
        }
        const auto src = require_uint(item[0], where + "[0]");
        const auto dst = require_uint(item[1], where + "[1]");
        const auto w = require_uint(item[2], where + "[2]");
        if (src >= n || dst >= n)
        {
            throw FormatError(where, "cluster id out of range (n_clusters = " + std::to_string(n) + ")");
        }
        if (w > UINT32_MAX)
        {
            throw FormatError(where + "[2]", "weight too large");
        }
        edges.push_back({static_cast<ClusterId>(src), static_cast<ClusterId>(dst),
                         static_cast<std::uint32_t>(w)});
    }
    return ClusterGraph(doc["name"].get<std::string>(), n, std::move(edges));
}

ClusterGraph load_cluster_graph(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open cluster graph " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cluster_graph(ss.str());
}

std::string to_json(const ClusterGraph &g)
{
    // Hand-formatted so each edge sits on its own line.
    std::ostringstream out;
    out << "{\n  \"name\": " << nlohmann::json(g.name()).dump() << ",\n";
    out << "  \"n_clusters\": " << g.cluster_count() << ",\n";
    out << "  \"edges\": [";
    for (std::size_t i = 0; i < g.edges().size(); ++i)
    {
        const auto &e = g.edges()[i];
        out << (i == 0 ? "\n    " : ",\n    ") << '[' << e.src << ", " << e.dst << ", " << e.weight
            << ']';
    }
    out << (g.edges().empty() ? "]\n}\n" : "\n  ]\n}\n");
    return out.str();
}

ClusterGraph generate_synthetic(std::size_t n_clusters, std::size_t n_edges, std::uint64_t seed,
                                const SynthesisOptions &options)
{
    if (n_clusters == 0)
    {
        throw ConfigError("generate_synthetic: need at least one cluster");
    }
    const std::size_t max_edges = n_clusters * (n_clusters - 1);
    if (n_edges > max_edges)
    {
        throw ConfigError("generate_synthetic: " + std::to_string(n_edges) +
                          " edges exceed n(n-1) = " + std::to_string(max_edges));
    }
    if (options.weight_min > options.weight_max)
    {
        throw ConfigError("generate_synthetic: weight_min > weight_max");
    }

    Rng rng(seed);
    // Pair index k encodes src = k / (n-1), dst = the (k mod (n-1))-th other cluster.
    auto decode = [n_clusters](std::size_t k) {
        const auto src = static_cast<ClusterId>(k / (n_clusters - 1));
        auto dst = static_cast<ClusterId>(k % (n_clusters - 1));
        if (dst >= src)
        {
            ++dst;
        }
        return std::pair{src, dst};
    };
    std::vector<std::size_t> order(max_edges);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<std::pair<ClusterId, ClusterId>> chosen;
    chosen.reserve(n_edges);

    if (!options.max_directed_degree)
    {
        // Partial Fisher-Yates: the first n_edges slots are a uniform sample.
        for (std::size_t i = 0; i < n_edges; ++i)
        {
            const std::size_t j = i + rng.below(max_edges - i);
            std::swap(order[i], order[j]);
            chosen.push_back(decode(order[i]));
        }
    }
    else
    {
        const std::size_t cap = *options.max_directed_degree;
        if (cap == 0 && n_edges > 0)
        {
            throw ConfigError("generate_synthetic: degree cap 0 admits no edges");
        }
        if (cap > n_clusters - 1 || n_edges > cap * n_clusters)
        {
            throw ConfigError("generate_synthetic: degree cap " + std::to_string(cap) +
                              " is infeasible for " + std::to_string(n_edges) + " edges");
        }
        for (std::size_t i = 0; i + 1 < max_edges; ++i)
        {
            std::swap(order[i], order[i + rng.below(max_edges - i)]);
        }
        std::vector<std::size_t> out_deg(n_clusters, 0);
        std::vector<std::size_t> in_deg(n_clusters, 0);
        std::vector<bool> taken(max_edges, false);
        auto take = [&](std::size_t k) {
            const auto [s, d] = decode(k);
            if (taken[k] || out_deg[s] >= cap || in_deg[d] >= cap)
            {
                return false;
            }
            taken[k] = true;
            ++out_deg[s];
            ++in_deg[d];
            chosen.emplace_back(s, d);
            return true;
        };
        if (n_edges > 0)
        {
            const auto hub = static_cast<ClusterId>(rng.below(n_clusters));
            for (std::size_t k : order)
            {
                if (chosen.size() == cap)
                {
                    break;
                }
                if (decode(k).first == hub)
                {
                    take(k);
                }
            }
        }
        for (std::size_t k : order)
        {
            if (chosen.size() >= n_edges)
            {
                break;
            }
            take(k);
        }
        if (chosen.size() < n_edges)
        {
            throw ConfigError("generate_synthetic: degree cap left only " +
                              std::to_string(chosen.size()) + " admissible edges");
        }
    }

    std::sort(chosen.begin(), chosen.end());
    std::vector<Connection> edges;
    edges.reserve(chosen.size());
    for (const auto &[s, d] : chosen)
    {
        const auto w = static_cast<std::uint32_t>(rng.between(options.weight_min, options.weight_max));
        edges.push_back({s, d, w});
    }
    std::string name = options.name.empty()
                           ? "synth_" + std::to_string(n_clusters) + "_" + std::to_string(n_edges)
                           : options.name;
    return ClusterGraph(std::move(name), n_clusters, std::move(edges));
}

} // namespace ladderbus
