#include <doctest.h>

#include <cmath>
#include <set>

#include "instances.hpp"
#include "ladderbus/appgraph.hpp"
#include "ladderbus/error.hpp"

using namespace ladderbus;
using testing_support::data_file;

namespace
{

double round2(double x)
{
    return std::round(x * 100.0) / 100.0;
}

} // namespace

TEST_CASE("parse minimal graph")
{
    const auto g = parse_cluster_graph(R"({"name":"tiny","n_clusters":2,"edges":[[0,1,5]]})");
    CHECK(g.cluster_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.edges()[0] == Connection{0, 1, 5});
}

TEST_CASE("parse rejects malformed graphs")
{
    CHECK_THROWS_AS(parse_cluster_graph(R"({"name":"x","n_clusters":4,"edges":[[3,3,1]]})"),
                    FormatError);
    CHECK_THROWS_AS(parse_cluster_graph(R"({"name":"x","n_clusters":2,"edges":[[0,2,1]]})"),
                    FormatError);
    CHECK_THROWS_AS(parse_cluster_graph(
                        R"({"name":"x","n_clusters":3,"edges":[[0,1,1],[0,1,2]]})"),
                    FormatError);
    CHECK_THROWS_AS(parse_cluster_graph(R"({"name":"x","n_clusters":2,"edges":[],"colour":1})"), FormatError);
    CHECK_THROWS_AS(parse_cluster_graph("{"), FormatError);
}

TEST_CASE("json round trip")
{
    const auto g = generate_synthetic(12, 30, 4);
    CHECK(parse_cluster_graph(to_json(g)) == g);
}

TEST_CASE("fixture synth_40 160")
{
    const auto g = load_cluster_graph(data_file("synth_40_160.json"));
    CHECK(g.cluster_count() == 40);
    CHECK(g.edge_count() == 160);
}

TEST_CASE("generate_synthetic shapes")
{
    const auto a = generate_synthetic(40, 160, 1);
    CHECK(a.edge_count() == 160);
    CHECK(graph_metrics(a).avg_degree == doctest::Approx(4.00));

    const auto b = generate_synthetic(60, 772, 1);
    CHECK(round2(graph_metrics(b).avg_degree) == doctest::Approx(12.87));

    const auto k5 = generate_synthetic(5, 20, 7);
    std::set<std::pair<ClusterId, ClusterId>> pairs;
    for (const auto &e : k5.edges())
    {
        pairs.insert({e.src, e.dst});
    }
    CHECK(pairs.size() == 20);

    CHECK_THROWS_AS(generate_synthetic(5, 21, 7), ConfigError);
}

TEST_CASE("generate_synthetic is pure and sorted")
{
    CHECK(generate_synthetic(30, 100, 9) == generate_synthetic(30, 100, 9));
    CHECK_FALSE(generate_synthetic(30, 100, 9) == generate_synthetic(30, 100, 10));
    const auto g = generate_synthetic(30, 100, 9);
    for (std::size_t i = 1; i < g.edge_count(); ++i)
    {
        const auto &p = g.edges()[i - 1];
        const auto &q = g.edges()[i];
        CHECK(std::pair(p.src, p.dst) < std::pair(q.src, q.dst));
    }
}

TEST_CASE("degree cap is respected and reached")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        SynthesisOptions opts;
        opts.max_directed_degree = 8;
        const auto g = generate_synthetic(26, 141, seed, opts);
        const auto m = graph_metrics(g);
        CHECK(m.edges == 141);
        CHECK(m.largest_directed_degree() == 8);
    }
}

TEST_CASE("metrics")
{
    const ClusterGraph two("two", 2, {{0, 1, 1}});
    const auto m = graph_metrics(two);
    CHECK(m.avg_degree == doctest::Approx(0.5));
    CHECK(m.density == doctest::Approx(0.5));
    CHECK(m.max_total_degree == 1);

    const auto s60 = graph_metrics(load_cluster_graph(data_file("synth_60_348.json")));
    CHECK(s60.avg_degree == doctest::Approx(5.80));
    CHECK(s60.density == doctest::Approx(0.0983).epsilon(0.001));

    const auto resnet = graph_metrics(load_cluster_graph(data_file("resnet.json")));
    CHECK(resnet.density == doctest::Approx(1068.0 / (96.0 * 95.0)));
    CHECK(resnet.density == doctest::Approx(0.1171).epsilon(0.001));

    CHECK_THROWS_AS(graph_metrics(ClusterGraph("one", 1, {})), ConfigError);
}

TEST_CASE("metric invariants on random graphs")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed)
    {
        const std::size_t n = 5 + seed % 20;
        const std::size_t e = (seed * 7) % (n * (n - 1) + 1);
        const auto m = graph_metrics(generate_synthetic(n, e, seed));
        CHECK(m.density >= 0.0);
        CHECK(m.density <= 1.0);
        CHECK(m.avg_degree == doctest::Approx(m.density * static_cast<double>(n - 1)));
        if (e > 0)
        {
            CHECK(m.max_total_degree >= (2 * e + n - 1) / n);
        }
    }
}

// Published application shapes: n, avg degree, largest degree.
TEST_CASE("application-shaped fixtures")
{
    struct Row
    {
        const char *file;
        std::size_t n;
        double avg;
        std::size_t largest;
    };
    const Row rows[] = {
        {"mnist.json", 11, 1.64, 6},          {"lenet.json", 14, 2.93, 11},
        {"fashion_mnist.json", 24, 5.33, 8},  {"cifar10.json", 26, 5.44, 8},
        {"emnist.json", 30, 5.37, 8},         {"synth_40_160.json", 40, 4.00, 7},
        {"synth_40_292.json", 40, 7.30, 14},  {"synth_60_348.json", 60, 5.80, 12},
        {"synth_60_772.json", 60, 12.87, 21}, {"resnet.json", 96, 11.13, 78},
    };
    for (const auto &r : rows)
    {
        CAPTURE(r.file);
        const auto m = graph_metrics(load_cluster_graph(data_file(r.file)));
        CHECK(m.clusters == r.n);
        // No integer edge count gives cifar10's 5.44 exactly; 141 edges is nearest.
        CHECK(std::abs(m.avg_degree - r.avg) <= 0.025);
        CHECK(m.largest_directed_degree() == r.largest);
    }
}
