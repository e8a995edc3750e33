#include <benchmark/benchmark.h>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/clique.hpp"
#include "ladderbus/conflict_graph.hpp"
#include "ladderbus/grouping.hpp"
#include "ladderbus/placement.hpp"
#include "ladderbus/routing.hpp"
#include "ladderbus/sweep.hpp"
#include "ladderbus/topology.hpp"

using namespace ladderbus;

namespace
{

struct Instance
{
    LadderTopology topo;
    std::vector<RoutedPath> paths;
};

// Placement without annealing keeps setup cheap; routing is what matters here.
Instance make(std::size_t n, std::size_t edges, std::uint64_t seed)
{
    const auto g = generate_synthetic(n, edges, seed);
    auto topo = build_topology(n);
    auto paths = extract_paths(g, topo, place_greedy(g, topo));
    return {std::move(topo), std::move(paths)};
}

void BM_MaxClique(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto in = make(n, edges_for_density(n, 0.15), 1);
    const auto g = build_conflict_graph(in.paths);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(max_clique(g));
    }
    state.counters["paths"] = static_cast<double>(in.paths.size());
}
BENCHMARK(BM_MaxClique)->Arg(24)->Arg(40)->Arg(60)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_ConflictGraph(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto in = make(n, edges_for_density(n, 0.15), 1);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(build_conflict_graph(in.paths));
    }
}
BENCHMARK(BM_ConflictGraph)->Arg(40)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_GroupGreedy(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto in = make(n, edges_for_density(n, 0.15), 1);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(group_greedy(in.topo, in.paths));
    }
}
BENCHMARK(BM_GroupGreedy)->Arg(24)->Arg(40)->Arg(60)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_GroupMaxClique(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto in = make(n, edges_for_density(n, 0.15), 1);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(group_max_clique(in.topo, in.paths));
    }
}
BENCHMARK(BM_GroupMaxClique)->Arg(24)->Arg(40)->Arg(60)->Arg(96)->Unit(benchmark::kMillisecond);

// The ResNet-sized instance: 96 clusters, 1068 connections.
void BM_GroupMaxCliqueResNet(benchmark::State &state)
{
    const auto in = make(96, 1068, 1);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(group_max_clique(in.topo, in.paths));
    }
}
BENCHMARK(BM_GroupMaxCliqueResNet)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
