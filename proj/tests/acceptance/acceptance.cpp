// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "instances.hpp"
#include "ladderbus/clique.hpp"
#include "ladderbus/conflict_graph.hpp"
#include "ladderbus/costmodel.hpp"
#include "ladderbus/grouping.hpp"
#include "ladderbus/pipeline.hpp"
#include "ladderbus/sweep.hpp"
#include "oracles.hpp"

using namespace ladderbus;
using Clock = std::chrono::steady_clock;

namespace
{

// Corpus: application-like sizes x densities x seeds = 200 instances.
const std::vector<std::size_t> kSizes{11, 14, 24, 26, 30, 40, 60, 96};
const std::vector<double> kDensities{0.10, 0.13, 0.16, 0.20, 0.23};
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};

constexpr double kGroupingBudgetSeconds = 120.0;
constexpr double kBracketBudgetSeconds = 300.0;
constexpr double kScalingTolerance = 0.05;
constexpr double kMaxControlFraction = 0.10;
constexpr double kMeanControlFraction = 0.065;
constexpr double kMeanControlTolerance = 0.02;
constexpr double kDataResidual = 0.15;
constexpr double kResNetBudgetSeconds = 120.0;

int g_failures = 0;

void verdict(const char *id, bool ok, const std::string &detail)
{
    std::printf("%s %-20s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    g_failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

struct Outcome
{
    std::size_t n;
    double density;
    std::uint64_t seed;
    std::size_t lower_bound;
    std::size_t greedy;
    std::size_t maxclique;
};

PipelineConfig corpus_config(std::size_t n, double density, std::uint64_t seed)
{
    PipelineConfig c;
    c.clusters = n;
    c.edges = edges_for_density(n, density);
    c.seed = seed;
    c.frames = 2;
    return c;
}

// Counts pairs inside one scenario that share a resource, and paths not
// covered exactly once.
std::size_t violations(const ScenarioSet &s, const std::vector<RoutedPath> &paths)
{
    std::size_t bad = 0;
    std::vector<int> seen(paths.size(), 0);
    for (const auto &grp : s.groups())
    {
        for (std::size_t i = 0; i < grp.size(); ++i)
        {
            ++seen.at(grp[i]);
            for (std::size_t j = i + 1; j < grp.size(); ++j)
            {
                bad += oracle::intersect(paths[grp[i]], paths[grp[j]]) ? 1 : 0;
            }
        }
    }
    for (int c : seen)
    {
        bad += c == 1 ? 0 : 1;
    }
    return bad;
}

// Criteria 1, 2 and 4 share one pass over the corpus.
std::vector<Outcome> grouping_criteria()
{
    std::vector<Outcome> out;
    std::size_t bad = 0, below_bound = 0, fallbacks = 0;
    const auto t0 = Clock::now();
    for (auto n : kSizes)
    {
        for (auto d : kDensities)
        {
            for (auto seed : kSeeds)
            {
                PipelineState s;
                run_pipeline(corpus_config(n, d, seed), s, Stage::graph, Stage::paths);
                const auto greedy = group_greedy(*s.topology, *s.paths);
                const auto mc = group_max_clique(*s.topology, *s.paths);
                bad += violations(greedy.scenarios, *s.paths) + violations(mc.scenarios, *s.paths);
                const auto bound = scenario_lower_bound(*s.graph);
                below_bound += greedy.scenarios.size() < bound ? 1 : 0;
                below_bound += mc.scenarios.size() < bound ? 1 : 0;
                fallbacks += mc.stats.budget_fallbacks;
                out.push_back({n, d, seed, bound, greedy.scenarios.size(), mc.scenarios.size()});
            }
        }
    }
    const double secs = seconds_since(t0);
    verdict("grouping-validity", bad == 0 && secs < kGroupingBudgetSeconds,
            std::to_string(out.size()) + " instances x 2 algorithms, " + std::to_string(bad) +
                " violations, " + fmt("%.1f", secs) + " s (limit " + fmt("%.0f", kGroupingBudgetSeconds) +
                " s), clique budget fallbacks " + std::to_string(fallbacks));
    verdict("lower-bound", below_bound == 0,
            std::to_string(below_bound) + " groupings below max total degree over " +
                std::to_string(2 * out.size()));
    return out;
}

void bracketing_criterion()
{
    const auto t0 = Clock::now();
    std::size_t bad_order = 0, bad_clique = 0, bad_exact = 0, count = 0;
    for (std::uint64_t seed = 1; count < 100; ++seed)
    {
        const std::size_t n = 5 + seed % 6;
        const std::size_t edges = std::min<std::size_t>(6 + seed % 7, n * (n - 1));
        const auto in = testing_support::random_instance(n, edges, seed);
        if (in.paths.size() > 12)
        {
            continue;
        }
        ++count;
        const auto g = build_conflict_graph(in.paths);
        const auto adj = oracle::adjacency(g);
        const auto chi = oracle::chromatic_number(adj);
        const auto mc = group_max_clique(in.topo, in.paths).scenarios.size();
        bad_order += (chi <= mc && mc <= g.max_degree() + 1) ? 0 : 1;
        bad_exact += optimal_grouping_exact(in.topo, in.paths).scenarios.size() == chi ? 0 : 1;

        std::size_t bk = 0;
        for_each_maximal_clique(g, [&](const std::vector<std::size_t> &c) { bk = std::max(bk, c.size()); });
        const auto brute = oracle::max_clique(adj).size();
        bad_clique += (bk == brute && max_clique(g).vertices.size() == brute) ? 0 : 1;
    }
    const double secs = seconds_since(t0);
    verdict("oracle-bracketing", bad_order == 0 && bad_clique == 0 && bad_exact == 0 && secs < kBracketBudgetSeconds,
            std::to_string(count) + " instances <= 12 paths, " + std::to_string(bad_order) +
                " chi<=maxclique<=Delta+1 failures, " + std::to_string(bad_clique) + " clique-size mismatches, " +
                std::to_string(bad_exact) + " exact-colouring mismatches, " + fmt("%.1f", secs) + " s");
}

void comparison_criterion(const std::vector<Outcome> &outcomes)
{
    struct Cell
    {
        double greedy = 0, maxclique = 0, bound = 0;
        int k = 0;
    };
    std::map<std::pair<std::size_t, double>, Cell> cells;
    for (const auto &o : outcomes)
    {
        auto &c = cells[{o.n, o.density}];
        c.greedy += static_cast<double>(o.greedy);
        c.maxclique += static_cast<double>(o.maxclique);
        c.bound += static_cast<double>(o.lower_bound);
        ++c.k;
    }
    int bad = 0;
    for (auto &[key, c] : cells)
    {
        c.greedy /= c.k;
        c.maxclique /= c.k;
        c.bound /= c.k;
        const bool ok = c.maxclique <= c.greedy;
        bad += ok ? 0 : 1;
        std::printf("  n=%-3zu density=%.2f greedy=%6.1f maxclique=%6.1f bound=%5.1f gap=%5.1f ratio=%.2f%s\n",
                    key.first, key.second, c.greedy, c.maxclique, c.bound, c.maxclique - c.bound,
                    c.maxclique / c.bound, ok ? "" : "  <-- maxclique above greedy");
    }
    verdict("algorithm-comparison", bad == 0,
            "maxclique mean <= greedy mean in " + std::to_string(cells.size() - bad) + "/" +
                std::to_string(cells.size()) + " (n, density) cells");
}

void scaling_criterion()
{
    SweepConfig c;
    c.cluster_sizes = {20, 40, 60, 80, 96};
    c.densities = {0.15};
    for (std::uint64_t s = 1; s <= 10; ++s)
    {
        c.seeds.push_back(s);
    }
    c.algorithms = {GroupingAlgorithm::max_clique, GroupingAlgorithm::greedy};
    const auto rows = scaling_sweep(c);
    bool ok = true;
    std::string detail = "density 0.15:";
    for (auto algo : c.algorithms)
    {
        std::vector<double> ratio;
        for (auto n : c.cluster_sizes)
        {
            double sum = 0;
            int k = 0;
            for (const auto &r : rows)
            {
                if (r.n == n && r.algorithm == algo)
                {
                    sum += static_cast<double>(r.scenarios) / static_cast<double>(r.connections);
                    ++k;
                }
            }
            ratio.push_back(sum / k);
        }
        int increases = 0;
        bool small = true;
        for (std::size_t i = 1; i < ratio.size(); ++i)
        {
            if (ratio[i] > ratio[i - 1])
            {
                ++increases;
                small = small && ratio[i] <= ratio[i - 1] * (1 + kScalingTolerance);
            }
        }
        ok = ok && increases <= 1 && small;
        detail += std::string(" ") + std::string(to_string(algo)) + " |S|/E =";
        for (auto r : ratio)
        {
            detail += fmt(" %.4f", r);
        }
        detail += " (" + std::to_string(increases) + " increases);";
    }
    detail.pop_back();
    verdict("scaling", ok, detail);
}

void lane_criterion()
{
    const std::size_t tiles[] = {11, 14, 24, 26, 30};
    const std::size_t want[] = {3, 4, 5, 5, 5};
    bool ok = true;
    std::string got;
    for (int i = 0; i < 5; ++i)
    {
        const auto l = build_topology(tiles[i]).lanes();
        ok = ok && l == want[i];
        got += " " + std::to_string(tiles[i]) + "->" + std::to_string(l);
    }
    verdict("lane-rule", ok, got.substr(1));
}

void cost_criterion()
{
    const auto model = calibrate(reference_observations());
    bool ok = true;
    double sum = 0;
    std::string detail;
    for (const auto &obs : reference_observations())
    {
        const auto r = predict(model, obs);
        const double resid = (r.data_plane_units - obs.data_plane_units) / obs.data_plane_units;
        ok = ok && r.control_fraction < kMaxControlFraction && std::abs(resid) <= kDataResidual;
        sum += r.control_fraction;
        detail += " " + obs.app + fmt(" ctrl=%.2f%%", 100 * r.control_fraction) + fmt(" dres=%+.1f%%", 100 * resid);
    }
    const double mean = sum / static_cast<double>(reference_observations().size());
    ok = ok && std::abs(mean - kMeanControlFraction) <= kMeanControlTolerance;
    verdict("cost-calibration", ok, detail.substr(1) + fmt("; mean ctrl=%.2f%%", 100 * mean) + " (target 6.5 +/- 2, each < 10, |dres| <= 15)");
}

void simulation_criterion()
{
    std::size_t collisions = 0, misroutes = 0, bad_delivery = 0, bad_latency = 0, bad_roundtrip = 0, runs = 0;
    for (auto n : kSizes)
    {
        for (auto d : kDensities)
        {
            for (auto seed : kSeeds)
            {
                const auto config = corpus_config(n, d, seed);
                PipelineState s;
                try
                {
                    run_pipeline(config, s);
                }
                catch (const InvariantViolation &)
                {
                    // The report is kept; the counts below record what went wrong.
                }
                ++runs;
                if (!s.sim || !s.programs)
                {
                    ++bad_latency;
                    continue;
                }
                const auto &r = *s.sim;
                collisions += r.collisions;
                misroutes += r.misroutes;
                for (auto k : r.delivered)
                {
                    bad_delivery += k == config.frames ? 0 : 1;
                }
                const auto &set = s.grouping->selected.scenarios;
                bad_latency += (r.frame_length == set.size() && r.steps == config.frames * set.size()) ? 0 : 1;
                bool same = decode_programs(*s.topology, *s.programs) == set.switch_vectors();
                for (const auto &p : *s.programs)
                {
                    same = same && parse_program(write_program(p)) == p;
                }
                bad_roundtrip += same ? 0 : 1;
            }
        }
    }
    verdict("simulation", collisions + misroutes + bad_delivery + bad_latency + bad_roundtrip == 0,
            std::to_string(runs) + " pipelines x 2 frames, collisions " + std::to_string(collisions) +
                ", misroutes " + std::to_string(misroutes) + ", wrong delivery counts " +
                std::to_string(bad_delivery) + ", latency mismatches " + std::to_string(bad_latency) +
                ", encode/decode mismatches " + std::to_string(bad_roundtrip));
}

void performance_criterion()
{
    PipelineConfig c;
    c.graph_file = testing_support::data_file("resnet.json");
    PipelineState s;
    run_pipeline(c, s, Stage::graph, Stage::paths);
    std::size_t logged = 0;
    const auto t0 = Clock::now();
    const auto mc = group_max_clique(*s.topology, *s.paths, CliqueOptions{},
                                     [&](const std::string &m) {
                                         ++logged;
                                         std::printf("  fallback: %s\n", m.c_str());
                                     });
    const double secs = seconds_since(t0);
    const auto bad = violations(mc.scenarios, *s.paths);
    const auto bound = scenario_lower_bound(*s.graph);
    verdict("performance", secs < kResNetBudgetSeconds && bad == 0 && mc.scenarios.size() >= bound &&
                       logged == mc.stats.budget_fallbacks,
            "ResNet-shaped (n=96, E=" + std::to_string(s.paths->size()) + "): " +
                std::to_string(mc.scenarios.size()) + " scenarios (bound " + std::to_string(bound) + ") in " +
                fmt("%.2f", secs) + " s (limit " + fmt("%.0f", kResNetBudgetSeconds) + " s), " +
                std::to_string(mc.stats.clique_calls) + " clique calls, " +
                std::to_string(mc.stats.budget_fallbacks) + " budget fallbacks, " + std::to_string(bad) +
                " violations");
}

} // namespace

int main()
{
    const auto outcomes = grouping_criteria();
    bracketing_criterion();
    comparison_criterion(outcomes);
    scaling_criterion();
    lane_criterion();
    cost_criterion();
    simulation_criterion();
    performance_criterion();
    std::printf("%d criteria failed\n", g_failures);
    return g_failures;
}
