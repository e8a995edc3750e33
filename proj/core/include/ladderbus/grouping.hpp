// grouping.hpp
//
//  Partition routed paths into switching scenarios: sets of paths that can
//  be driven at the same time because no two of them share a bus resource.
//  Scenario grouping is a colouring of the conflict graph.
//
//    group_greedy             first-fit in edge-id order
//    group_max_clique         repeatedly peel the maximum clique of the
//                             remaining conflict graph and first-fit its
//                             members into distinct scenarios
//    optimal_grouping_exact   minimum colouring, small instances only

#ifndef LADDERBUS_GROUPING_HPP
#define LADDERBUS_GROUPING_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/clique.hpp"
#include "ladderbus/conflict_graph.hpp"
#include "ladderbus/routing.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

/// Ordered scenarios, each a sorted list of edge ids plus the switch vector
/// (one state per switch, indexed by LadderTopology::switch_index) that
/// realises all of its paths at once.
class ScenarioSet
{
public:
    ScenarioSet() = default;

    /// Checks that `groups` partitions 0..paths.size()-1 and that no switch
    /// is demanded in two different states; throws InvariantViolation.
    static ScenarioSet assemble(const LadderTopology &topo, std::span<const RoutedPath> paths,
                                std::vector<std::vector<std::size_t>> groups);

    [[nodiscard]] std::size_t size() const noexcept { return groups_.size(); }
    [[nodiscard]] bool empty() const noexcept { return groups_.empty(); }
    [[nodiscard]] const std::vector<std::vector<std::size_t>> &groups() const noexcept { return groups_; }
    [[nodiscard]] const std::vector<SwitchState> &switches(std::size_t scenario) const
    {
        return switches_.at(scenario);
    }
    [[nodiscard]] const std::vector<std::vector<SwitchState>> &switch_vectors() const noexcept
    {
        return switches_;
    }
    [[nodiscard]] std::size_t switch_count() const noexcept { return switch_count_; }

    /// Throws InvariantViolation naming the first intersecting pair.
    void validate(std::span<const RoutedPath> paths) const;

    friend bool operator==(const ScenarioSet &, const ScenarioSet &) = default;

private:
    std::size_t switch_count_{0};
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<std::vector<SwitchState>> switches_;
};

enum class GroupingAlgorithm
{
    greedy,
    max_clique,
    exact,
};

std::string_view to_string(GroupingAlgorithm a);
GroupingAlgorithm parse_grouping_algorithm(std::string_view s);

struct GroupingStats
{
    std::size_t clique_calls{0};
    std::size_t budget_fallbacks{0};
    std::uint64_t clique_nodes{0};
    /// False when any clique search hit its budget.
    bool exact_cliques{true};
};

struct Grouping
{
    ScenarioSet scenarios;
    GroupingAlgorithm algorithm{GroupingAlgorithm::greedy};
    GroupingStats stats;
};

using GroupingLog = std::function<void(const std::string &)>;

// Graph-level algorithms: return groups of vertex ids.
std::vector<std::vector<std::size_t>> first_fit_groups(const ConflictGraph &g);
std::vector<std::vector<std::size_t>> clique_groups(const ConflictGraph &g, const CliqueOptions &options,
                                                    GroupingStats *stats = nullptr,
                                                    const GroupingLog &log = {});
/// Minimum colouring. Throws ConfigError beyond kExactGroupingLimit vertices.
std::vector<std::vector<std::size_t>> exact_groups(const ConflictGraph &g);
inline constexpr std::size_t kExactGroupingLimit = 15;

Grouping group_greedy(const LadderTopology &topo, std::span<const RoutedPath> paths);
Grouping group_max_clique(const LadderTopology &topo, std::span<const RoutedPath> paths,
                          const CliqueOptions &options = {}, const GroupingLog &log = {});
Grouping optimal_grouping_exact(const LadderTopology &topo, std::span<const RoutedPath> paths);
Grouping group_paths(GroupingAlgorithm algorithm, const LadderTopology &topo, std::span<const RoutedPath> paths,
                     const CliqueOptions &options = {}, const GroupingLog &log = {});

/// Largest in+out degree of any cluster: all connections touching one
/// cluster share its rung, so every grouping needs at least this many
/// scenarios.
std::size_t scenario_lower_bound(const ClusterGraph &g);

/// Run-length code of a switch vector: (state, run length) pairs.
std::vector<std::pair<SwitchState, std::size_t>> run_length_encode(std::span<const SwitchState> v);
std::vector<SwitchState> run_length_decode(std::span<const std::pair<SwitchState, std::size_t>> runs);

/// Bits to store every scenario run-length coded: each run costs 2 state
/// bits plus ceil(log2(switches + 1)) length bits.
std::size_t compressed_scenario_bits(const ScenarioSet &s);

std::string to_json(const ScenarioSet &s);
ScenarioSet parse_scenarios(const std::string &text, const LadderTopology &topo,
                            std::span<const RoutedPath> paths);

} // namespace ladderbus

#endif // LADDERBUS_GROUPING_HPP
