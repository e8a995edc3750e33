#include "ladderbus/grouping.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <json.hpp>

#include "ladderbus/error.hpp"

namespace ladderbus
{

ScenarioSet ScenarioSet::assemble(const LadderTopology &topo, std::span<const RoutedPath> paths,
                                  std::vector<std::vector<std::size_t>> groups)
{
    ScenarioSet s;
    s.switch_count_ = topo.switch_count();
    std::vector<bool> seen(paths.size(), false);
    std::size_t covered = 0;
    for (std::size_t k = 0; k < groups.size(); ++k)
    {
        auto &group = groups[k];
        std::sort(group.begin(), group.end());
        std::vector<SwitchState> vec(topo.switch_count(), SwitchState::idle);
        for (std::size_t id : group)
        {
            if (id >= paths.size())
            {
                throw InvariantViolation("scenario " + std::to_string(k) + " references unknown path " +
                                         std::to_string(id));
            }
            if (seen[id])
            {
                throw InvariantViolation("path " + std::to_string(id) + " appears in more than one scenario");
            }
            seen[id] = true;
            ++covered;
            for (const auto &[sw, state] : path_switch_settings(topo, paths[id]))
            {
                if (vec[sw] != SwitchState::idle && vec[sw] != state)
                {
                    throw InvariantViolation("scenario " + std::to_string(k) + " demands switch " +
                                             std::to_string(sw) + " in two states");
                }
                vec[sw] = state;
            }
        }
        s.switches_.push_back(std::move(vec));
    }
    if (covered != paths.size())
    {
        throw InvariantViolation("scenarios cover " + std::to_string(covered) + " of " +
                                 std::to_string(paths.size()) + " paths");
    }
    s.groups_ = std::move(groups);
    return s;
}

void ScenarioSet::validate(std::span<const RoutedPath> paths) const
{
    for (std::size_t k = 0; k < groups_.size(); ++k)
    {
        const auto &group = groups_[k];
        for (std::size_t i = 0; i < group.size(); ++i)
        {
            for (std::size_t j = i + 1; j < group.size(); ++j)
            {
                if (paths_intersect(paths[group[i]], paths[group[j]]))
                {
                    throw InvariantViolation("scenario " + std::to_string(k) + ": paths " +
                                             std::to_string(group[i]) + " and " + std::to_string(group[j]) +
                                             " intersect");
                }
            }
        }
    }
}

std::string_view to_string(GroupingAlgorithm a)
{
    switch (a)
    {
    case GroupingAlgorithm::greedy:
        return "greedy";
    case GroupingAlgorithm::max_clique:
        return "maxclique";
    case GroupingAlgorithm::exact:
        return "exact";
    }
    return "?";
}

GroupingAlgorithm parse_grouping_algorithm(std::string_view s)
{
    if (s == "greedy")
    {
        return GroupingAlgorithm::greedy;
    }
    if (s == "maxclique" || s == "max_clique" || s == "max-clique")
    {
        return GroupingAlgorithm::max_clique;
    }
    if (s == "exact")
    {
        return GroupingAlgorithm::exact;
    }
    throw ConfigError("unknown grouping algorithm '" + std::string(s) + "'");
}

namespace
{

/// Places v into the first scenario holding none of its neighbours.
void first_fit(const ConflictGraph &g, std::size_t v, std::vector<VertexSet> &members,
               std::vector<std::vector<std::size_t>> &groups)
{
    for (std::size_t k = 0; k < members.size(); ++k)
    {
        if (!members[k].intersects(g.neighbors(v)))
        {
            members[k].insert(v);
            groups[k].push_back(v);
            return;
        }
    }
    members.emplace_back(g.vertex_count());
    members.back().insert(v);
    groups.push_back({v});
}

/// Clique members must land in distinct scenarios. The member with the
/// fewest compatible scenarios left goes first (ties: higher conflict
/// degree, then lower id), each into its first compatible scenario.
void assign_clique(const ConflictGraph &g, std::vector<std::size_t> clique, std::vector<VertexSet> &members,
                   std::vector<std::vector<std::size_t>> &groups)
{
    auto options = [&](std::size_t v) {
        std::size_t n = 0;
        for (const auto &m : members)
        {
            n += m.intersects(g.neighbors(v)) ? 0 : 1;
        }
        return n;
    };
    while (!clique.empty())
    {
        std::size_t best = 0;
        std::size_t best_options = options(clique[0]);
        for (std::size_t i = 1; i < clique.size(); ++i)
        {
            const std::size_t o = options(clique[i]);
            if (o < best_options)
            {
                best = i;
                best_options = o;
            }
        }
        first_fit(g, clique[best], members, groups);
        clique.erase(clique.begin() + static_cast<std::ptrdiff_t>(best));
    }
}

} // namespace

std::vector<std::vector<std::size_t>> first_fit_groups(const ConflictGraph &g)
{
    std::vector<VertexSet> members;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        first_fit(g, v, members, groups);
    }
    return groups;
}

std::vector<std::vector<std::size_t>> clique_groups(const ConflictGraph &g, const CliqueOptions &options,
                                                    GroupingStats *stats, const GroupingLog &log)
{
    GroupingStats local;
    GroupingStats &st = stats != nullptr ? *stats : local;
    std::vector<VertexSet> members;
    std::vector<std::vector<std::size_t>> groups;
    VertexSet remaining = VertexSet::full(g.vertex_count());

    while (!remaining.empty())
    {
        auto clique = max_clique(g, remaining, options);
        ++st.clique_calls;
        st.clique_nodes += clique.nodes;
        if (!clique.exact)
        {
            ++st.budget_fallbacks;
            st.exact_cliques = false;
            if (log)
            {
                log("clique budget exhausted on " + std::to_string(remaining.count()) +
                    " remaining paths; using clique of size " + std::to_string(clique.vertices.size()));
            }
        }
        auto order = clique.vertices;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
        assign_clique(g, order, members, groups);
        for (std::size_t v : order)
        {
            remaining.erase(v);
        }
    }
    return groups;
}

namespace
{

class ExactColouring
{
public:
    explicit ExactColouring(const ConflictGraph &g) : g_(g), colour_(g.vertex_count(), kNone)
    {
        order_.resize(g.vertex_count());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
    }

    bool colourable(std::size_t k)
    {
        std::fill(colour_.begin(), colour_.end(), kNone);
        return assign(0, 0, k);
    }

    [[nodiscard]] std::vector<std::vector<std::size_t>> groups(std::size_t k) const
    {
        std::vector<std::vector<std::size_t>> out(k);
        for (std::size_t v = 0; v < colour_.size(); ++v)
        {
            out[colour_[v]].push_back(v);
        }
        std::erase_if(out, [](const auto &grp) { return grp.empty(); });
        return out;
    }

private:
    static constexpr std::size_t kNone = SIZE_MAX;

    bool assign(std::size_t idx, std::size_t used, std::size_t k)
    {
        if (idx == order_.size())
        {
            return true;
        }
        const std::size_t v = order_[idx];
        // Colours beyond `used` are interchangeable, so only one fresh colour is tried.
        for (std::size_t c = 0; c < std::min(used + 1, k); ++c)
        {
            bool ok = true;
            g_.neighbors(v).for_each([&](std::size_t u) { ok = ok && colour_[u] != c; });
            if (!ok)
            {
                continue;
            }
            colour_[v] = c;
            if (assign(idx + 1, std::max(used, c + 1), k))
            {
                return true;
            }
            colour_[v] = kNone;
        }
        return false;
    }

    const ConflictGraph &g_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> colour_;
};

} // namespace

std::vector<std::vector<std::size_t>> exact_groups(const ConflictGraph &g)
{
    if (g.vertex_count() > kExactGroupingLimit)
    {
        throw ConfigError("exact grouping is limited to " + std::to_string(kExactGroupingLimit) + " paths, got " +
                          std::to_string(g.vertex_count()));
    }
    if (g.vertex_count() == 0)
    {
        return {};
    }
    ExactColouring solver(g);
    const std::size_t lower = max_clique(g).vertices.size();
    for (std::size_t k = lower;; ++k)
    {
        if (solver.colourable(k))
        {
            return solver.groups(k);
        }
    }
}

Grouping group_greedy(const LadderTopology &topo, std::span<const RoutedPath> paths)
{
    const auto g = build_conflict_graph(paths);
    return {ScenarioSet::assemble(topo, paths, first_fit_groups(g)), GroupingAlgorithm::greedy, {}};
}

Grouping group_max_clique(const LadderTopology &topo, std::span<const RoutedPath> paths,
                          const CliqueOptions &options, const GroupingLog &log)
{
    const auto g = build_conflict_graph(paths);
    GroupingStats stats;
    auto groups = clique_groups(g, options, &stats, log);
    return {ScenarioSet::assemble(topo, paths, std::move(groups)), GroupingAlgorithm::max_clique, stats};
}

Grouping optimal_grouping_exact(const LadderTopology &topo, std::span<const RoutedPath> paths)
{
    const auto g = build_conflict_graph(paths);
    return {ScenarioSet::assemble(topo, paths, exact_groups(g)), GroupingAlgorithm::exact, {}};
}

Grouping group_paths(GroupingAlgorithm algorithm, const LadderTopology &topo, std::span<const RoutedPath> paths,
                     const CliqueOptions &options, const GroupingLog &log)
{
    switch (algorithm)
    {
    case GroupingAlgorithm::greedy:
        return group_greedy(topo, paths);
    case GroupingAlgorithm::max_clique:
        return group_max_clique(topo, paths, options, log);
    case GroupingAlgorithm::exact:
        return optimal_grouping_exact(topo, paths);
    }
    throw ConfigError("unknown grouping algorithm");
}

std::size_t scenario_lower_bound(const ClusterGraph &g)
{
    const auto d = g.total_degrees();
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::vector<std::pair<SwitchState, std::size_t>> run_length_encode(std::span<const SwitchState> v)
{
    std::vector<std::pair<SwitchState, std::size_t>> runs;
    for (auto s : v)
    {
        if (!runs.empty() && runs.back().first == s)
        {
            ++runs.back().second;
        }
        else
        {
            runs.emplace_back(s, 1);
        }
    }
    return runs;
}

std::vector<SwitchState> run_length_decode(std::span<const std::pair<SwitchState, std::size_t>> runs)
{
    std::vector<SwitchState> out;
    for (const auto &[s, n] : runs)
    {
        out.insert(out.end(), n, s);
    }
    return out;
}

std::size_t compressed_scenario_bits(const ScenarioSet &s)
{
    const std::size_t length_bits = static_cast<std::size_t>(std::bit_width(s.switch_count()));
    std::size_t bits = 0;
    for (const auto &vec : s.switch_vectors())
    {
        bits += run_length_encode(vec).size() * (2 + length_bits);
    }
    return bits;
}

std::string to_json(const ScenarioSet &s)
{
    std::string out = "{\n  \"switch_count\": " + std::to_string(s.switch_count()) + ",\n  \"scenarios\": [";
    for (std::size_t k = 0; k < s.size(); ++k)
    {
        out += k == 0 ? "\n    " : ",\n    ";
        nlohmann::json edges = s.groups()[k];
        nlohmann::json runs = nlohmann::json::array();
        for (const auto &[state, n] : run_length_encode(s.switches(k)))
        {
            runs.push_back({static_cast<int>(state), n});
        }
        out += "{\"index\": " + std::to_string(k) + ", \"edges\": " + edges.dump() + ", \"switches\": " +
               runs.dump() + "}";
    }
    out += s.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

ScenarioSet parse_scenarios(const std::string &text, const LadderTopology &topo, std::span<const RoutedPath> paths)
{
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<SwitchState>> stored;
    try
    {
        const auto j = nlohmann::json::parse(text);
        if (j.at("switch_count").get<std::size_t>() != topo.switch_count())
        {
            throw FormatError("scenarios.switch_count", "does not match topology");
        }
        for (const auto &item : j.at("scenarios"))
        {
            groups.push_back(item.at("edges").get<std::vector<std::size_t>>());
            std::vector<std::pair<SwitchState, std::size_t>> runs;
            for (const auto &r : item.at("switches"))
            {
                const int state = r.at(0).get<int>();
                if (state < 0 || state > 3)
                {
                    throw FormatError("scenarios.switches", "bad switch state " + std::to_string(state));
                }
                runs.emplace_back(static_cast<SwitchState>(state), r.at(1).get<std::size_t>());
            }
            stored.push_back(run_length_decode(runs));
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError("scenarios", e.what());
    }
    auto s = ScenarioSet::assemble(topo, paths, std::move(groups));
    if (s.switch_vectors() != stored)
    {
        throw FormatError("scenarios", "stored switch vectors disagree with the routed paths");
    }
    return s;
}

} // namespace ladderbus
