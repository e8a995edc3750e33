#include "ladderbus/sim.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "ladderbus/error.hpp"

namespace ladderbus
{

namespace
{

class DisjointSets
{
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { reset(); }

    void reset() { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x)
        {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
        {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

// Node numbering: rungs 0..C-1, then segment (lane, c) at C + c * L + lane.
class Fabric
{
public:
    explicit Fabric(const LadderTopology &topo)
        : topo_(topo), columns_(topo.columns()), sets_(columns_ + topo.segment_count())
    {
    }

    [[nodiscard]] std::size_t node_count() const { return columns_ + topo_.segment_count(); }
    [[nodiscard]] std::size_t rung(std::size_t column) const { return column; }
    [[nodiscard]] std::size_t segment(std::size_t lane, std::size_t column) const
    {
        return columns_ + topo_.segment_index(lane, column);
    }

    [[nodiscard]] std::string name(std::size_t node) const
    {
        if (node < columns_)
        {
            return to_string(Resource{ResourceKind::rung, 0, node});
        }
        const std::size_t s = node - columns_;
        return to_string(Resource{ResourceKind::segment, s % topo_.lanes(), s / topo_.lanes()});
    }

    /// Applies the switch vector; returns names of switches set to a port
    /// that does not exist (edge columns).
    std::vector<std::string> configure(const std::vector<SwitchState> &vec)
    {
        sets_.reset();
        std::vector<std::string> bad;
        for (std::size_t c = 0; c < columns_; ++c)
        {
            for (std::size_t l = 0; l < topo_.lanes(); ++l)
            {
                const auto state = vec[topo_.switch_index(l, c)];
                const bool has_left = c > 0;
                const bool has_right = c + 1 < columns_;
                switch (state)
                {
                case SwitchState::idle:
                    break;
                case SwitchState::left_right:
                    if (has_left && has_right)
                    {
                        sets_.unite(segment(l, c - 1), segment(l, c));
                        continue;
                    }
                    break;
                case SwitchState::left_rung:
                    if (has_left)
                    {
                        sets_.unite(segment(l, c - 1), rung(c));
                        continue;
                    }
                    break;
                case SwitchState::right_rung:
                    if (has_right)
                    {
                        sets_.unite(segment(l, c), rung(c));
                        continue;
                    }
                    break;
                }
                if (state != SwitchState::idle)
                {
                    bad.push_back(to_string(Resource{ResourceKind::switch_, l, c}));
                }
            }
        }
        return bad;
    }

    std::size_t component(std::size_t node) { return sets_.find(node); }

private:
    const LadderTopology &topo_;
    std::size_t columns_;
    DisjointSets sets_;
};

void check_programs(std::span<const ControllerProgram> programs, std::size_t scenarios)
{
    if (programs.empty())
    {
        throw ConfigError("run_frames: no controller programs");
    }
    const auto &ref = programs.front();
    for (const auto &p : programs)
    {
        if (!(p.schedule == ref.schedule))
        {
            throw ConfigError("run_frames: controller " + std::to_string(p.region.id) +
                              " is out of lockstep (frame length " + std::to_string(p.schedule.frame_length()) +
                              " vs " + std::to_string(ref.schedule.frame_length()) + ")");
        }
        if (p.memory.size() != scenarios)
        {
            throw ConfigError("run_frames: controller " + std::to_string(p.region.id) + " stores " +
                              std::to_string(p.memory.size()) + " scenarios, expected " +
                              std::to_string(scenarios));
        }
    }
    for (const auto &e : ref.schedule.entries)
    {
        if (e.scenario >= scenarios)
        {
            throw ConfigError("run_frames: unknown scenario index " + std::to_string(e.scenario));
        }
    }
    if (ref.schedule.conditional && ref.schedule.conditional->scenario >= scenarios)
    {
        throw ConfigError("run_frames: unknown scenario index " + std::to_string(ref.schedule.conditional->scenario));
    }
}

} // namespace

SimReport run_frames(const LadderTopology &topo, std::span<const ControllerProgram> programs,
                     std::span<const RoutedPath> paths, std::span<const std::vector<std::size_t>> membership,
                     std::size_t n_frames, const SimOptions &options)
{
    SimReport report;
    report.frames = n_frames;
    report.delivered.assign(paths.size(), 0);
    if (membership.empty())
    {
        return report; // nothing to drive
    }
    check_programs(programs, membership.size());
    for (const auto &group : membership)
    {
        for (std::size_t e : group)
        {
            if (e >= paths.size())
            {
                throw ConfigError("run_frames: scenario references unknown connection " + std::to_string(e));
            }
        }
    }
    const Schedule &schedule = programs.front().schedule;
    report.frame_length = schedule.frame_length();

    Fabric fabric(topo);
    std::vector<SwitchState> global(topo.switch_count(), SwitchState::idle);
    std::vector<std::size_t> drivers(fabric.node_count(), 0);

    auto run_step = [&](std::size_t scenario) {
        const std::size_t step = report.steps++;
        for (const auto &p : programs)
        {
            for (std::size_t i = 0; i < p.region.switch_count(); ++i)
            {
                global[p.region.first_switch() + i] = p.memory[scenario].get(i);
            }
        }
        auto record = [&](std::string resource) {
            ++report.collisions;
            if (report.collision_log.size() < kCollisionLogLimit)
            {
                report.collision_log.push_back({step, scenario, std::move(resource)});
            }
        };
        for (auto &bad : fabric.configure(global))
        {
            record(std::move(bad));
        }

        std::fill(drivers.begin(), drivers.end(), 0);
        const auto &active = membership[scenario];
        for (std::size_t e : active)
        {
            ++drivers[fabric.component(fabric.rung(paths[e].src_column))];
        }
        for (std::size_t node = 0; node < fabric.node_count(); ++node)
        {
            if (fabric.component(node) == node && drivers[node] > 1)
            {
                record(fabric.name(node));
            }
        }

        std::vector<std::size_t> delivered_now;
        for (std::size_t e : active)
        {
            const auto root = fabric.component(fabric.rung(paths[e].src_column));
            if (drivers[root] == 1 && fabric.component(fabric.rung(paths[e].dst_column)) == root)
            {
                ++report.delivered[e];
                delivered_now.push_back(e);
            }
            else if (drivers[root] == 1)
            {
                ++report.misroutes;
            }
        }

        std::vector<std::size_t> lit;
        for (std::size_t node = 0; node < fabric.node_count(); ++node)
        {
            if (drivers[fabric.component(node)] > 0)
            {
                lit.push_back(node);
            }
        }
        report.active_resources.push_back(lit.size());
        report.energy += lit.size();

        if (options.trace != nullptr)
        {
            auto &out = *options.trace;
            out << "step=" << step << " scenario=" << scenario << " active=";
            for (std::size_t i = 0; i < lit.size(); ++i)
            {
                out << (i == 0 ? "" : ",") << fabric.name(lit[i]);
            }
            out << " delivered=";
            for (std::size_t i = 0; i < delivered_now.size(); ++i)
            {
                out << (i == 0 ? "" : ",") << delivered_now[i];
            }
            out << '\n';
        }
    };

    for (std::size_t frame = 0; frame < n_frames; ++frame)
    {
        for (const auto &entry : schedule.entries)
        {
            for (std::size_t r = 0; r < entry.repeat; ++r)
            {
                run_step(entry.scenario);
            }
        }
        if (schedule.conditional && options.raised_flags.contains({frame, schedule.conditional->flag}))
        {
            run_step(schedule.conditional->scenario);
        }
    }
    return report;
}

std::uint64_t energy_proxy(const SimReport &report)
{
    return std::accumulate(report.active_resources.begin(), report.active_resources.end(), std::uint64_t{0});
}

std::string to_json(const SimReport &report)
{
    nlohmann::ordered_json j;
    j["frames"] = report.frames;
    j["steps"] = report.steps;
    j["frame_length"] = report.frame_length;
    j["collisions"] = report.collisions;
    j["misroutes"] = report.misroutes;
    j["energy"] = report.energy;
    const auto [lo, hi] = std::minmax_element(report.delivered.begin(), report.delivered.end());
    j["delivered_min"] = report.delivered.empty() ? 0 : *lo;
    j["delivered_max"] = report.delivered.empty() ? 0 : *hi;
    j["delivered"] = report.delivered;
    j["active_resources"] = report.active_resources;
    auto log = nlohmann::ordered_json::array();
    for (const auto &c : report.collision_log)
    {
        log.push_back({{"step", c.step}, {"scenario", c.scenario}, {"resource", c.resource}});
    }
    j["collision_log"] = log;
    return j.dump(2) + "\n";
}

} // namespace ladderbus
