// sim.hpp
//
//  Discrete-time execution of controller programs. One schedule step applies
//  one scenario: the simulator reads every controller's word for that
//  scenario, reassembles the global switch vector, joins rungs and lane
//  segments through the configured switches, and lets each connection of
//  the scenario drive its source rung. A connected chain with more than one
//  driver is a collision; a connection whose destination rung is not on its
//  driver's chain is a misroute.
//
//  Trace records (one line per step):
//      step=<s> scenario=<k> active=<resource,...> delivered=<edge,...>

#ifndef LADDERBUS_SIM_HPP
#define LADDERBUS_SIM_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ladderbus/controlgen.hpp"
#include "ladderbus/routing.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

struct Collision
{
    std::size_t step{0};
    std::size_t scenario{0};
    std::string resource;
};

struct SimReport
{
    std::size_t frames{0};
    std::size_t steps{0};
    std::size_t frame_length{0};
    std::vector<std::size_t> delivered; // per connection
    std::size_t collisions{0};
    std::vector<Collision> collision_log; // first kCollisionLogLimit
    std::size_t misroutes{0};
    std::vector<std::size_t> active_resources; // per step
    std::uint64_t energy{0};
};

inline constexpr std::size_t kCollisionLogLimit = 64;

struct SimOptions
{
    std::ostream *trace{nullptr};
    /// (frame, flag) pairs raised at run time.
    std::set<std::pair<std::size_t, std::size_t>> raised_flags;
};

/// `membership[k]` lists the connections scenario k serves. Throws
/// ConfigError for controllers out of lockstep or unknown scenario indices.
SimReport run_frames(const LadderTopology &topo, std::span<const ControllerProgram> programs,
                     std::span<const RoutedPath> paths, std::span<const std::vector<std::size_t>> membership,
                     std::size_t n_frames, const SimOptions &options = {});

/// Σ over steps of active segment + rung count.
std::uint64_t energy_proxy(const SimReport &report);

std::string to_json(const SimReport &report);

} // namespace ladderbus

#endif // LADDERBUS_SIM_HPP
