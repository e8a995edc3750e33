// controlgen.hpp
//
//  Compiles a ScenarioSet into programs for distributed local controllers.
//  Each controller owns a contiguous block of columns (all lanes) and stores
//  one fixed-width word per scenario: 2 bits per switch, switch i of the
//  region in bits [2i, 2i+1]. A schedule steps through the stored words with
//  a loop counter; the same schedule runs on every controller in lockstep.
//
//  Program file (text, one directive per line):
//
//      ladderbus-ctrl 1
//      region <id> columns <first> <last> lanes <L>
//      word_bits <W>
//      scenarios <K>
//      memory
//      <hex word for scenario 0>
//      ...
//      schedule
//      (<scenario>, <repeat>)
//      ...
//      cond(<flag>, <scenario>)        optional
//      end
//
//  Hex words are most-significant digit first, zero-padded to ceil(W / 4)
//  digits.

#ifndef LADDERBUS_CONTROLGEN_HPP
#define LADDERBUS_CONTROLGEN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ladderbus/grouping.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

struct ControllerRegion
{
    std::size_t id{0};
    std::size_t first_column{0};
    std::size_t last_column{0}; // inclusive
    std::size_t lanes{0};

    [[nodiscard]] std::size_t column_count() const noexcept { return last_column - first_column + 1; }
    [[nodiscard]] std::size_t switch_count() const noexcept { return column_count() * lanes; }
    /// Global index of the region's first switch (switches are column-major).
    [[nodiscard]] std::size_t first_switch() const noexcept { return first_column * lanes; }

    friend bool operator==(const ControllerRegion &, const ControllerRegion &) = default;
};

/// Fixed-width packed switch states.
class ControlWord
{
public:
    ControlWord() = default;
    explicit ControlWord(std::size_t switches) : switches_(switches), limbs_((2 * switches + 63) / 64, 0) {}

    [[nodiscard]] std::size_t switches() const noexcept { return switches_; }
    [[nodiscard]] std::size_t bits() const noexcept { return 2 * switches_; }
    [[nodiscard]] SwitchState get(std::size_t i) const
    {
        return static_cast<SwitchState>((limbs_[(2 * i) / 64] >> ((2 * i) % 64)) & 3U);
    }
    void set(std::size_t i, SwitchState s)
    {
        auto &limb = limbs_[(2 * i) / 64];
        const auto shift = (2 * i) % 64;
        limb = (limb & ~(std::uint64_t{3} << shift)) | (static_cast<std::uint64_t>(s) << shift);
    }
    [[nodiscard]] bool is_zero() const;

    [[nodiscard]] std::string to_hex() const;
    static ControlWord from_hex(std::string_view hex, std::size_t switches);

    friend bool operator==(const ControlWord &, const ControlWord &) = default;

private:
    std::size_t switches_{0};
    std::vector<std::uint64_t> limbs_;
};

struct ScheduleEntry
{
    std::size_t scenario{0};
    std::size_t repeat{1};
    friend bool operator==(const ScheduleEntry &, const ScheduleEntry &) = default;
};

/// Extra step at the end of a frame, taken only when `flag` is raised.
struct ConditionalEntry
{
    std::size_t flag{0};
    std::size_t scenario{0};
    friend bool operator==(const ConditionalEntry &, const ConditionalEntry &) = default;
};

/// Outer loop runs forever; each iteration (a frame) walks `entries`.
struct Schedule
{
    std::vector<ScheduleEntry> entries;
    std::optional<ConditionalEntry> conditional;

    /// Steps per frame without the conditional step.
    [[nodiscard]] std::size_t frame_length() const;
    friend bool operator==(const Schedule &, const Schedule &) = default;
};

struct ControllerProgram
{
    ControllerRegion region;
    std::vector<ControlWord> memory;
    Schedule schedule;

    [[nodiscard]] std::size_t word_bits() const noexcept { return 2 * region.switch_count(); }
    friend bool operator==(const ControllerProgram &, const ControllerProgram &) = default;
};

/// round-half-up(sqrt(columns)), at least 1.
std::size_t default_controller_count(const LadderTopology &topo);

/// Contiguous column blocks whose sizes differ by at most one, larger blocks
/// first. Throws ConfigError unless 1 <= n_controllers <= columns.
std::vector<ControllerRegion> partition_regions(const LadderTopology &topo, std::size_t n_controllers);

/// One pass over the scenarios per frame, repeat 1. `order`, if given, must
/// be a permutation of 0..scenario_count-1.
Schedule build_schedule(std::size_t scenario_count, const std::optional<std::vector<std::size_t>> &order = {});

/// Projects each global switch vector onto each region.
std::vector<ControllerProgram> encode_scenarios(const ScenarioSet &s, const LadderTopology &topo,
                                                std::span<const ControllerRegion> regions, const Schedule &schedule);

/// Reassembles global switch vectors, one per stored scenario.
std::vector<std::vector<SwitchState>> decode_programs(const LadderTopology &topo,
                                                      std::span<const ControllerProgram> programs);

/// Σ over regions of scenarios * word bits.
std::size_t control_memory_bits(std::span<const ControllerProgram> programs);

std::string write_program(const ControllerProgram &p);
ControllerProgram parse_program(std::string_view text);

} // namespace ladderbus

#endif // LADDERBUS_CONTROLGEN_HPP
