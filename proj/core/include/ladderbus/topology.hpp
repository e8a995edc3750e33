// topology.hpp
//
//  Segmented ladder bus model. Tiles sit in two rows; tile t is at
//  row t % 2, column t / 2. Between the rows run `lanes` parallel horizontal
//  bus lanes. Every (lane, column) crossing holds a three-way switch whose
//  ports are the left segment, the right segment and the column's rung. A
//  rung is a single vertical wire per column that joins the column's two
//  tiles and the rung port of every lane switch in that column.
//
//  Resource counts for C = ceil(tiles / 2) columns and L lanes:
//      switches = L * C, horizontal segments = L * (C - 1), rungs = C.

#ifndef LADDERBUS_TOPOLOGY_HPP
#define LADDERBUS_TOPOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace ladderbus
{

using TileId = std::uint32_t;

enum class SwitchState : std::uint8_t
{
    idle = 0,
    left_right = 1,
    left_rung = 2,
    right_rung = 3,
};

const char *to_string(SwitchState s);

struct TileCoord
{
    std::size_t row{0};
    std::size_t column{0};
    friend bool operator==(const TileCoord &, const TileCoord &) = default;
};

enum class ResourceKind : std::uint8_t
{
    rung,
    segment, // lane segment between `column` and `column + 1`
    switch_,
};

struct Resource
{
    ResourceKind kind{ResourceKind::rung};
    std::size_t lane{0}; // ignored for rungs
    std::size_t column{0};

    friend auto operator<=>(const Resource &, const Resource &) = default;
};

std::string to_string(const Resource &r);

class LadderTopology
{
public:
    LadderTopology() = default;
    LadderTopology(std::size_t n_tiles, std::size_t n_lanes, std::size_t lane_width_bits = 32);

    [[nodiscard]] std::size_t tiles() const noexcept { return tiles_; }
    [[nodiscard]] std::size_t lanes() const noexcept { return lanes_; }
    [[nodiscard]] std::size_t columns() const noexcept { return (tiles_ + 1) / 2; }
    [[nodiscard]] std::size_t lane_width_bits() const noexcept { return lane_width_bits_; }

    [[nodiscard]] std::size_t switch_count() const noexcept { return lanes_ * columns(); }
    [[nodiscard]] std::size_t segment_count() const noexcept { return lanes_ * (columns() - 1); }
    [[nodiscard]] std::size_t rung_count() const noexcept { return columns(); }

    [[nodiscard]] std::size_t column_of(TileId tile) const;

    /// Switches are numbered column-major so a block of columns is contiguous.
    [[nodiscard]] std::size_t switch_index(std::size_t lane, std::size_t column) const noexcept
    {
        return column * lanes_ + lane;
    }
    [[nodiscard]] std::size_t segment_index(std::size_t lane, std::size_t column) const noexcept
    {
        return column * lanes_ + lane;
    }

    friend bool operator==(const LadderTopology &, const LadderTopology &) = default;

private:
    std::size_t tiles_{0};
    std::size_t lanes_{0};
    std::size_t lane_width_bits_{32};
};

/// round-half-up(sqrt(n_tiles)).
std::size_t default_lane_count(std::size_t n_tiles);

/// Throws ConfigError when n_tiles < 2 or n_lanes == 0.
LadderTopology build_topology(std::size_t n_tiles, std::optional<std::size_t> n_lanes = std::nullopt,
                              std::size_t lane_width_bits = 32);

TileCoord tile_coordinates(const LadderTopology &topo, TileId tile);

std::string to_json(const LadderTopology &topo);
LadderTopology parse_topology(const std::string &text);

} // namespace ladderbus

#endif // LADDERBUS_TOPOLOGY_HPP
