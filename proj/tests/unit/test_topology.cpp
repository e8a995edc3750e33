#include <doctest.h>

#include <cmath>
#include <vector>

#include "ladderbus/error.hpp"
#include "ladderbus/topology.hpp"

using namespace ladderbus;

TEST_CASE("lane count follows the square root")
{
    // Tile counts and lane counts of the five FPGA applications.
    CHECK(build_topology(11).lanes() == 3);
    CHECK(build_topology(14).lanes() == 4);
    CHECK(build_topology(24).lanes() == 5);
    CHECK(build_topology(26).lanes() == 5);
    CHECK(build_topology(30).lanes() == 5);
    for (std::size_t n = 2; n < 400; ++n)
    {
        const auto l = static_cast<double>(default_lane_count(n));
        CHECK(std::abs(l - std::sqrt(static_cast<double>(n))) <= 0.5);
    }
}

TEST_CASE("resource counts")
{
    const auto t = build_topology(4);
    CHECK(t.lanes() == 2);
    CHECK(t.columns() == 2);
    CHECK(t.switch_count() == 4);
    CHECK(t.segment_count() == 2);
    CHECK(t.rung_count() == 2);

    const auto odd = build_topology(11, 3);
    CHECK(odd.columns() == 6);
    CHECK(odd.switch_count() == 18);
    CHECK(odd.segment_count() == 15);
}

TEST_CASE("tile coordinates")
{
    CHECK(tile_coordinates(build_topology(8), 0) == TileCoord{0, 0});
    CHECK(tile_coordinates(build_topology(8), 7) == TileCoord{1, 3});
    CHECK(tile_coordinates(build_topology(11), 10) == TileCoord{0, 5});
    CHECK_THROWS_AS(tile_coordinates(build_topology(11), 11), ConfigError);
}

TEST_CASE("invalid topologies")
{
    CHECK_THROWS_AS(build_topology(1), ConfigError);
    CHECK_THROWS_AS(build_topology(8, 0), ConfigError);
}

TEST_CASE("switch indices are column-major and dense")
{
    const auto t = build_topology(10, 3);
    std::vector<int> seen(t.switch_count(), 0);
    for (std::size_t c = 0; c < t.columns(); ++c)
    {
        for (std::size_t l = 0; l < t.lanes(); ++l)
        {
            ++seen.at(t.switch_index(l, c));
        }
    }
    for (int s : seen)
    {
        CHECK(s == 1);
    }
    CHECK(t.switch_index(0, 1) == t.switch_index(t.lanes() - 1, 0) + 1);
}

TEST_CASE("topology json round trip")
{
    const auto t = build_topology(26, std::nullopt, 16);
    CHECK(parse_topology(to_json(t)) == t);
    CHECK_THROWS_AS(parse_topology("{\"tiles\": 3}"), FormatError);
}
