#include <doctest.h>

#include "instances.hpp"
#include "ladderbus/controlgen.hpp"
#include "ladderbus/error.hpp"
#include "ladderbus/grouping.hpp"

using namespace ladderbus;

TEST_CASE("region partition")
{
    const auto t4 = build_topology(8, 3); // 4 columns
    const auto one = partition_regions(t4, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].switch_count() == 12);

    const auto two = partition_regions(t4, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].first_column == 0);
    CHECK(two[0].last_column == 1);
    CHECK(two[1].first_column == 2);
    CHECK(two[1].last_column == 3);

    const auto t5 = build_topology(10, 3);
    const auto uneven = partition_regions(t5, 2);
    CHECK(uneven[0].column_count() == 3);
    CHECK(uneven[1].column_count() == 2);

    CHECK_THROWS_AS(partition_regions(t4, 0), ConfigError);
    CHECK_THROWS_AS(partition_regions(t4, 5), ConfigError);
}

TEST_CASE("regions tile every switch once")
{
    for (std::size_t tiles = 2; tiles <= 60; tiles += 7)
    {
        const auto topo = build_topology(tiles);
        for (std::size_t k = 1; k <= topo.columns(); ++k)
        {
            const auto regions = partition_regions(topo, k);
            std::size_t next = 0;
            for (const auto &r : regions)
            {
                CHECK(r.first_switch() == next);
                next += r.switch_count();
            }
            CHECK(next == topo.switch_count());
        }
    }
}

TEST_CASE("schedules")
{
    CHECK(build_schedule(8).frame_length() == 8);
    CHECK(build_schedule(1).frame_length() == 1);
    const auto custom = build_schedule(3, std::vector<std::size_t>{2, 0, 1});
    REQUIRE(custom.entries.size() == 3);
    CHECK(custom.entries[0].scenario == 2);
    CHECK(custom.entries[1].scenario == 0);
    CHECK(custom.entries[2].scenario == 1);
    CHECK_THROWS_AS(build_schedule(3, std::vector<std::size_t>{0, 0, 1}), ConfigError);
    CHECK_THROWS_AS(build_schedule(3, std::vector<std::size_t>{0, 1}), ConfigError);
}

TEST_CASE("control words")
{
    ControlWord w(37);
    CHECK(w.is_zero());
    w.set(0, SwitchState::right_rung);
    w.set(31, SwitchState::left_rung);
    w.set(32, SwitchState::left_right);
    w.set(36, SwitchState::right_rung);
    CHECK(w.get(31) == SwitchState::left_rung);
    CHECK(w.get(32) == SwitchState::left_right);
    CHECK(w.to_hex().size() == 19); // 74 bits
    CHECK(ControlWord::from_hex(w.to_hex(), 37) == w);
    CHECK_THROWS(ControlWord::from_hex("zz", 2));
}

TEST_CASE("encode and decode")
{
    const auto in = testing_support::random_instance(30, 90, 6);
    const auto s = group_max_clique(in.topo, in.paths).scenarios;
    const auto schedule = build_schedule(s.size());

    SUBCASE("single region holds the global vectors")
    {
        const auto progs = encode_scenarios(s, in.topo, partition_regions(in.topo, 1), schedule);
        REQUIRE(progs.size() == 1);
        for (std::size_t k = 0; k < s.size(); ++k)
        {
            for (std::size_t i = 0; i < in.topo.switch_count(); ++i)
            {
                CHECK(progs[0].memory[k].get(i) == s.switches(k)[i]);
            }
        }
    }
    SUBCASE("three regions round trip")
    {
        const auto progs = encode_scenarios(s, in.topo, partition_regions(in.topo, 3), schedule);
        CHECK(decode_programs(in.topo, progs) == s.switch_vectors());
        std::size_t bits = 0;
        for (const auto &p : progs)
        {
            bits += p.memory.size() * p.word_bits();
        }
        CHECK(control_memory_bits(progs) == bits);
        CHECK(bits == s.size() * 2 * in.topo.switch_count());
    }
    SUBCASE("program text round trip")
    {
        auto sched = build_schedule(s.size());
        sched.conditional = ConditionalEntry{2, 0};
        for (const auto &p : encode_scenarios(s, in.topo, partition_regions(in.topo, 4), sched))
        {
            CHECK(parse_program(write_program(p)) == p);
        }
    }
}

TEST_CASE("idle scenarios encode to zero words")
{
    const auto topo = build_topology(12, 3);
    // A same-column path sets no switches.
    const std::vector<RoutedPath> paths{testing_support::path(0, 2, 2, 0)};
    const auto s = ScenarioSet::assemble(topo, paths, {{0}});
    for (const auto &p : encode_scenarios(s, topo, partition_regions(topo, 3), build_schedule(1)))
    {
        CHECK(p.memory.at(0).is_zero());
    }
}

TEST_CASE("malformed programs are rejected")
{
    const auto topo = build_topology(8, 2);
    const std::vector<RoutedPath> paths{testing_support::path(0, 0, 2, 1)};
    const auto s = ScenarioSet::assemble(topo, paths, {{0}});
    const auto text = write_program(encode_scenarios(s, topo, partition_regions(topo, 1), build_schedule(1))[0]);
    CHECK_THROWS(parse_program(text.substr(0, text.size() / 2)));
    CHECK_THROWS(parse_program("ladderbus-ctrl 2\n"));
    std::string bad = text;
    bad.replace(bad.find("(0, 1)"), 6, "(5, 1)");
    CHECK_THROWS(parse_program(bad));
}
