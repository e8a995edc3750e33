#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "instances.hpp"
#include "ladderbus/error.hpp"
#include "ladderbus/pipeline.hpp"

using namespace ladderbus;
namespace fs = std::filesystem;

namespace
{

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string &name)
        : path(fs::temp_directory_path() / ("ladderbus_test_" + name))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::map<std::string, std::string> snapshot(const fs::path &dir)
{
    std::map<std::string, std::string> out;
    for (const auto &entry : fs::recursive_directory_iterator(dir))
    {
        if (entry.is_regular_file())
        {
            std::ifstream in(entry.path(), std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            out[fs::relative(entry.path(), dir).string()] = ss.str();
        }
    }
    return out;
}

PipelineConfig synth_40_160()
{
    PipelineConfig c;
    c.graph_file = testing_support::data_file("synth_40_160.json");
    c.frames = 2;
    c.trace = true;
    return c;
}

} // namespace

TEST_CASE("full run on synth_40(160)")
{
    PipelineState s;
    run_pipeline(synth_40_160(), s);
    CHECK(s.depth() == kStageCount);
    CHECK(s.paths->size() == 160);
    CHECK(s.grouping->lower_bound >= 7);
    CHECK(graph_metrics(*s.graph).largest_directed_degree() == 7);
    CHECK(s.grouping->selected.scenarios.size() >= s.grouping->lower_bound);
    CHECK(s.grouping->max_clique_count <= s.grouping->greedy_count);
    CHECK(s.sim->collisions == 0);
    CHECK(s.sim->frame_length == s.grouping->selected.scenarios.size());
    CHECK(s.cost->control_fraction > 0.0);
}

TEST_CASE("edgeless graph")
{
    PipelineConfig c;
    c.clusters = 10;
    c.edges = 0;
    PipelineState s;
    run_pipeline(c, s);
    CHECK(s.grouping->selected.scenarios.size() == 0);
    CHECK(s.sim->collisions == 0);
    CHECK(s.sim->steps == 0);
}

TEST_CASE("run directories are byte-identical across runs")
{
    TempDir a("det_a"), b("det_b");
    PipelineState sa, sb;
    run_pipeline(synth_40_160(), sa, Stage::graph, Stage::cost, a.path);
    run_pipeline(synth_40_160(), sb, Stage::graph, Stage::cost, b.path);
    const auto snap = snapshot(a.path);
    CHECK(snap.size() >= 10);
    CHECK(snap == snapshot(b.path));
}

TEST_CASE("resuming from persisted stages equals a full run")
{
    TempDir full("resume_full"), step("resume_step");
    const auto config = synth_40_160();
    PipelineState s;
    run_pipeline(config, s, Stage::graph, Stage::cost, full.path);

    for (std::size_t k = 0; k < kStageCount; ++k)
    {
        auto loaded = load_state(step.path);
        CHECK(loaded.depth() == std::min<std::size_t>(k, static_cast<std::size_t>(Stage::sim)));
        const auto first = static_cast<Stage>(std::min(loaded.depth(), k));
        run_pipeline(config, loaded, first, static_cast<Stage>(k), step.path);
    }
    CHECK(snapshot(full.path) == snapshot(step.path));

    // Re-running a middle stage drops and regenerates the later ones.
    auto loaded = load_state(step.path);
    run_pipeline(config, loaded, Stage::scenarios, Stage::scenarios, step.path);
    CHECK_FALSE(fs::exists(step.path / "cost.json"));
    CHECK_FALSE(fs::exists(step.path / "ctrl"));
    run_pipeline(config, loaded, Stage::programs, Stage::cost, step.path);
    CHECK(snapshot(full.path) == snapshot(step.path));
}

TEST_CASE("stages need their predecessors")
{
    PipelineState s;
    CHECK_THROWS_AS(run_stage(Stage::paths, PipelineConfig{}, s), StageError);
    try
    {
        run_stage(Stage::paths, PipelineConfig{}, s);
    }
    catch (const StageError &e)
    {
        CHECK(e.stage() == Stage::paths);
    }
}

TEST_CASE("stage errors keep earlier stages")
{
    PipelineConfig c;
    c.clusters = 12;
    c.edges = 30;
    c.tiles = 6; // too few tiles for 12 clusters
    PipelineState s;
    CHECK_THROWS_WITH_AS(run_pipeline(c, s), doctest::Contains("placement: "), ConfigError);
    CHECK(s.depth() == 2);
}

TEST_CASE("reports")
{
    PipelineState s;
    run_pipeline(synth_40_160(), s, Stage::graph, Stage::scenarios);
    const auto table = emit_report(s, ReportFormat::table);
    CHECK(table.find("scenarios_greedy") != std::string::npos);
    CHECK(table.find("scenarios_maxclique") != std::string::npos);
    CHECK(table.find("[sim]") == std::string::npos);
    const auto json = emit_report(s, ReportFormat::json);
    CHECK(json.find("\"lower_bound\"") != std::string::npos);
    CHECK_THROWS_AS(emit_report(PipelineState{}, ReportFormat::json), StageError);
}

TEST_CASE("config parsing")
{
    const auto c = parse_config(R"({"clusters": 30, "edges": 90, "algorithm": "greedy", "frames": 3,
                                    "conditional": {"flag": 1, "scenario": 0}, "raise": [[0, 1]]})");
    CHECK(c.clusters == 30);
    CHECK(c.algorithm == GroupingAlgorithm::greedy);
    CHECK(c.conditional == ConditionalEntry{1, 0});
    CHECK(parse_config(to_json(c)).frames == 3);
    CHECK(to_json(parse_config(to_json(c))) == to_json(c));
    CHECK_THROWS_AS(parse_config(R"({"clusterz": 3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"algorithm": "best"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1]"), ConfigError);
}

TEST_CASE("stage names")
{
    for (std::size_t i = 0; i < kStageCount; ++i)
    {
        CHECK(parse_stage(to_string(static_cast<Stage>(i))) == static_cast<Stage>(i));
    }
    CHECK_THROWS_AS(parse_stage("link"), ConfigError);
}
