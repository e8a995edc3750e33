// pipeline.hpp
//
//  The end-to-end flow: graph -> topology -> placement -> paths ->
//  scenarios -> controller programs -> simulation -> cost. Each stage reads
//  only the stages before it, and a run directory holds one file per
//  completed stage:
//
//      config.json      resolved configuration
//      graph.json       cluster graph
//      topology.json    ladder dimensions and resource counts
//      placement.json   {"assignment": [tile of cluster 0, ...]}
//      paths.json       {"paths": [{edge, src, dst, lane, cmin, cmax}, ...]}
//      scenarios.json   grouping summary + run-length coded scenarios
//      ctrl/controller_<k>.ctrl   controller programs
//      sim.json         simulation report (sim_trace.log when tracing)
//      cost.json        plane cost report
//
//  Files always form a prefix of that order; rerunning a stage deletes the
//  files of every later stage.

#ifndef LADDERBUS_PIPELINE_HPP
#define LADDERBUS_PIPELINE_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/controlgen.hpp"
#include "ladderbus/costmodel.hpp"
#include "ladderbus/error.hpp"
#include "ladderbus/grouping.hpp"
#include "ladderbus/placement.hpp"
#include "ladderbus/routing.hpp"
#include "ladderbus/sim.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

enum class Stage
{
    graph,
    topology,
    placement,
    paths,
    scenarios,
    programs,
    sim,
    cost,
};

inline constexpr std::size_t kStageCount = 8;
std::string_view to_string(Stage s);
Stage parse_stage(std::string_view s);

struct PipelineConfig
{
    // Input: a graph file, or synthesis parameters.
    std::optional<std::filesystem::path> graph_file;
    std::size_t clusters{40};
    std::size_t edges{160};
    std::optional<std::size_t> max_degree;

    /// Root seed; every random stage derives its own stream from it.
    std::uint64_t seed{1};

    std::optional<std::size_t> tiles; // defaults to the cluster count
    std::optional<std::size_t> lanes; // defaults to round(sqrt(tiles))
    std::size_t lane_width_bits{32};

    bool anneal{true};
    double anneal_cooling{0.97};
    std::optional<std::size_t> anneal_iterations;

    GroupingAlgorithm algorithm{GroupingAlgorithm::max_clique};
    std::chrono::milliseconds clique_budget{10'000};

    std::optional<std::size_t> controllers;
    std::optional<std::vector<std::size_t>> frame_order;
    std::optional<ConditionalEntry> conditional;
    std::size_t frames{1};
    /// (frame, flag) pairs raised during simulation.
    std::vector<std::pair<std::size_t, std::size_t>> raised_flags;
    bool trace{false};
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path &path);
std::string to_json(const PipelineConfig &config);

struct GroupingSummary
{
    Grouping selected;
    std::size_t lower_bound{0};
    std::size_t greedy_count{0};
    std::size_t max_clique_count{0};
};

struct PipelineState
{
    std::optional<ClusterGraph> graph;
    std::optional<LadderTopology> topology;
    std::optional<TilePlacement> placement;
    std::optional<std::vector<RoutedPath>> paths;
    std::optional<GroupingSummary> grouping;
    std::optional<std::vector<ControllerProgram>> programs;
    std::optional<SimReport> sim;
    std::optional<CostReport> cost;
    std::string sim_trace;

    [[nodiscard]] bool has(Stage s) const;
    /// Number of leading stages present.
    [[nodiscard]] std::size_t depth() const;
    /// Drops `s` and every later stage.
    void truncate(Stage s);
};

/// A stage failed; `stage()` names it.
class StageError : public Error
{
public:
    StageError(Stage stage, const std::string &what)
        : Error(std::string(to_string(stage)) + ": " + what), stage_(stage)
    {
    }
    [[nodiscard]] Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

using PipelineLog = std::function<void(const std::string &)>;

/// Runs one stage on `state`, which must hold every earlier stage. Later
/// stages are dropped. ConfigError and InvariantViolation keep their type
/// (prefixed with the stage name); anything else becomes a StageError.
void run_stage(Stage stage, const PipelineConfig &config, PipelineState &state, const PipelineLog &log = {});

/// Runs stages first..last in order, persisting after each when `run_dir`
/// is given. A simulation with collisions throws InvariantViolation after
/// its report has been saved.
void run_pipeline(const PipelineConfig &config, PipelineState &state, Stage first = Stage::graph,
                  Stage last = Stage::cost, const std::optional<std::filesystem::path> &run_dir = std::nullopt,
                  const PipelineLog &log = {});

void save_stage(const std::filesystem::path &run_dir, const PipelineState &state, Stage stage);
/// Deletes the files of `stage` and every later stage.
void remove_stages_from(const std::filesystem::path &run_dir, Stage stage);
PipelineState load_state(const std::filesystem::path &run_dir);

enum class ReportFormat
{
    table,
    json,
};

/// Summary of every present stage. Throws StageError when no graph is present.
std::string emit_report(const PipelineState &state, ReportFormat format);

} // namespace ladderbus

#endif // LADDERBUS_PIPELINE_HPP
