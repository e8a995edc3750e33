#include "ladderbus/pipeline.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ladderbus/rng.hpp"

namespace ladderbus
{

namespace fs = std::filesystem;

namespace
{

constexpr std::array<std::string_view, kStageCount> kStageNames{
    "graph", "topology", "placement", "paths", "scenarios", "programs", "sim", "cost"};

constexpr std::array<std::string_view, kStageCount> kStageFiles{
    "graph.json", "topology.json", "placement.json", "paths.json", "scenarios.json", "ctrl", "sim.json", "cost.json"};

constexpr std::uint64_t kAnnealStream = 2;

std::size_t index_of(Stage s)
{
    return static_cast<std::size_t>(s);
}

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError("cannot read " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigError("cannot write " + path.string());
    }
    out << text;
}

template <typename T> std::optional<T> optional_field(const nlohmann::json &j, const char *key)
{
    if (!j.contains(key) || j[key].is_null())
    {
        return std::nullopt;
    }
    return j[key].get<T>();
}

} // namespace

std::string_view to_string(Stage s)
{
    return kStageNames[index_of(s)];
}

Stage parse_stage(std::string_view s)
{
    for (std::size_t i = 0; i < kStageCount; ++i)
    {
        if (kStageNames[i] == s)
        {
            return static_cast<Stage>(i);
        }
    }
    throw ConfigError("unknown stage '" + std::string(s) + "'");
}

PipelineConfig parse_config(std::string_view text)
{
    static const std::array<std::string_view, 19> known{
        "graph_file", "clusters",   "edges",          "max_degree",        "seed",
        "tiles",      "lanes",      "lane_width_bits", "anneal",           "anneal_cooling",
        "anneal_iterations", "algorithm", "clique_budget_ms", "controllers", "frame_order",
        "conditional", "frames",    "raise",          "trace"};
    PipelineConfig c;
    try
    {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object())
        {
            throw ConfigError("config: expected an object");
        }
        for (const auto &[key, value] : j.items())
        {
            if (std::find(known.begin(), known.end(), key) == known.end())
            {
                throw ConfigError("config: unknown field '" + key + "'");
            }
        }
        if (auto f = optional_field<std::string>(j, "graph_file"))
        {
            c.graph_file = *f;
        }
        c.clusters = j.value("clusters", c.clusters);
        c.edges = j.value("edges", c.edges);
        c.max_degree = optional_field<std::size_t>(j, "max_degree");
        c.seed = j.value("seed", c.seed);
        c.tiles = optional_field<std::size_t>(j, "tiles");
        c.lanes = optional_field<std::size_t>(j, "lanes");
        c.lane_width_bits = j.value("lane_width_bits", c.lane_width_bits);
        c.anneal = j.value("anneal", c.anneal);
        c.anneal_cooling = j.value("anneal_cooling", c.anneal_cooling);
        c.anneal_iterations = optional_field<std::size_t>(j, "anneal_iterations");
        if (j.contains("algorithm"))
        {
            c.algorithm = parse_grouping_algorithm(j["algorithm"].get<std::string>());
        }
        c.clique_budget = std::chrono::milliseconds(j.value("clique_budget_ms", c.clique_budget.count()));
        c.controllers = optional_field<std::size_t>(j, "controllers");
        c.frame_order = optional_field<std::vector<std::size_t>>(j, "frame_order");
        if (j.contains("conditional") && !j["conditional"].is_null())
        {
            c.conditional = ConditionalEntry{j["conditional"].at("flag").get<std::size_t>(),
                                             j["conditional"].at("scenario").get<std::size_t>()};
        }
        c.frames = j.value("frames", c.frames);
        if (j.contains("raise"))
        {
            c.raised_flags = j["raise"].get<std::vector<std::pair<std::size_t, std::size_t>>>();
        }
        c.trace = j.value("trace", c.trace);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

PipelineConfig load_config(const fs::path &path)
{
    auto c = parse_config(read_file(path));
    if (c.graph_file && c.graph_file->is_relative())
    {
        c.graph_file = fs::absolute(path.parent_path() / *c.graph_file).lexically_normal();
    }
    return c;
}

std::string to_json(const PipelineConfig &c)
{
    nlohmann::ordered_json j;
    j["graph_file"] = c.graph_file ? nlohmann::ordered_json(c.graph_file->string()) : nullptr;
    j["clusters"] = c.clusters;
    j["edges"] = c.edges;
    j["max_degree"] = c.max_degree ? nlohmann::ordered_json(*c.max_degree) : nullptr;
    j["seed"] = c.seed;
    j["tiles"] = c.tiles ? nlohmann::ordered_json(*c.tiles) : nullptr;
    j["lanes"] = c.lanes ? nlohmann::ordered_json(*c.lanes) : nullptr;
    j["lane_width_bits"] = c.lane_width_bits;
    j["anneal"] = c.anneal;
    j["anneal_cooling"] = c.anneal_cooling;
    j["anneal_iterations"] = c.anneal_iterations ? nlohmann::ordered_json(*c.anneal_iterations) : nullptr;
    j["algorithm"] = std::string(to_string(c.algorithm));
    j["clique_budget_ms"] = c.clique_budget.count();
    j["controllers"] = c.controllers ? nlohmann::ordered_json(*c.controllers) : nullptr;
    j["frame_order"] = c.frame_order ? nlohmann::ordered_json(*c.frame_order) : nullptr;
    j["conditional"] = c.conditional ? nlohmann::ordered_json{{"flag", c.conditional->flag},
                                                              {"scenario", c.conditional->scenario}}
                                     : nullptr;
    j["frames"] = c.frames;
    j["raise"] = c.raised_flags;
    j["trace"] = c.trace;
    return j.dump(2) + "\n";
}

bool PipelineState::has(Stage s) const
{
    switch (s)
    {
    case Stage::graph:
        return graph.has_value();
    case Stage::topology:
        return topology.has_value();
    case Stage::placement:
        return placement.has_value();
    case Stage::paths:
        return paths.has_value();
    case Stage::scenarios:
        return grouping.has_value();
    case Stage::programs:
        return programs.has_value();
    case Stage::sim:
        return sim.has_value();
    case Stage::cost:
        return cost.has_value();
    }
    return false;
}

std::size_t PipelineState::depth() const
{
    std::size_t d = 0;
    while (d < kStageCount && has(static_cast<Stage>(d)))
    {
        ++d;
    }
    return d;
}

void PipelineState::truncate(Stage s)
{
    switch (s)
    {
    case Stage::graph:
        graph.reset();
        [[fallthrough]];
    case Stage::topology:
        topology.reset();
        [[fallthrough]];
    case Stage::placement:
        placement.reset();
        [[fallthrough]];
    case Stage::paths:
        paths.reset();
        [[fallthrough]];
    case Stage::scenarios:
        grouping.reset();
        [[fallthrough]];
    case Stage::programs:
        programs.reset();
        [[fallthrough]];
    case Stage::sim:
        sim.reset();
        sim_trace.clear();
        [[fallthrough]];
    case Stage::cost:
        cost.reset();
    }
}

namespace
{

void stage_graph(const PipelineConfig &c, PipelineState &s)
{
    if (c.graph_file)
    {
        s.graph = load_cluster_graph(*c.graph_file);
        return;
    }
    SynthesisOptions opts;
    opts.max_directed_degree = c.max_degree;
    s.graph = generate_synthetic(c.clusters, c.edges, c.seed, opts);
}

void stage_topology(const PipelineConfig &c, PipelineState &s)
{
    const std::size_t tiles = c.tiles.value_or(std::max<std::size_t>(2, s.graph->cluster_count()));
    s.topology = build_topology(tiles, c.lanes, c.lane_width_bits);
}

void stage_placement(const PipelineConfig &c, PipelineState &s)
{
    auto p = place_greedy(*s.graph, *s.topology);
    if (c.anneal)
    {
        AnnealParams params;
        params.cooling = c.anneal_cooling;
        params.iterations = c.anneal_iterations;
        p = place_anneal(*s.graph, *s.topology, p, derive_seed(c.seed, kAnnealStream), params);
    }
    s.placement = std::move(p);
}

void stage_scenarios(const PipelineConfig &c, PipelineState &s, const PipelineLog &log)
{
    const CliqueOptions clique{c.clique_budget};
    GroupingSummary summary;
    summary.lower_bound = scenario_lower_bound(*s.graph);
    auto greedy = group_greedy(*s.topology, *s.paths);
    auto maxc = group_max_clique(*s.topology, *s.paths, clique, log);
    summary.greedy_count = greedy.scenarios.size();
    summary.max_clique_count = maxc.scenarios.size();
    switch (c.algorithm)
    {
    case GroupingAlgorithm::greedy:
        summary.selected = std::move(greedy);
        break;
    case GroupingAlgorithm::max_clique:
        summary.selected = std::move(maxc);
        break;
    case GroupingAlgorithm::exact:
        summary.selected = optimal_grouping_exact(*s.topology, *s.paths);
        break;
    }
    summary.selected.scenarios.validate(*s.paths);
    s.grouping = std::move(summary);
}

void stage_programs(const PipelineConfig &c, PipelineState &s)
{
    const auto &set = s.grouping->selected.scenarios;
    const auto regions = partition_regions(*s.topology, c.controllers.value_or(default_controller_count(*s.topology)));
    auto schedule = build_schedule(set.size(), c.frame_order);
    schedule.conditional = c.conditional;
    s.programs = encode_scenarios(set, *s.topology, regions, schedule);
    if (decode_programs(*s.topology, *s.programs) != set.switch_vectors() && set.size() > 0)
    {
        throw InvariantViolation("controller programs do not reproduce the scenario switch vectors");
    }
}

void stage_sim(const PipelineConfig &c, PipelineState &s)
{
    std::ostringstream trace;
    SimOptions opts;
    if (c.trace)
    {
        opts.trace = &trace;
    }
    opts.raised_flags.insert(c.raised_flags.begin(), c.raised_flags.end());
    s.sim = run_frames(*s.topology, *s.programs, *s.paths, s.grouping->selected.scenarios.groups(), c.frames, opts);
    s.sim_trace = trace.str();
}

void stage_cost(PipelineState &s)
{
    auto report = evaluate_cost(reference_model(), *s.topology, control_memory_bits(*s.programs), s.programs->size());
    report.compressed_scenario_bits = compressed_scenario_bits(s.grouping->selected.scenarios);
    s.cost = report;
}

void check_delivery(const PipelineState &s)
{
    const auto &r = *s.sim;
    if (r.collisions > 0 || r.misroutes > 0)
    {
        throw InvariantViolation("simulation saw " + std::to_string(r.collisions) + " collisions and " +
                                 std::to_string(r.misroutes) + " misroutes");
    }
    for (std::size_t e = 0; e < r.delivered.size(); ++e)
    {
        if (r.delivered[e] < r.frames)
        {
            throw InvariantViolation("connection " + std::to_string(e) + " delivered " +
                                     std::to_string(r.delivered[e]) + " times in " + std::to_string(r.frames) +
                                     " frames");
        }
    }
}

} // namespace

void run_stage(Stage stage, const PipelineConfig &config, PipelineState &state, const PipelineLog &log)
{
    if (state.depth() < index_of(stage))
    {
        throw StageError(stage, "requires stage '" + std::string(to_string(static_cast<Stage>(state.depth()))) +
                                    "' to be present");
    }
    state.truncate(stage);
    try
    {
        switch (stage)
        {
        case Stage::graph:
            stage_graph(config, state);
            break;
        case Stage::topology:
            stage_topology(config, state);
            break;
        case Stage::placement:
            stage_placement(config, state);
            break;
        case Stage::paths:
            state.paths = extract_paths(*state.graph, *state.topology, *state.placement);
            break;
        case Stage::scenarios:
            stage_scenarios(config, state, log);
            break;
        case Stage::programs:
            stage_programs(config, state);
            break;
        case Stage::sim:
            stage_sim(config, state);
            break;
        case Stage::cost:
            stage_cost(state);
            break;
        }
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(std::string(to_string(stage)) + ": " + e.what());
    }
    catch (const InvariantViolation &e)
    {
        throw InvariantViolation(std::string(to_string(stage)) + ": " + e.what());
    }
    catch (const StageError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw StageError(stage, e.what());
    }
}

void run_pipeline(const PipelineConfig &config, PipelineState &state, Stage first, Stage last,
                  const std::optional<fs::path> &run_dir, const PipelineLog &log)
{
    if (run_dir)
    {
        fs::create_directories(*run_dir);
        remove_stages_from(*run_dir, first);
    }
    for (std::size_t i = index_of(first); i <= index_of(last); ++i)
    {
        const auto stage = static_cast<Stage>(i);
        run_stage(stage, config, state, log);
        if (run_dir)
        {
            save_stage(*run_dir, state, stage);
        }
        if (log)
        {
            log("stage " + std::string(to_string(stage)) + " done");
        }
        if (stage == Stage::sim)
        {
            check_delivery(state);
        }
    }
}

namespace
{

std::string scenarios_document(const GroupingSummary &g)
{
    nlohmann::ordered_json head;
    head["algorithm"] = std::string(to_string(g.selected.algorithm));
    head["scenario_count"] = g.selected.scenarios.size();
    head["lower_bound"] = g.lower_bound;
    head["scenarios_greedy"] = g.greedy_count;
    head["scenarios_maxclique"] = g.max_clique_count;
    head["exact_cliques"] = g.selected.stats.exact_cliques;
    head["budget_fallbacks"] = g.selected.stats.budget_fallbacks;
    std::string head_text = head.dump(2);
    head_text.pop_back(); // closing brace
    while (!head_text.empty() && (head_text.back() == '\n' || head_text.back() == ' '))
    {
        head_text.pop_back();
    }
    const std::string body = to_json(g.selected.scenarios);
    // body starts with "{\n"
    return head_text + ",\n" + body.substr(2);
}

fs::path program_file(const fs::path &dir, std::size_t k)
{
    return dir / "ctrl" / ("controller_" + std::to_string(k) + ".ctrl");
}

} // namespace

void remove_stages_from(const fs::path &run_dir, Stage stage)
{
    for (std::size_t i = index_of(stage); i < kStageCount; ++i)
    {
        fs::remove_all(run_dir / kStageFiles[i]);
    }
    if (index_of(stage) <= index_of(Stage::sim))
    {
        fs::remove(run_dir / "sim_trace.log");
    }
}

void save_stage(const fs::path &run_dir, const PipelineState &s, Stage stage)
{
    if (!s.has(stage))
    {
        throw StageError(stage, "nothing to save");
    }
    const fs::path file = run_dir / kStageFiles[index_of(stage)];
    switch (stage)
    {
    case Stage::graph:
        write_file(file, to_json(*s.graph));
        break;
    case Stage::topology:
        write_file(file, to_json(*s.topology));
        break;
    case Stage::placement:
        write_file(file, to_json(*s.placement));
        break;
    case Stage::paths:
        write_file(file, to_json(std::span<const RoutedPath>(*s.paths)));
        break;
    case Stage::scenarios:
        write_file(file, scenarios_document(*s.grouping));
        break;
    case Stage::programs:
        fs::remove_all(file);
        fs::create_directories(file);
        for (std::size_t k = 0; k < s.programs->size(); ++k)
        {
            write_file(program_file(run_dir, k), write_program((*s.programs)[k]));
        }
        break;
    case Stage::sim:
        write_file(file, to_json(*s.sim));
        if (!s.sim_trace.empty())
        {
            write_file(run_dir / "sim_trace.log", s.sim_trace);
        }
        break;
    case Stage::cost:
        write_file(file, to_json(*s.cost));
        break;
    }
}

PipelineState load_state(const fs::path &run_dir)
{
    PipelineState s;
    auto present = [&](Stage st) { return fs::exists(run_dir / kStageFiles[index_of(st)]); };
    auto file = [&](Stage st) { return read_file(run_dir / kStageFiles[index_of(st)]); };

    if (!present(Stage::graph))
    {
        return s;
    }
    s.graph = parse_cluster_graph(file(Stage::graph));
    if (!present(Stage::topology))
    {
        return s;
    }
    s.topology = parse_topology(file(Stage::topology));
    if (!present(Stage::placement))
    {
        return s;
    }
    s.placement = parse_placement(file(Stage::placement), s.topology->tiles());
    if (!present(Stage::paths))
    {
        return s;
    }
    s.paths = parse_paths(file(Stage::paths), *s.topology);
    if (!present(Stage::scenarios))
    {
        return s;
    }
    {
        const std::string text = file(Stage::scenarios);
        GroupingSummary g;
        g.selected.scenarios = parse_scenarios(text, *s.topology, *s.paths);
        try
        {
            const auto j = nlohmann::json::parse(text);
            g.selected.algorithm = parse_grouping_algorithm(j.at("algorithm").get<std::string>());
            g.lower_bound = j.at("lower_bound").get<std::size_t>();
            g.greedy_count = j.at("scenarios_greedy").get<std::size_t>();
            g.max_clique_count = j.at("scenarios_maxclique").get<std::size_t>();
            g.selected.stats.exact_cliques = j.at("exact_cliques").get<bool>();
            g.selected.stats.budget_fallbacks = j.at("budget_fallbacks").get<std::size_t>();
        }
        catch (const nlohmann::json::exception &e)
        {
            throw FormatError("scenarios.json", e.what());
        }
        s.grouping = std::move(g);
    }
    if (!present(Stage::programs))
    {
        return s;
    }
    {
        std::vector<ControllerProgram> programs;
        for (std::size_t k = 0; fs::exists(program_file(run_dir, k)); ++k)
        {
            programs.push_back(parse_program(read_file(program_file(run_dir, k))));
        }
        s.programs = std::move(programs);
    }
    // Simulation and cost reports are outputs, not inputs of later stages;
    // they are regenerated rather than parsed back.
    return s;
}

std::string emit_report(const PipelineState &s, ReportFormat format)
{
    if (!s.graph)
    {
        throw StageError(Stage::graph, "report needs at least a cluster graph");
    }
    nlohmann::ordered_json j;
    const auto m = graph_metrics(*s.graph);
    j["graph"] = {{"name", s.graph->name()},
                  {"clusters", m.clusters},
                  {"connections", m.edges},
                  {"avg_degree", m.avg_degree},
                  {"density", m.density},
                  {"largest_degree", m.largest_directed_degree()},
                  {"max_total_degree", m.max_total_degree}};
    if (s.topology)
    {
        j["topology"] = {{"tiles", s.topology->tiles()},       {"lanes", s.topology->lanes()},
                         {"columns", s.topology->columns()},   {"switches", s.topology->switch_count()},
                         {"segments", s.topology->segment_count()}, {"rungs", s.topology->rung_count()}};
    }
    if (s.placement && s.topology)
    {
        j["placement"] = {{"cost", placement_cost(*s.graph, *s.topology, *s.placement)}};
    }
    if (s.grouping)
    {
        const auto &g = *s.grouping;
        j["scenarios"] = {{"algorithm", std::string(to_string(g.selected.algorithm))},
                          {"scenarios", g.selected.scenarios.size()},
                          {"scenarios_greedy", g.greedy_count},
                          {"scenarios_maxclique", g.max_clique_count},
                          {"lower_bound", g.lower_bound},
                          {"exact_cliques", g.selected.stats.exact_cliques}};
    }
    if (s.programs)
    {
        j["controllers"] = {{"count", s.programs->size()},
                            {"memory_bits", control_memory_bits(*s.programs)},
                            {"frame_length", s.programs->empty() ? 0 : s.programs->front().schedule.frame_length()}};
    }
    if (s.sim)
    {
        j["sim"] = {{"frames", s.sim->frames},         {"steps", s.sim->steps},
                    {"frame_latency", s.sim->frame_length}, {"collisions", s.sim->collisions},
                    {"misroutes", s.sim->misroutes},   {"energy", s.sim->energy}};
    }
    if (s.cost)
    {
        j["cost"] = {{"data_plane_units", s.cost->data_plane_units},
                     {"control_plane_units", s.cost->control_plane_units},
                     {"control_fraction", s.cost->control_fraction},
                     {"scenario_bits", s.cost->scenario_bits},
                     {"compressed_scenario_bits", s.cost->compressed_scenario_bits}};
    }
    if (format == ReportFormat::json)
    {
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    for (const auto &[section, fields] : j.items())
    {
        out << '[' << section << "]\n";
        for (const auto &[key, value] : fields.items())
        {
            out << "  " << key;
            for (std::size_t pad = key.size(); pad < 26; ++pad)
            {
                out << ' ';
            }
            out << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
        }
    }
    return out.str();
}

} // namespace ladderbus
