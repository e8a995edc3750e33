// ladderbus: command-line driver for the ladder bus mapping flow.
//
// Stage commands (place, route, group, emit-ctrl, sim, cost) work on a run
// directory and fill in any missing earlier stages first. `run` executes
// the whole flow. Exit status: 0 ok, 2 configuration or input error,
// 3 stage failure, 4 invariant violation (e.g. a simulated collision).

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/costmodel.hpp"
#include "ladderbus/pipeline.hpp"
#include "ladderbus/sweep.hpp"

namespace fs = std::filesystem;
using namespace ladderbus;

namespace
{

constexpr int kConfigExit = 2;
constexpr int kStageExit = 3;
constexpr int kInvariantExit = 4;

bool g_verbose = false;

void log_line(const std::string &m)
{
    std::cerr << "ladderbus: " << m << '\n';
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
    {
        throw ConfigError("cannot read " + p.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_out(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigError("cannot write " + path);
    }
    out << text;
}

// "a:b" -> (a, b)
std::pair<std::size_t, std::size_t> parse_pair(const std::string &s, const char *what)
{
    const auto colon = s.find(':');
    std::size_t a = 0, b = 0;
    if (colon != std::string::npos)
    {
        auto r1 = std::from_chars(s.data(), s.data() + colon, a);
        auto r2 = std::from_chars(s.data() + colon + 1, s.data() + s.size(), b);
        if (r1.ec == std::errc{} && r1.ptr == s.data() + colon && r2.ec == std::errc{} &&
            r2.ptr == s.data() + s.size())
        {
            return {a, b};
        }
    }
    throw ConfigError(std::string(what) + " expects A:B, got '" + s + "'");
}

struct Overrides
{
    std::string config;
    std::string graph;
    std::optional<std::size_t> clusters, edges, max_degree, tiles, lanes, width, anneal_iterations;
    std::optional<std::uint64_t> seed;
    bool no_anneal{false};
    std::string algorithm;
    std::optional<std::int64_t> budget_ms;
    std::optional<std::size_t> controllers, frames;
    std::vector<std::size_t> frame_order;
    std::string conditional;
    std::vector<std::string> raise;
    bool trace{false};
};

void add_pipeline_options(CLI::App *app, Overrides &o)
{
    app->add_option("-c,--config", o.config, "JSON configuration file");
    app->add_option("-g,--graph", o.graph, "cluster graph file (instead of synthesis)");
    app->add_option("-n,--clusters", o.clusters, "synthetic cluster count");
    app->add_option("-e,--edges", o.edges, "synthetic connection count");
    app->add_option("--max-degree", o.max_degree, "cap on synthetic in/out degree");
    app->add_option("-s,--seed", o.seed, "root seed");
    app->add_option("--tiles", o.tiles);
    app->add_option("--lanes", o.lanes);
    app->add_option("--lane-width", o.width, "lane width in bits");
    app->add_flag("--no-anneal", o.no_anneal, "keep the greedy placement");
    app->add_option("--anneal-iterations", o.anneal_iterations);
    app->add_option("-a,--algorithm", o.algorithm, "greedy, maxclique or exact");
    app->add_option("--clique-budget-ms", o.budget_ms, "time budget per clique search");
    app->add_option("--controllers", o.controllers);
    app->add_option("--frame-order", o.frame_order, "scenario order within a frame")->delimiter(',');
    app->add_option("--conditional", o.conditional, "FLAG:SCENARIO conditional end-of-frame step");
    app->add_option("--raise", o.raise, "FRAME:FLAG raised during simulation");
    app->add_option("--frames", o.frames, "frames to simulate");
    app->add_flag("--trace", o.trace, "write sim_trace.log");
}

void apply(const Overrides &o, PipelineConfig &c)
{
    if (!o.graph.empty())
    {
        c.graph_file = fs::absolute(o.graph).lexically_normal();
    }
    if (o.clusters)
    {
        c.clusters = *o.clusters;
        c.graph_file.reset();
    }
    if (o.edges)
    {
        c.edges = *o.edges;
        c.graph_file.reset();
    }
    if (o.max_degree)
    {
        c.max_degree = o.max_degree;
    }
    if (o.seed)
    {
        c.seed = *o.seed;
    }
    if (o.tiles)
    {
        c.tiles = o.tiles;
    }
    if (o.lanes)
    {
        c.lanes = o.lanes;
    }
    if (o.width)
    {
        c.lane_width_bits = *o.width;
    }
    if (o.no_anneal)
    {
        c.anneal = false;
    }
    if (o.anneal_iterations)
    {
        c.anneal_iterations = o.anneal_iterations;
    }
    if (!o.algorithm.empty())
    {
        c.algorithm = parse_grouping_algorithm(o.algorithm);
    }
    if (o.budget_ms)
    {
        c.clique_budget = std::chrono::milliseconds(*o.budget_ms);
    }
    if (o.controllers)
    {
        c.controllers = o.controllers;
    }
    if (!o.frame_order.empty())
    {
        c.frame_order = o.frame_order;
    }
    if (!o.conditional.empty())
    {
        const auto [flag, scenario] = parse_pair(o.conditional, "--conditional");
        c.conditional = ConditionalEntry{flag, scenario};
    }
    for (const auto &r : o.raise)
    {
        c.raised_flags.push_back(parse_pair(r, "--raise"));
    }
    if (o.frames)
    {
        c.frames = *o.frames;
    }
    if (o.trace)
    {
        c.trace = true;
    }
}

PipelineConfig resolve_config(const Overrides &o, const std::optional<fs::path> &run_dir)
{
    PipelineConfig c;
    if (!o.config.empty())
    {
        c = load_config(o.config);
    }
    else if (run_dir && fs::exists(*run_dir / "config.json"))
    {
        c = load_config(*run_dir / "config.json");
    }
    apply(o, c);
    return c;
}

ReportFormat parse_format(const std::string &f)
{
    if (f == "table")
    {
        return ReportFormat::table;
    }
    if (f == "json")
    {
        return ReportFormat::json;
    }
    throw ConfigError("unknown format '" + f + "'");
}

// Brings `run_dir` up to `last`, reusing persisted stages when the
// configuration is unchanged.
PipelineState run_to(Stage last, const Overrides &o, const fs::path &run_dir)
{
    const PipelineConfig config = resolve_config(o, run_dir);
    const std::string config_text = to_json(config);
    fs::create_directories(run_dir);

    PipelineState state;
    const fs::path config_path = run_dir / "config.json";
    if (fs::exists(config_path) && slurp(config_path) == config_text)
    {
        state = load_state(run_dir);
    }
    else
    {
        remove_stages_from(run_dir, Stage::graph);
        write_out(config_path.string(), config_text);
    }

    const auto depth = state.depth();
    const auto first = std::min(static_cast<Stage>(std::min(depth, kStageCount - 1)), last);
    run_pipeline(config, state, first, last, run_dir, g_verbose ? PipelineLog(log_line) : PipelineLog([](const std::string &m) {
        if (m.rfind("stage ", 0) != 0)
        {
            log_line(m);
        }
    }));
    return state;
}

std::vector<std::uint64_t> expand_seeds(const std::vector<std::string> &specs)
{
    std::vector<std::uint64_t> seeds;
    for (const auto &s : specs)
    {
        const auto dash = s.find('-');
        std::uint64_t a = 0, b = 0;
        auto ok = [](std::from_chars_result r, const char *end) { return r.ec == std::errc{} && r.ptr == end; };
        if (dash == std::string::npos)
        {
            if (!ok(std::from_chars(s.data(), s.data() + s.size(), a), s.data() + s.size()))
            {
                throw ConfigError("bad seed '" + s + "'");
            }
            seeds.push_back(a);
            continue;
        }
        if (!ok(std::from_chars(s.data(), s.data() + dash, a), s.data() + dash) ||
            !ok(std::from_chars(s.data() + dash + 1, s.data() + s.size(), b), s.data() + s.size()) || b < a)
        {
            throw ConfigError("bad seed range '" + s + "'");
        }
        for (auto v = a; v <= b; ++v)
        {
            seeds.push_back(v);
        }
    }
    return seeds;
}

std::string metrics_text(const ClusterGraph &g, ReportFormat format)
{
    const auto m = graph_metrics(g);
    std::ostringstream out;
    if (format == ReportFormat::json)
    {
        out << "{\n  \"name\": \"" << g.name() << "\",\n  \"clusters\": " << m.clusters
            << ",\n  \"connections\": " << m.edges << ",\n  \"avg_degree\": " << m.avg_degree
            << ",\n  \"density\": " << m.density << ",\n  \"largest_degree\": " << m.largest_directed_degree()
            << ",\n  \"max_total_degree\": " << m.max_total_degree << "\n}\n";
    }
    else
    {
        out << "name              " << g.name() << '\n'
            << "clusters          " << m.clusters << '\n'
            << "connections       " << m.edges << '\n'
            << "avg_degree        " << m.avg_degree << '\n'
            << "density           " << m.density << '\n'
            << "largest_degree    " << m.largest_directed_degree() << '\n'
            << "max_total_degree  " << m.max_total_degree << '\n';
    }
    return out.str();
}

std::string calibration_text()
{
    const auto &model = reference_model();
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << "data  = " << model.data.per_tile_lane << " * tiles*lanes + " << model.data.per_segment_bit
        << " * segments*width + " << model.data.fixed << '\n';
    out << "ctrl  = " << model.control.per_memory_bit << " * bits + " << model.control.per_controller
        << " * controllers\n";
    out << "app            D-meas   D-pred  resid%  C-frac%\n";
    double sum = 0.0;
    for (const auto &obs : reference_observations())
    {
        const auto r = predict(model, obs);
        const double resid = 100.0 * (r.data_plane_units - obs.data_plane_units) / obs.data_plane_units;
        sum += r.control_fraction;
        char line[128];
        std::snprintf(line, sizeof line, "%-14s %7.0f %8.1f %7.2f %8.2f\n", obs.app.c_str(), obs.data_plane_units,
                      r.data_plane_units, resid, 100.0 * r.control_fraction);
        out << line;
    }
    char line[64];
    std::snprintf(line, sizeof line, "mean control fraction %.2f%%\n",
                  100.0 * sum / static_cast<double>(reference_observations().size()));
    out << line;
    return out.str();
}

} // namespace

int main(int argc, char **argv)
{
    std::locale::global(std::locale::classic());
    CLI::App app{"ladderbus: map cluster graphs onto a segmented ladder bus"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", g_verbose, "log progress to stderr");

    // gen
    auto *gen = app.add_subcommand("gen", "generate a synthetic cluster graph");
    std::size_t gen_n = 40, gen_e = 160;
    std::uint64_t gen_seed = 1;
    std::optional<std::size_t> gen_cap;
    std::string gen_name, gen_out;
    gen->add_option("-n,--clusters", gen_n)->capture_default_str();
    gen->add_option("-e,--edges", gen_e)->capture_default_str();
    gen->add_option("-s,--seed", gen_seed)->capture_default_str();
    gen->add_option("--max-degree", gen_cap, "cap on in/out degree");
    gen->add_option("--name", gen_name);
    gen->add_option("-o,--output", gen_out, "output file (default stdout)");

    // metrics
    auto *metrics = app.add_subcommand("metrics", "size and degree metrics of a cluster graph");
    std::string metrics_in, format = "table";
    metrics->add_option("graph", metrics_in)->required();
    metrics->add_option("-f,--format", format, "table or json");

    // stage commands
    Overrides ov;
    std::string run_dir;
    struct StageCommand
    {
        const char *name;
        const char *help;
        Stage stage;
        CLI::App *app{nullptr};
    };
    std::vector<StageCommand> stage_commands{
        {"place", "place clusters on tiles", Stage::placement},
        {"route", "route connections onto lanes", Stage::paths},
        {"group", "group paths into switching scenarios", Stage::scenarios},
        {"emit-ctrl", "generate controller programs", Stage::programs},
        {"sim", "simulate the controller programs", Stage::sim},
        {"cost", "evaluate data and control plane cost", Stage::cost},
        {"run", "run the full flow", Stage::cost},
    };
    bool reference = false;
    for (auto &sc : stage_commands)
    {
        sc.app = app.add_subcommand(sc.name, sc.help);
        sc.app->add_option("-d,--run-dir", run_dir, "run directory")->required(std::string(sc.name) != "cost");
        sc.app->add_option("-f,--format", format, "report format: table or json");
        add_pipeline_options(sc.app, ov);
    }
    stage_commands[5].app->add_flag("--calibration", reference, "print the reference calibration and exit");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "scenario scaling sweep over synthetic graphs");
    SweepConfig sweep_cfg;
    std::vector<std::string> sweep_seeds{"1-5"};
    std::vector<std::string> sweep_algos{"greedy", "maxclique"};
    std::int64_t sweep_budget = 10'000;
    std::string sweep_out;
    sweep->add_option("--sizes", sweep_cfg.cluster_sizes, "cluster counts")->delimiter(',')->required();
    sweep->add_option("--densities", sweep_cfg.densities, "connection densities")->delimiter(',')->required();
    sweep->add_option("--seeds", sweep_seeds, "seeds or ranges such as 1-5")->delimiter(',');
    sweep->add_option("--algorithms", sweep_algos)->delimiter(',');
    sweep->add_option("-j,--workers", sweep_cfg.workers)->capture_default_str();
    sweep->add_option("--clique-budget-ms", sweep_budget)->capture_default_str();
    sweep->add_option("-o,--output", sweep_out, "CSV output (default stdout)");

    // report
    auto *report = app.add_subcommand("report", "summarise a run directory or a sweep table");
    std::string report_dir, report_sweep;
    auto *rd = report->add_option("-d,--run-dir", report_dir);
    report->add_option("--sweep", report_sweep, "re-emit a sweep CSV after validating it")->excludes(rd);
    report->add_option("-f,--format", format, "table or json");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigExit;
    }

    try
    {
        if (*gen)
        {
            SynthesisOptions opts;
            opts.max_directed_degree = gen_cap;
            if (!gen_name.empty())
            {
                opts.name = gen_name;
            }
            write_out(gen_out, to_json(generate_synthetic(gen_n, gen_e, gen_seed, opts)));
            return 0;
        }
        if (*metrics)
        {
            std::cout << metrics_text(load_cluster_graph(metrics_in), parse_format(format));
            return 0;
        }
        for (const auto &sc : stage_commands)
        {
            if (!*sc.app)
            {
                continue;
            }
            if (reference)
            {
                std::cout << calibration_text();
                return 0;
            }
            if (run_dir.empty())
            {
                throw ConfigError(std::string(sc.name) + " needs --run-dir");
            }
            const auto fmt = parse_format(format);
            const auto state = run_to(sc.stage, ov, run_dir);
            std::cout << emit_report(state, fmt);
            return 0;
        }
        if (*sweep)
        {
            sweep_cfg.seeds = expand_seeds(sweep_seeds);
            sweep_cfg.algorithms.clear();
            for (const auto &a : sweep_algos)
            {
                sweep_cfg.algorithms.push_back(parse_grouping_algorithm(a));
            }
            sweep_cfg.clique.budget = std::chrono::milliseconds(sweep_budget);
            const auto rows = scaling_sweep(sweep_cfg, [](const std::string &m) {
                if (g_verbose || m.rfind("done ", 0) != 0)
                {
                    log_line(m);
                }
            });
            write_out(sweep_out, sweep_csv(rows));
            return 0;
        }
        if (*report)
        {
            if (!report_sweep.empty())
            {
                std::cout << sweep_csv(parse_sweep_csv(slurp(report_sweep)));
                return 0;
            }
            if (report_dir.empty())
            {
                throw ConfigError("report needs --run-dir or --sweep");
            }
            std::cout << emit_report(load_state(report_dir), parse_format(format));
            return 0;
        }
    }
    catch (const InvariantViolation &e)
    {
        std::cerr << "ladderbus: invariant violation: " << e.what() << '\n';
        return kInvariantExit;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "ladderbus: " << e.what() << '\n';
        return kConfigExit;
    }
    catch (const FormatError &e)
    {
        std::cerr << "ladderbus: " << e.what() << '\n';
        return kConfigExit;
    }
    catch (const StageError &e)
    {
        std::cerr << "ladderbus: stage " << e.what() << '\n';
        return kStageExit;
    }
    catch (const std::exception &e)
    {
        std::cerr << "ladderbus: " << e.what() << '\n';
        return kStageExit;
    }
    return 0;
}
