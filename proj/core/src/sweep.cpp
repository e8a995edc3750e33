#include "ladderbus/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ladderbus/appgraph.hpp"
#include "ladderbus/controlgen.hpp"
#include "ladderbus/error.hpp"
#include "ladderbus/placement.hpp"
#include "ladderbus/rng.hpp"
#include "ladderbus/routing.hpp"
#include "ladderbus/topology.hpp"

namespace ladderbus
{

namespace
{

constexpr std::uint64_t kAnnealStream = 2;

struct Instance
{
    std::size_t n;
    double density;
    std::uint64_t seed;
};

std::string describe(const Instance &in)
{
    std::string s = "n=" + std::to_string(in.n) + " density=";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, in.density);
    s.append(buf, r.ptr);
    return s + " seed=" + std::to_string(in.seed);
}

std::vector<SweepRow> run_instance(const Instance &in, const SweepConfig &config, const CostModel &model,
                                   const GroupingLog &log)
{
    const auto graph = generate_synthetic(in.n, edges_for_density(in.n, in.density), in.seed);
    const auto topo = build_topology(in.n);
    const auto placed =
        place_anneal(graph, topo, place_greedy(graph, topo), derive_seed(in.seed, kAnnealStream), AnnealParams{});
    const auto paths = extract_paths(graph, topo, placed);
    const std::size_t bound = scenario_lower_bound(graph);
    const std::size_t controllers = default_controller_count(topo);

    std::vector<SweepRow> rows;
    for (auto algorithm : config.algorithms)
    {
        const auto grouping = group_paths(algorithm, topo, paths, config.clique,
                                            [&](const std::string &m) { log(describe(in) + ": " + m); });
        const std::size_t s = grouping.scenarios.size();
        SweepRow row;
        row.n = in.n;
        row.density = in.density;
        row.seed = in.seed;
        row.algorithm = algorithm;
        row.connections = graph.edge_count();
        row.scenarios = s;
        row.lower_bound = bound;
        row.ctrl_bits = scenario_memory_bits(topo, s);
        row.ctrl_frac = evaluate_cost(model, topo, row.ctrl_bits, controllers).control_fraction;
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::size_t edges_for_density(std::size_t n, double density)
{
    if (!(density >= 0.0 && density <= 1.0))
    {
        throw ConfigError("density must lie in [0, 1]");
    }
    return static_cast<std::size_t>(std::llround(density * static_cast<double>(n) * static_cast<double>(n - 1)));
}

std::vector<SweepRow> scaling_sweep(const SweepConfig &config, const std::function<void(const std::string &)> &log)
{
    if (config.algorithms.empty())
    {
        throw ConfigError("sweep needs at least one algorithm");
    }
    const CostModel &model = config.model.calibrated ? config.model : reference_model();

    std::vector<Instance> instances;
    for (auto n : config.cluster_sizes)
    {
        for (auto d : config.densities)
        {
            for (auto seed : config.seeds)
            {
                instances.push_back({n, d, seed});
            }
        }
    }

    std::vector<std::vector<SweepRow>> results(instances.size());
    std::vector<std::exception_ptr> errors(instances.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    const GroupingLog locked_log = [&](const std::string &m) {
        if (log)
        {
            std::lock_guard lock(log_mutex);
            log(m);
        }
    };

    auto worker = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++)
        {
            try
            {
                results[i] = run_instance(instances[i], config, model, locked_log);
                locked_log("done " + describe(instances[i]));
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, instances.size()));
    if (workers == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
        {
            pool.emplace_back(worker);
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < instances.size(); ++i)
    {
        if (errors[i])
        {
            try
            {
                std::rethrow_exception(errors[i]);
            }
            catch (const ConfigError &e)
            {
                throw ConfigError(describe(instances[i]) + ": " + e.what());
            }
            catch (const std::exception &e)
            {
                throw Error(describe(instances[i]) + ": " + e.what());
            }
        }
        rows.insert(rows.end(), results[i].begin(), results[i].end());
    }
    return rows;
}

namespace
{

template <typename T> void append_number(std::string &out, T value)
{
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, r.ptr);
}

template <typename T> T parse_number(std::string_view field, std::size_t line)
{
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
    {
        throw FormatError("line " + std::to_string(line), "bad number '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

std::string sweep_csv(std::span<const SweepRow> rows)
{
    std::string out(kSweepHeader);
    out += '\n';
    for (const auto &r : rows)
    {
        append_number(out, r.n);
        out += ',';
        append_number(out, r.density);
        out += ',';
        append_number(out, r.seed);
        out += ',';
        out += to_string(r.algorithm);
        out += ',';
        append_number(out, r.connections);
        out += ',';
        append_number(out, r.scenarios);
        out += ',';
        append_number(out, r.lower_bound);
        out += ',';
        append_number(out, r.ctrl_bits);
        out += ',';
        append_number(out, r.ctrl_frac);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text)
{
    std::vector<SweepRow> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty())
    {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.remove_suffix(1);
        }
        if (line.empty())
        {
            continue;
        }
        if (!header_seen)
        {
            if (line != kSweepHeader)
            {
                throw FormatError("line 1", "expected header '" + std::string(kSweepHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> f;
        for (std::size_t start = 0;;)
        {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos)
            {
                break;
            }
            start = comma + 1;
        }
        if (f.size() != 9)
        {
            throw FormatError("line " + std::to_string(line_no), "expected 9 fields");
        }
        SweepRow r;
        r.n = parse_number<std::size_t>(f[0], line_no);
        r.density = parse_number<double>(f[1], line_no);
        r.seed = parse_number<std::uint64_t>(f[2], line_no);
        try
        {
            r.algorithm = parse_grouping_algorithm(f[3]);
        }
        catch (const Error &e)
        {
            throw FormatError("line " + std::to_string(line_no), e.what());
        }
        r.connections = parse_number<std::size_t>(f[4], line_no);
        r.scenarios = parse_number<std::size_t>(f[5], line_no);
        r.lower_bound = parse_number<std::size_t>(f[6], line_no);
        r.ctrl_bits = parse_number<std::size_t>(f[7], line_no);
        r.ctrl_frac = parse_number<double>(f[8], line_no);
        rows.push_back(r);
    }
    if (!header_seen)
    {
        throw FormatError("line 1", "missing header");
    }
    return rows;
}

} // namespace ladderbus
