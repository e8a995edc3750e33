#ifndef LADDERBUS_SWEEP_HPP
#define LADDERBUS_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ladderbus/clique.hpp"
#include "ladderbus/costmodel.hpp"
#include "ladderbus/grouping.hpp"

namespace ladderbus
{

struct SweepConfig
{
    std::vector<std::size_t> cluster_sizes;
    std::vector<double> densities;
    std::vector<std::uint64_t> seeds;
    std::vector<GroupingAlgorithm> algorithms{GroupingAlgorithm::greedy, GroupingAlgorithm::max_clique};
    std::size_t workers{1};
    CliqueOptions clique;
    /// Defaults to reference_model() when left uncalibrated.
    CostModel model;
};

struct SweepRow
{
    std::size_t n{0};
    double density{0.0};
    std::uint64_t seed{0};
    GroupingAlgorithm algorithm{GroupingAlgorithm::greedy};
    std::size_t connections{0};
    std::size_t scenarios{0};
    std::size_t lower_bound{0};
    std::size_t ctrl_bits{0};
    double ctrl_frac{0.0};
};

/// Edge count for a target density: round(density * n * (n - 1)).
std::size_t edges_for_density(std::size_t n, double density);

/// One row per (size, density, seed, algorithm), in that nesting order.
/// Instances fan out over `workers` threads; results do not depend on it.
std::vector<SweepRow> scaling_sweep(const SweepConfig &config,
                                    const std::function<void(const std::string &)> &log = {});

inline constexpr std::string_view kSweepHeader = "n,density,seed,algo,E,scenarios,lower_bound,ctrl_bits,ctrl_frac";

std::string sweep_csv(std::span<const SweepRow> rows);
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

} // namespace ladderbus

#endif // LADDERBUS_SWEEP_HPP
