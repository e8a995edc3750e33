#include "ladderbus/costmodel.hpp"

#include <array>
#include <limits>

#include <Eigen/Dense>
#include <json.hpp>

#include "ladderbus/controlgen.hpp"
#include "ladderbus/error.hpp"

namespace ladderbus
{

namespace
{

// Clusters, lanes, scenarios, data-plane CLBs, control-plane CLBs.
const std::array<UtilizationObservation, 5> kReference{{
    {"mnist", 11, 3, 8, 3277.0, 73.0, 32},
    {"LeNet", 14, 4, 13, 3503.0, 204.0, 32},
    {"fashion-mnist", 24, 5, 24, 5722.0, 543.0, 32},
    {"cifar10", 26, 5, 23, 6416.0, 548.0, 32},
    {"emnist", 30, 5, 26, 7247.0, 645.0, 32},
}};

std::array<double, 3> data_features(const LadderTopology &topo)
{
    return {static_cast<double>(topo.tiles() * topo.lanes()),
            static_cast<double>(topo.segment_count() * topo.lane_width_bits()), 1.0};
}

std::array<double, 2> control_features(std::size_t bits, std::size_t controllers)
{
    return {static_cast<double>(bits), static_cast<double>(controllers)};
}

void require_calibrated(const CostModel &model)
{
    if (!model.calibrated)
    {
        throw ConfigError("cost model is not calibrated");
    }
}

} // namespace

std::span<const UtilizationObservation> reference_observations()
{
    return kReference;
}

std::vector<double> nonnegative_least_squares(std::span<const double> a, std::size_t rows, std::size_t cols,
                                              std::span<const double> b)
{
    if (cols == 0 || cols > 16 || a.size() != rows * cols || b.size() != rows)
    {
        throw ConfigError("nonnegative_least_squares: bad dimensions");
    }
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
        a.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const Eigen::Map<const Eigen::VectorXd> B(b.data(), static_cast<Eigen::Index>(rows));

    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(A).rank() < static_cast<Eigen::Index>(cols))
    {
        throw ConfigError("nonnegative_least_squares: design matrix is rank deficient");
    }

    // The NNLS optimum is the unconstrained optimum on its support, so the
    // best feasible subset solution is the global one.
    std::vector<double> best(cols, 0.0);
    double best_residual = B.squaredNorm();
    for (unsigned mask = 1; mask < (1U << cols); ++mask)
    {
        std::vector<Eigen::Index> support;
        for (std::size_t j = 0; j < cols; ++j)
        {
            if ((mask >> j) & 1U)
            {
                support.push_back(static_cast<Eigen::Index>(j));
            }
        }
        Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(support.size()));
        for (std::size_t k = 0; k < support.size(); ++k)
        {
            sub.col(static_cast<Eigen::Index>(k)) = A.col(support[k]);
        }
        const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(B);
        if ((x.array() < 0.0).any())
        {
            continue;
        }
        const double residual = (sub * x - B).squaredNorm();
        if (residual < best_residual)
        {
            best_residual = residual;
            std::fill(best.begin(), best.end(), 0.0);
            for (std::size_t k = 0; k < support.size(); ++k)
            {
                best[static_cast<std::size_t>(support[k])] = x(static_cast<Eigen::Index>(k));
            }
        }
    }
    return best;
}

std::size_t scenario_memory_bits(const LadderTopology &topo, std::size_t scenarios)
{
    return scenarios * 2 * topo.switch_count();
}

std::size_t observation_controllers(const UtilizationObservation &obs)
{
    return default_controller_count(build_topology(obs.tiles, obs.lanes, obs.lane_width_bits));
}

CostModel calibrate(std::span<const UtilizationObservation> observations)
{
    const std::size_t n = observations.size();
    if (n < 3)
    {
        throw ConfigError("calibrate: need at least 3 observations, got " + std::to_string(n));
    }
    std::vector<double> da;
    std::vector<double> db;
    std::vector<double> ca;
    std::vector<double> cb;
    for (const auto &obs : observations)
    {
        const auto topo = build_topology(obs.tiles, obs.lanes, obs.lane_width_bits);
        const auto df = data_features(topo);
        da.insert(da.end(), df.begin(), df.end());
        db.push_back(obs.data_plane_units);
        const auto cf = control_features(scenario_memory_bits(topo, obs.scenarios), observation_controllers(obs));
        ca.insert(ca.end(), cf.begin(), cf.end());
        cb.push_back(obs.control_plane_units);
    }
    const auto d = nonnegative_least_squares(da, n, 3, db);
    const auto c = nonnegative_least_squares(ca, n, 2, cb);
    return {{d[0], d[1], d[2]}, {c[0], c[1]}, true};
}

const CostModel &reference_model()
{
    static const CostModel model = calibrate(reference_observations());
    return model;
}

double data_plane_cost(const CostModel &model, const LadderTopology &topo)
{
    require_calibrated(model);
    const auto f = data_features(topo);
    return model.data.per_tile_lane * f[0] + model.data.per_segment_bit * f[1] + model.data.fixed * f[2];
}

double control_plane_cost(const CostModel &model, std::size_t scenario_bits, std::size_t n_controllers)
{
    require_calibrated(model);
    const auto f = control_features(scenario_bits, n_controllers);
    return model.control.per_memory_bit * f[0] + model.control.per_controller * f[1];
}

CostReport evaluate_cost(const CostModel &model, const LadderTopology &topo, std::size_t scenario_bits,
                         std::size_t n_controllers)
{
    CostReport r;
    r.model = model;
    r.scenario_bits = scenario_bits;
    r.controllers = n_controllers;
    r.data_plane_units = data_plane_cost(model, topo);
    r.control_plane_units = control_plane_cost(model, scenario_bits, n_controllers);
    const double total = r.data_plane_units + r.control_plane_units;
    r.control_fraction = total > 0.0 ? r.control_plane_units / total : 0.0;
    return r;
}

CostReport predict(const CostModel &model, const UtilizationObservation &obs)
{
    const auto topo = build_topology(obs.tiles, obs.lanes, obs.lane_width_bits);
    return evaluate_cost(model, topo, scenario_memory_bits(topo, obs.scenarios), observation_controllers(obs));
}

std::string to_json(const CostReport &r)
{
    nlohmann::ordered_json j;
    j["data_plane_units"] = r.data_plane_units;
    j["control_plane_units"] = r.control_plane_units;
    j["control_fraction"] = r.control_fraction;
    j["scenario_bits"] = r.scenario_bits;
    j["compressed_scenario_bits"] = r.compressed_scenario_bits;
    j["controllers"] = r.controllers;
    j["coefficients"] = {{"per_tile_lane", r.model.data.per_tile_lane},
                         {"per_segment_bit", r.model.data.per_segment_bit},
                         {"data_fixed", r.model.data.fixed},
                         {"per_memory_bit", r.model.control.per_memory_bit},
                         {"per_controller", r.model.control.per_controller}};
    return j.dump(2) + "\n";
}

} // namespace ladderbus
