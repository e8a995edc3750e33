// costmodel.hpp
//
//  Linear area model for the two planes, in FPGA logic-block units.
//
//      data    = per_tile_lane * (tiles * lanes)
//              + per_segment_bit * (segments * lane_width_bits)
//              + fixed
//      control = per_memory_bit * scenario_memory_bits
//              + per_controller * controllers
//
//  Coefficients are fitted by non-negative least squares against measured
//  utilisation rows; reference_observations() holds the built-in set.

#ifndef LADDERBUS_COSTMODEL_HPP
#define LADDERBUS_COSTMODEL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ladderbus/topology.hpp"

namespace ladderbus
{

struct DataPlaneCoefficients
{
    double per_tile_lane{0.0};
    double per_segment_bit{0.0};
    double fixed{0.0};
};

struct ControlPlaneCoefficients
{
    double per_memory_bit{0.0};
    double per_controller{0.0};
};

struct CostModel
{
    DataPlaneCoefficients data;
    ControlPlaneCoefficients control;
    bool calibrated{false};
};

struct UtilizationObservation
{
    std::string app;
    std::size_t tiles{0};
    std::size_t lanes{0};
    std::size_t scenarios{0};
    double data_plane_units{0.0};
    double control_plane_units{0.0};
    std::size_t lane_width_bits{32};
};

struct CostReport
{
    double data_plane_units{0.0};
    double control_plane_units{0.0};
    double control_fraction{0.0};
    std::size_t scenario_bits{0};
    std::size_t compressed_scenario_bits{0};
    std::size_t controllers{0};
    CostModel model;
};

/// Measured FPGA utilisation of five small and medium applications.
std::span<const UtilizationObservation> reference_observations();

/// Per-plane non-negative least squares. Throws ConfigError when a plane has
/// fewer observations than coefficients or its design matrix is rank
/// deficient.
CostModel calibrate(std::span<const UtilizationObservation> observations);

/// Model calibrated on reference_observations(), computed once.
const CostModel &reference_model();

// Throw ConfigError on an uncalibrated model.
double data_plane_cost(const CostModel &model, const LadderTopology &topo);
double control_plane_cost(const CostModel &model, std::size_t scenario_bits, std::size_t n_controllers);

/// Memory bits for `scenarios` full switch vectors (2 bits per switch).
std::size_t scenario_memory_bits(const LadderTopology &topo, std::size_t scenarios);

/// Controller count used when evaluating an observation (default sizing).
std::size_t observation_controllers(const UtilizationObservation &obs);

CostReport evaluate_cost(const CostModel &model, const LadderTopology &topo, std::size_t scenario_bits,
                         std::size_t n_controllers);
/// Prediction for an observation's own configuration.
CostReport predict(const CostModel &model, const UtilizationObservation &obs);

/// Least-squares solution of min ||A x - b|| subject to x >= 0, exact for
/// small column counts (enumerates active sets). Row-major A.
std::vector<double> nonnegative_least_squares(std::span<const double> a, std::size_t rows, std::size_t cols,
                                              std::span<const double> b);

std::string to_json(const CostReport &r);

} // namespace ladderbus

#endif // LADDERBUS_COSTMODEL_HPP
