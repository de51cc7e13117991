#pragma once

/**
 * @file uav.hpp
 * @brief Fleet of N UAVs with delayed process disturbances, delayed commands and delayed
 * measurements, plus its static-output-feedback variant.
 *
 * UAV i has state x_i in R^n and output y_i in R^r; the disturbance w in R^m and the command
 * u in R^p are shared.  The 3N delays are indexed process (i), input (N + i), output (2N + i).
 */

#include "delayrep/convert/sof.hpp"
#include "delayrep/core/specs.hpp"

#include <cstdint>
#include <vector>

namespace delayrep {

struct UAVParams {
    Index N = 1;
    Index n = 1, m = 1, p = 1, r = 1;
    std::vector<Matrix> a;                 ///< n x n internal dynamics, one per UAV
    std::vector<std::vector<Matrix>> coupling;  ///< coupling[i][j]: effect of UAV j on UAV i (i != j)
    std::vector<Matrix> b1;                ///< n x m
    std::vector<Matrix> b2;                ///< n x p
    std::vector<Matrix> c2;                ///< r x n
    std::vector<Matrix> d21;               ///< r x m
    std::vector<Matrix> d22;               ///< r x p, used by the feedback network only
    Matrix C1;                             ///< q x nN
    Matrix D12;                            ///< q x p
    std::vector<double> process_delays;    ///< length N
    std::vector<double> input_delays;      ///< length N
    std::vector<double> output_delays;     ///< length N
    double merge_tol = 1e-12;              ///< delays closer than this share one index

    /// Random stable instance with distinct delays, reproducible from the seed.
    static UAVParams example(Index N, Index n, Index m, Index p, Index r, std::uint32_t seed = 1);

    Index q() const { return C1.rows(); }
    void check() const;
    /// [A_0]_ii = a_i, [A_0]_ij = coupling[i][j].
    Matrix A0() const;
    /// The 3N delays, process then input then output.
    std::vector<double> all_delays() const;
};

/// K = number of distinct delays (3N when they are distinct).
DDESpec build_uav_dde(const UAVParams& params);
/// Channels b_1i w (dim n), b_2i u (dim n) and c_2i x_i + d_21i w (dim r).  Channels whose
/// delays coincide share one delay index and stack their rows.
DDFSpec build_uav_ddf(const UAVParams& params);

/// Plant of the feedback network: input delays only and the actuator-to-sensor term d22.
SofPlant uav_sof_plant(const UAVParams& params);
DDFSpec build_sof_network(const UAVParams& params, const Matrix& F);

}  // namespace delayrep
