#pragma once

/**
 * @file specs.hpp
 * @brief Coefficient bundles for the delay-differential, neutral, differential-difference and
 * ODE-PDE representations.
 *
 * Distributed kernels of delay i are defined on [-tau_i, 0].  Matrices a builder leaves
 * untouched stay zero of the conforming shape, so a spec made by zeros() is always valid.
 */

#include "delayrep/core/poly_kernel.hpp"
#include "delayrep/core/types.hpp"

#include <string>
#include <vector>

namespace delayrep {

struct Dims {
    Index n = 0;  ///< state
    Index m = 0;  ///< disturbance w
    Index p = 0;  ///< control input u
    Index q = 0;  ///< regulated output z
    Index r = 0;  ///< sensed output y
    Index K = 0;  ///< number of delays
    std::vector<Index> p_i;  ///< channel dims, DDF/ODE-PDE only
    Index n_v = 0;           ///< dim of v, DDF/ODE-PDE only

    Index total_channel_dim() const;
    bool operator==(const Dims&) const = default;
};

/// The constant blocks multiplying [x; w; u](t - tau_i).
struct DelayBlock {
    Matrix A, B1, B2, C1, C2, D11, D12, D21, D22;
};

/// The kernels multiplying [x; w; u](t + s) under the integral over [-tau_i, 0].
struct DistributedBlock {
    PolyKernel A, B1, B2, C1, C2, D11, D12, D21, D22;
};

struct DDESpec {
    Dims dims;
    std::vector<double> delays;
    Matrix A0, B1, B2, C10, C20, D11, D12, D21, D22;
    std::vector<DelayBlock> delayed;
    std::vector<DistributedBlock> distributed;

    static DDESpec zeros(Index n, Index m, Index p, Index q, Index r, std::vector<double> delays);

    Index K() const { return static_cast<Index>(delays.size()); }
    /// [[A0 B1 B2]; [C10 D11 D12]; [C20 D21 D22]]
    Matrix instantaneous() const;
    /// The same 3x3 arrangement of the delay-i blocks, size (n+q+r) x (n+m+p).
    Matrix stacked(std::size_t i) const;
    PolyKernel stacked_kernel(std::size_t i) const;
};

/// Blocks multiplying xdot(t - tau_i) in the state, regulated and sensed rows.
struct NeutralBlock {
    Matrix E, E1, E2;
};

struct NeutralKernel {
    PolyKernel E, E1, E2;
};

struct NDSSpec {
    DDESpec base;
    std::vector<NeutralBlock> neutral;
    std::vector<NeutralKernel> neutral_distributed;

    static NDSSpec zeros(Index n, Index m, Index p, Index q, Index r, std::vector<double> delays);

    const Dims& dims() const { return base.dims; }
    Index K() const { return base.K(); }
    /// (n+q+r) x (2n+m+p): the delayed blocks with the neutral column appended.
    Matrix stacked(std::size_t i) const;
    PolyKernel stacked_kernel(std::size_t i) const;
    /// True when every neutral block and kernel is zero.
    bool is_retarded() const;
};

/// One delayed channel r_i of a differential-difference system.
struct DelayChannel {
    Matrix Cr, Br1, Br2, Drv;  ///< rows of r_i(t): p_i x (n, m, p, n_v)
    Matrix Cv;                 ///< n_v x p_i
    PolyKernel Cvd;            ///< n_v x p_i on [-tau_i, 0]
};

struct DDFSpec {
    Dims dims;
    std::vector<double> delays;
    Matrix A0, B1, B2, C1, C2, D11, D12, D21, D22;
    Matrix Bv, D1v, D2v;
    std::vector<DelayChannel> channels;
    /// Free-form notes carried along by conversions (e.g. channels dropped by reduction).
    std::vector<std::string> provenance;

    static DDFSpec zeros(Index n, Index m, Index p, Index q, Index r, std::vector<double> delays,
                         std::vector<Index> p_i, Index n_v);

    Index K() const { return static_cast<Index>(delays.size()); }
    /// C_vi plus the integral of C_vdi over [-tau_i, 0].
    Matrix c_hat(std::size_t i) const;
    /// I - sum_i c_hat(i) D_rvi.
    Matrix loop_matrix() const;
    /// Row offset of channel i inside the stacked channel vector.
    Index channel_offset(std::size_t i) const;

    bool operator==(const DDFSpec& other) const;
};

/// Same matrices as the DDF; channels are read as transport PDEs on [-1, 0].
struct ODEPDESpec {
    DDFSpec body;
};

}  // namespace delayrep
