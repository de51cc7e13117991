#pragma once

/**
 * @file pie.hpp
 * @brief Partial-integral equation form and the conversions that produce it.
 *
 * The PIE state is (x, d/ds phi) with one function component per channel row.  Trajectories
 * satisfy  d/dt (T X + B_T1 w + B_T2 u) = A X + B1 w + B2 u,  z = C1 X + D11 w + D12 u,
 * y = C2 X + D21 w + D22 u,  and the ODE-PDE state is recovered as [x; phi] = T X + B_T1 w + B_T2 u.
 */

#include "delayrep/core/specs.hpp"
#include "delayrep/core/validate.hpp"
#include "delayrep/piops/pi_operator.hpp"

#include <vector>

namespace delayrep {

struct PIESpec {
    Dims dims;  ///< n, m, p, q, r, K and p_i of the source DDF
    std::vector<double> delays;
    PIOperator T, A, B1, B2, C1, C2, D11, D12, D21, D22, BT1, BT2;

    /// Sum of the channel dims, the number of function components of the state.
    Index function_dim() const { return dims.total_channel_dim(); }
};

/// Intermediate quantities of the DDF-to-PIE construction, kept for inspection and tests.
struct ConversionScratch {
    std::vector<Matrix> C_hat;      ///< n_v x p_i
    Matrix D_I;                     ///< n_v x n_v
    std::vector<PolyKernel> C_I;    ///< n_v x p_i on [-1, 0]
    Matrix C_vx, D_vw, D_vu;
    Matrix T0, T1, T2;
    PolyKernel Ta, Tb;              ///< bivariate, sum p_i square
    Matrix I_tau;
    Matrix A0, B1, B2, C10, C20, D11, D12, D21, D22;  ///< the bold blocks
    PolyKernel A, C11, C21;         ///< the bold kernels in s
    std::vector<PolyKernel> X;      ///< direct DDE route only
};

/// Throws NumericalError when I - sum C_hat_i D_rvi is singular (condition number above 1e12).
PIESpec ddf_to_pie(const DDFSpec& ddf, ConversionScratch* scratch = nullptr);
PIESpec odepde_to_pie(const ODEPDESpec& odepde, ConversionScratch* scratch = nullptr);
/// Direct route for DDEs; agrees with ddf_to_pie(dde_to_ddf(d)).
PIESpec dde_to_pie(const DDESpec& dde, ConversionScratch* scratch = nullptr);

ValidationReport validate(const PIESpec& pie);

}  // namespace delayrep
