#pragma once

/**
 * @file simulate.hpp
 * @brief Time-domain integration of every representation on the grid t_k = k dt.
 *
 * DDE, NDS, DDF and ODE-PDE share one RK4 engine.  Delayed values come from the stored
 * trajectory (cubic Hermite for the state, four-point Lagrange for channels), and the
 * distributed terms acting on stored signals are carried as moment states
 *   mu_j(t) = int_{-tau}^0 s^j h(t + s) ds,
 * which turns the integrals into extra ODE states that are exact for polynomial kernels.
 * PIEs are collocated at order M and stepped by the implicit trapezoid rule.
 */

#include "delayrep/convert/pie.hpp"
#include "delayrep/core/history.hpp"
#include "delayrep/core/signal.hpp"
#include "delayrep/core/specs.hpp"
#include "delayrep/piops/pi_operator.hpp"
#include "delayrep/simulate/trajectory.hpp"

#include <vector>

namespace delayrep {

/// x0 must cover [-tau_K, 0].  v records the delayed and distributed contributions to
/// [xdot; z; y], which is the v of the DDF produced by dde_to_ddf.
Trajectory simulate_dde(const DDESpec& dde, const HistoryFunction& x0, const SignalDescriptor& w,
                        const SignalDescriptor& u, const SimConfig& cfg);

/// Zero initial data, as the neutral class assumes; both inputs must vanish at t = 0.
Trajectory simulate_nds(const NDSSpec& nds, const SignalDescriptor& w, const SignalDescriptor& u,
                        const SimConfig& cfg);

/// r0[i] lives on [-tau_i, 0] and must satisfy the sewing condition with x0.
Trajectory simulate_ddf(const DDFSpec& ddf, const Vector& x0, const std::vector<HistoryFunction>& r0,
                        const SignalDescriptor& w, const SignalDescriptor& u, const SimConfig& cfg);

/// phi0[i] lives on [-1, 0].  Reports phi_i(t, s_j) = r_i(t + tau_i s_j) on cfg.order
/// Chebyshev-Gauss-Lobatto nodes.
Trajectory simulate_odepde(const ODEPDESpec& odepde, const Vector& x0, const std::vector<HistoryFunction>& phi0,
                           const SignalDescriptor& w, const SignalDescriptor& u, const SimConfig& cfg);

/// x0 is the PIE state (x, d/ds phi).  Channels hold the reconstruction
/// T X + B_T1 w + B_T2 u at the collocation nodes; x is its finite part.
Trajectory simulate_pie(const PIESpec& pie, const HybridVector& x0, const SignalDescriptor& w,
                        const SignalDescriptor& u, const SimConfig& cfg);

/// PIE initial state matching DDF data: (x0, s -> tau_i r_i0'(tau_i s)).
HybridVector pie_initial_state(const PIESpec& pie, const Vector& x0, const std::vector<HistoryFunction>& r0);

}  // namespace delayrep
