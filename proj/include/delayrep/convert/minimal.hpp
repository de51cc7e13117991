#pragma once

/**
 * @file minimal.hpp
 * @brief Low-rank DDF realization of a DDE: each delay keeps only as many channel rows as the
 * numerical rank of what it feeds back.
 */

#include "delayrep/core/specs.hpp"

namespace delayrep {

inline constexpr double kDefaultRankTol = 1e-10;

/// Per delay i the stacked block [G_i; K_i0; K_i1; ...] (constant block and kernel coefficients)
/// is factored by SVD; singular values below rank_tol * sigma_max are discarded.  Channels of
/// rank zero are removed together with their delay and logged in the provenance.
DDFSpec minimal_ddf_from_dde(const DDESpec& dde, double rank_tol = kDefaultRankTol);

}  // namespace delayrep
