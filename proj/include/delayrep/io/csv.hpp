#pragma once

/**
 * @file csv.hpp
 * @brief Trajectory CSV: header `t,x_0,..,y_0,..,z_0,..,v_0,..`, one row per sample,
 * 17 significant digits.
 */

#include "delayrep/simulate/trajectory.hpp"

#include <string>

namespace delayrep::io {

std::string trajectory_to_csv(const Trajectory& traj);
/// Recovers t, x, y, z and v.  Throws ValidationError on a malformed file.
Trajectory trajectory_from_csv(const std::string& text);

void write_trajectory(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory(const std::string& path);

}  // namespace delayrep::io
