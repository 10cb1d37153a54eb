#pragma once

#include "trifin/errors.hpp"
#include "trifin/types.hpp"

namespace trifin {

/// Normalization spans for the two reward terms.
struct RewardRanges {
  double range_xy = 0.39;  ///< m
  double range_z = 0.27;   ///< m
  void validate() const;   // throws ConfigError unless both positive
};

/// Negative distance from cube to goal: the planar separation scaled by
/// range_xy plus the vertical separation scaled by range_z, negated.
/// Always <= 0, and 0 only when the cube sits exactly at the goal.
double reward(const Vec3& cube_pos, const Vec3& goal, const RewardRanges& ranges);

}  // namespace trifin
