#include "trifin/reward.hpp"

#include <cmath>

namespace trifin {

void RewardRanges::validate() const {
  if (!(range_xy > 0.0) || !(range_z > 0.0))
    throw ConfigError("reward ranges must be positive");
}

double reward(const Vec3& cube_pos, const Vec3& goal, const RewardRanges& ranges) {
  if (!cube_pos.allFinite() || !goal.allFinite())
    throw InputError("reward: non-finite position");
  const Vec3 d = cube_pos - goal;
  return -(d.head<2>().norm() / ranges.range_xy) - (std::abs(d.z()) / ranges.range_z);
}

}  // namespace trifin
