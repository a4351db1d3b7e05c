#include "softgpi/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "softgpi/errors.hpp"

namespace softgpi {

Eigen::Matrix4d dh_transform(const JointAngles& angles, const ArmGeometry& geom) {
  const double c1 = std::cos(angles.theta1);
  const double s1 = std::sin(angles.theta1);
  const double c2 = std::cos(angles.theta2);
  const double s2 = std::sin(angles.theta2);
  const double la = geom.upper_arm_length;

  Eigen::Matrix4d t;
  t << c1 * c2, -c1 * s2, -s1, la * c1 * c2,
       c2 * s1, -s1 * s2, c1, la * c2 * s1,
       -s2, -c2, 0.0, -la * s2,
       0.0, 0.0, 0.0, 1.0;
  return t;
}

WristPosition wrist_position(const JointAngles& angles, const ArmGeometry& geom) {
  const double la = geom.upper_arm_length;
  const double c2 = std::cos(angles.theta2);
  return {la * std::cos(angles.theta1) * c2, la * c2 * std::sin(angles.theta1),
          -la * std::sin(angles.theta2)};
}

JointAngles angles_from_wrist(const WristPosition& pos, const ArmGeometry& geom) {
  const double la = geom.upper_arm_length;
  if (!(la > 0.0)) throw DomainError("upper arm length must be positive");
  // Allow a few ulps of slack so that forward-kinematics output always inverts.
  const double ratio = -pos.z / la;
  if (std::abs(ratio) > 1.0 + 1e-12) throw DomainError("wrist height |z| exceeds arm length");
  if (pos.x == 0.0 && pos.y == 0.0) {
    throw DomainError("wrist on the shoulder z axis: abduction angle undefined");
  }
  return {std::atan2(pos.y, pos.x), std::asin(std::clamp(ratio, -1.0, 1.0))};
}

RomClampResult clamp_to_rom(const JointAngles& angles) {
  RomClampResult out{angles, {false, false}};
  for (Joint j : kJoints) {
    const RangeOfMotion rom = range_of_motion(j);
    const double v = angles[j];
    const double c = std::clamp(v, rom.min, rom.max);
    out.angles[j] = c;
    out.clamped[joint_index(j)] = (c != v);
  }
  return out;
}

}  // namespace softgpi
