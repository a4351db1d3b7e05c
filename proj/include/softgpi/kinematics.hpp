#pragma once

#include <array>

#include <Eigen/Core>

namespace softgpi {

/// The two assisted shoulder degrees of freedom.
enum class Joint : int {
  kAbduction = 1,  ///< AB/AD, theta1
  kFlexion = 2,    ///< F/E, theta2
};

inline constexpr std::array<Joint, 2> kJoints{Joint::kAbduction, Joint::kFlexion};

inline constexpr int joint_index(Joint j) { return static_cast<int>(j) - 1; }

/// Admissible joint interval in radians.
struct RangeOfMotion {
  double min;
  double max;

  constexpr bool contains(double theta) const { return theta >= min && theta <= max; }
};

inline constexpr RangeOfMotion kAbductionRom{0.1745, 1.3963};
inline constexpr RangeOfMotion kFlexionRom{0.1745, 0.5585};

constexpr RangeOfMotion range_of_motion(Joint j) {
  return j == Joint::kAbduction ? kAbductionRom : kFlexionRom;
}

struct JointAngles {
  double theta1 = 0.0;  ///< abduction/adduction [rad]
  double theta2 = 0.0;  ///< flexion/extension [rad]

  double operator[](Joint j) const { return j == Joint::kAbduction ? theta1 : theta2; }
  double& operator[](Joint j) { return j == Joint::kAbduction ? theta1 : theta2; }
};

struct ArmGeometry {
  double upper_arm_length = 0.14;  ///< l_a [m]
};

struct WristPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Homogeneous wrist-to-shoulder transform for a fully extended elbow.
Eigen::Matrix4d dh_transform(const JointAngles& angles, const ArmGeometry& geom = {});

/// Translation column of dh_transform.
WristPosition wrist_position(const JointAngles& angles, const ArmGeometry& geom = {});

/// Inverse of wrist_position on (-pi/2, pi/2)^2.
///
/// Throws DomainError when |z| > l_a or the wrist lies on the z axis
/// (x = y = 0), where theta1 is undefined.
JointAngles angles_from_wrist(const WristPosition& pos, const ArmGeometry& geom = {});

struct RomClampResult {
  JointAngles angles;
  std::array<bool, 2> clamped{false, false};  ///< indexed by joint_index
};

RomClampResult clamp_to_rom(const JointAngles& angles);

}  // namespace softgpi
