#include <doctest.h>

#include <cmath>
#include <random>

#include "softgpi/errors.hpp"
#include "softgpi/kinematics.hpp"

using namespace softgpi;

TEST_CASE("identity pose points along x") {
  const auto p = wrist_position({0.0, 0.0});
  CHECK(p.x == doctest::Approx(0.14));
  CHECK(p.y == doctest::Approx(0.0));
  CHECK(p.z == doctest::Approx(0.0));
  const auto a = angles_from_wrist({0.14, 0.0, 0.0});
  CHECK(a.theta1 == 0.0);
  CHECK(a.theta2 == 0.0);
}

TEST_CASE("pure y pointing") {
  const auto p = wrist_position({M_PI / 2, 0.0});
  CHECK(std::abs(p.x) < 1e-15);
  CHECK(p.y == doctest::Approx(0.14));
  CHECK(std::abs(p.z) < 1e-15);
}

TEST_CASE("dh matrix term by term") {
  const double t1 = 0.3, t2 = 0.4, la = 0.14;
  const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
  const double expected[4][4] = {
      {c1 * c2, -c1 * s2, -s1, la * c1 * c2},
      {c2 * s1, -s1 * s2, c1, la * c2 * s1},
      {-s2, -c2, 0.0, -la * s2},
      {0.0, 0.0, 0.0, 1.0},
  };
  const Eigen::Matrix4d T = dh_transform({t1, t2});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(T(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
}

TEST_CASE("table anchors") {
  CHECK(wrist_position({0.6981, 0.0}).x == doctest::Approx(0.107).epsilon(0.005));
  const auto q3 = wrist_position({0.0, 0.3491});
  CHECK(q3.x == doctest::Approx(0.132).epsilon(0.005));
  CHECK(q3.z == doctest::Approx(-0.048).epsilon(0.01));
  CHECK(wrist_position({0.0, 0.5585}).z == doctest::Approx(-0.074).epsilon(0.01));
}

TEST_CASE("translation column equals wrist position; rotation orthonormal") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const JointAngles a{ang(rng), ang(rng)};
    const Eigen::Matrix4d T = dh_transform(a);
    const auto p = wrist_position(a);
    CHECK(T(0, 3) == doctest::Approx(p.x));
    CHECK(T(1, 3) == doctest::Approx(p.y));
    CHECK(T(2, 3) == doctest::Approx(p.z));
    CHECK(T.row(3).isApprox(Eigen::RowVector4d(0, 0, 0, 1)));
    const Eigen::Matrix3d R = T.topLeftCorner<3, 3>();
    CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::hypot(p.x, p.y, p.z) == doctest::Approx(0.14).epsilon(1e-12));
  }
}

TEST_CASE("round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-M_PI / 2 + 1e-6, M_PI / 2 - 1e-6);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const JointAngles a{ang(rng), ang(rng)};
    const auto b = angles_from_wrist(wrist_position(a));
    worst = std::max({worst, std::abs(a.theta1 - b.theta1), std::abs(a.theta2 - b.theta2)});
  }
  CHECK(worst < 1e-10);
  const auto q5 = angles_from_wrist(wrist_position({0.6981, 0.3491}));
  CHECK(q5.theta1 == doctest::Approx(0.6981).epsilon(1e-12));
  CHECK(q5.theta2 == doctest::Approx(0.3491).epsilon(1e-12));
}

TEST_CASE("degenerate inverse inputs") {
  CHECK_THROWS_AS(angles_from_wrist({0.0, 0.0, -0.15}), DomainError);
  CHECK_THROWS_AS(angles_from_wrist({0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("rom clamp") {
  auto r = clamp_to_rom({0.5, 0.3});
  CHECK(r.angles.theta1 == 0.5);
  CHECK(r.angles.theta2 == 0.3);
  CHECK_FALSE(r.clamped[0]);
  CHECK_FALSE(r.clamped[1]);

  r = clamp_to_rom({1.5, 0.3});
  CHECK(r.angles.theta1 == 1.3963);
  CHECK(r.clamped[0]);
  CHECK_FALSE(r.clamped[1]);

  r = clamp_to_rom({0.0, 0.7});
  CHECK(r.angles.theta1 == 0.1745);
  CHECK(r.angles.theta2 == 0.5585);
  CHECK(r.clamped[0]);
  CHECK(r.clamped[1]);

  // idempotent
  const auto again = clamp_to_rom(r.angles);
  CHECK(again.angles.theta1 == r.angles.theta1);
  CHECK(again.angles.theta2 == r.angles.theta2);
  CHECK_FALSE(again.clamped[0]);
  CHECK_FALSE(again.clamped[1]);
}
