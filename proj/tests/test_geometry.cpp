#include <doctest.h>

#include <cmath>

#include "fbgsf/geometry.hpp"
#include "fbgsf/rng.hpp"

using namespace fbgsf;

namespace {
constexpr double kPi = 3.14159265358979323846;

RodShape constant_bend(double total_angle, int nodes = 40, double length = 0.132) {
    Eigen::VectorXd k, t;
    bend_profile(total_angle, BendProfile::Constant, nodes, length, k, t);
    return integrate_shape(k, t, length / nodes);
}
}  // namespace

TEST_CASE("workspace defaults are internally consistent") {
    WorkspaceConfig ws;
    CHECK_NOTHROW(ws.validate());
    ws.kappa_max = 200.0;
    CHECK_THROWS(ws.validate());
}

TEST_CASE("zero curvature integrates to a straight 132 mm line") {
    const RodShape shape = integrate_shape(Eigen::VectorXd::Zero(40),
                                           Eigen::VectorXd::Constant(40, 1.3), 3.3e-3);
    REQUIRE(shape.positions.size() == 41);
    CHECK(shape.tip().isApprox(Eigen::Vector3d(0, 0, 0.132), 1e-12));
    CHECK(shape.node_arc_lengths[0] == 0.0);
    CHECK(shape.node_arc_lengths[40] == doctest::Approx(0.132));
}

TEST_CASE("90 degree constant arc hits the closed-form circle endpoint") {
    const double length = 0.132;
    const double kappa = (kPi / 2.0) / length;
    const double radius = 1.0 / kappa;
    const RodShape shape = constant_bend(kPi / 2.0);
    const Eigen::Vector3d expected(radius * (1.0 - std::cos(kPi / 2.0)), 0.0,
                                   radius * std::sin(kPi / 2.0));
    // within 0.1% of the rod length for the 40-node discretization
    CHECK((shape.tip() - expected).norm() < 1e-3 * length);
}

TEST_CASE("133.33 1/m over a 35.3 mm arc bends about 270 degrees") {
    const double kappa = 133.33;
    const double arc = 35.3e-3;
    CHECK(kappa * arc == doctest::Approx(270.0 * kPi / 180.0).epsilon(2e-3));
}

TEST_CASE("integrate_shape rejects bad input") {
    Eigen::VectorXd empty;
    CHECK_THROWS(integrate_shape(empty, empty, 1e-3));
    Eigen::VectorXd k = Eigen::VectorXd::Zero(3), t = Eigen::VectorXd::Zero(3);
    CHECK_THROWS(integrate_shape(k, t, 0.0));
    k[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(integrate_shape(k, t, 1e-3));
}

TEST_CASE("tip and shape error basics") {
    const RodShape a = constant_bend(0.3);
    CHECK(tip_position_error(a, a) == 0.0);
    CHECK(shape_error(a, a) == 0.0);

    RodShape b = a;
    const Eigen::Vector3d offset(1e-3, 2e-3, 2e-3);
    for (auto& p : b.positions) p += offset;
    CHECK(tip_position_error(a, b) == doctest::Approx(3e-3));  // 3-4-5 analog
    CHECK(shape_error(a, b) == doctest::Approx(3e-3));

    RodShape c = constant_bend(0.3, 39);
    CHECK_THROWS(tip_position_error(a, c));
}

TEST_CASE("straight vs 10 degree arc tip gap matches the chord formula") {
    const double length = 0.132;
    const double angle = 10.0 * kPi / 180.0;
    const RodShape straight = constant_bend(0.0);
    const RodShape arc = constant_bend(angle);
    const double radius = length / angle;
    const Eigen::Vector3d arc_tip(radius * (1.0 - std::cos(angle)), 0.0,
                                  radius * std::sin(angle));
    const double expected = (Eigen::Vector3d(0, 0, length) - arc_tip).norm();
    CHECK(tip_position_error(straight, arc) == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("shape_error equals the brute-force mean of node distances") {
    Rng rng(7);
    Eigen::VectorXd k1(40), k2(40), t(40);
    for (int i = 0; i < 40; ++i) {
        k1[i] = rng.uniform(-100, 100);
        k2[i] = rng.uniform(-100, 100);
        t[i] = rng.uniform(-kPi, kPi);
    }
    const RodShape a = integrate_shape(k1, t, 3.3e-3);
    const RodShape b = integrate_shape(k2, t, 3.3e-3);
    double acc = 0.0;
    for (int i = 0; i <= 40; ++i) acc += (a.positions[i] - b.positions[i]).norm();
    CHECK(shape_error(a, b) == doctest::Approx(acc / 41.0).epsilon(1e-12));
}

TEST_CASE("bend_profile constant and ramp integrate to the requested angle") {
    Eigen::VectorXd k, t;
    bend_profile(0.0, BendProfile::Constant, 40, 0.132, k, t);
    CHECK(k.cwiseAbs().maxCoeff() == 0.0);

    bend_profile(1.5 * kPi, BendProfile::Constant, 40, 0.132, k, t);
    CHECK(k[0] == doctest::Approx(1.5 * kPi / 0.132));  // ~35.7 1/m
    CHECK(k[0] == doctest::Approx(35.7).epsilon(1e-2));

    bend_profile(kPi / 2.0, BendProfile::Ramp, 40, 0.132, k, t);
    for (int i = 1; i < 40; ++i) CHECK(k[i] > k[i - 1]);
    const double step = 0.132 / 40;
    double integral = 0.0;  // quadrature over the piecewise-constant profile
    for (int i = 0; i < 40; ++i) integral += k[i] * step;
    CHECK(integral == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    CHECK_THROWS(bend_profile(10.0, BendProfile::Constant, 40, 0.132, k, t));
    CHECK_THROWS(bend_profile(1.0, BendProfile::Constant, 0, 0.132, k, t));
}

TEST_CASE("integrate_shape is base-frame equivariant") {
    Rng rng(11);
    Eigen::VectorXd k(20), t(20);
    for (int i = 0; i < 20; ++i) {
        k[i] = rng.uniform(-120, 120);
        t[i] = rng.uniform(-kPi, kPi);
    }
    const Eigen::Matrix3d rot =
        Eigen::AngleAxisd(0.83, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
    const RodShape plain = integrate_shape(k, t, 3.3e-3);
    const RodShape rotated = integrate_shape(k, t, 3.3e-3, rot);
    for (int i = 0; i <= 20; ++i)
        CHECK((rotated.positions[i] - rot * plain.positions[i]).norm() < 1e-9);
}

TEST_CASE("chord length is bounded by arc length and converges") {
    const double angle = 1.5 * kPi;
    auto chord_sum = [&](int nodes) {
        const RodShape s = constant_bend(angle, nodes);
        double acc = 0.0;
        for (size_t i = 1; i < s.positions.size(); ++i)
            acc += (s.positions[i] - s.positions[i - 1]).norm();
        return acc;
    };
    const double c40 = chord_sum(40), c640 = chord_sum(640);
    CHECK(c40 <= 0.132);
    CHECK(c640 <= 0.132);
    CHECK(0.132 - c640 < (0.132 - c40) / 10.0);
}

TEST_CASE("planar inputs stay in one plane") {
    Rng rng(3);
    Eigen::VectorXd k(40);
    for (int i = 0; i < 40; ++i) k[i] = rng.uniform(-133, 133);
    const double phi = 0.7;
    const RodShape s = integrate_shape(k, Eigen::VectorXd::Constant(40, phi), 3.3e-3);
    const Eigen::Vector3d normal(-std::sin(phi), std::cos(phi), 0.0);
    for (const auto& p : s.positions) CHECK(std::abs(normal.dot(p)) < 1e-9);
}

TEST_CASE("shape_error satisfies the triangle inequality") {
    Rng rng(5);
    auto random_shape = [&rng]() {
        Eigen::VectorXd k(30), t(30);
        for (int i = 0; i < 30; ++i) {
            k[i] = rng.uniform(-133, 133);
            t[i] = rng.uniform(-kPi, kPi);
        }
        return integrate_shape(k, t, 3.3e-3);
    };
    for (int trial = 0; trial < 20; ++trial) {
        const RodShape a = random_shape(), b = random_shape(), c = random_shape();
        CHECK(shape_error(a, c) <= shape_error(a, b) + shape_error(b, c) + 1e-12);
    }
}
