#include <doctest.h>

#include <cmath>

#include "fbgsf/force.hpp"

using namespace fbgsf;

namespace {
Eigen::VectorXd node_grid(int m = 40, double length = 0.132) {
    Eigen::VectorXd g(m);
    for (int i = 0; i < m; ++i) g[i] = i * length / m;
    return g;
}

RodShape straight(int m = 40) {
    return integrate_shape(Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m),
                           0.132 / m);
}
}  // namespace

TEST_CASE("encode_force peak, width, and zero cases") {
    const Eigen::VectorXd grid = node_grid();
    const double spacing = grid[1] - grid[0];

    const ForceDistribution d = encode_force(ContactForce::at(0.4, grid[12]), grid);
    CHECK(d.values[12] == doctest::Approx(0.4));                  // peak = F_c on grid
    CHECK(d.values[15] == doctest::Approx(0.4 * std::exp(-0.5)));  // |i-ic| = sigma = 3
    CHECK(d.values[9] == doctest::Approx(0.4 * std::exp(-0.5)));

    CHECK(encode_force(ContactForce::at(0.0, grid[5]), grid).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(encode_force(ContactForce::none(), grid).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS(encode_force(ContactForce::at(0.1, 0.0), grid, 0.0));

    // symmetry about the on-grid contact node
    for (int k = 1; k < 10; ++k)
        CHECK(d.values[12 + k] == doctest::Approx(d.values[12 - k]).epsilon(1e-12));

    // positive homogeneity
    const ForceDistribution d2 = encode_force(ContactForce::at(0.8, grid[12]), grid);
    CHECK((d2.values - 2.0 * d.values).cwiseAbs().maxCoeff() < 1e-15);

    (void)spacing;
}

TEST_CASE("decode_force argmax, threshold, and tie-break") {
    const Eigen::VectorXd grid = node_grid();

    const ForceDistribution d = encode_force(ContactForce::at(0.3, grid[20]), grid);
    const ContactForce decoded = decode_force(d, 0.3, 0.01);
    CHECK(decoded.active);
    CHECK(decoded.location == doctest::Approx(grid[20]));
    CHECK(decoded.magnitude == doctest::Approx(0.3));

    ForceDistribution zero;
    zero.grid = grid;
    zero.values = Eigen::VectorXd::Zero(40);
    CHECK_FALSE(decode_force(zero, 0.1, 0.01).active);

    ForceDistribution tie = zero;
    tie.values[7] = 0.2;
    tie.values[23] = 0.2;
    CHECK(decode_force(tie, 0.2, 0.01).location == doctest::Approx(grid[7]));

    ForceDistribution empty;
    CHECK_THROWS(decode_force(empty, 0.1, 0.01));
}

TEST_CASE("encode->decode location error within half a grid spacing") {
    const Eigen::VectorXd grid = node_grid();
    const double spacing = grid[1] - grid[0];
    for (double xc = 0.0; xc <= 0.090; xc += 0.0005) {
        const ForceDistribution d = encode_force(ContactForce::at(0.25, xc), grid);
        const ContactForce decoded = decode_force(d, 0.25, 1e-3);
        CHECK(std::abs(decoded.location - xc) <= spacing / 2.0 + 1e-12);
    }
}

TEST_CASE("apply_force_deflection cantilever profile") {
    const RodShape base = straight();
    const double ei = 1e-4;

    CHECK(apply_force_deflection(base, ContactForce::none(), ei).tip() == base.tip());

    const ContactForce f = ContactForce::at(0.2, 0.05);
    const RodShape bent = apply_force_deflection(base, f, ei);
    CHECK(bent.curvatures[0] == doctest::Approx(0.2 * 0.05 / ei));  // base moment
    const double step = 0.132 / 40;
    for (int i = 0; i < 40; ++i)
        if (i * step >= f.location) CHECK(bent.curvatures[i] == 0.0);

    // linearity before clamping
    const RodShape bent2 =
        apply_force_deflection(base, ContactForce::at(0.4, 0.05), 1e-2);
    const RodShape bent1 =
        apply_force_deflection(base, ContactForce::at(0.2, 0.05), 1e-2);
    CHECK((bent2.curvatures - 2.0 * bent1.curvatures).cwiseAbs().maxCoeff() < 1e-12);

    // clamping to kappa_max
    const RodShape clamped =
        apply_force_deflection(base, ContactForce::at(0.5, 0.09), 1e-6, 133.33);
    CHECK(clamped.curvatures.maxCoeff() <= 133.33);

    CHECK_THROWS(apply_force_deflection(base, f, 0.0));
}

TEST_CASE("deflection preserves planarity of planar base shapes") {
    Eigen::VectorXd k = Eigen::VectorXd::Constant(40, 20.0);
    const RodShape base = integrate_shape(k, Eigen::VectorXd::Zero(40), 0.132 / 40);
    const RodShape bent =
        apply_force_deflection(base, ContactForce::at(0.3, 0.06), 1e-4);
    for (const auto& p : bent.positions) CHECK(std::abs(p.y()) < 1e-12);
}
