#include "fbgsf/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace fbgsf {

void WorkspaceConfig::validate() const {
    // kappa_max is quoted to 2 decimals (133.33 vs 1/7.5e-3), so allow the
    // rounding slack
    if (std::abs(kappa_max * min_bend_radius - 1.0) > 1e-4)
        throw std::invalid_argument("kappa_max inconsistent with min_bend_radius");
    if (force_min < 0.0 || force_max < force_min)
        throw std::invalid_argument("invalid force range");
    if (contact_span > rod_length)
        throw std::invalid_argument("contact_span exceeds rod_length");
}

RodShape integrate_shape(const Eigen::VectorXd& curvatures,
                         const Eigen::VectorXd& twists, double step,
                         const Eigen::Matrix3d& base_frame) {
    const int n = static_cast<int>(curvatures.size());
    if (n == 0) throw std::invalid_argument("integrate_shape: empty curvature sequence");
    if (twists.size() != n)
        throw std::invalid_argument("integrate_shape: curvature/twist length mismatch");
    if (!(step > 0.0)) throw std::invalid_argument("integrate_shape: step must be positive");
    if (!curvatures.allFinite() || !twists.allFinite())
        throw std::invalid_argument("integrate_shape: non-finite input");

    RodShape shape;
    shape.curvatures = curvatures;
    shape.twists = twists;
    shape.total_length = n * step;
    shape.node_arc_lengths.resize(n + 1);
    shape.positions.reserve(n + 1);
    shape.positions.emplace_back(Eigen::Vector3d::Zero());

    Eigen::Matrix3d frame = base_frame;
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    shape.node_arc_lengths[0] = 0.0;

    for (int i = 0; i < n; ++i) {
        const double kappa = curvatures[i];
        const double phi = twists[i];
        const double theta = kappa * step;
        // In-plane bending direction and local arc displacement.
        const Eigen::Vector3d dir(std::cos(phi), std::sin(phi), 0.0);
        Eigen::Vector3d local;
        if (std::abs(theta) < 1e-12) {
            // Straight segment; second-order term keeps the step->0 limit smooth.
            local = dir * (0.5 * theta * step) + Eigen::Vector3d(0, 0, step);
        } else {
            const double r = 1.0 / kappa;
            local = dir * (r * (1.0 - std::cos(theta))) +
                    Eigen::Vector3d(0, 0, r * std::sin(theta));
        }
        p += frame * local;

        // Frame update: rotate about the bending-plane normal by theta.
        const Eigen::Vector3d axis(-std::sin(phi), std::cos(phi), 0.0);
        frame = frame * Eigen::AngleAxisd(theta, axis).toRotationMatrix();

        shape.positions.push_back(p);
        shape.node_arc_lengths[i + 1] = (i + 1) * step;
    }
    return shape;
}

double tip_position_error(const RodShape& estimated, const RodShape& truth) {
    if (!estimated.has_positions() || !truth.has_positions())
        throw std::invalid_argument("tip_position_error: missing positions");
    if (estimated.positions.size() != truth.positions.size())
        throw std::invalid_argument("tip_position_error: node count mismatch");
    return (estimated.tip() - truth.tip()).norm();
}

double shape_error(const RodShape& estimated, const RodShape& truth) {
    if (!estimated.has_positions() || !truth.has_positions())
        throw std::invalid_argument("shape_error: missing positions");
    if (estimated.positions.size() != truth.positions.size())
        throw std::invalid_argument("shape_error: node count mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < truth.positions.size(); ++i)
        acc += (estimated.positions[i] - truth.positions[i]).norm();
    return acc / static_cast<double>(truth.positions.size());
}

void bend_profile(double total_angle, BendProfile profile, int node_count,
                  double length, Eigen::VectorXd& curvatures,
                  Eigen::VectorXd& twists, double max_angle) {
    if (node_count <= 0) throw std::invalid_argument("bend_profile: node_count must be positive");
    if (!(length > 0.0)) throw std::invalid_argument("bend_profile: length must be positive");
    if (std::abs(total_angle) > max_angle + 1e-12)
        throw std::invalid_argument("bend_profile: angle exceeds workspace bound");

    curvatures.resize(node_count);
    twists = Eigen::VectorXd::Zero(node_count);
    const double step = length / node_count;

    switch (profile) {
        case BendProfile::Constant:
            curvatures.setConstant(total_angle / length);
            break;
        case BendProfile::Ramp: {
            // kappa grows linearly along the rod; scaled so the discrete
            // integral sum(kappa_i * step) equals total_angle.
            double weight_sum = 0.0;
            for (int i = 0; i < node_count; ++i) weight_sum += (i + 0.5) * step;
            for (int i = 0; i < node_count; ++i)
                curvatures[i] = total_angle * (i + 0.5) / weight_sum;
            break;
        }
    }
}

}  // namespace fbgsf
