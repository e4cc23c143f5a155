#pragma once

#include <Eigen/Dense>

#include "fbgsf/geometry.hpp"

namespace fbgsf {

// Point contact force along the rod. Inactive contacts are labeled (0, 0).
struct ContactForce {
    double magnitude = 0.0;  // N
    double location = 0.0;   // m of arc length from base
    bool active = false;

    static ContactForce none() { return {}; }
    static ContactForce at(double magnitude, double location) {
        return {magnitude, location, true};
    }
};

// Gaussian grid encoding of a point force, peak F_c at the contact node.
struct ForceDistribution {
    Eigen::VectorXd grid;    // m, length M, sorted ascending
    Eigen::VectorXd values;  // N, length M
    double sigma = 3.0;      // grid-index units
};

// Spreads a point force over the node grid: f_i = F_c * exp(-(i-i_c)^2/(2 sigma^2))
// with the index distance measured in grid units.
ForceDistribution encode_force(const ContactForce& force,
                               const Eigen::VectorXd& grid, double sigma = 3.0);

// Argmax localization plus magnitude re-scaling. Peaks below `threshold`
// decode as the inactive (0, 0) convention. Ties break toward the lower index.
ContactForce decode_force(const ForceDistribution& dist, double magnitude,
                          double threshold);

// Cantilever-moment curvature perturbation from a point load:
// dkappa(s) = F_c * max(x_c - s, 0) / EI, clamped to kappa_max and
// re-integrated on the same grid. Zero/inactive force returns base_shape.
RodShape apply_force_deflection(const RodShape& base_shape,
                                const ContactForce& force,
                                double bending_stiffness,
                                double kappa_max = 133.33);

}  // namespace fbgsf
