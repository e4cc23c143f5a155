#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fbgsf {

// Workspace limits of the instrument and the experiment ranges.
struct WorkspaceConfig {
    double kappa_max = 133.33;            // 1/m
    double bend_angle_range = 4.71238898038468986;  // rad (270 deg), symmetric +-
    double min_bend_radius = 7.5e-3;      // m
    double rod_length = 0.132;            // m
    double endoscope_outer_diameter = 3e-3;  // m
    double force_min = 0.0;               // N
    double force_max = 0.5;               // N
    double contact_span = 0.090;          // m

    // kappa_max must equal 1/min_bend_radius within 1e-4 relative.
    void validate() const;
};

// Discretized rod curve. Each of the M nodes carries the curvature and
// bending-plane azimuth of one constant-curvature segment of the rod, so
// `positions` holds M+1 points: the base (always at the origin of the base
// frame) followed by the end of every segment. node_arc_lengths likewise has
// M+1 entries running from 0 to total_length.
struct RodShape {
    Eigen::VectorXd node_arc_lengths;  // m, strictly increasing, starts at 0
    Eigen::VectorXd curvatures;        // 1/m, signed
    Eigen::VectorXd twists;            // rad, bending-plane azimuth
    std::vector<Eigen::Vector3d> positions;  // m, empty until integrated
    double total_length = 0.0;         // m

    int node_count() const { return static_cast<int>(curvatures.size()); }
    bool has_positions() const { return !positions.empty(); }
    const Eigen::Vector3d& tip() const { return positions.back(); }
};

// Integrates per-node (curvature, azimuth) into Cartesian positions.
// Base node sits at the origin with frame = identity and tangent = +z;
// each segment is a constant-curvature arc of length `step` bending
// toward the in-plane direction (cos phi, sin phi, 0).
RodShape integrate_shape(const Eigen::VectorXd& curvatures,
                         const Eigen::VectorXd& twists, double step,
                         const Eigen::Matrix3d& base_frame = Eigen::Matrix3d::Identity());

// Euclidean distance between estimated and ground-truth tip positions.
double tip_position_error(const RodShape& estimated, const RodShape& truth);

// Mean per-node Euclidean position error.
double shape_error(const RodShape& estimated, const RodShape& truth);

enum class BendProfile { Constant, Ramp };

// Planar curvature profile whose integral over the rod equals total_angle.
// Twist azimuth is zero everywhere (sign carried by the curvature).
void bend_profile(double total_angle, BendProfile profile, int node_count,
                  double length, Eigen::VectorXd& curvatures,
                  Eigen::VectorXd& twists,
                  double max_angle = 4.71238898038468986);

}  // namespace fbgsf
