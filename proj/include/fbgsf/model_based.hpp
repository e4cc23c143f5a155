#pragma once

#include <Eigen/Dense>

#include "fbgsf/fbg_sim.hpp"
#include "fbgsf/geometry.hpp"

namespace fbgsf {

// Curvature/azimuth of one triad of consecutive FBG sections.
struct TriadSolution {
    int triad_index = 0;
    double curvature = 0.0;   // 1/m, >= 0 (sign folded into phase)
    double phase = 0.0;       // rad, in [0, 2*pi)
    double residual = 0.0;
    bool converged = false;
};

// Least-squares fit of eps_v,j = -kappa * r_j * sin(phase + alpha_j) over a
// triad via the linearization A = kappa*cos(phase), B = kappa*sin(phase).
// Throws if the alpha configuration is rank-deficient (degenerate modulo pi).
TriadSolution solve_triad(const Eigen::Vector3d& axial_strains,
                          const Eigen::Vector3d& alphas,
                          const Eigen::Vector3d& radii, int triad_index = 0);

// Per-node twist increment dphi_s = eps_h,s * dh / (r_s * g_eps).
Eigen::VectorXd twist_update(const Eigen::VectorXd& shear_strains,
                             const SensorLayout& layout);

// Model-based pipeline: baseline-corrected decomposition, disjoint triads
// (when M is not a multiple of 3 the last triad slides back to cover the
// final three samples), twist chaining, and frame integration from base to
// tip.
RodShape reconstruct(const StrainFrame& frame, const StrainFrame& baseline,
                     const SensorLayout& layout,
                     DecomposeMode mode = DecomposeMode::Planar);

}  // namespace fbgsf
