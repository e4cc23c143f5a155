#include "fbgsf/model_based.hpp"

#include <cmath>
#include <stdexcept>

namespace fbgsf {

namespace {
constexpr double kTwoPi = 6.283185307179586477;
}

TriadSolution solve_triad(const Eigen::Vector3d& axial_strains,
                          const Eigen::Vector3d& alphas,
                          const Eigen::Vector3d& radii, int triad_index) {
    // eps_v,j = -r_j * (A*sin(alpha_j) + B*cos(alpha_j)),
    // A = kappa*cos(phase), B = kappa*sin(phase).
    Eigen::Matrix<double, 3, 2> design;
    for (int j = 0; j < 3; ++j) {
        design(j, 0) = -radii[j] * std::sin(alphas[j]);
        design(j, 1) = -radii[j] * std::cos(alphas[j]);
    }
    const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(
        design, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(1) < 1e-9 * svd.singularValues()(0) ||
        svd.singularValues()(0) == 0.0)
        throw std::invalid_argument("solve_triad: degenerate alpha configuration in triad " +
                                    std::to_string(triad_index));
    const Eigen::Vector2d ab = svd.solve(axial_strains);

    TriadSolution sol;
    sol.triad_index = triad_index;
    sol.curvature = ab.norm();
    sol.phase = sol.curvature > 0.0 ? std::atan2(ab[1], ab[0]) : 0.0;
    if (sol.phase < 0.0) sol.phase += kTwoPi;
    sol.residual = (design * ab - axial_strains).norm();
    sol.converged = std::isfinite(sol.residual);
    return sol;
}

Eigen::VectorXd twist_update(const Eigen::VectorXd& shear_strains,
                             const SensorLayout& layout) {
    if (layout.helix_radius <= 0.0 || layout.shear_coefficient <= 0.0)
        throw std::invalid_argument("twist_update: non-positive layout coefficients");
    return shear_strains * layout.sample_spacing /
           (layout.helix_radius * layout.shear_coefficient);
}

RodShape reconstruct(const StrainFrame& frame, const StrainFrame& baseline,
                     const SensorLayout& layout, DecomposeMode mode) {
    const int m = layout.node_count;
    Eigen::VectorXd axial, shear;
    decompose(frame, layout, baseline, axial, shear, mode);

    Eigen::VectorXd curvatures(m), phases(m);
    const int triad_count = (m + 2) / 3;
    for (int t = 0; t < triad_count; ++t) {
        // A short final triad re-uses the last three samples; repeating a
        // single sample would make the alpha configuration rank-deficient.
        const int start = std::min(3 * t, m - 3);
        Eigen::Vector3d eps, alpha, radius;
        for (int j = 0; j < 3; ++j) {
            const int s = start + j;
            eps[j] = axial[s];
            alpha[j] = layout.azimuth(s);
            radius[j] = layout.helix_radius;
        }
        const TriadSolution sol = solve_triad(eps, alpha, radius, t);
        for (int j = 0; j < 3 && 3 * t + j < m; ++j) {
            curvatures[3 * t + j] = sol.curvature;
            phases[3 * t + j] = sol.phase;
        }
    }

    // Twist drift accumulated on top of the triad azimuths.
    const Eigen::VectorXd dphi = twist_update(shear, layout);
    double acc = 0.0;
    for (int s = 0; s < m; ++s) {
        phases[s] += acc;
        acc += dphi[s];
    }

    return integrate_shape(curvatures, phases, layout.sample_spacing);
}

}  // namespace fbgsf
