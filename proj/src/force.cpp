#include "fbgsf/force.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbgsf {

ForceDistribution encode_force(const ContactForce& force,
                               const Eigen::VectorXd& grid, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("encode_force: sigma must be positive");
    if (grid.size() == 0) throw std::invalid_argument("encode_force: empty grid");
    for (int i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("encode_force: grid not sorted ascending");

    ForceDistribution dist;
    dist.grid = grid;
    dist.sigma = sigma;
    dist.values = Eigen::VectorXd::Zero(grid.size());
    if (!force.active || force.magnitude == 0.0) return dist;

    const double spacing = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
    const double contact_index = (force.location - grid[0]) / spacing;
    for (int i = 0; i < grid.size(); ++i) {
        const double d = static_cast<double>(i) - contact_index;
        dist.values[i] = force.magnitude * std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return dist;
}

ContactForce decode_force(const ForceDistribution& dist, double magnitude,
                          double threshold) {
    if (dist.grid.size() == 0) throw std::invalid_argument("decode_force: empty grid");
    int best = 0;
    for (int i = 1; i < dist.values.size(); ++i)
        if (dist.values[i] > dist.values[best]) best = i;  // lower index wins ties
    if (dist.values.size() == 0 || dist.values[best] < threshold)
        return ContactForce::none();
    return ContactForce::at(magnitude, dist.grid[best]);
}

RodShape apply_force_deflection(const RodShape& base_shape,
                                const ContactForce& force,
                                double bending_stiffness, double kappa_max) {
    if (bending_stiffness <= 0.0)
        throw std::invalid_argument("apply_force_deflection: non-positive stiffness");
    if (!force.active || force.magnitude == 0.0) return base_shape;

    const int n = base_shape.node_count();
    const double step = base_shape.total_length / n;
    Eigen::VectorXd curvatures = base_shape.curvatures;
    for (int i = 0; i < n; ++i) {
        const double s = i * step;
        const double dk = force.magnitude * std::max(force.location - s, 0.0) /
                          bending_stiffness;
        curvatures[i] = std::clamp(curvatures[i] + dk, -kappa_max, kappa_max);
    }
    return integrate_shape(curvatures, base_shape.twists, step);
}

}  // namespace fbgsf
