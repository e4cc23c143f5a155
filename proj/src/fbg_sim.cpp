#include "fbgsf/fbg_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "fbgsf/rng.hpp"

namespace fbgsf {

namespace {
constexpr double kTwoPi = 6.283185307179586477;
constexpr double kMinFiberBendRadius = 6e-3;  // m
}  // namespace

double SensorLayout::azimuth(int s) const {
    return std::fmod(alpha0 + kTwoPi * (s * sample_spacing) / helix_pitch, kTwoPi);
}

double SensorLayout::lead_angle() const {
    return std::atan(helix_pitch / (kTwoPi * helix_radius));
}

Eigen::VectorXd SensorLayout::bias_or_zero() const {
    if (strain_bias.size() == 0) return Eigen::VectorXd::Zero(node_count);
    return strain_bias;
}

void SensorLayout::validate() const {
    if (helix_radius <= 0.0 || helix_pitch <= 0.0 || sample_spacing <= 0.0)
        throw std::invalid_argument("layout: non-positive geometry");
    if (node_count <= 0) throw std::invalid_argument("layout: node_count must be positive");
    if (helix_bend_radius(*this) < kMinFiberBendRadius)
        throw std::invalid_argument("layout: fiber bend radius below 6 mm minimum");
    if (node_count * sample_spacing > fiber_length + sample_spacing)
        throw std::invalid_argument("layout: samples exceed fiber length");
    if (strain_bias.size() != 0 && strain_bias.size() != node_count)
        throw std::invalid_argument("layout: strain_bias length mismatch");
}

bool same_layout(const SensorLayout& a, const SensorLayout& b) {
    return a.node_count == b.node_count && a.sample_spacing == b.sample_spacing &&
           a.helix_radius == b.helix_radius && a.helix_pitch == b.helix_pitch &&
           a.alpha0 == b.alpha0 && a.strain_coefficient == b.strain_coefficient &&
           a.shear_coefficient == b.shear_coefficient &&
           a.bragg_wavelength == b.bragg_wavelength &&
           a.bias_or_zero() == b.bias_or_zero();
}

void StrainFrame::validate() const {
    if (!strains.allFinite()) throw std::invalid_argument("frame: non-finite strain");
    if (strains.cwiseAbs().maxCoeff() > 0.3)
        throw std::invalid_argument("frame: strain beyond 0.3 sanity bound");
}

double helix_bend_radius(const SensorLayout& layout) {
    if (layout.helix_radius <= 0.0 || layout.helix_pitch <= 0.0)
        throw std::invalid_argument("helix_bend_radius: non-positive geometry");
    const double r = layout.helix_radius;
    const double h = layout.helix_pitch / kTwoPi;
    return (r * r + h * h) / r;
}

double strain_from_wavelength(double wavelength_nm, double shift_nm,
                              double strain_coefficient) {
    if (wavelength_nm <= 0.0) throw std::invalid_argument("wavelength must be positive");
    if (strain_coefficient >= 1.0)
        throw std::invalid_argument("strain coefficient must be < 1");
    return shift_nm / (wavelength_nm * (1.0 - strain_coefficient));
}

double wavelength_shift_from_strain(double wavelength_nm, double strain,
                                    double strain_coefficient) {
    if (wavelength_nm <= 0.0) throw std::invalid_argument("wavelength must be positive");
    if (strain_coefficient >= 1.0)
        throw std::invalid_argument("strain coefficient must be < 1");
    return strain * wavelength_nm * (1.0 - strain_coefficient);
}

void axial_shear_strains(const RodShape& shape, const SensorLayout& layout,
                         Eigen::VectorXd& axial, Eigen::VectorXd& shear) {
    const int m = layout.node_count;
    if (shape.node_count() != m)
        throw std::invalid_argument("axial_shear_strains: node count mismatch");
    axial.resize(m);
    shear.resize(m);
    const double r = layout.helix_radius;
    for (int s = 0; s < m; ++s) {
        axial[s] = -shape.curvatures[s] * r *
                   std::sin(shape.twists[s] + layout.azimuth(s));
        const double dphi = (s + 1 < m) ? shape.twists[s + 1] - shape.twists[s]
                                        : shape.twists[s] - shape.twists[s - 1];
        shear[s] = dphi * r * layout.shear_coefficient / layout.sample_spacing;
    }
}

StrainFrame measure(const RodShape& shape, const SensorLayout& layout,
                    double noise_std, uint64_t seed, uint64_t frame_index) {
    if (noise_std < 0.0) throw std::invalid_argument("measure: negative noise_std");
    Eigen::VectorXd axial, shear;
    axial_shear_strains(shape, layout, axial, shear);
    const double theta = layout.lead_angle();
    const Eigen::VectorXd bias = layout.bias_or_zero();

    StrainFrame frame;
    frame.strains = std::cos(theta) * axial + std::sin(theta) * shear + bias;
    if (noise_std > 0.0) {
        Rng rng = Rng::substream(seed, frame_index);
        for (int s = 0; s < layout.node_count; ++s)
            frame.strains[s] += noise_std * rng.gaussian();
    }
    frame.wavelength_shifts.resize(layout.node_count);
    for (int s = 0; s < layout.node_count; ++s)
        frame.wavelength_shifts[s] = wavelength_shift_from_strain(
            layout.bragg_wavelength, frame.strains[s], layout.strain_coefficient);
    frame.timestamp = static_cast<long>(frame_index);
    return frame;
}

void decompose(const StrainFrame& frame, const SensorLayout& layout,
               const StrainFrame& baseline, Eigen::VectorXd& axial,
               Eigen::VectorXd& shear, DecomposeMode mode) {
    if (frame.strains.size() != layout.node_count ||
        baseline.strains.size() != layout.node_count)
        throw std::invalid_argument("decompose: layout mismatch");
    const Eigen::VectorXd corrected = frame.strains - baseline.strains;
    const double theta = layout.lead_angle();
    if (mode == DecomposeMode::Planar) {
        axial = corrected / std::cos(theta);
        shear = Eigen::VectorXd::Zero(layout.node_count);
    } else {
        // Same fixed projection as measure: split along (cos, sin).
        axial = corrected * std::cos(theta);
        shear = corrected * std::sin(theta);
    }
}

}  // namespace fbgsf
