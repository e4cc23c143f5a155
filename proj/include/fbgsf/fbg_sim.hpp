#pragma once

#include <Eigen/Dense>

#include "fbgsf/geometry.hpp"

namespace fbgsf {

// Helical fiber geometry and material coefficients. The default layout is a
// 4 mm soft tube with a 30 mm helix pitch and 40 distributed strain samples
// spaced 3.3 mm along the fiber.
struct SensorLayout {
    int node_count = 40;                 // M
    double sample_spacing = 3.3e-3;      // m along fiber (delta h)
    double helix_radius = 2e-3;          // m (r_t, uniform r_s)
    double helix_pitch = 30e-3;          // m (h_s)
    double alpha0 = 0.0;                 // rad, azimuth of sample 0
    double strain_coefficient = 0.22;    // p_eps
    double shear_coefficient = 1.0;      // g_eps
    double bragg_wavelength = 1550.0;    // nm, common to all nodes
    double tube_outer_diameter = 4e-3;   // m (d_t)
    int physical_fbg_count = 14;         // N
    double fiber_length = 0.132;         // m
    Eigen::VectorXd strain_bias;         // eps0 per node; empty means zero

    // Helical azimuth progression of sample s.
    double azimuth(int s) const;
    // Fiber lead angle theta_h = atan(h_s / (2*pi*r_t)).
    double lead_angle() const;
    Eigen::VectorXd bias_or_zero() const;

    // Checks helix feasibility (fiber bend radius >= 6 mm) and sampling
    // consistency (M * delta_h within fiber length).
    void validate() const;
};

bool same_layout(const SensorLayout& a, const SensorLayout& b);

// One acquisition of M strain samples along the fiber.
struct StrainFrame {
    Eigen::VectorXd strains;            // dimensionless, length M
    Eigen::VectorXd wavelength_shifts;  // nm, length M or empty
    long timestamp = 0;

    void validate() const;  // finite, |eps| <= 0.3
};

// Bending radius of the helically wrapped fiber, (r_t^2 + (h/2pi)^2)/r_t.
double helix_bend_radius(const SensorLayout& layout);

double strain_from_wavelength(double wavelength_nm, double shift_nm,
                              double strain_coefficient);
double wavelength_shift_from_strain(double wavelength_nm, double strain,
                                    double strain_coefficient);

// Strain-curvature-twist model: axial strain from bending, shear strain from
// twist change between consecutive samples (backward difference at the tip).
void axial_shear_strains(const RodShape& shape, const SensorLayout& layout,
                         Eigen::VectorXd& axial, Eigen::VectorXd& shear);

// Forward model: composes the scalar fiber strain from the axial and shear
// components via the fixed lead-angle projection, adds bias and gaussian
// noise. Deterministic for a given (seed, frame_index).
StrainFrame measure(const RodShape& shape, const SensorLayout& layout,
                    double noise_std, uint64_t seed, uint64_t frame_index = 0);

enum class DecomposeMode { Planar, General };

// Inverse of the measurement composition after baseline subtraction.
// Planar mode attributes all strain to the axial component.
void decompose(const StrainFrame& frame, const SensorLayout& layout,
               const StrainFrame& baseline, Eigen::VectorXd& axial,
               Eigen::VectorXd& shear,
               DecomposeMode mode = DecomposeMode::Planar);

}  // namespace fbgsf
