#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fbgsf/fbg_sim.hpp"
#include "fbgsf/force.hpp"
#include "fbgsf/geometry.hpp"

namespace fbgsf {

// One labeled acquisition: strain inputs plus shape and force ground truth.
struct Sample {
    Eigen::VectorXd strains;         // length M
    Eigen::VectorXd gt_curvatures;   // length M
    Eigen::VectorXd gt_twists;       // length M
    ContactForce gt_force;
    Eigen::VectorXd gt_distribution; // length M, Gaussian force encoding
    int scenario_id = -1;            // -1 for static samples
    int step = 0;
};

// Normalization statistics fitted on the training split, plus the workspace
// label ranges used for the 0/1 target scaling.
struct NormStats {
    Eigen::VectorXd mean;            // per strain channel, length M
    Eigen::VectorXd std;             // per strain channel, floored
    std::vector<bool> constant_channel;
    double epsilon_floor = 1e-8;
    double kappa_min = 0.0, kappa_max = 0.0;
    double twist_min = 0.0, twist_max = 0.0;
    double force_min = 0.0, force_max = 0.0;
    bool fitted = false;
};

struct SimParams {
    double noise_std = 1e-5;          // strain
    double bending_stiffness = 1e-4;  // N*m^2 (EI)
    double sigma_f = 3.0;             // force-encoding width, grid units
    double no_contact_fraction = 0.2;
};

struct Dataset {
    SensorLayout layout;
    WorkspaceConfig workspace;
    SimParams sim;
    NormStats stats;
    std::vector<Sample> samples;

    // Arc positions of the M curvature nodes, the shared grid of the force
    // distribution encoding.
    Eigen::VectorXd node_grid() const;
};

struct ForceSchedule {
    bool enabled = false;
    double magnitude = 0.0;        // N, constant while in contact
    double initial_location = 0.0; // m of arc length at scenario start
    double contact_tolerance = 8e-3;  // m, release distance from the obstacle
};

// Uniformly sampled static poses: bend angle in +-bend_angle_range, contact
// location in [0, contact_span], magnitude in the workspace force range,
// with a configurable fraction of no-contact samples. Deterministic per
// (seed, sample index).
Dataset generate_static(int count, const WorkspaceConfig& workspace,
                        const SensorLayout& layout, const SimParams& sim,
                        uint64_t seed);

// One dynamic scenario: triangle-wave bend angle initial -> final -> initial.
// The contact point is anchored in space where the initial pose touches it;
// steps where the bending geometry moves the rod off that point (or outside
// the contact span) are labeled with the inactive (0, 0) convention.
std::vector<Sample> generate_dynamic(double initial_angle, double final_angle,
                                     int steps, const ForceSchedule& schedule,
                                     const WorkspaceConfig& workspace,
                                     const SensorLayout& layout,
                                     const SimParams& sim, uint64_t seed,
                                     int scenario_id = 0);

// Per-channel mean and population std over the given (training) samples;
// label min/max come from the workspace ranges.
NormStats fit_norm_stats(const std::vector<Sample>& training,
                         const WorkspaceConfig& workspace,
                         double epsilon_floor = 1e-8);

Eigen::VectorXd normalize(const Eigen::VectorXd& strains, const NormStats& stats);
Eigen::VectorXd denormalize(const Eigen::VectorXd& normalized, const NormStats& stats);

// Deterministic shuffled split; dynamic corpora are split by whole scenario
// so adjacent trajectory steps never straddle the boundary.
void split(const std::vector<Sample>& samples, double fraction, uint64_t seed,
           std::vector<Sample>& train, std::vector<Sample>& test);

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);
void export_csv(const Dataset& dataset, const std::string& path);

}  // namespace fbgsf
