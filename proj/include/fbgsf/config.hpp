#pragma once

#include <string>
#include <vector>

#include "fbgsf/dataset.hpp"
#include "fbgsf/nn.hpp"

namespace fbgsf {

// Dynamic-scenario generation settings: one triangle-wave trajectory per
// initial angle, all sharing the force schedule.
struct DynamicConfig {
    std::vector<double> initial_angles_deg = {30.0, 85.0, 120.0, 185.0};
    double final_angle_deg = 270.0;
    int steps = 101;
    bool force_enabled = true;
    double force_magnitude = 0.3;      // N
    double force_location = 45e-3;     // m
    double contact_tolerance = 8e-3;   // m
};

// Full run configuration; every field has the desk-scale default so a bare
// run reproduces the standard experiment.
struct RunConfig {
    WorkspaceConfig workspace;
    SensorLayout layout;
    SimParams sim;
    nn::TrainConfig train;
    DynamicConfig dynamic;
    int static_count = 6224;
    double split_fraction = 0.8;
    uint64_t seed = 42;
    std::string output_dir = ".";
};

// Parses a JSON config file; unknown keys are rejected. Missing sections and
// keys keep their defaults. The FBGSF_OUT environment variable overrides
// output_dir.
RunConfig load_run_config(const std::string& path);
RunConfig default_run_config();

// Frame file: one strain value per line, exactly M lines.
Eigen::VectorXd load_frame_file(const std::string& path, int expected_count);

}  // namespace fbgsf
