#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbgsf/dataset.hpp"
#include "fbgsf/model_based.hpp"
#include "fbgsf/nn.hpp"

namespace fbgsf {

// One estimation method under evaluation: the model-based baseline or a
// trained network. The network pointer stays owned by the caller.
struct Method {
    std::string name;
    bool model_based = false;
    nn::Model* model = nullptr;  // null for the model-based method

    static Method baseline() { return {"model", true, nullptr}; }
    static Method network(std::string name, nn::Model* model) {
        return {std::move(name), false, model};
    }
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;
    long count = 0;
    bool available = true;  // false renders as NA
};

// Raw per-sample errors, exported to CSV so aggregates can be recomputed.
struct SampleRecord {
    double tip_error_mm = 0.0;
    double shape_error_mm = 0.0;
    double force_mag_error_mn = 0.0;
    double force_loc_error_mm = 0.0;
    bool gt_active = false;
};

struct StepTrace {
    double tip_error_mm = 0.0;
    double location_pred_mm = 0.0;
    double location_gt_mm = 0.0;
    double magnitude_pred_mn = 0.0;
    double magnitude_gt_mn = 0.0;
};

struct MethodReport {
    std::string name;
    MetricAggregate tip_error_mm;
    MetricAggregate shape_error_mm;
    MetricAggregate force_magnitude_error_mn;  // NA for model-based
    MetricAggregate force_location_error_mm;   // NA for model-based
    std::vector<SampleRecord> samples;
    // One trace per dynamic scenario, length == step count.
    std::vector<std::vector<StepTrace>> traces;
};

struct MetricsReport {
    std::string title;
    std::vector<MethodReport> methods;
};

// Estimates a single frame with the given method.
struct Estimate {
    RodShape shape;
    ContactForce force;
    bool has_force = false;
};
Estimate estimate_sample(const Sample& sample, const Method& method,
                         const SensorLayout& layout,
                         const WorkspaceConfig& workspace,
                         const StrainFrame& baseline);

// Strain frame of the straight configuration used for bias correction.
StrainFrame straight_baseline(const SensorLayout& layout,
                              const WorkspaceConfig& workspace);

// Evaluates every test sample with every method; force-location errors are
// averaged over active-contact ground-truth samples only.
MetricsReport run_static_suite(const std::vector<Sample>& test,
                               const std::vector<Method>& methods,
                               const SensorLayout& layout,
                               const WorkspaceConfig& workspace);

// Per-step traces plus the same aggregates, over one or more scenarios.
MetricsReport run_dynamic_suite(const std::vector<std::vector<Sample>>& scenarios,
                                const std::vector<Method>& methods,
                                const SensorLayout& layout,
                                const WorkspaceConfig& workspace);

enum class ReportFormat { Text, Csv, PlotData };

// Text tables mirror the summary layout; CSV carries aggregates plus
// per-sample rows; plot-data emits per-step trace columns.
void export_report(const MetricsReport& report, const std::string& path,
                   ReportFormat format);

}  // namespace fbgsf
