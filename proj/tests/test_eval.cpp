#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbgsf/eval.hpp"

using namespace fbgsf;

namespace {

std::vector<Sample> noiseless_static(int count, uint64_t seed) {
    SimParams sim;
    sim.noise_std = 0.0;
    return generate_static(count, WorkspaceConfig{}, SensorLayout{}, sim, seed).samples;
}

nn::Model quick_model(const std::vector<Sample>& corpus) {
    const NormStats stats = fit_norm_stats(corpus, WorkspaceConfig{});
    nn::TrainConfig config;
    config.epochs = 2;
    config.batch_size = 16;
    return nn::train(corpus, nn::EncoderKind::FC, config, stats, WorkspaceConfig{}).model;
}

}  // namespace

TEST_CASE("model-based method: noiseless static suite is near exact, force NA") {
    const auto test = noiseless_static(20, 5);
    const MetricsReport report = run_static_suite(
        test, {Method::baseline()}, SensorLayout{}, WorkspaceConfig{});
    REQUIRE(report.methods.size() == 1);
    const MethodReport& m = report.methods[0];
    CHECK(m.name == "model");
    CHECK(m.tip_error_mm.available);
    // constant-curvature samples plus a point-force kink; the triad fit
    // flattens the ramped part of the profile, so a few millimeters of tip
    // error remain even without noise
    CHECK(m.tip_error_mm.mean < 8.0);
    CHECK(m.tip_error_mm.mean > 0.0);
    CHECK_FALSE(m.force_magnitude_error_mn.available);
    CHECK_FALSE(m.force_location_error_mm.available);
    CHECK(m.samples.size() == 20);
}

TEST_CASE("network method reports all four metrics") {
    const auto corpus = noiseless_static(32, 6);
    nn::Model model = quick_model(corpus);
    const MetricsReport report = run_static_suite(
        corpus, {Method::network("net", &model)}, SensorLayout{}, WorkspaceConfig{});
    const MethodReport& m = report.methods[0];
    CHECK(m.force_magnitude_error_mn.available);
    CHECK(m.force_magnitude_error_mn.count == 32);
    // location errors only counted over ground-truth contact samples
    long active = 0;
    for (const SampleRecord& r : m.samples)
        if (r.gt_active) ++active;
    CHECK(m.force_location_error_mm.count == active);
    CHECK(active > 0);
    CHECK(active < 32);
}

TEST_CASE("aggregate arithmetic via a hand-built report") {
    // two methods evaluated on the same frames must agree when identical
    const auto test = noiseless_static(10, 7);
    const MetricsReport report = run_static_suite(
        test, {Method::baseline(), Method::baseline()}, SensorLayout{},
        WorkspaceConfig{});
    CHECK(report.methods[0].tip_error_mm.mean ==
          report.methods[1].tip_error_mm.mean);
    CHECK(report.methods[0].tip_error_mm.stddev ==
          report.methods[1].tip_error_mm.stddev);
}

TEST_CASE("csv export: aggregates re-derivable from per-sample rows") {
    const auto test = noiseless_static(15, 8);
    const MetricsReport report = run_static_suite(
        test, {Method::baseline()}, SensorLayout{}, WorkspaceConfig{});

    const std::string path = "test_eval_report.csv";
    export_report(report, path, ReportFormat::Csv);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    double reported_mean = -1.0;
    std::vector<double> tips;
    bool in_samples = false;
    while (std::getline(in, line)) {
        if (line.rfind("model,tip_error_mm,", 0) == 0) {
            std::stringstream ss(line.substr(std::string("model,tip_error_mm,").size()));
            ss >> reported_mean;
        }
        if (line.rfind("method,sample,", 0) == 0) {
            in_samples = true;
            continue;
        }
        if (in_samples && line.rfind("model,", 0) == 0) {
            std::stringstream ss(line);
            std::string cell;
            std::getline(ss, cell, ',');  // method
            std::getline(ss, cell, ',');  // index
            std::getline(ss, cell, ',');  // tip error
            tips.push_back(std::stod(cell));
        }
    }
    std::remove(path.c_str());

    REQUIRE(tips.size() == 15);
    double mean = 0.0;
    for (double t : tips) mean += t;
    mean /= tips.size();
    CHECK(mean == doctest::Approx(reported_mean).epsilon(1e-9));
}

TEST_CASE("text export renders NA for the model-based force columns") {
    const auto test = noiseless_static(5, 9);
    const MetricsReport report = run_static_suite(
        test, {Method::baseline()}, SensorLayout{}, WorkspaceConfig{});
    const std::string path = "test_eval_report.txt";
    export_report(report, path, ReportFormat::Text);

    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    std::remove(path.c_str());
    CHECK(all.find("NA") != std::string::npos);
    CHECK(all.find("model") != std::string::npos);
    CHECK(all.find("Std is per-sample.") != std::string::npos);
}

TEST_CASE("dynamic suite: trace shape and plot export") {
    WorkspaceConfig ws;
    SensorLayout layout;
    SimParams sim;
    sim.noise_std = 0.0;
    ForceSchedule schedule;
    schedule.enabled = true;
    schedule.magnitude = 0.3;
    schedule.initial_location = 45e-3;

    const double d2r = 3.14159265358979323846 / 180.0;
    std::vector<std::vector<Sample>> scenarios;
    scenarios.push_back(generate_dynamic(30.0 * d2r, 270.0 * d2r, 21, schedule,
                                         ws, layout, sim, 3, 0));
    scenarios.push_back(generate_dynamic(85.0 * d2r, 270.0 * d2r, 21, schedule,
                                         ws, layout, sim, 3, 1));

    const MetricsReport report =
        run_dynamic_suite(scenarios, {Method::baseline()}, layout, ws);
    REQUIRE(report.methods.size() == 1);
    const MethodReport& m = report.methods[0];
    REQUIRE(m.traces.size() == 2);
    CHECK(m.traces[0].size() == 21);
    CHECK(m.traces[1].size() == 21);
    CHECK(m.samples.size() == 42);
    CHECK(m.traces[0][0].location_gt_mm == doctest::Approx(45.0).epsilon(0.05));

    const std::string path = "test_eval_plot.csv";
    export_report(report, path, ReportFormat::PlotData);
    std::ifstream in(path);
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    std::remove(path.c_str());
    CHECK(lines == 1 + 42);  // header + method x scenario x step

    CHECK_THROWS(run_dynamic_suite({}, {Method::baseline()}, layout, ws));
}

TEST_CASE("estimate_sample rejects a network method without a model") {
    const auto test = noiseless_static(1, 10);
    const StrainFrame baseline = straight_baseline(SensorLayout{}, WorkspaceConfig{});
    CHECK_THROWS(estimate_sample(test[0], Method::network("net", nullptr),
                                 SensorLayout{}, WorkspaceConfig{}, baseline));
}
