#include "fbgsf/eval.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fbgsf {

namespace {

MetricAggregate aggregate(const std::vector<double>& values, bool available = true) {
    MetricAggregate agg;
    agg.available = available;
    agg.count = static_cast<long>(values.size());
    if (!available || values.empty()) {
        agg.available = available && !values.empty();
        return agg;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / values.size();
    double sq = 0.0;
    for (double v : values) sq += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(sq / values.size());
    return agg;
}

std::string format_cell(const MetricAggregate& agg) {
    if (!agg.available) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f +- %.2f", agg.mean, agg.stddev);
    return buf;
}

RodShape gt_shape(const Sample& sample, const WorkspaceConfig& workspace) {
    const double step =
        workspace.rod_length / static_cast<double>(sample.gt_curvatures.size());
    return integrate_shape(sample.gt_curvatures, sample.gt_twists, step);
}

MethodReport evaluate_samples(const std::vector<Sample>& samples,
                              const Method& method, const SensorLayout& layout,
                              const WorkspaceConfig& workspace,
                              const StrainFrame& baseline) {
    MethodReport rep;
    rep.name = method.name;
    std::vector<double> tip, shape, fmag, floc;
    for (const Sample& sample : samples) {
        const RodShape truth = gt_shape(sample, workspace);
        const Estimate est =
            estimate_sample(sample, method, layout, workspace, baseline);

        SampleRecord rec;
        rec.tip_error_mm = tip_position_error(est.shape, truth) * 1e3;
        rec.shape_error_mm = shape_error(est.shape, truth) * 1e3;
        rec.gt_active = sample.gt_force.active;
        tip.push_back(rec.tip_error_mm);
        shape.push_back(rec.shape_error_mm);

        if (est.has_force) {
            rec.force_mag_error_mn =
                std::abs(est.force.magnitude - sample.gt_force.magnitude) * 1e3;
            fmag.push_back(rec.force_mag_error_mn);
            if (sample.gt_force.active) {
                rec.force_loc_error_mm =
                    std::abs(est.force.location - sample.gt_force.location) * 1e3;
                floc.push_back(rec.force_loc_error_mm);
            }
        }
        rep.samples.push_back(rec);
    }
    rep.tip_error_mm = aggregate(tip);
    rep.shape_error_mm = aggregate(shape);
    rep.force_magnitude_error_mn = aggregate(fmag, !method.model_based);
    rep.force_location_error_mm = aggregate(floc, !method.model_based);
    return rep;
}

}  // namespace

StrainFrame straight_baseline(const SensorLayout& layout,
                              const WorkspaceConfig& workspace) {
    const int m = layout.node_count;
    const double step = workspace.rod_length / m;
    const RodShape straight = integrate_shape(Eigen::VectorXd::Zero(m),
                                              Eigen::VectorXd::Zero(m), step);
    return measure(straight, layout, 0.0, 0);
}

Estimate estimate_sample(const Sample& sample, const Method& method,
                         const SensorLayout& layout,
                         const WorkspaceConfig& workspace,
                         const StrainFrame& baseline) {
    Estimate est;
    if (method.model_based) {
        StrainFrame frame;
        frame.strains = sample.strains;
        est.shape = reconstruct(frame, baseline, layout);
        est.has_force = false;
    } else {
        if (!method.model) throw std::invalid_argument("method has no model");
        const nn::Inference inf = nn::infer(sample.strains, *method.model, workspace);
        est.shape = inf.shape;
        est.force = inf.force;
        est.has_force = true;
    }
    return est;
}

MetricsReport run_static_suite(const std::vector<Sample>& test,
                               const std::vector<Method>& methods,
                               const SensorLayout& layout,
                               const WorkspaceConfig& workspace) {
    if (test.empty()) throw std::invalid_argument("run_static_suite: empty test split");
    const StrainFrame baseline = straight_baseline(layout, workspace);
    MetricsReport report;
    report.title = "static";
    for (const Method& method : methods)
        report.methods.push_back(
            evaluate_samples(test, method, layout, workspace, baseline));
    return report;
}

MetricsReport run_dynamic_suite(const std::vector<std::vector<Sample>>& scenarios,
                                const std::vector<Method>& methods,
                                const SensorLayout& layout,
                                const WorkspaceConfig& workspace) {
    if (scenarios.empty())
        throw std::invalid_argument("run_dynamic_suite: no scenarios");
    const StrainFrame baseline = straight_baseline(layout, workspace);

    MetricsReport report;
    report.title = "dynamic";
    for (const Method& method : methods) {
        std::vector<Sample> all;
        for (const auto& sc : scenarios) all.insert(all.end(), sc.begin(), sc.end());
        MethodReport rep = evaluate_samples(all, method, layout, workspace, baseline);

        for (const auto& scenario : scenarios) {
            std::vector<StepTrace> trace;
            for (const Sample& sample : scenario) {
                const RodShape truth = gt_shape(sample, workspace);
                const Estimate est =
                    estimate_sample(sample, method, layout, workspace, baseline);
                StepTrace st;
                st.tip_error_mm = tip_position_error(est.shape, truth) * 1e3;
                st.location_gt_mm = sample.gt_force.location * 1e3;
                st.magnitude_gt_mn = sample.gt_force.magnitude * 1e3;
                if (est.has_force) {
                    st.location_pred_mm = est.force.location * 1e3;
                    st.magnitude_pred_mn = est.force.magnitude * 1e3;
                }
                trace.push_back(st);
            }
            rep.traces.push_back(std::move(trace));
        }
        report.methods.push_back(std::move(rep));
    }
    return report;
}

void export_report(const MetricsReport& report, const std::string& path,
                   ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_report: cannot open " + path);
    out.precision(12);

    switch (format) {
        case ReportFormat::Text: {
            out << "Comparison results (" << report.title << " experiments)\n";
            out << "Std is per-sample.\n";
            out << "method      tip position error (mm)   shape error (mm)   "
                   "force magnitude error (mN)   force location error (mm)\n";
            for (const MethodReport& m : report.methods) {
                char line[256];
                std::snprintf(line, sizeof(line), "%-10s  %-24s  %-17s  %-27s  %s\n",
                              m.name.c_str(), format_cell(m.tip_error_mm).c_str(),
                              format_cell(m.shape_error_mm).c_str(),
                              format_cell(m.force_magnitude_error_mn).c_str(),
                              format_cell(m.force_location_error_mm).c_str());
                out << line;
            }
            break;
        }
        case ReportFormat::Csv: {
            out << "method,metric,mean,std,count\n";
            auto row = [&out](const std::string& name, const std::string& metric,
                              const MetricAggregate& agg) {
                out << name << "," << metric << ",";
                if (agg.available)
                    out << agg.mean << "," << agg.stddev << "," << agg.count << "\n";
                else
                    out << "NA,NA," << agg.count << "\n";
            };
            for (const MethodReport& m : report.methods) {
                row(m.name, "tip_error_mm", m.tip_error_mm);
                row(m.name, "shape_error_mm", m.shape_error_mm);
                row(m.name, "force_mag_error_mn", m.force_magnitude_error_mn);
                row(m.name, "force_loc_error_mm", m.force_location_error_mm);
            }
            out << "\nmethod,sample,tip_error_mm,shape_error_mm,force_mag_error_mn,"
                   "force_loc_error_mm,gt_active\n";
            for (const MethodReport& m : report.methods)
                for (size_t i = 0; i < m.samples.size(); ++i) {
                    const SampleRecord& r = m.samples[i];
                    out << m.name << "," << i << "," << r.tip_error_mm << ","
                        << r.shape_error_mm << "," << r.force_mag_error_mn << ","
                        << r.force_loc_error_mm << "," << (r.gt_active ? 1 : 0)
                        << "\n";
                }
            break;
        }
        case ReportFormat::PlotData: {
            out << "method,scenario,step,tip_error_mm,location_pred_mm,"
                   "location_gt_mm,magnitude_pred_mn,magnitude_gt_mn\n";
            for (const MethodReport& m : report.methods)
                for (size_t sc = 0; sc < m.traces.size(); ++sc)
                    for (size_t t = 0; t < m.traces[sc].size(); ++t) {
                        const StepTrace& st = m.traces[sc][t];
                        out << m.name << "," << sc << "," << t << ","
                            << st.tip_error_mm << "," << st.location_pred_mm << ","
                            << st.location_gt_mm << "," << st.magnitude_pred_mn
                            << "," << st.magnitude_gt_mn << "\n";
                    }
            break;
        }
    }
    if (!out) throw std::runtime_error("export_report: write failed " + path);
}

}  // namespace fbgsf
