// fbgsf command-line tool: dataset generation, training, evaluation, and
// one-shot reconstruction for the FBG shape-force sensing toolkit.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fbgsf/config.hpp"
#include "fbgsf/eval.hpp"
#include "fbgsf/model_based.hpp"

namespace fs = std::filesystem;
using namespace fbgsf;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNumericError = 4;

RunConfig load_config_or_default(const std::string& path) {
    if (path.empty()) {
        RunConfig cfg = default_run_config();
        if (const char* env = std::getenv("FBGSF_OUT")) cfg.output_dir = env;
        return cfg;
    }
    return load_run_config(path);
}

int cmd_gen(const RunConfig& cfg, const std::string& kind, int count_override,
            const std::string& out_path) {
    fs::create_directories(cfg.output_dir);
    const std::string path =
        out_path.empty() ? (fs::path(cfg.output_dir) / ("dataset_" + kind + ".bin")).string()
                         : out_path;
    Dataset ds;
    if (kind == "static") {
        const int count = count_override > 0 ? count_override : cfg.static_count;
        ds = generate_static(count, cfg.workspace, cfg.layout, cfg.sim, cfg.seed);
    } else if (kind == "dynamic") {
        ds.layout = cfg.layout;
        ds.workspace = cfg.workspace;
        ds.sim = cfg.sim;
        int scenario_id = 0;
        for (double deg : cfg.dynamic.initial_angles_deg) {
            ForceSchedule schedule;
            schedule.enabled = cfg.dynamic.force_enabled;
            schedule.magnitude = cfg.dynamic.force_magnitude;
            schedule.initial_location = cfg.dynamic.force_location;
            schedule.contact_tolerance = cfg.dynamic.contact_tolerance;
            auto samples = generate_dynamic(
                deg * M_PI / 180.0, cfg.dynamic.final_angle_deg * M_PI / 180.0,
                cfg.dynamic.steps, schedule, cfg.workspace, cfg.layout, cfg.sim,
                cfg.seed + scenario_id, scenario_id);
            ds.samples.insert(ds.samples.end(), samples.begin(), samples.end());
            ++scenario_id;
        }
    } else {
        std::cerr << "E_CONFIG unknown dataset kind: " << kind << "\n";
        return kExitConfigError;
    }
    save_dataset(ds, path);
    export_csv(ds, path + ".csv");
    std::cout << "wrote " << ds.samples.size() << " samples to " << path
              << " (seed " << cfg.seed << ")\n";
    return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& encoder,
              const std::string& dataset_path, const std::string& out_path,
              const std::string& loss_csv) {
    Dataset ds = load_dataset(dataset_path);
    std::vector<Sample> train_split, test_split;
    split(ds.samples, cfg.split_fraction, cfg.seed, train_split, test_split);
    const NormStats stats = fit_norm_stats(train_split, ds.workspace);

    const nn::EncoderKind kind = nn::encoder_from_name(encoder);
    nn::TrainResult result =
        nn::train(train_split, kind, cfg.train, stats, ds.workspace);

    fs::create_directories(cfg.output_dir);
    const std::string model_path =
        out_path.empty()
            ? (fs::path(cfg.output_dir) / ("model_" + encoder + ".bin")).string()
            : out_path;
    nn::save_model(result.model, model_path);

    const std::string csv_path = loss_csv.empty() ? model_path + ".loss.csv" : loss_csv;
    std::ofstream csv(csv_path);
    csv.precision(17);
    csv << "epoch,train_loss,val_loss\n";
    for (size_t e = 0; e < result.train_losses.size(); ++e)
        csv << e << "," << result.train_losses[e] << "," << result.val_losses[e]
            << "\n";
    std::cout << "trained " << encoder << " on " << train_split.size()
              << " samples, best epoch " << result.best_epoch << ", model at "
              << model_path << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& methods_arg,
             const std::string& dataset_path,
             const std::vector<std::string>& model_args,
             const std::string& out_dir_arg) {
    Dataset ds = load_dataset(dataset_path);

    std::vector<std::string> names;
    {
        std::string tmp = methods_arg;
        size_t pos;
        while ((pos = tmp.find(',')) != std::string::npos) {
            names.push_back(tmp.substr(0, pos));
            tmp.erase(0, pos + 1);
        }
        if (!tmp.empty()) names.push_back(tmp);
    }

    std::vector<nn::Model> models;
    models.reserve(model_args.size());
    std::vector<Method> methods;
    for (const std::string& name : names) {
        if (name == "model") {
            methods.push_back(Method::baseline());
            continue;
        }
        std::string path;
        for (const std::string& m : model_args) {
            const size_t eq = m.find('=');
            if (eq != std::string::npos && m.substr(0, eq) == name)
                path = m.substr(eq + 1);
        }
        if (path.empty()) {
            std::cerr << "E_CONFIG no --model " << name << "=<path> given\n";
            return kExitConfigError;
        }
        models.push_back(nn::load_model(path));
        methods.push_back(Method::network(name, &models.back()));
    }
    // vector reallocation would invalidate the model pointers
    for (size_t i = 0, j = 0; i < methods.size(); ++i)
        if (!methods[i].model_based) methods[i].model = &models[j++];

    const bool dynamic = !ds.samples.empty() && ds.samples.front().scenario_id >= 0;
    MetricsReport report;
    if (dynamic) {
        std::vector<std::vector<Sample>> scenarios;
        for (const Sample& s : ds.samples) {
            if (scenarios.empty() || s.scenario_id !=
                                         scenarios.back().front().scenario_id)
                scenarios.emplace_back();
            scenarios.back().push_back(s);
        }
        report = run_dynamic_suite(scenarios, methods, ds.layout, ds.workspace);
    } else {
        std::vector<Sample> train_split, test_split;
        split(ds.samples, cfg.split_fraction, cfg.seed, train_split, test_split);
        report = run_static_suite(test_split, methods, ds.layout, ds.workspace);
    }

    const std::string out_dir = out_dir_arg.empty() ? cfg.output_dir : out_dir_arg;
    fs::create_directories(out_dir);
    export_report(report, (fs::path(out_dir) / "report.txt").string(),
                  ReportFormat::Text);
    export_report(report, (fs::path(out_dir) / "report.csv").string(),
                  ReportFormat::Csv);
    if (dynamic)
        export_report(report, (fs::path(out_dir) / "traces.csv").string(),
                      ReportFormat::PlotData);
    std::ifstream table((fs::path(out_dir) / "report.txt").string());
    std::cout << table.rdbuf();
    return 0;
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& input_path,
                    const std::string& baseline_path, const std::string& method,
                    const std::string& model_path, const std::string& out_path) {
    const int m = cfg.layout.node_count;
    const Eigen::VectorXd strains = load_frame_file(input_path, m);

    RodShape shape;
    ContactForce force;
    bool has_force = false;
    if (method == "model") {
        StrainFrame frame;
        frame.strains = strains;
        StrainFrame baseline;
        baseline.strains = baseline_path.empty()
                               ? straight_baseline(cfg.layout, cfg.workspace).strains
                               : load_frame_file(baseline_path, m);
        shape = reconstruct(frame, baseline, cfg.layout);
    } else {
        if (model_path.empty()) {
            std::cerr << "E_CONFIG --model required for method " << method << "\n";
            return kExitConfigError;
        }
        nn::Model model = nn::load_model(model_path);
        const nn::Inference inf = nn::infer(strains, model, cfg.workspace);
        shape = inf.shape;
        force = inf.force;
        has_force = true;
    }

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "E_DATA cannot open output " << out_path << "\n";
        return kExitDataError;
    }
    out.precision(12);
    out << "# arc_m x_m y_m z_m curvature_1pm twist_rad\n";
    for (size_t i = 0; i < shape.positions.size(); ++i) {
        const int k = std::min<int>(static_cast<int>(i), shape.node_count() - 1);
        out << shape.node_arc_lengths[i] << " " << shape.positions[i].x() << " "
            << shape.positions[i].y() << " " << shape.positions[i].z() << " "
            << shape.curvatures[k] << " " << shape.twists[k] << "\n";
    }
    if (has_force)
        out << "# force_N " << force.magnitude << " location_m " << force.location
            << " active " << (force.active ? 1 : 0) << "\n";
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FBG shape-force sensing toolkit"};
    app.require_subcommand(1);

    std::string config_path, kind = "static", out_path, dataset_path, encoder;
    std::string methods = "model", out_dir, input_path, baseline_path, method = "model";
    std::string model_path, loss_csv;
    std::vector<std::string> model_args;
    int count = 0;

    auto* gen = app.add_subcommand("gen", "generate a dataset");
    gen->add_option("--config", config_path, "JSON config file");
    gen->add_option("--kind", kind, "static|dynamic")->check(CLI::IsMember({"static", "dynamic"}));
    gen->add_option("--count", count, "override static sample count");
    gen->add_option("--out", out_path, "output dataset path");

    auto* train = app.add_subcommand("train", "train one encoder");
    train->add_option("--config", config_path, "JSON config file");
    train->add_option("--encoder", encoder, "fc|lstm|conv1d")->required()
        ->check(CLI::IsMember({"fc", "lstm", "conv1d"}));
    train->add_option("--dataset", dataset_path, "dataset file")->required();
    train->add_option("--out", out_path, "output model path");
    train->add_option("--loss-csv", loss_csv, "loss history CSV path");

    auto* eval_cmd = app.add_subcommand("eval", "run benchmark suites");
    eval_cmd->add_option("--config", config_path, "JSON config file");
    eval_cmd->add_option("--dataset", dataset_path, "dataset file")->required();
    eval_cmd->add_option("--methods", methods, "comma list: model,fc,lstm,conv1d");
    eval_cmd->add_option("--model", model_args, "name=path of a trained model");
    eval_cmd->add_option("--out-dir", out_dir, "report output directory");

    auto* rec = app.add_subcommand("reconstruct", "reconstruct one frame");
    rec->add_option("--config", config_path, "JSON config file");
    rec->add_option("--input", input_path, "frame file, one strain per line")->required();
    rec->add_option("--baseline", baseline_path, "baseline frame file");
    rec->add_option("--method", method, "model|fc|lstm|conv1d");
    rec->add_option("--model", model_path, "trained model file");
    rec->add_option("--out", out_path, "output shape file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config_or_default(config_path);
        if (gen->parsed()) return cmd_gen(cfg, kind, count, out_path);
        if (train->parsed())
            return cmd_train(cfg, encoder, dataset_path, out_path, loss_csv);
        if (eval_cmd->parsed())
            return cmd_eval(cfg, methods, dataset_path, model_args, out_dir);
        if (rec->parsed())
            return cmd_reconstruct(cfg, input_path, baseline_path, method,
                                   model_path, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "E_CONFIG " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        if (msg.find("diverged") != std::string::npos ||
            msg.find("non-finite") != std::string::npos) {
            std::cerr << "E_NUMERIC " << msg << "\n";
            return kExitNumericError;
        }
        std::cerr << "E_DATA " << msg << "\n";
        return kExitDataError;
    }
    return 0;
}
