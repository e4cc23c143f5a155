#include "fbgsf/config.hpp"

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace fbgsf {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::vector<std::string>& known,
                    const std::string& section) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + it.key() +
                                        "' in section " + section);
    }
}

template <typename T>
void get(const json& obj, const char* key, T& value) {
    if (obj.contains(key)) value = obj.at(key).get<T>();
}

}  // namespace

RunConfig default_run_config() { return RunConfig{}; }

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: malformed JSON in " + path + ": " +
                                    e.what());
    }

    RunConfig cfg;
    reject_unknown(root,
                   {"workspace", "layout", "sim", "train", "dynamic",
                    "static_count", "split_fraction", "seed", "output_dir"},
                   "(root)");

    if (root.contains("workspace")) {
        const json& w = root["workspace"];
        reject_unknown(w,
                       {"kappa_max", "bend_angle_range_deg", "min_bend_radius",
                        "rod_length", "endoscope_outer_diameter", "force_min",
                        "force_max", "contact_span"},
                       "workspace");
        get(w, "kappa_max", cfg.workspace.kappa_max);
        if (w.contains("bend_angle_range_deg"))
            cfg.workspace.bend_angle_range =
                w["bend_angle_range_deg"].get<double>() * M_PI / 180.0;
        get(w, "min_bend_radius", cfg.workspace.min_bend_radius);
        get(w, "rod_length", cfg.workspace.rod_length);
        get(w, "endoscope_outer_diameter", cfg.workspace.endoscope_outer_diameter);
        get(w, "force_min", cfg.workspace.force_min);
        get(w, "force_max", cfg.workspace.force_max);
        get(w, "contact_span", cfg.workspace.contact_span);
    }
    if (root.contains("layout")) {
        const json& l = root["layout"];
        reject_unknown(l,
                       {"node_count", "sample_spacing", "helix_radius",
                        "helix_pitch", "alpha0", "strain_coefficient",
                        "shear_coefficient", "bragg_wavelength",
                        "tube_outer_diameter", "physical_fbg_count",
                        "fiber_length", "strain_bias"},
                       "layout");
        get(l, "node_count", cfg.layout.node_count);
        get(l, "sample_spacing", cfg.layout.sample_spacing);
        get(l, "helix_radius", cfg.layout.helix_radius);
        get(l, "helix_pitch", cfg.layout.helix_pitch);
        get(l, "alpha0", cfg.layout.alpha0);
        get(l, "strain_coefficient", cfg.layout.strain_coefficient);
        get(l, "shear_coefficient", cfg.layout.shear_coefficient);
        get(l, "bragg_wavelength", cfg.layout.bragg_wavelength);
        get(l, "tube_outer_diameter", cfg.layout.tube_outer_diameter);
        get(l, "physical_fbg_count", cfg.layout.physical_fbg_count);
        get(l, "fiber_length", cfg.layout.fiber_length);
        if (l.contains("strain_bias")) {
            const auto vals = l["strain_bias"].get<std::vector<double>>();
            cfg.layout.strain_bias =
                Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
        }
    }
    if (root.contains("sim")) {
        const json& s = root["sim"];
        reject_unknown(s,
                       {"noise_std", "bending_stiffness", "sigma_f",
                        "no_contact_fraction"},
                       "sim");
        get(s, "noise_std", cfg.sim.noise_std);
        get(s, "bending_stiffness", cfg.sim.bending_stiffness);
        get(s, "sigma_f", cfg.sim.sigma_f);
        get(s, "no_contact_fraction", cfg.sim.no_contact_fraction);
    }
    if (root.contains("train")) {
        const json& t = root["train"];
        reject_unknown(t,
                       {"learning_rate", "batch_size", "weight_decay", "epochs",
                        "seed", "force_weight", "magnitude_weight",
                        "validation_fraction"},
                       "train");
        get(t, "learning_rate", cfg.train.learning_rate);
        get(t, "batch_size", cfg.train.batch_size);
        get(t, "weight_decay", cfg.train.weight_decay);
        get(t, "epochs", cfg.train.epochs);
        get(t, "seed", cfg.train.seed);
        get(t, "force_weight", cfg.train.force_weight);
        get(t, "magnitude_weight", cfg.train.magnitude_weight);
        get(t, "validation_fraction", cfg.train.validation_fraction);
    }
    if (root.contains("dynamic")) {
        const json& d = root["dynamic"];
        reject_unknown(d,
                       {"initial_angles_deg", "final_angle_deg", "steps",
                        "force_enabled", "force_magnitude", "force_location",
                        "contact_tolerance"},
                       "dynamic");
        get(d, "initial_angles_deg", cfg.dynamic.initial_angles_deg);
        get(d, "final_angle_deg", cfg.dynamic.final_angle_deg);
        get(d, "steps", cfg.dynamic.steps);
        get(d, "force_enabled", cfg.dynamic.force_enabled);
        get(d, "force_magnitude", cfg.dynamic.force_magnitude);
        get(d, "force_location", cfg.dynamic.force_location);
        get(d, "contact_tolerance", cfg.dynamic.contact_tolerance);
    }
    get(root, "static_count", cfg.static_count);
    get(root, "split_fraction", cfg.split_fraction);
    get(root, "seed", cfg.seed);
    get(root, "output_dir", cfg.output_dir);

    if (const char* env = std::getenv("FBGSF_OUT")) cfg.output_dir = env;
    cfg.workspace.validate();
    cfg.layout.validate();
    cfg.train.validate();
    return cfg;
}

Eigen::VectorXd load_frame_file(const std::string& path, int expected_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("frame file: cannot open " + path);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != expected_count)
        throw std::runtime_error("frame file: expected " +
                                 std::to_string(expected_count) + " values, got " +
                                 std::to_string(values.size()));
    return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

}  // namespace fbgsf
