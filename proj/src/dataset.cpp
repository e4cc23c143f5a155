#include "fbgsf/dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "fbgsf/detail/serial_types.hpp"
#include "fbgsf/rng.hpp"

namespace fbgsf {

namespace {

constexpr char kMagic[8] = {'F', 'B', 'G', 'S', 'F', 'D', 'S', '1'};
constexpr uint32_t kVersion = 1;

Sample make_sample(const RodShape& deflected, const ContactForce& force,
                   const Eigen::VectorXd& grid, const SensorLayout& layout,
                   const SimParams& sim, uint64_t noise_seed) {
    Sample sample;
    sample.strains = measure(deflected, layout, sim.noise_std, noise_seed).strains;
    sample.gt_curvatures = deflected.curvatures;
    sample.gt_twists = deflected.twists;
    sample.gt_force = force;
    sample.gt_distribution = encode_force(force, grid, sim.sigma_f).values;
    return sample;
}

}  // namespace

Eigen::VectorXd Dataset::node_grid() const {
    const double step = workspace.rod_length / layout.node_count;
    Eigen::VectorXd grid(layout.node_count);
    for (int i = 0; i < layout.node_count; ++i) grid[i] = i * step;
    return grid;
}

Dataset generate_static(int count, const WorkspaceConfig& workspace,
                        const SensorLayout& layout, const SimParams& sim,
                        uint64_t seed) {
    if (count <= 0) throw std::invalid_argument("generate_static: count must be positive");
    workspace.validate();
    layout.validate();

    Dataset ds;
    ds.layout = layout;
    ds.workspace = workspace;
    ds.sim = sim;
    ds.samples.reserve(count);
    const Eigen::VectorXd grid = ds.node_grid();
    const double step = workspace.rod_length / layout.node_count;

    for (int i = 0; i < count; ++i) {
        Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
        const double angle =
            rng.uniform(-workspace.bend_angle_range, workspace.bend_angle_range);
        ContactForce force = ContactForce::none();
        if (rng.uniform() >= sim.no_contact_fraction) {
            const double location = rng.uniform(0.0, workspace.contact_span);
            const double magnitude = rng.uniform(workspace.force_min, workspace.force_max);
            force = ContactForce::at(magnitude, location);
        }
        const uint64_t noise_seed = rng.next();

        Eigen::VectorXd curvatures, twists;
        bend_profile(angle, BendProfile::Constant, layout.node_count,
                     workspace.rod_length, curvatures, twists,
                     workspace.bend_angle_range);
        const RodShape base = integrate_shape(curvatures, twists, step);
        const RodShape deflected = apply_force_deflection(
            base, force, sim.bending_stiffness, workspace.kappa_max);

        Sample sample = make_sample(deflected, force, grid, layout, sim, noise_seed);
        sample.step = i;
        ds.samples.push_back(std::move(sample));
    }
    return ds;
}

std::vector<Sample> generate_dynamic(double initial_angle, double final_angle,
                                     int steps, const ForceSchedule& schedule,
                                     const WorkspaceConfig& workspace,
                                     const SensorLayout& layout,
                                     const SimParams& sim, uint64_t seed,
                                     int scenario_id) {
    if (steps < 2) throw std::invalid_argument("generate_dynamic: steps must be >= 2");
    if (std::abs(initial_angle) > workspace.bend_angle_range + 1e-12)
        throw std::invalid_argument("generate_dynamic: initial angle outside workspace");
    const double step = workspace.rod_length / layout.node_count;
    const int m = layout.node_count;
    Eigen::VectorXd grid(m);
    for (int i = 0; i < m; ++i) grid[i] = i * step;

    // Anchor the obstacle where the initial pose touches it.
    Eigen::VectorXd curvatures, twists;
    bend_profile(initial_angle, BendProfile::Constant, m, workspace.rod_length,
                 curvatures, twists, workspace.bend_angle_range);
    const RodShape initial_shape = integrate_shape(curvatures, twists, step);
    const int anchor_node =
        std::min<int>(m, std::lround(schedule.initial_location / step));
    const Eigen::Vector3d obstacle = initial_shape.positions[anchor_node];

    std::vector<Sample> samples;
    samples.reserve(steps);
    const double half = (steps - 1) / 2.0;
    for (int t = 0; t < steps; ++t) {
        const double frac = (t <= half) ? t / half : (steps - 1 - t) / half;
        const double angle = initial_angle + (final_angle - initial_angle) * frac;

        bend_profile(angle, BendProfile::Constant, m, workspace.rod_length,
                     curvatures, twists, workspace.bend_angle_range);
        const RodShape base = integrate_shape(curvatures, twists, step);

        // Closest node to the anchored obstacle decides contact state.
        int nearest = 0;
        double best = (base.positions[0] - obstacle).norm();
        for (int j = 1; j <= m; ++j) {
            const double d = (base.positions[j] - obstacle).norm();
            if (d < best) {
                best = d;
                nearest = j;
            }
        }
        const double arc = nearest * step;
        ContactForce force = ContactForce::none();
        if (schedule.enabled && best <= schedule.contact_tolerance &&
            arc <= workspace.contact_span)
            force = ContactForce::at(schedule.magnitude, arc);

        const RodShape deflected = apply_force_deflection(
            base, force, sim.bending_stiffness, workspace.kappa_max);
        Rng rng = Rng::substream(seed, static_cast<uint64_t>(t));
        Sample sample = make_sample(deflected, force, grid, layout, sim, rng.next());
        sample.scenario_id = scenario_id;
        sample.step = t;
        samples.push_back(std::move(sample));
    }
    return samples;
}

NormStats fit_norm_stats(const std::vector<Sample>& training,
                         const WorkspaceConfig& workspace, double epsilon_floor) {
    if (training.size() < 2)
        throw std::invalid_argument("fit_norm_stats: need at least 2 samples");
    const int m = static_cast<int>(training.front().strains.size());
    NormStats stats;
    stats.epsilon_floor = epsilon_floor;
    stats.mean = Eigen::VectorXd::Zero(m);
    stats.std = Eigen::VectorXd::Zero(m);
    stats.constant_channel.assign(m, false);
    for (const Sample& s : training) stats.mean += s.strains;
    stats.mean /= static_cast<double>(training.size());
    for (const Sample& s : training)
        stats.std += (s.strains - stats.mean).cwiseAbs2();
    stats.std = (stats.std / static_cast<double>(training.size())).cwiseSqrt();
    for (int c = 0; c < m; ++c) {
        if (stats.std[c] < epsilon_floor) {
            stats.std[c] = epsilon_floor;
            stats.constant_channel[c] = true;
        }
    }
    stats.kappa_min = -workspace.kappa_max;
    stats.kappa_max = workspace.kappa_max;
    stats.twist_min = -3.14159265358979323846;
    stats.twist_max = 3.14159265358979323846;
    stats.force_min = workspace.force_min;
    stats.force_max = workspace.force_max;
    stats.fitted = true;
    return stats;
}

Eigen::VectorXd normalize(const Eigen::VectorXd& strains, const NormStats& stats) {
    if (!stats.fitted) throw std::invalid_argument("normalize: stats not fitted");
    if (strains.size() != stats.mean.size())
        throw std::invalid_argument("normalize: dimension mismatch");
    return (strains - stats.mean).cwiseQuotient(stats.std);
}

Eigen::VectorXd denormalize(const Eigen::VectorXd& normalized, const NormStats& stats) {
    if (normalized.size() != stats.mean.size())
        throw std::invalid_argument("denormalize: dimension mismatch");
    return normalized.cwiseProduct(stats.std) + stats.mean;
}

void split(const std::vector<Sample>& samples, double fraction, uint64_t seed,
           std::vector<Sample>& train, std::vector<Sample>& test) {
    if (samples.empty()) throw std::invalid_argument("split: empty corpus");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split: fraction must be in (0, 1)");

    // Group keys: each static sample is its own group; dynamic samples group
    // by scenario so trajectories never straddle the boundary.
    std::vector<std::vector<size_t>> groups;
    {
        std::vector<int> scenario_of_group;
        for (size_t i = 0; i < samples.size(); ++i) {
            const int sc = samples[i].scenario_id;
            if (sc < 0) {
                groups.push_back({i});
                scenario_of_group.push_back(-1);
            } else {
                size_t g = 0;
                for (; g < scenario_of_group.size(); ++g)
                    if (scenario_of_group[g] == sc) break;
                if (g == scenario_of_group.size()) {
                    groups.push_back({});
                    scenario_of_group.push_back(sc);
                }
                groups[g].push_back(i);
            }
        }
    }

    Rng rng(seed);
    for (size_t i = groups.size(); i > 1; --i)
        std::swap(groups[i - 1], groups[rng.below(i)]);

    const size_t target = static_cast<size_t>(
        std::floor(fraction * static_cast<double>(samples.size())));
    train.clear();
    test.clear();
    size_t taken = 0;
    for (const auto& g : groups) {
        auto& dst = (taken < target) ? train : test;
        for (size_t idx : g) dst.push_back(samples[idx]);
        if (taken < target) taken += g.size();
    }
    if (test.empty() && !train.empty()) {
        test.push_back(train.back());
        train.pop_back();
    }
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    detail::Writer w;
    detail::write_layout(w, dataset.layout);
    detail::write_workspace(w, dataset.workspace);
    w.pod(dataset.sim.noise_std);
    w.pod(dataset.sim.bending_stiffness);
    w.pod(dataset.sim.sigma_f);
    w.pod(dataset.sim.no_contact_fraction);
    detail::write_stats(w, dataset.stats);
    w.pod<uint64_t>(dataset.samples.size());
    for (const Sample& s : dataset.samples) {
        w.vec(s.strains);
        w.vec(s.gt_curvatures);
        w.vec(s.gt_twists);
        w.pod(s.gt_force.magnitude);
        w.pod(s.gt_force.location);
        w.pod<uint8_t>(s.gt_force.active ? 1 : 0);
        w.vec(s.gt_distribution);
        w.pod<int32_t>(s.scenario_id);
        w.pod<int32_t>(s.step);
    }
    detail::write_container(path, kMagic, kVersion, w.buf);
}

Dataset load_dataset(const std::string& path) {
    const std::vector<char> payload = detail::read_container(path, kMagic, kVersion);
    detail::Reader r{payload.data(), payload.data() + payload.size()};
    Dataset ds;
    ds.layout = detail::read_layout(r);
    ds.workspace = detail::read_workspace(r);
    ds.sim.noise_std = r.pod<double>();
    ds.sim.bending_stiffness = r.pod<double>();
    ds.sim.sigma_f = r.pod<double>();
    ds.sim.no_contact_fraction = r.pod<double>();
    ds.stats = detail::read_stats(r);
    const uint64_t count = r.pod<uint64_t>();
    ds.samples.resize(count);
    for (uint64_t i = 0; i < count; ++i) {
        Sample& s = ds.samples[i];
        s.strains = r.vec();
        s.gt_curvatures = r.vec();
        s.gt_twists = r.vec();
        s.gt_force.magnitude = r.pod<double>();
        s.gt_force.location = r.pod<double>();
        s.gt_force.active = r.pod<uint8_t>() != 0;
        s.gt_distribution = r.vec();
        s.scenario_id = r.pod<int32_t>();
        s.step = r.pod<int32_t>();
    }
    return ds;
}

void export_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    out.precision(17);
    const int m = dataset.layout.node_count;
    for (int i = 0; i < m; ++i) out << "s" << i << ",";
    for (int i = 0; i < m; ++i) out << "k" << i << ",";
    for (int i = 0; i < m; ++i) out << "t" << i << ",";
    out << "F,xc,active\n";
    for (const Sample& s : dataset.samples) {
        for (int i = 0; i < m; ++i) out << s.strains[i] << ",";
        for (int i = 0; i < m; ++i) out << s.gt_curvatures[i] << ",";
        for (int i = 0; i < m; ++i) out << s.gt_twists[i] << ",";
        out << s.gt_force.magnitude << "," << s.gt_force.location << ","
            << (s.gt_force.active ? 1 : 0) << "\n";
    }
}

}  // namespace fbgsf
