#pragma once

// Serializers for the domain types shared by the dataset and model files.

#include "fbgsf/dataset.hpp"
#include "fbgsf/detail/serial.hpp"

namespace fbgsf::detail {

inline void write_layout(Writer& w, const SensorLayout& l) {
    w.pod<int32_t>(l.node_count);
    w.pod(l.sample_spacing);
    w.pod(l.helix_radius);
    w.pod(l.helix_pitch);
    w.pod(l.alpha0);
    w.pod(l.strain_coefficient);
    w.pod(l.shear_coefficient);
    w.pod(l.bragg_wavelength);
    w.pod(l.tube_outer_diameter);
    w.pod<int32_t>(l.physical_fbg_count);
    w.pod(l.fiber_length);
    w.vec(l.strain_bias);
}

inline SensorLayout read_layout(Reader& r) {
    SensorLayout l;
    l.node_count = r.pod<int32_t>();
    l.sample_spacing = r.pod<double>();
    l.helix_radius = r.pod<double>();
    l.helix_pitch = r.pod<double>();
    l.alpha0 = r.pod<double>();
    l.strain_coefficient = r.pod<double>();
    l.shear_coefficient = r.pod<double>();
    l.bragg_wavelength = r.pod<double>();
    l.tube_outer_diameter = r.pod<double>();
    l.physical_fbg_count = r.pod<int32_t>();
    l.fiber_length = r.pod<double>();
    l.strain_bias = r.vec();
    return l;
}

inline void write_workspace(Writer& w, const WorkspaceConfig& c) {
    w.pod(c.kappa_max);
    w.pod(c.bend_angle_range);
    w.pod(c.min_bend_radius);
    w.pod(c.rod_length);
    w.pod(c.endoscope_outer_diameter);
    w.pod(c.force_min);
    w.pod(c.force_max);
    w.pod(c.contact_span);
}

inline WorkspaceConfig read_workspace(Reader& r) {
    WorkspaceConfig c;
    c.kappa_max = r.pod<double>();
    c.bend_angle_range = r.pod<double>();
    c.min_bend_radius = r.pod<double>();
    c.rod_length = r.pod<double>();
    c.endoscope_outer_diameter = r.pod<double>();
    c.force_min = r.pod<double>();
    c.force_max = r.pod<double>();
    c.contact_span = r.pod<double>();
    return c;
}

inline void write_stats(Writer& w, const NormStats& s) {
    w.pod<uint8_t>(s.fitted ? 1 : 0);
    w.vec(s.mean);
    w.vec(s.std);
    w.pod<uint64_t>(s.constant_channel.size());
    for (bool b : s.constant_channel) w.pod<uint8_t>(b ? 1 : 0);
    w.pod(s.epsilon_floor);
    w.pod(s.kappa_min);
    w.pod(s.kappa_max);
    w.pod(s.twist_min);
    w.pod(s.twist_max);
    w.pod(s.force_min);
    w.pod(s.force_max);
}

inline NormStats read_stats(Reader& r) {
    NormStats s;
    s.fitted = r.pod<uint8_t>() != 0;
    s.mean = r.vec();
    s.std = r.vec();
    const uint64_t n = r.pod<uint64_t>();
    s.constant_channel.resize(n);
    for (uint64_t i = 0; i < n; ++i) s.constant_channel[i] = r.pod<uint8_t>() != 0;
    s.epsilon_floor = r.pod<double>();
    s.kappa_min = r.pod<double>();
    s.kappa_max = r.pod<double>();
    s.twist_min = r.pod<double>();
    s.twist_max = r.pod<double>();
    s.force_min = r.pod<double>();
    s.force_max = r.pod<double>();
    return s;
}

}  // namespace fbgsf::detail
