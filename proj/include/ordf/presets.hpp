// Named experiment presets: each replicates one reference experiment at a
// reduced 128x64 grid and parses as an ordinary config.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ordf/core.hpp"

namespace ordf {

inline const std::map<std::string, std::string>& preset_catalog() {
    static const std::map<std::string, std::string> presets = {
        {"fig4",
         "# fig4 replica: state synchronization under 65% moving cloud cover,\n"
         "# true constant parameters, reduced 128x64 grid.\n"
         "nx = 128\n"
         "ny = 64\n"
         "epoch = 3000\n"
         "record_every = 75\n"
         "seed = 42\n"
         "variant = occluded-sync\n"
         "kappa = 2.6\n"
         "ic = planar\n"
         "cloud_count = 30\n"
         "cloud_coverage = 0.65\n"
         "cloud_speed = 2\n"
         "out_dir = out/fig4\n"},
        {"fig5-7",
         "# fig5-7 replica: autosynchronization of both species and mixed-form\n"
         "# noisy parameters (swirl growth, sinusoidal mortality) under 25.5%\n"
         "# moving cloud cover, reduced 128x64 grid. The sinusoidal mortality\n"
         "# uses the range-consistent coefficients (0.3..0.7) of the source\n"
         "# model's irregular regime.\n"
         "nx = 128\n"
         "ny = 64\n"
         "epoch = 3000\n"
         "record_every = 75\n"
         "seed = 42\n"
         "variant = occluded-autosync\n"
         "kappa = 0.625\n"
         "s1 = 0.2\n"
         "s2 = 0.6\n"
         "k_form = swirl\n"
         "swirl_k_lo = 1.7\n"
         "swirl_k_hi = 2.3\n"
         "swirl_time = 150\n"
         "m_form = sinusoidal\n"
         "sine_b = 0.098174770424681035\n"  // pi/32: one period across the grid
         "sine_c = 0.2\n"
         "sine_t = 0.5\n"
         "noise_param = 0.02\n"
         "ic = planar\n"
         "cloud_count = 30\n"
         "cloud_coverage = 0.255\n"
         "cloud_speed = 8\n"
         "out_dir = out/fig5-7\n"},
        {"fig8",
         "# fig8 replica: terminal errors vs hidden fraction at a fixed epoch.\n"
         "# Sweep with: --axis hidden_fraction --values 0,0.13,0.40,0.65\n"
         "nx = 128\n"
         "ny = 64\n"
         "epoch = 1200\n"
         "record_every = 60\n"
         "seed = 42\n"
         "variant = occluded-autosync\n"
         "kappa = 0.625\n"
         "s1 = 0.2\n"
         "s2 = 0.6\n"
         "k_form = swirl\n"
         "swirl_k_lo = 1.7\n"
         "swirl_k_hi = 2.3\n"
         "swirl_time = 150\n"
         "m_form = sinusoidal\n"
         "sine_b = 0.098174770424681035\n"
         "sine_c = 0.2\n"
         "sine_t = 0.5\n"
         "noise_param = 0.02\n"
         "ic = planar\n"
         "cloud_count = 30\n"
         "cloud_coverage = 0.255\n"
         "cloud_speed = 8\n"
         "out_dir = out/fig8\n"},
        {"fig9",
         "# fig9 replica: terminal errors vs observation noise at a fixed epoch.\n"
         "# Sweep with: --axis noise_amplitude --values 0,0.005,0.02,0.08\n"
         "nx = 128\n"
         "ny = 64\n"
         "epoch = 1200\n"
         "record_every = 60\n"
         "seed = 42\n"
         "variant = occluded-autosync\n"
         "kappa = 0.625\n"
         "s1 = 0.2\n"
         "s2 = 0.6\n"
         "k_form = swirl\n"
         "swirl_k_lo = 1.7\n"
         "swirl_k_hi = 2.3\n"
         "swirl_time = 150\n"
         "m_form = sinusoidal\n"
         "sine_b = 0.098174770424681035\n"
         "sine_c = 0.2\n"
         "sine_t = 0.5\n"
         "noise_param = 0.02\n"
         "ic = planar\n"
         "cloud_count = 30\n"
         "cloud_coverage = 0.255\n"
         "cloud_speed = 8\n"
         "out_dir = out/fig9\n"},
        {"fig10-12",
         "# fig10-12 replica: coarse-sensor autosynchronization (2x2 sensors,\n"
         "# 1-pixel gaps) with cloud cover and noisy observations, reduced\n"
         "# 128x64 grid. Sweep sensor spacing with: --axis sensor_gap\n"
         "# --values 0,1,2\n"
         "nx = 128\n"
         "ny = 64\n"
         "epoch = 2000\n"
         "record_every = 50\n"
         "seed = 42\n"
         "variant = coarse\n"
         "kappa = 0.625\n"
         "s1 = 0.2\n"
         "s2 = 0.6\n"
         "param_diffusion = true\n"
         "sensor_w = 2\n"
         "sensor_h = 2\n"
         "sensor_gap = 1\n"
         "k_form = swirl\n"
         "swirl_k_lo = 1.7\n"
         "swirl_k_hi = 2.3\n"
         "swirl_time = 150\n"
         "m_form = sinusoidal\n"
         "sine_b = 0.098174770424681035\n"
         "sine_c = 0.2\n"
         "sine_t = 0.5\n"
         "noise_param = 0.02\n"
         "noise_obs = 0.01\n"
         "ic = planar\n"
         "cloud_count = 30\n"
         "cloud_coverage = 0.255\n"
         "cloud_speed = 8\n"
         "out_dir = out/fig10-12\n"},
        {"fig13",
         "# fig13 replica: terminal errors vs cloud speed at a fixed epoch.\n"
         "# Sweep with: --axis cloud_speed --values 0.125,0.5,2,8\n"
         "nx = 128\n"
         "ny = 64\n"
         "epoch = 1200\n"
         "record_every = 60\n"
         "seed = 42\n"
         "variant = occluded-autosync\n"
         "kappa = 0.625\n"
         "s1 = 0.2\n"
         "s2 = 0.6\n"
         "k_form = swirl\n"
         "swirl_k_lo = 1.7\n"
         "swirl_k_hi = 2.3\n"
         "swirl_time = 150\n"
         "m_form = sinusoidal\n"
         "sine_b = 0.098174770424681035\n"
         "sine_c = 0.2\n"
         "sine_t = 0.5\n"
         "noise_param = 0.02\n"
         "ic = planar\n"
         "cloud_count = 30\n"
         "cloud_coverage = 0.255\n"
         "cloud_speed = 2\n"
         "out_dir = out/fig13\n"},
    };
    return presets;
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : preset_catalog()) names.push_back(k);
    return names;
}

inline const std::string& preset_text(const std::string& name) {
    const auto& cat = preset_catalog();
    auto it = cat.find(name);
    if (it == cat.end()) throw error("unknown preset: " + name);
    return it->second;
}

}  // namespace ordf
