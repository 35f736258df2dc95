// Scenario configuration: a flat "key = value" format with '#' comments,
// unknown keys rejected, defaults equal to the reference constants. Every
// experiment (including the named figure presets) is one such config.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ordf/core.hpp"
#include "ordf/io.hpp"
#include "ordf/observer.hpp"

namespace ordf {

struct ScenarioConfig {
    // grid
    int nx = 864;
    int ny = 288;
    double dx = 2.0;
    double dt = 0.2;
    // time
    double epoch = 2400.0;
    int record_every = 30;  // steps between error records
    std::uint64_t seed = 1;
    // drive parameters: each of k, m picks a functional form
    std::string k_form = "constant";  // constant|gaussian|sinusoidal|swirl|file
    std::string m_form = "constant";
    double k = 2.0;
    double m = 0.6;
    double h = 0.4;
    double gauss_a = 2.0;
    double gauss_c = 0.6;
    double gauss_cx = 450.0;  // center, cell coordinates (n/2)
    double gauss_cy = 150.0;  // (m/2)
    double gauss_sigma = 400.0;
    double sine_a = 0.2;
    double sine_b = M_PI / 150.0;
    double sine_c = 0.6;
    double sine_d = M_PI / 2.0;
    double sine_s = 0.5;
    double sine_t = 1.5;
    double swirl_k_lo = 1.5;
    double swirl_k_hi = 2.5;
    double swirl_m_lo = 0.45;
    double swirl_m_hi = 0.75;
    double swirl_time = 150.0;  // drive time of the snapshot the swirl is cut from
    std::string param_file_k;
    std::string param_file_m;
    double noise_param = 0.0;
    // drive initial conditions
    std::string ic = "planar";  // planar|random
    double ic_eps = 0.01;
    // observer
    std::string variant = "full";  // full|occluded-sync|occluded-autosync|coarse
    double kappa = 2.4;
    double s = 30.0;
    double s1 = 0.2;
    double s2 = 0.6;
    int sign_k = -1;
    int sign_m = -1;
    bool param_diffusion = false;
    double clamp_lo = 0.0;
    double clamp_hi = 2.0;
    double phat0 = 2.0;
    double zhat0 = 2.0;
    double khat0 = 5.0;
    double mhat0 = 5.0;
    // clouds
    int cloud_count = 30;
    double cloud_coverage = 0.0;
    double cloud_speed = 2.0;
    double sentinel = 9999.0;
    double noise_obs = 0.0;
    // sensors (coarse variant)
    int sensor_w = 2;
    int sensor_h = 2;
    int sensor_gap = 1;
    int sensor_ox = 0;
    int sensor_oy = 0;
    std::string innovation_norm = "patch";  // patch|grid
    // reporting
    std::string error_mode = "l1rel";  // l1rel|percell
    std::string out_dir = "out";

    bool operator==(const ScenarioConfig&) const = default;

    GridSpec grid() const { return GridSpec{nx, ny, dx, dt}; }

    int steps() const { return static_cast<int>(std::llround(epoch / dt)); }

    ObserverVariant observer_variant() const {
        if (variant == "full") return ObserverVariant::full;
        if (variant == "occluded-sync") return ObserverVariant::occluded_sync;
        if (variant == "occluded-autosync") return ObserverVariant::occluded_autosync;
        if (variant == "coarse") return ObserverVariant::coarse;
        throw std::invalid_argument("unknown observer variant: " + variant);
    }

    ObserverConfig observer_config() const {
        ObserverConfig c;
        c.variant = observer_variant();
        c.kappa = kappa;
        c.s = s;
        c.s1 = s1;
        c.s2 = s2;
        c.h = h;
        c.sign_k = sign_k;
        c.sign_m = sign_m;
        c.param_diffusion = param_diffusion;
        c.clamp_lo = clamp_lo;
        c.clamp_hi = clamp_hi;
        c.innov_norm = innovation_norm == "grid" ? InnovationNorm::grid : InnovationNorm::patch;
        return c;
    }

    SensorSpec sensor_spec() const {
        return SensorSpec{sensor_w, sensor_h, sensor_gap, sensor_ox, sensor_oy};
    }
};

namespace detail {

struct KeyState {
    std::map<std::string, int> line_of;  // last line a key was set on
    bool set(const std::string& k) const { return line_of.count(k) != 0; }
    int line(const std::string& k) const {
        auto it = line_of.find(k);
        return it == line_of.end() ? 0 : it->second;
    }
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw config_error(key + ": expected a number, got '" + v + "'", line);
    }
}

inline int parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return static_cast<int>(d);
    } catch (...) {
        throw config_error(key + ": expected an integer, got '" + v + "'", line);
    }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw config_error(key + ": expected an unsigned integer, got '" + v + "'", line);
    }
}

inline bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error(key + ": expected true/false, got '" + v + "'", line);
}

inline void check(bool ok, const std::string& msg, const std::string& key,
                  const KeyState& ks) {
    if (!ok) throw config_error(msg, ks.line(key));
}

inline void validate_config(const ScenarioConfig& c, const KeyState& ks) {
    const std::vector<std::string> forms = {"constant", "gaussian", "sinusoidal", "swirl", "file"};
    auto is_form = [&](const std::string& f) {
        for (const auto& x : forms)
            if (x == f) return true;
        return false;
    };
    check(c.nx >= 3, "nx: must be >= 3", "nx", ks);
    check(c.ny >= 3, "ny: must be >= 3", "ny", ks);
    check(c.dx > 0.0, "dx: must be > 0", "dx", ks);
    check(c.dt > 0.0, "dt: must be > 0", "dt", ks);
    check(c.epoch > 0.0, "epoch: must be > 0", "epoch", ks);
    check(c.steps() >= 1, "epoch: too short for one step", "epoch", ks);
    check(c.record_every >= 1, "record_every: must be >= 1", "record_every", ks);
    check(c.steps() % c.record_every == 0,
          "record_every: must divide the step count (" + std::to_string(c.steps()) + ")",
          "record_every", ks);
    check(is_form(c.k_form), "k_form: unknown form '" + c.k_form + "'", "k_form", ks);
    check(is_form(c.m_form), "m_form: unknown form '" + c.m_form + "'", "m_form", ks);
    check(c.h > 0.0, "h: must be > 0", "h", ks);
    check(c.k >= 0.0, "k: must be >= 0", "k", ks);
    check(c.m >= 0.0, "m: must be >= 0", "m", ks);
    check(c.gauss_sigma > 0.0, "gauss_sigma: must be > 0", "gauss_sigma", ks);
    check(c.swirl_k_lo < c.swirl_k_hi, "swirl_k_lo: requires swirl_k_lo < swirl_k_hi",
          "swirl_k_lo", ks);
    check(c.swirl_m_lo < c.swirl_m_hi, "swirl_m_lo: requires swirl_m_lo < swirl_m_hi",
          "swirl_m_lo", ks);
    check(c.swirl_time >= 0.0, "swirl_time: must be >= 0", "swirl_time", ks);
    if (c.k_form == "file")
        check(std::filesystem::exists(c.param_file_k),
              "param_file_k: file not found: " + c.param_file_k, "param_file_k", ks);
    if (c.m_form == "file")
        check(std::filesystem::exists(c.param_file_m),
              "param_file_m: file not found: " + c.param_file_m, "param_file_m", ks);
    check(c.noise_param >= 0.0, "noise_param: must be >= 0", "noise_param", ks);
    check(c.ic == "planar" || c.ic == "random", "ic: must be planar or random", "ic", ks);
    check(c.ic_eps >= 0.0, "ic_eps: must be >= 0", "ic_eps", ks);
    check(c.variant == "full" || c.variant == "occluded-sync" ||
              c.variant == "occluded-autosync" || c.variant == "coarse",
          "variant: unknown variant '" + c.variant + "'", "variant", ks);
    check(c.sign_k == 1 || c.sign_k == -1, "sign_k: must be 1 or -1", "sign_k", ks);
    check(c.sign_m == 1 || c.sign_m == -1, "sign_m: must be 1 or -1", "sign_m", ks);
    check(c.clamp_lo < c.clamp_hi, "clamp_lo: requires clamp_lo < clamp_hi", "clamp_lo", ks);
    check(c.cloud_count >= 0, "cloud_count: must be >= 0", "cloud_count", ks);
    check(c.cloud_coverage >= 0.0 && c.cloud_coverage <= 0.98,
          "cloud_coverage: must be in [0, 0.98]", "cloud_coverage", ks);
    check(c.cloud_speed >= 0.0, "cloud_speed: must be >= 0", "cloud_speed", ks);
    check(c.sentinel < c.clamp_lo || c.sentinel > c.clamp_hi,
          "sentinel: must lie outside the clamp range", "sentinel", ks);
    check(c.noise_obs >= 0.0, "noise_obs: must be >= 0", "noise_obs", ks);
    check(c.sensor_w >= 1 && c.sensor_h >= 1, "sensor_w: sensor dims must be >= 1",
          "sensor_w", ks);
    check(c.sensor_gap >= 0, "sensor_gap: must be >= 0", "sensor_gap", ks);
    check(c.sensor_ox >= 0 && c.sensor_oy >= 0, "sensor_ox: offsets must be >= 0",
          "sensor_ox", ks);
    check(c.innovation_norm == "patch" || c.innovation_norm == "grid",
          "innovation_norm: must be patch or grid", "innovation_norm", ks);
    check(c.error_mode == "l1rel" || c.error_mode == "percell",
          "error_mode: must be l1rel or percell", "error_mode", ks);
}

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    detail::KeyState ks;
    bool kappa_set = false, sk_set = false, sm_set = false, pd_set = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("missing key before '='", line_no);
        ks.line_of[key] = line_no;

        if (key == "nx") c.nx = detail::parse_int(val, key, line_no);
        else if (key == "ny") c.ny = detail::parse_int(val, key, line_no);
        else if (key == "dx") c.dx = detail::parse_double(val, key, line_no);
        else if (key == "dt") c.dt = detail::parse_double(val, key, line_no);
        else if (key == "epoch") c.epoch = detail::parse_double(val, key, line_no);
        else if (key == "record_every") c.record_every = detail::parse_int(val, key, line_no);
        else if (key == "seed") c.seed = detail::parse_u64(val, key, line_no);
        else if (key == "k_form") c.k_form = val;
        else if (key == "m_form") c.m_form = val;
        else if (key == "k") c.k = detail::parse_double(val, key, line_no);
        else if (key == "m") c.m = detail::parse_double(val, key, line_no);
        else if (key == "h") c.h = detail::parse_double(val, key, line_no);
        else if (key == "gauss_a") c.gauss_a = detail::parse_double(val, key, line_no);
        else if (key == "gauss_c") c.gauss_c = detail::parse_double(val, key, line_no);
        else if (key == "gauss_cx") c.gauss_cx = detail::parse_double(val, key, line_no);
        else if (key == "gauss_cy") c.gauss_cy = detail::parse_double(val, key, line_no);
        else if (key == "gauss_sigma") c.gauss_sigma = detail::parse_double(val, key, line_no);
        else if (key == "sine_a") c.sine_a = detail::parse_double(val, key, line_no);
        else if (key == "sine_b") c.sine_b = detail::parse_double(val, key, line_no);
        else if (key == "sine_c") c.sine_c = detail::parse_double(val, key, line_no);
        else if (key == "sine_d") c.sine_d = detail::parse_double(val, key, line_no);
        else if (key == "sine_s") c.sine_s = detail::parse_double(val, key, line_no);
        else if (key == "sine_t") c.sine_t = detail::parse_double(val, key, line_no);
        else if (key == "swirl_k_lo") c.swirl_k_lo = detail::parse_double(val, key, line_no);
        else if (key == "swirl_k_hi") c.swirl_k_hi = detail::parse_double(val, key, line_no);
        else if (key == "swirl_m_lo") c.swirl_m_lo = detail::parse_double(val, key, line_no);
        else if (key == "swirl_m_hi") c.swirl_m_hi = detail::parse_double(val, key, line_no);
        else if (key == "swirl_time") c.swirl_time = detail::parse_double(val, key, line_no);
        else if (key == "param_file_k") c.param_file_k = val;
        else if (key == "param_file_m") c.param_file_m = val;
        else if (key == "noise_param") c.noise_param = detail::parse_double(val, key, line_no);
        else if (key == "ic") c.ic = val;
        else if (key == "ic_eps") c.ic_eps = detail::parse_double(val, key, line_no);
        else if (key == "variant") c.variant = val;
        else if (key == "kappa") { c.kappa = detail::parse_double(val, key, line_no); kappa_set = true; }
        else if (key == "s") c.s = detail::parse_double(val, key, line_no);
        else if (key == "s1") c.s1 = detail::parse_double(val, key, line_no);
        else if (key == "s2") c.s2 = detail::parse_double(val, key, line_no);
        else if (key == "sign_k") { c.sign_k = detail::parse_int(val, key, line_no); sk_set = true; }
        else if (key == "sign_m") { c.sign_m = detail::parse_int(val, key, line_no); sm_set = true; }
        else if (key == "param_diffusion") { c.param_diffusion = detail::parse_bool(val, key, line_no); pd_set = true; }
        else if (key == "clamp_lo") c.clamp_lo = detail::parse_double(val, key, line_no);
        else if (key == "clamp_hi") c.clamp_hi = detail::parse_double(val, key, line_no);
        else if (key == "phat0") c.phat0 = detail::parse_double(val, key, line_no);
        else if (key == "zhat0") c.zhat0 = detail::parse_double(val, key, line_no);
        else if (key == "khat0") c.khat0 = detail::parse_double(val, key, line_no);
        else if (key == "mhat0") c.mhat0 = detail::parse_double(val, key, line_no);
        else if (key == "cloud_count") c.cloud_count = detail::parse_int(val, key, line_no);
        else if (key == "cloud_coverage") c.cloud_coverage = detail::parse_double(val, key, line_no);
        else if (key == "cloud_speed") c.cloud_speed = detail::parse_double(val, key, line_no);
        else if (key == "sentinel") c.sentinel = detail::parse_double(val, key, line_no);
        else if (key == "noise_obs") c.noise_obs = detail::parse_double(val, key, line_no);
        else if (key == "sensor_w") c.sensor_w = detail::parse_int(val, key, line_no);
        else if (key == "sensor_h") c.sensor_h = detail::parse_int(val, key, line_no);
        else if (key == "sensor_gap") c.sensor_gap = detail::parse_int(val, key, line_no);
        else if (key == "sensor_ox") c.sensor_ox = detail::parse_int(val, key, line_no);
        else if (key == "sensor_oy") c.sensor_oy = detail::parse_int(val, key, line_no);
        else if (key == "innovation_norm") c.innovation_norm = val;
        else if (key == "error_mode") c.error_mode = val;
        else if (key == "out_dir") c.out_dir = val;
        else throw config_error("unknown key '" + key + "'", line_no);
    }

    // Variant-dependent defaults for keys left unset: coupling gain,
    // adaptation signs (each printed law's literal form), parameter diffusion.
    if (c.variant == "full" || c.variant == "occluded-sync" ||
        c.variant == "occluded-autosync" || c.variant == "coarse") {
        const ObserverConfig d = ObserverConfig::defaults_for(c.observer_variant());
        if (!kappa_set) c.kappa = d.kappa;
        if (!sk_set) c.sign_k = d.sign_k;
        if (!sm_set) c.sign_m = d.sign_m;
        if (!pd_set) c.param_diffusion = d.param_diffusion;
    }
    detail::validate_config(c, ks);
    return c;
}

inline std::string render_config(const ScenarioConfig& c) {
    std::ostringstream o;
    auto kv = [&](const char* k, const std::string& v) { o << k << " = " << v << "\n"; };
    auto kd = [&](const char* k, double v) { kv(k, fmt17(v)); };
    auto ki = [&](const char* k, long long v) { kv(k, std::to_string(v)); };
    o << "# grid\n";
    ki("nx", c.nx); ki("ny", c.ny); kd("dx", c.dx); kd("dt", c.dt);
    o << "# time\n";
    kd("epoch", c.epoch); ki("record_every", c.record_every);
    ki("seed", static_cast<long long>(c.seed));
    o << "# drive parameters\n";
    kv("k_form", c.k_form); kv("m_form", c.m_form);
    kd("k", c.k); kd("m", c.m); kd("h", c.h);
    kd("gauss_a", c.gauss_a); kd("gauss_c", c.gauss_c); kd("gauss_cx", c.gauss_cx);
    kd("gauss_cy", c.gauss_cy); kd("gauss_sigma", c.gauss_sigma);
    kd("sine_a", c.sine_a); kd("sine_b", c.sine_b); kd("sine_c", c.sine_c);
    kd("sine_d", c.sine_d); kd("sine_s", c.sine_s); kd("sine_t", c.sine_t);
    kd("swirl_k_lo", c.swirl_k_lo); kd("swirl_k_hi", c.swirl_k_hi);
    kd("swirl_m_lo", c.swirl_m_lo); kd("swirl_m_hi", c.swirl_m_hi);
    kd("swirl_time", c.swirl_time);
    kv("param_file_k", c.param_file_k); kv("param_file_m", c.param_file_m);
    kd("noise_param", c.noise_param);
    o << "# initial conditions\n";
    kv("ic", c.ic); kd("ic_eps", c.ic_eps);
    o << "# observer\n";
    kv("variant", c.variant);
    kd("kappa", c.kappa); kd("s", c.s); kd("s1", c.s1); kd("s2", c.s2);
    ki("sign_k", c.sign_k); ki("sign_m", c.sign_m);
    kv("param_diffusion", c.param_diffusion ? "true" : "false");
    kd("clamp_lo", c.clamp_lo); kd("clamp_hi", c.clamp_hi);
    kd("phat0", c.phat0); kd("zhat0", c.zhat0); kd("khat0", c.khat0); kd("mhat0", c.mhat0);
    o << "# clouds\n";
    ki("cloud_count", c.cloud_count); kd("cloud_coverage", c.cloud_coverage);
    kd("cloud_speed", c.cloud_speed); kd("sentinel", c.sentinel);
    kd("noise_obs", c.noise_obs);
    o << "# sensors\n";
    ki("sensor_w", c.sensor_w); ki("sensor_h", c.sensor_h); ki("sensor_gap", c.sensor_gap);
    ki("sensor_ox", c.sensor_ox); ki("sensor_oy", c.sensor_oy);
    kv("innovation_norm", c.innovation_norm);
    o << "# reporting\n";
    kv("error_mode", c.error_mode);
    kv("out_dir", c.out_dir);
    return o.str();
}

}  // namespace ordf
