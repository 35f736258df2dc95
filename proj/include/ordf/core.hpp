// Shared error types and seed derivation used across the library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ordf {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an explicit step leaves the sane range (|v| > 1e6, NaN, or a
// negative density in the drive). Carries the model time of the failure.
struct blowup_error : error {
    blowup_error(const std::string& msg, double when)
        : error(msg), t(when) {}
    double t = 0.0;
};

struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};

struct config_error : error {
    config_error(const std::string& msg, int line_no)
        : error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
    int line = 0;
};

// Master-seed fan-out: sub_seed(master, tag) is one splitmix64 scramble of
// master + tag * golden_gamma. Each component (ICs, clouds, parameter noise,
// per-step observation noise) owns a fixed tag, so it is independently
// reproducible from the master seed alone.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag) {
    std::uint64_t z = master + tag * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace seed_tag {
constexpr std::uint64_t ic = 1;
constexpr std::uint64_t clouds = 2;
constexpr std::uint64_t param_noise_k = 3;
constexpr std::uint64_t param_noise_m = 4;
constexpr std::uint64_t obs_noise = 5;
}  // namespace seed_tag

}  // namespace ordf
