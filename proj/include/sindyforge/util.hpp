#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <string_view>

namespace sindyforge {

/// FNV-1a 64-bit digest of a string. Used for config hashing and for
/// deriving named sub-seeds from a master seed.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-seed for a named purpose. Adding new consumers with
/// fresh tags never perturbs the streams of existing ones.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    return splitmix64(base ^ fnv1a64(tag));
}

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
/// Unlike std::uniform_real_distribution this is identical on every
/// platform, which the byte-identical-report contract relies on.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on uniform01 draws; platform-stable for
/// the same reason as uniform01. Two uniforms are consumed per call.
inline double gaussian01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng); // log(0) guard
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Shortest text that still round-trips a double exactly (17 significant
/// digits).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Verbosity from SINDY_FORGE_LOG: 0 quiet (default), 1 info, 2 debug.
inline int log_level() {
    static const int level = [] {
        const char* env = std::getenv("SINDY_FORGE_LOG");
        if (env == nullptr || *env == '\0') return 0;
        if (std::strcmp(env, "debug") == 0) return 2;
        if (std::strcmp(env, "info") == 0) return 1;
        return std::atoi(env);
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[sindyforge] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[sindyforge:debug] %s\n", msg.c_str());
}

} // namespace sindyforge
