#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrdlab {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Element of the top-level field F_{p^D}, encoded as an integer whose
/// base-p digits are the coordinates in the power basis of the modulus
/// root (digit i = coefficient of x^i, so scalars 0..p-1 keep their value).
using fe = std::uint32_t;

/// Invalid parameters or violated operation preconditions (CLI exit code 2).
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested enumeration exceeds the configured budget (CLI exit code 4).
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A verification step failed: witness does not check, or predicted and
/// computed partitions disagree (CLI exit code 3).
struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            fs.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) fs.push_back(v);
    return fs;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

inline std::uint64_t euler_phi(std::uint64_t v) {
    std::uint64_t r = v;
    for (auto f : prime_factors(v)) r = r / f * (f - 1);
    return r;
}

/// Floored positive remainder, for exponents that may be negative.
inline long long imod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace mrdlab
