#ifndef GTAU_COMMON_HPP
#define GTAU_COMMON_HPP

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gtau {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// All counting arithmetic is 64-bit unsigned with explicit overflow checks;
// limits are caught, never wrapped.
inline u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("u64 addition overflow");
    return r;
}

inline u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("u64 multiplication overflow");
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64((u128)a * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Uniform double in [0,1) from the top 53 bits of a raw 64-bit word.
// std::uniform_real_distribution is implementation-defined; this is not.
inline double u64_to_unit(u64 x) { return double(x >> 11) * 0x1.0p-53; }

struct MemoryBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gtau

#endif
