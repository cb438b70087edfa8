#ifndef GTAU_DIGITS_HPP
#define GTAU_DIGITS_HPP

#include <utility>
#include <vector>

#include "gtau/common.hpp"

namespace gtau {

// Base-q expansion n = sum digits[b] * q^b, little-endian.
// n = 0 is represented as the single digit 0.
struct DigitExpansion {
    u64 n = 0;
    u64 q = 2;
    std::vector<u64> digits;
    u64 digit_sum = 0;
};

DigitExpansion digit_expand(u64 n, u64 q);
u64 digit_sum(u64 n, u64 q);

// Joint congruence class: n ≡ l (mod m) and S(n) ≡ a (mod p), digits base q.
// m = 1 means no constraint on n itself.
struct ResidueSpec {
    u64 q = 2;
    u64 p = 2;
    u64 a = 0;
    u64 m = 1;
    u64 l = 0;
    bool gelfond_condition = false;  // gcd(p, q-1) == 1

    static ResidueSpec make(u64 q, u64 p, u64 a, u64 m = 1, u64 l = 0);
};

// Emits (n, S(n)) for n = 1, 2, 3, ... with O(1) amortized carry updates.
class DigitSumStream {
public:
    explicit DigitSumStream(u64 q);
    std::pair<u64, u64> next();  // advances to the next n and returns (n, S(n))
    u64 base() const { return q_; }

private:
    u64 q_;
    u64 n_ = 0;
    u64 sum_ = 0;
    std::vector<u64> digits_;
};

// Exact counter for 1 <= n <= x over the joint classes (S(n) mod p, n mod m),
// by most-significant-first digit DP over the digits of x. Free digit ranges
// are grouped by residue class mod lcm(p, m), so per-position cost never
// grows with q. Suffix tables are built once per (q, p, m) and reused for
// every query bound below x_cap.
class DigitClassCounter {
public:
    DigitClassCounter(u64 q, u64 p, u64 m, u64 x_cap = ~u64(0));

    // all p*m classes at once; result[a*m + l]
    std::vector<u64> count_all(u64 x) const;
    u64 count(u64 x, u64 a, u64 l) const;

private:
    u64 q_, p_, m_, lcm_;
    std::vector<u64> class_count_;        // digits 0..q-1 per class mod lcm
    std::vector<u64> qpow_mod_m_;         // q^b mod m
    std::vector<std::vector<u64>> suffix_;  // [len][sigma*m + rho]
};

// One-shot conveniences over DigitClassCounter.
u64 count_digit_class(u64 x, const ResidueSpec& spec);
std::vector<u64> count_digit_class_all(u64 x, u64 q, u64 p, u64 m);

}  // namespace gtau

#endif
