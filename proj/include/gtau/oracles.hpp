#ifndef GTAU_ORACLES_HPP
#define GTAU_ORACLES_HPP

// Independent reference routes used by the verification suites and tests.
// Nothing here shares code with the implementations it checks: the
// summatory oracles are closed-form/recursive identities, the counting
// oracles are plain enumeration.

#include <cmath>
#include <map>
#include <vector>

#include "gtau/common.hpp"
#include "gtau/digits.hpp"
#include "gtau/divisor.hpp"

namespace gtau::oracle {

inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = (u64)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Hyperbola closed form: D(x) = 2 sum_{d<=sqrt(x)} floor(x/d) - floor(sqrt x)^2.
inline u64 hyperbola_d2(u64 x) {
    u64 r = isqrt(x);
    u64 s = 0;
    for (u64 d = 1; d <= r; ++d) s += x / d;
    return 2 * s - r * r;
}

// D_k(x) = sum_{d<=x} D_{k-1}(floor(x/d)), memoized over distinct quotients.
class DirichletRecursion {
public:
    u64 value(u64 x, unsigned k) {
        if (x == 0) return 0;
        if (k == 1) return x;
        auto [it, fresh] = memo_.try_emplace({x, k}, 0);
        if (!fresh) return it->second;
        u64 total = 0;
        for (u64 d = 1; d <= x;) {
            u64 q = x / d;
            u64 d_hi = x / q;  // largest d with the same quotient
            total += (d_hi - d + 1) * value(q, k - 1);
            d = d_hi + 1;
        }
        it->second = total;  // map nodes are stable across the recursion
        return total;
    }

private:
    std::map<std::pair<u64, unsigned>, u64> memo_;
};

// Plain enumeration of the joint digit class.
inline u64 brute_count_digit_class(u64 x, const ResidueSpec& s) {
    u64 c = 0;
    for (u64 n = 1; n <= x; ++n)
        if (n % s.m == s.l && digit_sum(n, s.q) % s.p == s.a) ++c;
    return c;
}

// Restricted tau sum by pointwise factorization, no sieve involved.
inline u64 brute_restricted_tau(u64 x, unsigned k, u64 q, u64 p, u64 a) {
    u64 s = 0;
    for (u64 n = 1; n <= x; ++n)
        if (digit_sum(n, q) % p == a) s += tau_k_of(n, k);
    return s;
}

}  // namespace gtau::oracle

#endif
