#ifndef GTAU_DIVISOR_HPP
#define GTAU_DIVISOR_HPP

#include <functional>
#include <span>
#include <vector>

#include "gtau/common.hpp"

namespace gtau {

// tau_k(n) = number of ordered k-tuples with product n; tau_1 ≡ 1.
u64 tau_k_of(u64 n, unsigned k);

// Sieved table of tau_k(n) for 1 <= n <= x, immutable once built.
struct TauTable {
    u64 x = 0;
    unsigned k = 1;
    std::vector<u64> values;  // values[n], index 0 unused

    u64 at(u64 n) const { return values[n]; }
};

inline constexpr u64 kDefaultMemoryBudget = u64(2) << 30;  // 2 GiB
inline constexpr u64 kDefaultSegment = u64(1) << 22;

// k-1 Dirichlet convolution passes of the all-ones function, O(x log x) each.
// Throws MemoryBudgetError instead of truncating.
TauTable sieve_tau_k(u64 x, unsigned k, u64 memory_budget_bytes = kDefaultMemoryBudget);

// Streams tau_k over [1, x] in ascending segments without keeping the whole
// table: k = 2 is sieved per segment by divisor pairs; k >= 3 falls back to
// the in-memory table (budget permitting). Segments are sieved in parallel
// but always emitted in ascending order, so consumers see one fixed stream.
void stream_tau(u64 x, unsigned k,
                const std::function<void(u64 first_n, std::span<const u64>)>& emit,
                u64 segment = kDefaultSegment,
                u64 memory_budget_bytes = kDefaultMemoryBudget);

// Exact sum of tau_k(n) for n <= x, by actually summing sieved values.
// The hyperbola closed form and the D_k recursion live in the oracle module
// and are deliberately not used here.
u64 divisor_summatory(u64 x, unsigned k);

// Exact sums at several cut points from one streaming pass.
std::vector<u64> divisor_summatory_many(const std::vector<u64>& xs, unsigned k);

// tau(n) through the rational-exponential-sum identity, reduced exactly:
// the inner sum over y is l when l | n and 0 otherwise, so the value is
// 2 #{l < sqrt(n) : l | n} plus the square indicator. Pure integers.
u64 tau_via_vinogradov(u64 n);

}  // namespace gtau

#endif
