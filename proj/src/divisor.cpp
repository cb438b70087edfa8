// Exact tau_k machinery: pointwise values by factorization, tables by
// repeated Dirichlet convolution with 1, and a segmented divisor-pair
// sieve for k = 2 that keeps x = 1e8 runs inside a few dozen MB.

#include "gtau/divisor.hpp"

#include <algorithm>
#include <cmath>

#include "gtau/parallel.hpp"

namespace gtau {

// ---------------------------------------------------------------------------
// factorization helpers (desk-scale n only)
// ---------------------------------------------------------------------------

static bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

static u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            u64 diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
    }
}

static void factor_into(u64 n, std::vector<std::pair<u64, unsigned>>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) {
        for (auto& pe : out)
            if (pe.first == n) { ++pe.second; return; }
        out.push_back({n, 1});
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

static std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
    std::vector<std::pair<u64, unsigned>> f;
    for (u64 p : {2ull, 3ull, 5ull}) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.push_back({p, e});
        }
    }
    // 6k±1 wheel up to 1e6, then probabilistic-free splitting
    for (u64 p = 7; p <= 1000000 && p * p <= n; p += 6) {
        for (u64 cand : {p, p + 4}) {
            if (n % cand == 0) {
                unsigned e = 0;
                while (n % cand == 0) { n /= cand; ++e; }
                f.push_back({cand, e});
            }
        }
    }
    factor_into(n, f);
    return f;
}

// C(e+k-1, k-1) with exact stepwise division; overflow checked.
static u64 binom_multiset(unsigned e, unsigned k) {
    u64 r = 1;
    for (unsigned i = 1; i < k; ++i) {
        u128 t = (u128)r * (e + i);
        t /= i;
        if (t > std::numeric_limits<u64>::max())
            throw std::overflow_error("tau_k value exceeds 64 bits");
        r = (u64)t;
    }
    return r;
}

u64 tau_k_of(u64 n, unsigned k) {
    if (n == 0) throw std::invalid_argument("tau_k_of: n must be >= 1");
    if (k == 0) throw std::invalid_argument("tau_k_of: k must be >= 1");
    if (k == 1 || n == 1) return 1;
    u64 r = 1;
    for (auto [p, e] : factorize(n)) r = checked_mul(r, binom_multiset(e, k));
    return r;
}

// ---------------------------------------------------------------------------
// tables and summatory values
// ---------------------------------------------------------------------------

TauTable sieve_tau_k(u64 x, unsigned k, u64 memory_budget_bytes) {
    if (x < 1) throw std::invalid_argument("sieve_tau_k: x must be >= 1");
    if (k == 0) throw std::invalid_argument("sieve_tau_k: k must be >= 1");
    u64 need = (k == 1 ? 1 : 2) * (x + 1) * sizeof(u64);
    if (need > memory_budget_bytes)
        throw MemoryBudgetError("sieve_tau_k: table for x=" + std::to_string(x) +
                                " needs " + std::to_string(need) + " bytes");
    TauTable t;
    t.x = x;
    t.k = k;
    t.values.assign(x + 1, 1);
    t.values[0] = 0;
    if (k == 1) return t;

    std::vector<u64> next(x + 1);
    for (unsigned pass = 2; pass <= k; ++pass) {
        std::fill(next.begin(), next.end(), 0);
        for (u64 d = 1; d <= x; ++d) {
            u64 v = t.values[d];
            for (u64 j = d; j <= x; j += d) next[j] += v;
        }
        t.values.swap(next);
    }
    return t;
}

// tau over one segment [lo, hi] by divisor pairs: every divisor pair (d, n/d)
// is charged at its smaller member, squares once.
static void sieve_tau2_segment(u64 lo, u64 hi, std::span<u64> buf) {
    std::fill(buf.begin(), buf.end(), 0);
    u64 r = (u64)std::sqrt((double)hi);
    while ((r + 1) * (r + 1) <= hi) ++r;
    while (r * r > hi) --r;
    for (u64 d = 1; d <= r; ++d) {
        u64 start = std::max(lo, d * d);
        u64 first = ((start + d - 1) / d) * d;
        if (d * d >= lo && d * d <= hi) {
            buf[d * d - lo] += 1;
            if (first == d * d) first += d;
        }
        for (u64 n = first; n <= hi; n += d) buf[n - lo] += 2;
    }
}

void stream_tau(u64 x, unsigned k,
                const std::function<void(u64, std::span<const u64>)>& emit,
                u64 segment, u64 memory_budget_bytes) {
    if (x < 1) throw std::invalid_argument("stream_tau: x must be >= 1");
    if (k == 0) throw std::invalid_argument("stream_tau: k must be >= 1");
    if (segment < 1024) segment = 1024;

    if (k == 1) {
        std::vector<u64> ones(std::min(x, segment), 1);
        for (u64 lo = 1; lo <= x; lo += segment) {
            u64 hi = std::min(x, lo + segment - 1);
            emit(lo, std::span<const u64>(ones.data(), hi - lo + 1));
        }
        return;
    }
    if (k >= 3) {
        TauTable t = sieve_tau_k(x, k, memory_budget_bytes);
        for (u64 lo = 1; lo <= x; lo += segment) {
            u64 hi = std::min(x, lo + segment - 1);
            emit(lo, std::span<const u64>(t.values.data() + lo, hi - lo + 1));
        }
        return;
    }

    // k = 2: per-segment divisor-pair sieve, parallel over sub-blocks.
    std::vector<u64> buf(std::min(x, segment));
    for (u64 lo = 1; lo <= x; lo += segment) {
        u64 hi = std::min(x, lo + segment - 1);
        u64 len = hi - lo + 1;
        unsigned nb = thread_cap();
        u64 block = (len + nb - 1) / nb;
        if (block < 4096) { nb = 1; block = len; }
        parallel_chunks(nb, [&](std::size_t b) {
            u64 blo = lo + b * block;
            if (blo > hi) return;
            u64 bhi = std::min(hi, blo + block - 1);
            sieve_tau2_segment(blo, bhi, std::span<u64>(buf.data() + (blo - lo), bhi - blo + 1));
        });
        emit(lo, std::span<const u64>(buf.data(), len));
    }
}

u64 divisor_summatory(u64 x, unsigned k) {
    if (x < 1) throw std::invalid_argument("divisor_summatory: x must be >= 1");
    if (k == 1) return x;
    u64 total = 0;
    stream_tau(x, k, [&](u64, std::span<const u64> vals) {
        u64 s = 0;
        for (u64 v : vals) s += v;
        total = checked_add(total, s);
    });
    return total;
}

std::vector<u64> divisor_summatory_many(const std::vector<u64>& xs, unsigned k) {
    if (xs.empty()) return {};
    for (u64 x : xs)
        if (x < 1) throw std::invalid_argument("divisor_summatory_many: x must be >= 1");
    std::vector<std::pair<u64, std::size_t>> order(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) order[i] = {xs[i], i};
    std::sort(order.begin(), order.end());

    std::vector<u64> out(xs.size(), 0);
    if (k == 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i];
        return out;
    }
    u64 xmax = order.back().first;
    u64 running = 0;
    std::size_t next_cut = 0;
    stream_tau(xmax, k, [&](u64 first_n, std::span<const u64> vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            running = checked_add(running, vals[i]);
            u64 n = first_n + i;
            while (next_cut < order.size() && order[next_cut].first == n) {
                out[order[next_cut].second] = running;
                ++next_cut;
            }
        }
    });
    return out;
}

u64 tau_via_vinogradov(u64 n) {
    if (n == 0) throw std::invalid_argument("tau_via_vinogradov: n must be >= 1");
    u64 count = 0;
    u64 l = 1;
    for (; l * l < n; ++l)
        if (n % l == 0) ++count;
    u64 delta = (l * l == n) ? 1 : 0;
    return 2 * count + delta;
}

}  // namespace gtau
