// Base-q digit arithmetic and the exact digit-class counter behind T0(x).
//
// count_digit_class walks the digits of x most-significant first with a
// tight prefix, adding precomputed suffix counts whenever a digit drops
// below the corresponding digit of x.  Suffix counts are tabulated per
// (length, digit-sum mod p, value mod m); free digit ranges are grouped
// by residue class mod lcm(p, m), which keeps the per-position cost
// independent of q even at q ~ 10^6.

#include "gtau/digits.hpp"

#include <algorithm>
#include <numeric>

namespace gtau {

static void require_base(u64 q) {
    if (q < 2) throw std::invalid_argument("base q must be >= 2");
}

DigitExpansion digit_expand(u64 n, u64 q) {
    require_base(q);
    DigitExpansion e;
    e.n = n;
    e.q = q;
    if (n == 0) {
        e.digits = {0};
        e.digit_sum = 0;
        return e;
    }
    while (n > 0) {
        u64 d = n % q;
        e.digits.push_back(d);
        e.digit_sum += d;
        n /= q;
    }
    return e;
}

u64 digit_sum(u64 n, u64 q) {
    require_base(q);
    u64 s = 0;
    while (n > 0) {
        s += n % q;
        n /= q;
    }
    return s;
}

DigitSumStream::DigitSumStream(u64 q) : q_(q), digits_{0} { require_base(q); }

std::pair<u64, u64> DigitSumStream::next() {
    std::size_t i = 0;
    while (i < digits_.size() && digits_[i] == q_ - 1) {
        digits_[i] = 0;
        sum_ -= q_ - 1;
        ++i;
    }
    if (i == digits_.size()) digits_.push_back(0);
    digits_[i] += 1;
    sum_ += 1;
    n_ += 1;
    return {n_, sum_};
}

ResidueSpec ResidueSpec::make(u64 q, u64 p, u64 a, u64 m, u64 l) {
    require_base(q);
    if (p <= 1) throw std::invalid_argument("modulus p must be > 1");
    if (m == 0) throw std::invalid_argument("modulus m must be >= 1");
    ResidueSpec s;
    s.q = q;
    s.p = p;
    s.a = a % p;
    s.m = m;
    s.l = l % m;
    s.gelfond_condition = std::gcd(p, q - 1) == 1;
    return s;
}

DigitClassCounter::DigitClassCounter(u64 q, u64 p, u64 m, u64 x_cap)
    : q_(q), p_(p), m_(m) {
    require_base(q);
    if (p <= 1) throw std::invalid_argument("modulus p must be > 1");
    if (m == 0) throw std::invalid_argument("modulus m must be >= 1");

    lcm_ = std::lcm(p, m);
    u64 n_classes = std::min(q, lcm_);
    class_count_.resize(n_classes);
    for (u64 w = 0; w < n_classes; ++w)
        class_count_[w] = (q - w + lcm_ - 1) / lcm_;  // #{c in [0,q): c ≡ w (mod lcm)}

    std::size_t positions = 1;
    for (u64 v = x_cap; v >= q; v /= q) ++positions;

    qpow_mod_m_.resize(positions + 1);
    qpow_mod_m_[0] = 1 % m;
    for (std::size_t b = 1; b <= positions; ++b)
        qpow_mod_m_[b] = mulmod(qpow_mod_m_[b - 1], q % m, m);

    // suffix_[b][sigma*m + rho] = #digit strings of length b with digit sum
    // ≡ sigma (mod p) and value ≡ rho (mod m)
    suffix_.assign(positions + 1, std::vector<u64>(p * m, 0));
    suffix_[0][0] = 1;
    for (std::size_t b = 0; b < positions; ++b) {
        const auto& prev = suffix_[b];
        auto& next = suffix_[b + 1];
        for (u64 w = 0; w < n_classes; ++w) {
            u64 nw = class_count_[w];
            if (nw == 0) continue;
            u64 dsig = w % p;
            u64 drho = mulmod(w % m, qpow_mod_m_[b], m);
            for (u64 sig = 0; sig < p; ++sig) {
                u64 sig2 = sig + dsig;
                if (sig2 >= p) sig2 -= p;
                for (u64 rho = 0; rho < m; ++rho) {
                    u64 c = prev[sig * m + rho];
                    if (c == 0) continue;
                    u64 rho2 = rho + drho;
                    if (rho2 >= m) rho2 -= m;
                    next[sig2 * m + rho2] += nw * c;
                }
            }
        }
    }
}

std::vector<u64> DigitClassCounter::count_all(u64 x) const {
    std::vector<u64> out(p_ * m_, 0);
    if (x == 0) return out;

    u64 digits[66];
    std::size_t t = 0;
    for (u64 v = x; v > 0; v /= q_) digits[t++] = v % q_;
    if (t >= suffix_.size())
        throw std::invalid_argument("DigitClassCounter: x exceeds the table cap");

    u64 s_pref = 0;  // prefix digit sum mod p
    u64 v_pref = 0;  // prefix value mod m
    for (std::size_t pos = t; pos-- > 0;) {
        u64 d = digits[pos];
        u64 qb = qpow_mod_m_[pos];
        u64 n_cls = std::min<u64>(d, lcm_);
        const auto& suf = suffix_[pos];
        for (u64 w = 0; w < n_cls; ++w) {
            u64 nw = (d - w + lcm_ - 1) / lcm_;  // #{c in [0,d): c ≡ w (mod lcm)}
            u64 base_sig = (s_pref + w) % p_;
            u64 base_rho = (v_pref + mulmod(w % m_, qb, m_)) % m_;
            for (u64 sig = 0; sig < p_; ++sig) {
                u64 A = base_sig + sig;
                if (A >= p_) A -= p_;
                for (u64 rho = 0; rho < m_; ++rho) {
                    u64 c = suf[sig * m_ + rho];
                    if (c == 0) continue;
                    u64 LL = base_rho + rho;
                    if (LL >= m_) LL -= m_;
                    out[A * m_ + LL] += nw * c;
                }
            }
        }
        s_pref = (s_pref + d) % p_;
        v_pref = (v_pref + mulmod(d % m_, qb, m_)) % m_;
    }
    // n = x itself, then drop n = 0 (the all-zero string counted above).
    out[s_pref * m_ + v_pref] += 1;
    out[0] -= 1;
    return out;
}

u64 DigitClassCounter::count(u64 x, u64 a, u64 l) const {
    if (x == 0) return 0;
    a %= p_;
    l %= m_;
    u64 digits[66];
    std::size_t t = 0;
    for (u64 v = x; v > 0; v /= q_) digits[t++] = v % q_;
    if (t >= suffix_.size())
        throw std::invalid_argument("DigitClassCounter: x exceeds the table cap");

    u64 count = 0;
    u64 s_pref = 0, v_pref = 0;
    for (std::size_t pos = t; pos-- > 0;) {
        u64 d = digits[pos];
        u64 qb = qpow_mod_m_[pos];
        u64 n_cls = std::min<u64>(d, lcm_);
        const auto& suf = suffix_[pos];
        for (u64 w = 0; w < n_cls; ++w) {
            u64 nw = (d - w + lcm_ - 1) / lcm_;
            u64 sig = (a + p_ - (s_pref + w) % p_) % p_;
            u64 rho = (l + m_ - (v_pref + mulmod(w % m_, qb, m_)) % m_) % m_;
            count += nw * suf[sig * m_ + rho];
        }
        s_pref = (s_pref + d) % p_;
        v_pref = (v_pref + mulmod(d % m_, qb, m_)) % m_;
    }
    if (s_pref == a && v_pref == l) count += 1;
    if (a == 0 && l == 0) count -= 1;
    return count;
}

std::vector<u64> count_digit_class_all(u64 x, u64 q, u64 p, u64 m) {
    return DigitClassCounter(q, p, m, std::max<u64>(x, 1)).count_all(x);
}

u64 count_digit_class(u64 x, const ResidueSpec& spec) {
    return DigitClassCounter(spec.q, spec.p, spec.m, std::max<u64>(x, 1))
        .count(x, spec.a, spec.l);
}

}  // namespace gtau
