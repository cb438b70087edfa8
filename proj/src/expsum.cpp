// Evaluation of the digit trigonometric sum S_Q(alpha, z) and the numeric
// checks built on it: sup-norm scans, the L1 integral against q^(Q theta),
// the min(q, 1/2||.||) kernel bound, and the large-sieve point inequality.
//
// Everything here leans on the factorization of S_Q over digit positions:
// a single digit position contributes the geometric factor
//   G(beta) = sum_{u<q} e(u beta),  beta = alpha q^l + z/p,
// which is q at integer beta and sin(pi q beta)/sin(pi beta) in modulus
// otherwise.  Phase arguments are kept reduced mod 1 at every step; the
// rational-alpha path reduces num * q^l mod den in integer arithmetic, so
// no precision is lost even at Q ~ 60.

#include "gtau/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtau/parallel.hpp"

namespace gtau {

static constexpr long double kPi = 3.14159265358979323846264338327950288L;
static constexpr double kFloatSingularEps = 1e-12;
static constexpr u64 kDirectQuadCap = u64(1) << 17;   // q^Q cap for adaptive Simpson
static constexpr u64 kShallowQuadCap = u64(1) << 22;  // looser cap when Q <= 2
static constexpr u64 kDirectSumCap = 10000000;        // q^Q cap for expsum_direct

u64 ExpSumParams::z_mod_p() const {
    i64 r = z % (i64)p;
    if (r < 0) r += (i64)p;
    return (u64)r;
}

bool ExpSumParams::gelfond_regime() const {
    u64 zm = z_mod_p();
    return zm != 0 && std::gcd(zm, p) == 1 && std::gcd(p, q - 1) == 1;
}

void ExpSumParams::validate() const {
    if (Q < 1) throw std::invalid_argument("ExpSumParams: Q must be >= 1");
    if (q < 2) throw std::invalid_argument("ExpSumParams: q must be >= 2");
    if (p <= 1) throw std::invalid_argument("ExpSumParams: p must be > 1");
}

static long double frac1(long double v) {
    long double f = v - std::floor(v);
    if (f >= 1.0L) f -= 1.0L;
    if (f < 0.0L) f += 1.0L;
    return f;
}

// q^Q saturated at `cap + 1` so callers can route on size without overflow.
static u64 pow_saturating(u64 q, int Q, u64 cap) {
    u128 v = 1;
    for (int i = 0; i < Q; ++i) {
        v *= q;
        if (v > cap) return cap + 1;
    }
    return (u64)v;
}

// ---------------------------------------------------------------------------
// geometric digit factor
// ---------------------------------------------------------------------------

static std::complex<long double> geometric_factor(long double beta, u64 q, bool singular) {
    if (singular) return {(long double)q, 0.0L};
    long double sq = std::sin(kPi * (long double)q * beta);
    long double s1 = std::sin(kPi * beta);
    long double mag = sq / s1;
    long double ph = kPi * std::fmod((long double)(q - 1) * beta, 2.0L);
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

static long double geometric_factor_abs(long double beta, u64 q, bool singular) {
    if (singular) return (long double)q;
    return std::fabs(std::sin(kPi * (long double)q * beta) / std::sin(kPi * beta));
}

std::complex<double> expsum_product(const ExpSumParams& P) {
    P.validate();
    long double zp = (long double)P.z_mod_p() / (long double)P.p;
    long double t = frac1((long double)P.alpha);
    std::complex<long double> prod = 1.0L;
    for (int l = 0; l < P.Q; ++l) {
        long double beta = t + zp;
        if (beta >= 1.0L) beta -= 1.0L;
        bool singular = beta < kFloatSingularEps || beta > 1.0L - kFloatSingularEps;
        prod *= geometric_factor(beta, P.q, singular);
        t = frac1(t * (long double)P.q);
    }
    return {(double)prod.real(), (double)prod.imag()};
}

std::complex<double> expsum_product(int Q, u64 q, u64 p, i64 z, RationalAngle alpha) {
    ExpSumParams chk{Q, q, p, z, 0.0};
    chk.validate();
    if (alpha.den == 0) throw std::invalid_argument("RationalAngle: zero denominator");
    u64 den = alpha.den;
    u64 num = alpha.num % den;
    u64 g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
    u64 zm = chk.z_mod_p();

    std::complex<long double> prod = 1.0L;
    u64 pw = 1 % den;  // q^l mod den
    for (int l = 0; l < Q; ++l) {
        u64 r = mulmod(num, pw, den);  // frac(alpha q^l) = r / den
        // singular iff r/den + zm/p is an integer
        bool singular = ((u128)r * p + (u128)zm * den) % ((u128)den * p) == 0;
        long double beta = (long double)r / (long double)den + (long double)zm / (long double)p;
        if (beta >= 1.0L) beta -= 1.0L;
        prod *= geometric_factor(beta, q, singular);
        pw = mulmod(pw, q % den, den);
    }
    return {(double)prod.real(), (double)prod.imag()};
}

static long double expsum_product_abs_rational(int Q, u64 q, u64 num, u64 den, u64 p, u64 zm) {
    u64 g = std::gcd(num % den, den);
    num = (num % den) / g;
    den = den / g;
    long double prod = 1.0L;
    u64 pw = 1 % den;
    for (int l = 0; l < Q; ++l) {
        u64 r = mulmod(num, pw, den);
        bool singular = ((u128)r * p + (u128)zm * den) % ((u128)den * p) == 0;
        long double beta = (long double)r / (long double)den + (long double)zm / (long double)p;
        if (beta >= 1.0L) beta -= 1.0L;
        prod *= geometric_factor_abs(beta, q, singular);
        pw = mulmod(pw, q % den, den);
    }
    return prod;
}

// ---------------------------------------------------------------------------
// direct sum (oracle scale)
// ---------------------------------------------------------------------------

std::complex<double> expsum_direct(const ExpSumParams& P) {
    P.validate();
    u64 N = pow_saturating(P.q, P.Q, kDirectSumCap);
    if (N > kDirectSumCap)
        throw std::invalid_argument("expsum_direct: q^Q exceeds the oracle cap 1e7");

    u64 zm = P.z_mod_p();
    std::vector<std::complex<long double>> root(P.p);
    for (u64 s = 0; s < P.p; ++s) {
        long double ph = 2.0L * kPi * (long double)mulmod(zm, s, P.p) / (long double)P.p;
        root[s] = {std::cos(ph), std::sin(ph)};
    }

    long double a = frac1((long double)P.alpha);
    long double step_ph = 2.0L * kPi * a;
    std::complex<long double> step = {std::cos(step_ph), std::sin(step_ph)};
    std::complex<long double> rot = 1.0L;
    std::complex<long double> sum = 0.0L;

    // incremental digit sum of n in base q
    std::vector<u64> digits{0};
    u64 smodp = 0;

    for (u64 n = 0; n < N; ++n) {
        if (n > 0) {
            std::size_t i = 0;
            while (i < digits.size() && digits[i] == P.q - 1) {
                digits[i] = 0;
                smodp = (smodp + P.p - (P.q - 1) % P.p) % P.p;
                ++i;
            }
            if (i == digits.size()) digits.push_back(0);
            digits[i] += 1;
            smodp = (smodp + 1) % P.p;
            rot *= step;
            if ((n & 0x3fff) == 0) {  // periodic refresh against drift
                long double ph = 2.0L * kPi * frac1(a * (long double)n);
                rot = {std::cos(ph), std::sin(ph)};
            }
        }
        sum += rot * root[smodp];
    }
    return {(double)sum.real(), (double)sum.imag()};
}

// ---------------------------------------------------------------------------
// theta and the kernel bound
// ---------------------------------------------------------------------------

double theta(u64 q) {
    if (q < 2) throw std::invalid_argument("theta: q must be >= 2");
    double lq = std::log((double)q);
    return std::log(6.0 * (1.0 + lq)) / lq;
}

KernelBound kernel_sum_bound_check(double x, u64 q, u64 p, i64 z) {
    if (q < 2 || p <= 1) throw std::invalid_argument("kernel_sum_bound_check: bad q or p");
    i64 zr = z % (i64)p;
    if (zr < 0) zr += (i64)p;
    double zp = (double)zr / (double)p;
    double lhs = 0.0;
    for (u64 j = 0; j < q; ++j) {
        double v = (x + (double)j) / (double)q + zp;
        double d = v - std::floor(v);
        double dist = std::min(d, 1.0 - d);
        double term = (dist == 0.0) ? (double)q : std::min((double)q, 1.0 / (2.0 * dist));
        lhs += term;
    }
    lhs /= (double)q;
    double rhs = 6.0 * (1.0 + std::log((double)q));
    return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// sup-norm scan
// ---------------------------------------------------------------------------

namespace {

struct GoldenMax {
    double arg = 0;
    double val = 0;
};

template <class F>
GoldenMax golden_max(const F& f, double a, double b, int iters) {
    const double gr = 0.6180339887498948482;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? GoldenMax{c, fc} : GoldenMax{d, fd};
}

}  // namespace

NormScanResult sup_norm_scan(int Q, u64 q, u64 p, i64 z, u64 grid_size, bool require_gelfond) {
    ExpSumParams P{Q, q, p, z, 0.0};
    P.validate();
    if (require_gelfond && !P.gelfond_regime())
        throw std::invalid_argument("sup_norm_scan: parameters outside the Gelfond regime");

    u64 N = std::max<u64>(grid_size, 3);
    if (N % 2 == 0) N += 1;  // odd grid: keeps nodes off the dyadic lattice
    u64 zm = P.z_mod_p();

    // coarse pass, keeping the top candidates of each chunk
    constexpr std::size_t kTop = 8;
    unsigned nt = thread_cap();
    u64 chunk = (N + nt - 1) / nt;
    std::vector<std::vector<std::pair<long double, u64>>> tops(nt);
    parallel_chunks(nt, [&](std::size_t c) {
        u64 lo = c * chunk, hi = std::min(N, lo + chunk);
        auto& top = tops[c];
        for (u64 i = lo; i < hi; ++i) {
            // alpha = (2i+1) / (2N)
            long double v = expsum_product_abs_rational(Q, q, 2 * i + 1, 2 * N, p, zm);
            if (top.size() < kTop || v > top.back().first) {
                top.push_back({v, i});
                std::sort(top.begin(), top.end(), [](auto& a, auto& b) {
                    return a.first != b.first ? a.first > b.first : a.second < b.second;
                });
                if (top.size() > kTop) top.pop_back();
            }
        }
    });
    std::vector<std::pair<long double, u64>> cand;
    for (auto& t : tops) cand.insert(cand.end(), t.begin(), t.end());
    std::sort(cand.begin(), cand.end(), [](auto& a, auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (cand.size() > kTop) cand.resize(kTop);

    long double best_val = cand.empty() ? 0.0L : cand[0].first;
    double best_arg = cand.empty() ? 0.0 : (2.0 * (double)cand[0].second + 1.0) / (2.0 * (double)N);

    // The sup can live between grid nodes on a scale of q^-Q, far below the
    // grid cell. Each candidate cell gets a dense exact-rational sub-scan,
    // then golden-section polish in the winning sub-cell.
    const u64 m = 2048;
    auto absS = [&](double alpha) {
        ExpSumParams R{Q, q, p, z, alpha};
        return std::abs(expsum_product(R));
    };
    for (auto& [gv, gi] : cand) {
        // sub-nodes ((2 gi + 1) m + 2 (j - m)) / (2 N m), j = 0..2m
        u64 den = 2 * N * m;
        i128 base = (i128)(2 * gi + 1) * m;
        long double sub_best = gv;
        i128 sub_num = base;
        for (u64 j = 0; j <= 2 * m; ++j) {
            i128 num = base + 2 * (i128)j - 2 * (i128)m;
            if (num < 0 || num > (i128)den) continue;
            long double v = expsum_product_abs_rational(Q, q, (u64)num, den, p, zm);
            if (v > sub_best) {
                sub_best = v;
                sub_num = num;
            }
        }
        double sub_alpha = (double)((long double)sub_num / (long double)den);
        double w = 1.0 / ((double)N * (double)m);
        GoldenMax g = golden_max(absS, std::max(0.0, sub_alpha - w),
                                 std::min(1.0, sub_alpha + w), 64);
        long double local = std::max<long double>(sub_best, (long double)g.val);
        if (local > best_val) {
            best_val = local;
            best_arg = (long double)g.val >= sub_best ? g.arg : sub_alpha;
        }
    }

    NormScanResult r;
    r.sup_abs = (double)best_val;
    r.argmax_alpha = best_arg;
    r.grid_size = N;
    r.lambda_hat = r.sup_abs > 0
                       ? std::log(r.sup_abs) / ((double)Q * std::log((double)q))
                       : -std::numeric_limits<double>::infinity();
    return r;
}

// ---------------------------------------------------------------------------
// L1 norm, route A: oscillation-resolving adaptive Simpson
// ---------------------------------------------------------------------------

namespace {

struct SimpsonState {
    int Q;
    u64 q, p, zm;
    double tol;          // absolute, spread per unit width
    u64 evals = 0;
    u64 panels = 0;
    u64 eval_budget = 0;
    long double integral = 0;
    long double err = 0;

    long double eval(u64 num, u64 den) {
        ++evals;
        if (evals > eval_budget)
            throw NonConvergenceError("l1_norm: evaluation budget exhausted");
        return expsum_product_abs_rational(Q, q, num, den, p, zm);
    }

    // Panel [num/2^e, (num+1)/2^e]; fa/fm/fb at endpoints and midpoint.
    void refine(u64 num, int e, long double fa, long double fm, long double fb) {
        long double w = std::pow(0.5L, e);
        long double s1 = w * (fa + 4.0L * fm + fb) / 6.0L;
        long double fl = eval(4 * num + 1, u64(1) << (e + 2));
        long double fr = eval(4 * num + 3, u64(1) << (e + 2));
        long double s2 = w * (fa + 4.0L * fl + 2.0L * fm + 4.0L * fr + fb) / 12.0L;
        long double est = std::fabs(s2 - s1) / 15.0L;
        if (est <= (long double)tol * w || e >= 60) {
            integral += s2;
            err += est;
            ++panels;
            return;
        }
        refine(2 * num, e + 1, fa, fl, fm);
        refine(2 * num + 1, e + 1, fm, fr, fb);
    }
};

}  // namespace

static L1Result l1_norm_adaptive(int Q, u64 q, u64 p, u64 zm, double tol, u64 qQ) {
    // initial panels: at least one per oscillation of the fastest factor
    int e0 = 6;
    while ((u64(1) << e0) < qQ && e0 < 22) ++e0;

    SimpsonState st;
    st.Q = Q;
    st.q = q;
    st.p = p;
    st.zm = zm;
    st.tol = tol;
    st.eval_budget = 80000000;

    u64 n0 = u64(1) << e0;
    std::vector<long double> endv(n0 + 1);
    for (u64 i = 0; i <= n0; ++i) endv[i] = st.eval(i, n0);
    for (u64 i = 0; i < n0; ++i) {
        long double fm = st.eval(2 * i + 1, 2 * n0);
        st.refine(i, e0, endv[i], fm, endv[i + 1]);
    }

    L1Result r;
    r.integral = (double)st.integral;
    r.error_bound = (double)(st.err + st.integral * 1e-13L) + 1e-15;
    r.panels = st.panels;
    return r;
}

// ---------------------------------------------------------------------------
// L1 norm, route B: interval iteration of the digit-peeling kernel
// ---------------------------------------------------------------------------
//
// Substituting alpha = (x+j)/q turns the integral of |S_Q| into the
// integral of w_Q where
//   w_0 = 1,  w_{m+1}(x) = (1/q) sum_j |G((x+j)/q + z/p)| w_m((x+j)/q).
// On a uniform M-cell grid each (cell, j) source interval has width 1/(Mq)
// and lands in at most two cells of the previous iterate, so per-cell
// lower/upper bounds propagate exactly; |G| over a source interval is
// bracketed by its midpoint value +- the Lipschitz slope pi (q-1) / (2M).

static L1Result l1_norm_kernel(int Q, u64 q, u64 p, u64 zm, double tol) {
    double zp = (double)zm / (double)p;
    double g_half = kPi * (double)(q - 1);  // halfwidth numerator: g_half / (2M)

    u64 M = 4096;
    const u64 m_max = u64(1) << 21;
    if ((u128)q * M * (u128)Q > (u128)1 << 33)
        M = 1024;  // very large q: start small, the budget check below rules

    for (;;) {
        if ((u128)q * M * (u128)Q > (u128)40000000000ULL)
            throw NonConvergenceError("l1_norm: kernel iteration budget exhausted");
        std::vector<double> lo(M, 1.0), hi(M, 1.0), nlo(M), nhi(M);
        double half = g_half / (2.0 * (double)M);
        double slop = 1.0 + (double)q * 1e-14;

        for (int step = 0; step < Q; ++step) {
            parallel_chunks(std::min<u64>(M, 64), [&](std::size_t c) {
                u64 clo = c * (M / std::min<u64>(M, 64));
                u64 chi = (c + 1 == std::min<u64>(M, 64)) ? M : clo + M / std::min<u64>(M, 64);
                for (u64 i = clo; i < chi; ++i) {
                    double acc_lo = 0.0, acc_hi = 0.0;
                    for (u64 j = 0; j < q; ++j) {
                        u64 s = i + j * M;
                        // source cells of the previous iterate
                        u64 c0 = s / q;
                        u64 c1 = (s + 1) / q;
                        if ((s + 1) % q == 0) c1 = c1 == 0 ? 0 : c1 - 1;
                        if (c1 >= M) c1 = M - 1;
                        double wl = lo[c0], wh = hi[c0];
                        if (c1 != c0) {
                            wl = std::min(wl, lo[c1]);
                            wh = std::max(wh, hi[c1]);
                        }
                        double beta = ((double)s + 0.5) / ((double)M * (double)q) + zp;
                        beta -= std::floor(beta);
                        double dist = std::min(beta, 1.0 - beta);
                        double gm;
                        if (dist < 1e-15)
                            gm = (double)q;
                        else
                            gm = std::fabs(std::sin(kPi * (double)q * beta) / std::sin(kPi * beta));
                        double gl = std::max(0.0, gm - half);
                        double gh = std::min((double)q, gm + half);
                        acc_lo += gl * wl;
                        acc_hi += gh * wh;
                    }
                    nlo[i] = acc_lo / (double)q / slop;
                    nhi[i] = acc_hi / (double)q * slop;
                }
            });
            lo.swap(nlo);
            hi.swap(nhi);
        }

        long double ilo = 0, ihi = 0;
        for (u64 i = 0; i < M; ++i) {
            ilo += lo[i];
            ihi += hi[i];
        }
        ilo /= M;
        ihi /= M;
        double mid = (double)((ilo + ihi) / 2.0L);
        double errb = (double)((ihi - ilo) / 2.0L) + mid * 1e-12;
        if (errb <= tol) {
            L1Result r;
            r.integral = mid;
            r.error_bound = errb;
            r.panels = M;
            return r;
        }
        // enclosure width scales like 1/M: jump straight to the predicted
        // grid, and give up early when it cannot fit the budget
        double factor = errb / tol * 1.2;
        if (M >= m_max || factor > (double)(m_max / M) * 2.0)
            throw NonConvergenceError("l1_norm: kernel grid limit reached before tol");
        u64 target = M * 2;
        while (target < m_max && (double)target < (double)M * factor) target *= 2;
        M = std::min(target, m_max);
    }
}

L1Result l1_norm(int Q, u64 q, u64 p, i64 z, double tol, L1Method method) {
    ExpSumParams P{Q, q, p, z, 0.0};
    P.validate();
    if (!(tol > 0)) throw std::invalid_argument("l1_norm: tol must be positive");
    u64 zm = P.z_mod_p();
    u64 qQ = pow_saturating(q, Q, kShallowQuadCap);

    // Simpson resolves every oscillation, so it is capped by q^Q; with one
    // or two factors the integrand is cheap enough for a larger cap.
    bool fits_simpson = qQ <= kDirectQuadCap || (Q <= 2 && qQ <= kShallowQuadCap);
    bool simpson = method == L1Method::simpson || (method == L1Method::automatic && fits_simpson);
    if (simpson && !fits_simpson)
        throw std::invalid_argument("l1_norm: q^Q too large for the Simpson route");
    L1Result r = simpson ? l1_norm_adaptive(Q, q, p, zm, tol * 0.5, qQ)
                         : l1_norm_kernel(Q, q, p, zm, tol);
    if (r.error_bound > tol)
        throw NonConvergenceError("l1_norm: requested tol not certified");
    r.theta_bound = std::pow((double)q, (double)Q * theta(q));
    return r;
}

// ---------------------------------------------------------------------------
// large-sieve point inequality
// ---------------------------------------------------------------------------

GallagherResult gallagher_check(const SampledCurve& curve, double delta,
                                const std::vector<double>& points) {
    std::size_t n = curve.f.size();
    if (n < 2 || curve.df.size() != n)
        throw std::invalid_argument("gallagher_check: need matching f and f' samples");
    double T = curve.t1 - curve.t0;
    if (!(delta > 0) || !(T >= delta))
        throw std::invalid_argument("gallagher_check: need T >= delta > 0");

    std::vector<double> F = points;
    std::sort(F.begin(), F.end());
    double lo = curve.t0 + delta / 2, hi = curve.t1 - delta / 2;
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (F[i] < lo || F[i] > hi)
            throw std::invalid_argument("gallagher_check: point outside [T0+d/2, T0+T-d/2]");
        if (i > 0 && !(F[i] - F[i - 1] > delta))
            throw std::invalid_argument("gallagher_check: points closer than delta");
    }

    double h = T / (double)(n - 1);
    double lhs = 0;
    for (double t : F) {
        double pos = (t - curve.t0) / h;
        std::size_t i = std::min((std::size_t)pos, n - 2);
        double frac = pos - (double)i;
        std::complex<double> v = curve.f[i] * (1.0 - frac) + curve.f[i + 1] * frac;
        lhs += std::abs(v);
    }

    long double int_f = 0, int_df = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        int_f += (std::abs(curve.f[i]) + std::abs(curve.f[i + 1])) * 0.5L * h;
        int_df += (std::abs(curve.df[i]) + std::abs(curve.df[i + 1])) * 0.5L * h;
    }
    double rhs = (double)(int_f / delta + int_df);
    return {lhs, rhs, rhs - lhs};
}

}  // namespace gtau
