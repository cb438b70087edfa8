// Acceptance suite: one check per numbered criterion, each printing a
// single PASS/FAIL line (with measured values) and timed where a runtime
// budget is part of the criterion. Run all or --criterion N.
//
// Criterion 10 drives the installed CLI end to end and needs --cli PATH.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtau/asymptotics.hpp"
#include "gtau/digits.hpp"
#include "gtau/divisor.hpp"
#include "gtau/expsum.hpp"
#include "gtau/oracles.hpp"
#include "gtau/parallel.hpp"

using namespace gtau;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char b[48];
    std::snprintf(b, sizeof(b), "%.6g", v);
    return b;
}

// --------------------------------------------------------------------------
// 1. exactness: sieve vs pointwise, summatory vs hyperbola, < 60 s
// --------------------------------------------------------------------------
Outcome criterion1() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();

    for (unsigned k = 2; k <= 5 && out.pass; ++k) {
        auto table = sieve_tau_k(100000, k);
        for (u64 n = 1; n <= 100000; ++n) {
            if (table.at(n) != tau_k_of(n, k)) {
                out.fail("sieve_tau_k disagrees with tau_k_of at n=" + std::to_string(n) +
                         " k=" + std::to_string(k));
                break;
            }
        }
    }

    std::mt19937_64 rng(1);
    std::vector<u64> xs(1000);
    for (auto& x : xs) x = 1 + rng() % 100000000;
    auto sums = divisor_summatory_many(xs, 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (sums[i] != oracle::hyperbola_d2(xs[i])) {
            out.fail("summatory != hyperbola oracle at x=" + std::to_string(xs[i]));
            break;
        }
    }

    double el = seconds_since(t0);
    out.note("elapsed " + fmt(el) + " s");
    if (el >= 60.0) out.fail("runtime budget 60 s exceeded");
    return out;
}

// --------------------------------------------------------------------------
// 2. Vinogradov identity, exact for n <= 1e4
// --------------------------------------------------------------------------
Outcome criterion2() {
    Outcome out;
    for (u64 n = 1; n <= 10000; ++n) {
        if (tau_via_vinogradov(n) != tau_k_of(n, 2)) {
            out.fail("mismatch at n=" + std::to_string(n));
            return out;
        }
    }
    out.note("tau_via_vinogradov(n) = tau(n) for all n <= 10000");
    return out;
}

// --------------------------------------------------------------------------
// 3. product identity: |product - direct| <= 1e-9 q^Q
// --------------------------------------------------------------------------
// The direct sum is evaluated once per (q, Q, alpha) grouped by digit sum:
//   S_Q(alpha, z) = sum_s e(z s / p) X_s,  X_s = sum_{S(n)=s, n<q^Q} e(alpha n),
// an exact regrouping of the n-sum that serves every (p, z) pair at once.
// The ungrouped expsum_direct is spot-checked against the same values.
Outcome criterion3() {
    Outcome out;
    struct Set {
        u64 q;
        int Q;
    };
    std::vector<Set> sets;
    for (u64 q = 2; q <= 10; ++q)
        for (int Q = 1; Q <= 6; ++Q) sets.push_back({q, Q});

    double w = 0;
    std::string w_at;
    double w_spot = 0;
    for (std::size_t si = 0; si < sets.size(); ++si) {
        auto [q, Q] = sets[si];
        u64 N = 1;
        for (int i = 0; i < Q; ++i) N *= q;
        double cap = (double)N;
        u64 smax = (q - 1) * (u64)Q;
        std::mt19937_64 rng(0x5eed0000 + si);

        std::vector<std::complex<double>> X(smax + 1);
        std::vector<u64> digits;
        for (int it = 0; it < 1000; ++it) {
            double alpha = u64_to_unit(rng());

            std::fill(X.begin(), X.end(), std::complex<double>(0, 0));
            digits.assign(1, 0);
            u64 s = 0;
            auto step = std::polar(1.0, 2 * 3.14159265358979323846 * alpha);
            std::complex<double> rot = 1.0;
            for (u64 n = 0; n < N; ++n) {
                if (n > 0) {
                    std::size_t i = 0;
                    while (i < digits.size() && digits[i] == q - 1) {
                        digits[i] = 0;
                        s -= q - 1;
                        ++i;
                    }
                    if (i == digits.size()) digits.push_back(0);
                    digits[i] += 1;
                    s += 1;
                    rot *= step;
                    if ((n & 0xfff) == 0)
                        rot = std::polar(1.0, 2 * 3.14159265358979323846 *
                                                  (alpha * (double)n - std::floor(alpha * (double)n)));
                }
                X[s] += rot;
            }

            for (u64 p = 2; p <= 7; ++p) {
                for (i64 z = 0; z < (i64)p; ++z) {
                    std::complex<double> direct = 0;
                    for (u64 ss = 0; ss <= smax; ++ss) {
                        double ph = 2 * 3.14159265358979323846 * (double)((u64)z * ss % p) / (double)p;
                        direct += X[ss] * std::polar(1.0, ph);
                    }
                    double diff =
                        std::abs(direct - expsum_product({Q, q, p, z, alpha})) / cap;
                    if (diff > w) {
                        w = diff;
                        w_at = "q=" + std::to_string(q) + " Q=" + std::to_string(Q) +
                               " p=" + std::to_string(p) + " z=" + std::to_string(z);
                    }
                }
            }
            // tie the grouped sum back to the public direct oracle
            if (it < 2) {
                ExpSumParams P{Q, q, 5, 2, alpha};
                std::complex<double> direct = 0;
                for (u64 ss = 0; ss <= smax; ++ss)
                    direct += X[ss] * std::polar(1.0, 2 * 3.14159265358979323846 *
                                                          (double)(2 * ss % 5) / 5.0);
                w_spot = std::max(w_spot, std::abs(direct - expsum_direct(P)) / cap);
            }
        }
    }
    out.note("worst |product-direct|/q^Q = " + fmt(w) + " at " + w_at +
             " (54 (q,Q) sets x 1000 alphas x all p<=7, z); grouped-vs-plain direct " +
             fmt(w_spot));
    if (w > 1e-9) out.fail("tolerance 1e-9 q^Q exceeded");
    if (w_spot > 1e-9) out.fail("grouped direct sum disagrees with expsum_direct");
    return out;
}

// --------------------------------------------------------------------------
// 4. sup bound at p=q=2: grid sup of |S_Q(alpha,1)| vs 3^(Q/2), < 60 s
// --------------------------------------------------------------------------
Outcome criterion4() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    int violations = 0;
    double worst_ratio = 0;
    for (int Q = 1; Q <= 20; ++Q) {
        auto r = sup_norm_scan(Q, 2, 2, 1, 1 << 16);
        double bound = std::pow(3.0, 0.5 * Q);
        double ratio = r.sup_abs / bound;
        worst_ratio = std::max(worst_ratio, ratio);
        bool ok = r.sup_abs <= bound * (1 + 1e-9);
        if (!ok) ++violations;
        std::printf("         Q=%-2d sup=%-12.6g 3^(Q/2)=%-12.6g ratio=%.6f %s\n", Q, r.sup_abs,
                    bound, ratio, ok ? "" : "EXCEEDS");
    }
    double el = seconds_since(t0);
    out.note("elapsed " + fmt(el) + " s");
    if (el >= 60.0) out.fail("runtime budget 60 s exceeded");
    if (violations > 0)
        out.fail("sup exceeds 3^(Q/2)(1+1e-9) for " + std::to_string(violations) +
                 " of 20 Q values; worst ratio " + fmt(worst_ratio) +
                 " (the sup of the sum genuinely exceeds the constant-free bound; "
                 "peak ratio tends to ~1.0447 near alpha=1/3)");
    return out;
}

// --------------------------------------------------------------------------
// 5. L1 bound: quadrature value + error <= q^(Q theta), plus the 4/pi case
// --------------------------------------------------------------------------
Outcome criterion5() {
    Outcome out;
    auto pi_case = l1_norm(1, 2, 2, 1, 1e-7);
    double ref = 4.0 / 3.14159265358979323846;
    if (std::fabs(pi_case.integral - ref) > 1e-6)
        out.fail("Q=1 q=2 p=2 z=1 integral " + fmt(pi_case.integral) + " != 4/pi within 1e-6");
    else
        out.note("4/pi case: |" + fmt(pi_case.integral) + " - 4/pi| = " +
                 fmt(std::fabs(pi_case.integral - ref)));

    double worst_ratio = 0;
    std::string worst_at;
    for (u64 q : {2ull, 3ull, 5ull, 10ull, 50ull}) {
        for (u64 p : {2ull, 3ull, 13ull}) {
            for (int Q = 1; Q <= 8; ++Q) {
                double bound = std::pow((double)q, Q * theta(q));
                double tol = std::max(1e-7, 1e-3 * bound);
                L1Result r = l1_norm(Q, q, p, 1, tol);
                if (r.integral + r.error_bound > r.theta_bound) {
                    out.fail("bound violated at q=" + std::to_string(q) +
                             " p=" + std::to_string(p) + " Q=" + std::to_string(Q));
                }
                double ratio = (r.integral + r.error_bound) / r.theta_bound;
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst_at = "q=" + std::to_string(q) + " p=" + std::to_string(p) +
                               " Q=" + std::to_string(Q);
                }
            }
        }
    }
    out.note("largest (value+err)/bound over 120 combos = " + fmt(worst_ratio) + " at " +
             worst_at);
    return out;
}

// --------------------------------------------------------------------------
// 6. kernel bound: lhs <= 6(1+ln q) on 1e4 random tuples
// --------------------------------------------------------------------------
Outcome criterion6() {
    Outcome out;
    std::mt19937_64 rng(6);
    double worst = -1e300;
    for (int it = 0; it < 10000; ++it) {
        double x = u64_to_unit(rng());
        u64 q = 2 + rng() % 99;
        u64 p = 2 + rng() % 12;
        i64 z = (i64)(rng() % p);
        auto r = kernel_sum_bound_check(x, q, p, z);
        worst = std::max(worst, r.lhs - r.rhs);
        if (r.lhs > r.rhs) {
            out.fail("lhs > rhs at x=" + fmt(x) + " q=" + std::to_string(q) +
                     " p=" + std::to_string(p));
            return out;
        }
    }
    out.note("max(lhs-rhs) = " + fmt(worst) + " over 10000 tuples");
    return out;
}

// --------------------------------------------------------------------------
// 7. large sieve: slack >= -1e-6 on 1e3 trig-polynomial instances
// --------------------------------------------------------------------------
Outcome criterion7() {
    Outcome out;
    std::mt19937_64 rng(7);
    double min_slack = 1e300;
    for (int it = 0; it < 1000; ++it) {
        int terms = 1 + (int)(rng() % 8);
        std::size_t n = 8192;
        SampledCurve c;
        c.t0 = 0;
        c.t1 = 1;
        c.f.assign(n + 1, {0, 0});
        c.df.assign(n + 1, {0, 0});
        for (int j = 0; j < terms; ++j) {
            std::complex<double> cj{2 * u64_to_unit(rng()) - 1, 2 * u64_to_unit(rng()) - 1};
            int N = (int)(rng() % 40);
            auto step = std::polar(1.0, 2.0 * 3.14159265358979323846 * N / (double)n);
            std::complex<double> e = 1.0;
            std::complex<double> dfac{0.0, 2.0 * 3.14159265358979323846 * N};
            for (std::size_t i = 0; i <= n; ++i) {
                c.f[i] += cj * e;
                c.df[i] += cj * e * dfac;
                e *= step;
            }
        }
        double delta = 0.005 + 0.1 * u64_to_unit(rng());
        std::vector<double> F;
        double t = delta / 2;
        while (t <= 1.0 - delta / 2) {
            if (rng() % 2) F.push_back(t);
            t += delta * (1.001 + u64_to_unit(rng()));
        }
        auto r = gallagher_check(c, delta, F);
        min_slack = std::min(min_slack, r.slack);
    }
    out.note("min slack = " + fmt(min_slack) + " over 1000 instances");
    if (min_slack < -1e-6) out.fail("slack below -1e-6");
    return out;
}

// --------------------------------------------------------------------------
// 8. Gelfond count: DP == brute for all x <= 1e5 on the parameter grid, and the
//    p=q=2 regression bound at x = 2^j, j = 10..24; < 30 s
// --------------------------------------------------------------------------
Outcome criterion8() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();

    struct Combo {
        u64 q, p, m;
    };
    std::vector<Combo> combos;
    for (u64 q : {2ull, 3ull, 10ull, 16ull})
        for (u64 p : {2ull, 3ull, 5ull})
            for (u64 m : {1ull, 2ull, 3ull}) combos.push_back({q, p, m});

    for (auto [q, p, m] : combos) {
        DigitClassCounter counter(q, p, m, 100000);
        std::vector<u64> brute(p * m, 0);
        DigitSumStream st(q);
        bool combo_ok = true;
        for (u64 x = 1; x <= 100000 && combo_ok; ++x) {
            auto [n, s] = st.next();
            brute[(s % p) * m + n % m] += 1;
            if (counter.count_all(x) != brute) {
                out.fail("DP != brute at x=" + std::to_string(x) + " q=" + std::to_string(q) +
                         " p=" + std::to_string(p) + " m=" + std::to_string(m));
                combo_ok = false;
            }
        }
    }

    std::vector<u64> grid;
    for (int j = 10; j <= 24; ++j) grid.push_back(u64(1) << j);
    for (u64 a : {0ull, 1ull}) {
        auto rep = gelfond_error_check(grid, 2, 2, 1, 0, a);
        if (!rep.regression_ok)
            out.fail("regression bound C x^0.7925 violated for a=" + std::to_string(a));
    }

    double el = seconds_since(t0);
    out.note("36 parameter combos x 1e5 bounds, all classes; elapsed " + fmt(el) + " s");
    if (el >= 30.0) out.fail("runtime budget 30 s exceeded");
    return out;
}

// --------------------------------------------------------------------------
// 9. restricted-sum experiments for (k=2,q=2,p=2) and (k=2,q=4096,p=3), < 5 min
// --------------------------------------------------------------------------
Outcome criterion9() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();

    struct Pair {
        u64 q, p;
    };
    for (auto [q, p] : {Pair{2, 2}, Pair{4096, 3}}) {
        ExperimentSpec spec;
        spec.k = 2;
        spec.q = q;
        spec.p = p;
        spec.x_grid = default_grid(10000000);
        auto rep = error_table(spec);
        std::string tag = "(k=2,q=" + std::to_string(q) + ",p=" + std::to_string(p) + ")";

        // (a) partition identity against an independent summatory pass
        auto sums = restricted_tau_sums(spec.x_grid, spec.k, q, p);
        auto totals = divisor_summatory_many(spec.x_grid, spec.k);
        for (std::size_t xi = 0; xi < spec.x_grid.size(); ++xi) {
            u64 total = 0;
            for (u64 v : sums[xi]) total += v;
            if (total != totals[xi]) {
                out.fail(tag + " partition identity broken at x=" +
                         std::to_string(spec.x_grid[xi]));
                break;
            }
        }

        // (b) error cancellation, exact rationals
        for (std::size_t xi = 0; xi < spec.x_grid.size(); ++xi) {
            Rat sum(0);
            for (u64 a = 0; a < p; ++a) sum = sum + rep.rows[xi * p + a].error;
            if (!sum.is_zero()) {
                out.fail(tag + " sum of errors nonzero at x=" + std::to_string(spec.x_grid[xi]));
                break;
            }
        }

        // (c) relative error level and decay between 1e6 and 1e7
        double rel6 = 0, rel7 = 0;
        for (std::size_t xi = 0; xi < spec.x_grid.size(); ++xi) {
            double m = 0;
            for (u64 a = 0; a < p; ++a)
                m = std::max(m, std::fabs(rep.rows[xi * p + a].relative_error));
            if (spec.x_grid[xi] == 1000000) rel6 = m;
            if (spec.x_grid[xi] == 10000000) rel7 = m;
        }
        std::printf("         %s max rel err: %.4f at 1e6, %.4f at 1e7; lambda_hat=%.4f r2=%.4f\n",
                    tag.c_str(), rel6, rel7, rep.lambda_hat, rep.fit.r2);
        if (!(rel6 < 0.1))
            out.fail(tag + " max rel error " + fmt(rel6) + " at x=1e6 not < 0.1" +
                     (std::gcd(p, q - 1) != 1 ? " [gcd(p,q-1)=" + std::to_string(std::gcd(p, q - 1)) +
                                                    ": S(n) mod p is pinned to n mod p, classes "
                                                    "cannot equidistribute]"
                                              : ""));
        if (!(rel7 < rel6)) out.fail(tag + " rel error does not shrink from 1e6 to 1e7");

        // (d) fitted exponent
        if (!rep.fit.ok)
            out.fail(tag + " exponent fit unavailable");
        else if (!(rep.lambda_hat < 1.0))
            out.fail(tag + " lambda_hat " + fmt(rep.lambda_hat) + " not < 1 (r2 " +
                     fmt(rep.fit.r2) + ")");
    }

    double el = seconds_since(t0);
    out.note("elapsed " + fmt(el) + " s");
    if (el >= 300.0) out.fail("runtime budget 300 s exceeded");
    return out;
}

// --------------------------------------------------------------------------
// 10. determinism: byte-identical reports across thread counts, via the CLI
// --------------------------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10(const std::string& cli) {
    Outcome out;
    if (cli.empty()) {
        out.fail("needs --cli PATH to the gtau binary");
        return out;
    }
    std::string dir = "acceptance_tmp";
    std::filesystem::create_directories(dir);
    auto run = [&](const std::string& cmd) {
        int rc = std::system(cmd.c_str());
        if (rc != 0) out.fail("command failed: " + cmd);
    };

    std::string ts = "--timestamp 2026-01-01T00:00:00Z";
    run("GELFOND_TAU_THREADS=1 " + cli + " experiment --k 2 --q 2 --p 2 --xmax 1e5 --out " + dir +
        "/exp " + ts + " > /dev/null");
    std::string csv1 = slurp(dir + "/exp.csv"), json1 = slurp(dir + "/exp.json");
    run("GELFOND_TAU_THREADS=5 " + cli + " replay " + dir + "/exp.json > /dev/null");
    if (slurp(dir + "/exp.csv") != csv1) out.fail("experiment CSV differs across thread counts");
    if (slurp(dir + "/exp.json") != json1) out.fail("experiment JSON differs across thread counts");

    run("GELFOND_TAU_THREADS=1 " + cli + " scan --Q 12 --q 2 --p 2 --z 1 --out " + dir +
        "/scan.json " + ts + " > /dev/null");
    std::string scan1 = slurp(dir + "/scan.json");
    run("GELFOND_TAU_THREADS=6 " + cli + " replay " + dir + "/scan.json --out " + dir +
        "/scan.json > /dev/null");
    if (slurp(dir + "/scan.json") != scan1) out.fail("scan JSON differs across thread counts");

    run(cli + " theta --q 4096 --k 2 --out " + dir + "/theta.json " + ts);
    std::string th1 = slurp(dir + "/theta.json");
    run(cli + " replay " + dir + "/theta.json --out " + dir + "/theta.json");
    if (slurp(dir + "/theta.json") != th1) out.fail("theta JSON changed under replay");

    if (out.pass) out.note("experiment/scan/theta reports byte-identical under replay, threads 1/5/6");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--cli") && i + 1 < argc) cli = argv[++i];
        else {
            std::fprintf(stderr, "usage: acceptance [--criterion N] [--cli PATH]\n");
            return 2;
        }
    }

    static const char* names[] = {
        "",
        "exactness suite (sieve vs pointwise, summatory vs hyperbola)",
        "Vinogradov divisor identity",
        "product identity vs direct summation",
        "sup-norm bound 3^(Q/2) at p=q=2",
        "L1 bound q^(Q theta)",
        "kernel bound 6(1+ln q)",
        "large-sieve point inequality",
        "Gelfond digit-class count and regression bound",
        "restricted-sum desk-scale experiments",
        "byte-identical reports across thread counts",
    };

    bool all_ok = true;
    for (int c = 1; c <= 10; ++c) {
        if (only && c != only) continue;
        Outcome o;
        switch (c) {
            case 1: o = criterion1(); break;
            case 2: o = criterion2(); break;
            case 3: o = criterion3(); break;
            case 4: o = criterion4(); break;
            case 5: o = criterion5(); break;
            case 6: o = criterion6(); break;
            case 7: o = criterion7(); break;
            case 8: o = criterion8(); break;
            case 9: o = criterion9(); break;
            case 10: o = criterion10(cli); break;
        }
        std::printf("[%s] criterion %d: %s%s%s\n", o.pass ? "PASS" : "FAIL", c, names[c],
                    o.detail.empty() ? "" : " -- ", o.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && o.pass;
    }
    return all_ok ? 0 : 1;
}
