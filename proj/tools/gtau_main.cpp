// gelfond-tau command line front end.
//
// Subcommands:
//   theta       evaluate theta(q) and the theta(q) < 1/k gate
//   scan        sup-norm scan of |S_Q(alpha, z)| over [0,1)
//   experiment  restricted tau_k sums over digit classes, CSV + JSON reports
//   verify      named check suites with per-check slack reporting
//   replay      rerun a previously emitted manifest byte-for-byte
//
// Exit codes: 0 all checks pass, 1 assertion/check failure, 2 usage error.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtau/asymptotics.hpp"
#include "gtau/digits.hpp"
#include "gtau/divisor.hpp"
#include "gtau/expsum.hpp"
#include "gtau/oracles.hpp"
#include "gtau/parallel.hpp"

using json = nlohmann::ordered_json;
using namespace gtau;

static const char* kVersion = "gelfond-tau 1.0.0";

// ---------------------------------------------------------------------------
// manifests and report plumbing
// ---------------------------------------------------------------------------

static std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

static json make_manifest(const std::string& command, const json& params, u64 seed,
                          const std::string& timestamp) {
    json m;
    m["command"] = command;
    m["params"] = params;
    m["seed"] = seed;
    m["version"] = kVersion;
    m["timestamp"] = timestamp.empty() ? utc_now() : timestamp;
    return m;
}

static void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + path);
        }
    }
    std::filesystem::rename(tmp, path);
}

static void emit_report(const json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (out_path.empty())
        std::cout << text;
    else
        write_file_atomic(out_path, text);
}

static std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// One named check inside a verify run.
struct CheckLog {
    json checks = json::array();
    bool all_ok = true;

    void add(const std::string& name, bool ok, double measured, double bound,
             const json& params = json::object()) {
        json c;
        c["name"] = name;
        c["status"] = ok ? "pass" : "fail";
        c["measured"] = measured;
        c["bound"] = bound;
        c["slack"] = bound - measured;
        if (!params.empty()) c["params"] = params;
        checks.push_back(c);
        all_ok = all_ok && ok;
        std::printf("[%s] %-34s measured=%-12.6g bound=%-12.6g slack=%.6g\n",
                    ok ? "ok " : "FAIL", name.c_str(), measured, bound, bound - measured);
        if (!ok && !params.empty())
            std::printf("       failing case: %s\n", params.dump().c_str());
    }
};

// ---------------------------------------------------------------------------
// theta / scan / experiment
// ---------------------------------------------------------------------------

struct ThetaArgs {
    u64 q = 2;
    unsigned k = 2;
    std::string out, timestamp;
};

static int run_theta(const ThetaArgs& a) {
    json params{{"q", a.q}, {"k", a.k}};
    json rep;
    rep["schema"] = 1;
    rep["theta"] = theta(a.q);
    rep["gate"] = theorem_gate(a.q, a.k);
    rep["manifest"] = make_manifest("theta", params, 0, a.timestamp);
    emit_report(rep, a.out);
    return 0;
}

struct ScanArgs {
    int Q = 4;
    u64 q = 2, p = 2;
    i64 z = 1;
    u64 grid = 65536;
    bool allow_degenerate = false;
    std::string out, timestamp;
};

static int run_scan(const ScanArgs& a) {
    json params{{"Q", a.Q},       {"q", a.q},       {"p", a.p},
                {"z", a.z},       {"grid", a.grid}, {"allow_degenerate", a.allow_degenerate}};
    NormScanResult r = sup_norm_scan(a.Q, a.q, a.p, a.z, a.grid, !a.allow_degenerate);
    json rep;
    rep["schema"] = 1;
    rep["sup_abs"] = r.sup_abs;
    rep["argmax_alpha"] = r.argmax_alpha;
    rep["lambda_hat"] = r.lambda_hat;
    rep["grid_size"] = r.grid_size;
    rep["manifest"] = make_manifest("scan", params, 0, a.timestamp);
    emit_report(rep, a.out);
    return 0;
}

struct ExperimentArgs {
    unsigned k = 2;
    u64 q = 2, p = 2;
    double xmax = 1e7;
    std::string grid;  // optional comma-separated x values
    std::string out = "experiment";
    std::string timestamp;
    u64 seed = 0;
};

static std::vector<u64> parse_grid(const std::string& s) {
    std::vector<u64> g;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        g.push_back((u64)std::llround(std::stod(s.substr(pos, comma - pos))));
        pos = comma + 1;
    }
    return g;
}

static int run_experiment(const ExperimentArgs& a) {
    ExperimentSpec spec;
    spec.k = a.k;
    spec.q = a.q;
    spec.p = a.p;
    spec.x_grid = a.grid.empty() ? default_grid((u64)a.xmax) : parse_grid(a.grid);
    if (spec.x_grid.empty()) {
        std::fprintf(stderr, "experiment: empty x grid (xmax too small?)\n");
        return 2;
    }
    spec.validate();

    ErrorReport rep = error_table(spec);

    json params{{"k", a.k},   {"q", a.q},

                {"p", a.p},   {"xmax", a.xmax},
                {"grid", a.grid}, {"out", a.out}};
    json manifest = make_manifest("experiment", params, a.seed, a.timestamp);

    // CSV: exact integers for sums and errors; floats only in relative_error.
    std::string csv = "x,a,restricted_sum,main_num,main_den,error_num,relative_error\n";
    for (const auto& row : rep.rows) {
        char line[256];
        i64 D = (i64)(row.main.num * ((i64)a.p / row.main.den));  // unreduced: D over p
        std::snprintf(line, sizeof(line), "%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%lld,%" PRIu64 ",%lld,%s\n",
                      row.x, row.a, row.restricted_sum, (long long)D, a.p,
                      (long long)((i64)(a.p * row.restricted_sum) - D),
                      fmt_double(row.relative_error).c_str());
        csv += line;
    }

    json summary;
    summary["schema"] = 1;
    summary["lambda_hat"] = rep.fit.ok ? json(rep.lambda_hat) : json(nullptr);
    summary["r2"] = rep.fit.ok ? json(rep.fit.r2) : json(nullptr);
    summary["predicted_exponent"] = rep.predicted_exponent;
    summary["gate"] = rep.gate;
    summary["gelfond_condition"] = rep.gelfond_condition;
    summary["fit_points_used"] = rep.fit.points_used;
    summary["fit_points_dropped"] = rep.fit.points_dropped;
    summary["x_grid"] = spec.x_grid;
    summary["max_abs_error"] = rep.max_abs_error;
    json max_rel = json::array();
    for (std::size_t xi = 0; xi < spec.x_grid.size(); ++xi) {
        double m = 0;
        for (u64 aa = 0; aa < spec.p; ++aa)
            m = std::max(m, std::fabs(rep.rows[xi * spec.p + aa].relative_error));
        max_rel.push_back(m);
    }
    summary["max_rel_error"] = max_rel;
    summary["manifest"] = manifest;

    try {
        write_file_atomic(a.out + ".csv", csv);
        emit_report(summary, a.out + ".json");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "experiment: %s\n", e.what());
        std::filesystem::remove(a.out + ".csv");
        std::filesystem::remove(a.out + ".json");
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    u64 seed = 0;
    u64 q = 0;      // 0 = suite default
    u64 p = 0;
    i64 z = 1;
    int Qmax = 0;
    u64 xmax = 0;
    u64 grid = 65536;
    double tol = 0;
    std::string out, timestamp;
};

static void suite_digits(const VerifyArgs& a, CheckLog& log) {
    std::mt19937_64 rng(a.seed * 2654435761u + 1);
    u64 xmax = a.xmax ? a.xmax : 20000;

    bool rt_ok = true;
    u64 rt_bad_n = 0, rt_bad_q = 0;
    for (int i = 0; i < 20000 && rt_ok; ++i) {
        u64 n = rng() >> 1, q = 2 + rng() % 999999;
        auto e = digit_expand(n, q);
        u64 back = 0;
        for (std::size_t b = e.digits.size(); b-- > 0;) back = back * q + e.digits[b];
        if (back != n || e.digit_sum % (q - 1) != n % (q - 1)) {
            rt_ok = false;
            rt_bad_n = n;
            rt_bad_q = q;
        }
    }
    log.add("digits.round_trip_congruence", rt_ok, rt_ok ? 0 : 1, 0.5,
            rt_ok ? json::object() : json{{"n", rt_bad_n}, {"q", rt_bad_q}});

    u64 worst = 0;
    bool dp_ok = true;
    json fail_case;
    for (u64 q : {2ull, 3ull, 10ull, 16ull}) {
        for (u64 p : {2ull, 3ull, 5ull}) {
            for (u64 m : {1ull, 2ull, 3ull}) {
                std::vector<u64> brute(p * m, 0);
                DigitSumStream st(q);
                for (u64 x = 1; x <= xmax; ++x) {
                    auto [n, s] = st.next();
                    brute[(s % p) * m + n % m] += 1;
                    bool probe = x < 128 || (x & 63) == 0 || x == xmax;
                    if (probe) {
                        auto got = count_digit_class_all(x, q, p, m);
                        if (got != brute) {
                            dp_ok = false;
                            fail_case = json{{"x", x}, {"q", q}, {"p", p}, {"m", m}};
                        }
                        ++worst;
                    }
                }
            }
        }
    }
    log.add("digits.dp_vs_brute", dp_ok, dp_ok ? 0 : 1, 0.5, fail_case);

    DigitSumStream st(7);
    bool stream_ok = true;
    for (u64 n = 1; n <= 50000 && stream_ok; ++n) {
        auto [m, s] = st.next();
        stream_ok = (m == n && s == digit_sum(n, 7));
    }
    log.add("digits.stream_consistency", stream_ok, stream_ok ? 0 : 1, 0.5);
}

static void suite_divisor(const VerifyArgs& a, CheckLog& log) {
    std::mt19937_64 rng(a.seed * 0x9e3779b97f4a7c15ull + 2);
    u64 nmax = a.xmax ? a.xmax : 10000;

    bool sieve_ok = true;
    json fail;
    for (unsigned k = 2; k <= 5 && sieve_ok; ++k) {
        auto t = sieve_tau_k(nmax, k);
        for (u64 n = 1; n <= nmax; ++n)
            if (t.at(n) != tau_k_of(n, k)) {
                sieve_ok = false;
                fail = json{{"n", n}, {"k", k}};
                break;
            }
    }
    log.add("divisor.sieve_vs_pointwise", sieve_ok, sieve_ok ? 0 : 1, 0.5, fail);

    bool hyp_ok = true;
    for (int i = 0; i < 200 && hyp_ok; ++i) {
        u64 x = 1 + rng() % 3000000;
        if (divisor_summatory(x, 2) != oracle::hyperbola_d2(x)) {
            hyp_ok = false;
            fail = json{{"x", x}};
        }
    }
    log.add("divisor.summatory_vs_hyperbola", hyp_ok, hyp_ok ? 0 : 1, 0.5, fail);

    oracle::DirichletRecursion rec;
    bool rec_ok = true;
    for (unsigned k = 2; k <= 5; ++k)
        for (u64 x : {u64(1), u64(97), u64(1234), nmax})
            if (divisor_summatory(x, k) != rec.value(x, k)) {
                rec_ok = false;
                fail = json{{"x", x}, {"k", k}};
            }
    log.add("divisor.dirichlet_recursion", rec_ok, rec_ok ? 0 : 1, 0.5, fail);

    bool mult_ok = true;
    auto t3 = sieve_tau_k(nmax * 2, 3);
    for (int i = 0; i < 4000 && mult_ok; ++i) {
        u64 x = nmax * 2;
        u64 aa = 2 + rng() % (x / 4);
        u64 bb = 2 + rng() % (x / aa - 1);
        if (std::gcd(aa, bb) != 1) continue;
        if (t3.at(aa * bb) != t3.at(aa) * t3.at(bb)) {
            mult_ok = false;
            fail = json{{"a", aa}, {"b", bb}};
        }
    }
    log.add("divisor.multiplicativity", mult_ok, mult_ok ? 0 : 1, 0.5, fail);
}

static void suite_identities(const VerifyArgs& a, CheckLog& log) {
    std::mt19937_64 rng(a.seed * 0x2545f4914f6cdd1dull + 3);

    double worst_rel = 0;
    json worst_case;
    for (u64 q = 2; q <= 7; ++q) {
        for (int Q = 1; Q <= 4; ++Q) {
            for (u64 p : {2ull, 3ull, 5ull}) {
                for (int it = 0; it < 25; ++it) {
                    double alpha = u64_to_unit(rng());
                    i64 z = (i64)(rng() % p);
                    ExpSumParams P{Q, q, p, z, alpha};
                    double cap = std::pow((double)q, Q);
                    double diff = std::abs(expsum_direct(P) - expsum_product(P)) / cap;
                    if (diff > worst_rel) {
                        worst_rel = diff;
                        worst_case = json{{"q", q}, {"Q", Q}, {"p", p}, {"z", z}, {"alpha", alpha}};
                    }
                }
            }
        }
    }
    log.add("identities.product_vs_direct", worst_rel <= 1e-9, worst_rel, 1e-9, worst_case);

    double worst_split = 0;
    for (int it = 0; it < 400; ++it) {
        u64 q = 2 + rng() % 5, p = 2 + rng() % 5;
        i64 z = 1 + (i64)(rng() % (p - 1));
        int H = 3 + (int)(rng() % 4);
        int r = 1 + (int)(rng() % 2);
        if (2 * r >= H) continue;
        u64 den = 1 + rng() % 100000, num = rng() % den;
        double full = std::abs(expsum_product(H, q, p, z, RationalAngle{num, den}));
        double front = std::abs(expsum_product(2 * r, q, p, z, RationalAngle{num, den}));
        u64 shift = mulmod(num % den, powmod(q, 2 * (u64)r, den), den);
        double back = std::abs(expsum_product(H - 2 * r, q, p, z, RationalAngle{shift, den}));
        double rel = std::fabs(full - front * back) / std::pow((double)q, H);
        worst_split = std::max(worst_split, rel);
    }
    log.add("identities.splitting", worst_split <= 1e-9, worst_split, 1e-9);

    bool vin_ok = true;
    u64 vin_bad = 0;
    for (u64 n = 1; n <= 10000; ++n)
        if (tau_via_vinogradov(n) != tau_k_of(n, 2)) {
            vin_ok = false;
            vin_bad = n;
            break;
        }
    log.add("identities.vinogradov", vin_ok, vin_ok ? 0 : 1, 0.5,
            vin_ok ? json::object() : json{{"n", vin_bad}});
}

static void suite_lemma1(const VerifyArgs& a, CheckLog& log) {
    int Qmax = a.Qmax ? a.Qmax : 12;
    for (int Q = 1; Q <= Qmax; ++Q) {
        auto r = sup_norm_scan(Q, 2, 2, 1, a.grid);
        double bound = std::pow(3.0, Q / 2.0) * (1 + 1e-9);
        log.add("lemma1.sup_Q" + std::to_string(Q), r.sup_abs <= bound, r.sup_abs, bound,
                json{{"Q", Q}, {"argmax_alpha", r.argmax_alpha}, {"lambda_hat", r.lambda_hat}});
    }
}

static void suite_lemma2(const VerifyArgs& a, CheckLog& log) {
    std::mt19937_64 rng(a.seed * 0xbf58476d1ce4e5b9ull + 5);
    double min_slack = std::numeric_limits<double>::infinity();
    json worst;
    int instances = 300;
    for (int it = 0; it < instances; ++it) {
        int terms = 1 + (int)(rng() % 6);
        std::size_t n = 8192;
        SampledCurve c;
        c.t0 = 0;
        c.t1 = 1;
        c.f.assign(n + 1, {0, 0});
        c.df.assign(n + 1, {0, 0});
        for (int j = 0; j < terms; ++j) {
            std::complex<double> cj{2 * u64_to_unit(rng()) - 1, 2 * u64_to_unit(rng()) - 1};
            int N = (int)(rng() % 33);
            for (std::size_t i = 0; i <= n; ++i) {
                double t = (double)i / (double)n;
                auto e = std::polar(1.0, 2.0 * M_PI * N * t);
                c.f[i] += cj * e;
                c.df[i] += cj * e * std::complex<double>{0.0, 2.0 * M_PI * N};
            }
        }
        double delta = 0.01 + 0.1 * u64_to_unit(rng());
        std::vector<double> F;
        double t = delta / 2;
        while (t <= 1.0 - delta / 2) {
            if (rng() % 2) F.push_back(t);
            t += delta * (1.001 + u64_to_unit(rng()));
        }
        auto r = gallagher_check(c, delta, F);
        if (r.slack < min_slack) {
            min_slack = r.slack;
            worst = json{{"instance", it}, {"delta", delta}, {"points", F.size()}};
        }
    }
    log.add("lemma2.min_slack", min_slack >= -1e-6, -min_slack, 1e-6, worst);
}

static void suite_lemma4(const VerifyArgs& a, CheckLog& log) {
    std::vector<u64> qs = a.q ? std::vector<u64>{a.q} : std::vector<u64>{2, 3, 5};
    std::vector<u64> ps = a.p ? std::vector<u64>{a.p} : std::vector<u64>{2, 3};
    int Qmax = a.Qmax ? a.Qmax : 6;
    for (u64 q : qs) {
        for (u64 p : ps) {
            for (int Q = 1; Q <= Qmax; ++Q) {
                double tol = a.tol > 0 ? a.tol
                                       : std::max(1e-6, 1e-3 * std::pow((double)q, Q * theta(q)));
                L1Result r = l1_norm(Q, q, p, a.z, tol);
                char name[64];
                std::snprintf(name, sizeof(name), "lemma4.l1_q%" PRIu64 "_p%" PRIu64 "_Q%d", q, p, Q);
                log.add(name, r.integral + r.error_bound <= r.theta_bound,
                        r.integral + r.error_bound, r.theta_bound,
                        json{{"integral", r.integral},
                             {"error_bound", r.error_bound},
                             {"panels", r.panels}});
            }
        }
    }

    std::mt19937_64 rng(a.seed * 0x94d049bb133111ebull + 7);
    double worst = -std::numeric_limits<double>::infinity();
    json worst_case;
    for (int it = 0; it < 10000; ++it) {
        double x = u64_to_unit(rng());
        u64 q = 2 + rng() % 99, p = 2 + rng() % 12;
        i64 z = (i64)(rng() % p);
        auto kb = kernel_sum_bound_check(x, q, p, z);
        if (kb.lhs - kb.rhs > worst) {
            worst = kb.lhs - kb.rhs;
            worst_case = json{{"x", x}, {"q", q}, {"p", p}, {"z", z}};
        }
    }
    log.add("lemma4.kernel_bound", worst <= 0, worst, 0.0, worst_case);
}

static int run_verify(const VerifyArgs& a) {
    static const std::vector<std::string> known = {"identities", "lemma1", "lemma2",
                                                   "lemma4",     "digits", "divisor", "all"};
    if (std::find(known.begin(), known.end(), a.suite) == known.end()) {
        std::fprintf(stderr, "verify: unknown suite '%s'\n", a.suite.c_str());
        return 2;
    }
    json params{{"suite", a.suite}, {"q", a.q},       {"p", a.p},      {"z", a.z},
                {"Qmax", a.Qmax},   {"xmax", a.xmax}, {"grid", a.grid}, {"tol", a.tol}};
    CheckLog log;
    bool all = a.suite == "all";
    if (all || a.suite == "digits") suite_digits(a, log);
    if (all || a.suite == "divisor") suite_divisor(a, log);
    if (all || a.suite == "identities") suite_identities(a, log);
    if (all || a.suite == "lemma1") suite_lemma1(a, log);
    if (all || a.suite == "lemma2") suite_lemma2(a, log);
    if (all || a.suite == "lemma4") suite_lemma4(a, log);

    json rep;
    rep["schema"] = 1;
    rep["passed"] = log.all_ok;
    rep["checks"] = log.checks;
    rep["manifest"] = make_manifest("verify", params, a.seed, a.timestamp);
    if (!a.out.empty()) emit_report(rep, a.out);
    std::printf("%s\n", log.all_ok ? "verify: all checks passed" : "verify: FAILURES present");
    return log.all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

static int dispatch_manifest(const json& manifest, const std::string& out_override);

static int run_replay(const std::string& path, const std::string& out_override) {
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "replay: cannot read %s\n", path.c_str());
        return 2;
    }
    json doc = json::parse(in, nullptr, true);
    json manifest = doc.contains("manifest") ? doc["manifest"] : doc;
    return dispatch_manifest(manifest, out_override);
}

static int dispatch_manifest(const json& manifest, const std::string& out_override) {
    std::string cmd = manifest.at("command");
    const json& p = manifest.at("params");
    std::string ts = manifest.at("timestamp");
    u64 seed = manifest.at("seed");
    if (cmd == "theta") {
        ThetaArgs a;
        a.q = p.at("q");
        a.k = p.at("k");
        a.out = out_override;
        a.timestamp = ts;
        return run_theta(a);
    }
    if (cmd == "scan") {
        ScanArgs a;
        a.Q = p.at("Q");
        a.q = p.at("q");
        a.p = p.at("p");
        a.z = p.at("z");
        a.grid = p.at("grid");
        a.allow_degenerate = p.at("allow_degenerate");
        a.out = out_override;
        a.timestamp = ts;
        return run_scan(a);
    }
    if (cmd == "experiment") {
        ExperimentArgs a;
        a.k = p.at("k");
        a.q = p.at("q");
        a.p = p.at("p");
        a.xmax = p.at("xmax");
        a.grid = p.at("grid").get<std::string>();
        a.out = out_override.empty() ? p.at("out").get<std::string>() : out_override;
        a.timestamp = ts;
        a.seed = seed;
        return run_experiment(a);
    }
    if (cmd == "verify") {
        VerifyArgs a;
        a.suite = p.at("suite").get<std::string>();
        a.q = p.at("q");
        a.p = p.at("p");
        a.z = p.at("z");
        a.Qmax = p.at("Qmax");
        a.xmax = p.at("xmax");
        a.grid = p.at("grid");
        a.tol = p.at("tol");
        a.seed = seed;
        a.out = out_override;
        a.timestamp = ts;
        return run_verify(a);
    }
    std::fprintf(stderr, "replay: unknown command '%s'\n", cmd.c_str());
    return 2;
}

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - digit-restricted divisor sums and trigonometric-sum checks"};
    app.require_subcommand(1);

    ThetaArgs ta;
    auto* theta_cmd = app.add_subcommand("theta", "evaluate theta(q) and the 1/k gate");
    theta_cmd->add_option("--q", ta.q, "base q >= 2")->required();
    theta_cmd->add_option("--k", ta.k, "divisor order k >= 2")->required();
    theta_cmd->add_option("--out", ta.out, "write JSON report here instead of stdout");
    theta_cmd->add_option("--timestamp", ta.timestamp, "fixed manifest timestamp");

    ScanArgs sa;
    auto* scan_cmd = app.add_subcommand("scan", "sup-norm scan of |S_Q(alpha,z)|");
    scan_cmd->add_option("--Q", sa.Q, "digit length")->required();
    scan_cmd->add_option("--q", sa.q, "base")->required();
    scan_cmd->add_option("--p", sa.p, "modulus")->required();
    scan_cmd->add_option("--z", sa.z, "character numerator");
    scan_cmd->add_option("--grid", sa.grid, "grid size (default 65536, forced odd)");
    scan_cmd->add_flag("--allow-degenerate", sa.allow_degenerate,
                       "scan outside the Gelfond regime");
    scan_cmd->add_option("--out", sa.out, "write JSON report here instead of stdout");
    scan_cmd->add_option("--timestamp", sa.timestamp, "fixed manifest timestamp");

    ExperimentArgs ea;
    auto* exp_cmd = app.add_subcommand("experiment", "restricted tau_k sums over digit classes");
    exp_cmd->add_option("--k", ea.k, "divisor order")->required();
    exp_cmd->add_option("--q", ea.q, "digit base")->required();
    exp_cmd->add_option("--p", ea.p, "digit-sum modulus")->required();
    exp_cmd->add_option("--xmax", ea.xmax, "largest x (default 1e7)");
    exp_cmd->add_option("--grid", ea.grid, "comma-separated x values (default log grid)");
    exp_cmd->add_option("--out", ea.out, "output prefix for .csv/.json (default 'experiment')");
    exp_cmd->add_option("--seed", ea.seed, "seed recorded in the manifest");
    exp_cmd->add_option("--timestamp", ea.timestamp, "fixed manifest timestamp");

    VerifyArgs va;
    auto* ver_cmd = app.add_subcommand("verify", "run a named check suite");
    ver_cmd->add_option("--suite", va.suite,
                        "identities|lemma1|lemma2|lemma4|digits|divisor|all")->required();
    ver_cmd->add_option("--seed", va.seed, "seed for randomized sweeps");
    ver_cmd->add_option("--q", va.q, "override base for lemma4");
    ver_cmd->add_option("--p", va.p, "override modulus for lemma4");
    ver_cmd->add_option("--z", va.z, "character numerator");
    ver_cmd->add_option("--Qmax", va.Qmax, "largest Q for lemma1/lemma4");
    ver_cmd->add_option("--xmax", va.xmax, "sweep bound for digits/divisor");
    ver_cmd->add_option("--grid", va.grid, "scan grid size for lemma1");
    ver_cmd->add_option("--tol", va.tol, "quadrature tolerance override");
    ver_cmd->add_option("--out", va.out, "write JSON report here");
    ver_cmd->add_option("--timestamp", va.timestamp, "fixed manifest timestamp");

    std::string replay_path, replay_out;
    auto* rep_cmd = app.add_subcommand("replay", "rerun a previously emitted manifest");
    rep_cmd->add_option("manifest", replay_path, "manifest or report JSON file")->required();
    rep_cmd->add_option("--out", replay_out, "output path/prefix override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (theta_cmd->parsed()) return run_theta(ta);
        if (scan_cmd->parsed()) return run_scan(sa);
        if (exp_cmd->parsed()) return run_experiment(ea);
        if (ver_cmd->parsed()) return run_verify(va);
        if (rep_cmd->parsed()) return run_replay(replay_path, replay_out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
