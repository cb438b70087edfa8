// Restricted mean values of tau_k over digit-sum classes, their exact
// error terms against the (1/p)-share main term, and the empirical error
// exponent. Sums and errors stay exact (integers and small rationals);
// floating point enters only in fits and reported ratios.

#include "gtau/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "gtau/digits.hpp"
#include "gtau/divisor.hpp"
#include "gtau/expsum.hpp"

namespace gtau {

void ExperimentSpec::validate() const {
    if (k < 1) throw std::invalid_argument("ExperimentSpec: k must be >= 1");
    if (q < 2) throw std::invalid_argument("ExperimentSpec: q must be >= 2");
    if (p <= 1) throw std::invalid_argument("ExperimentSpec: p must be > 1");
    if (x_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty x grid");
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (x_grid[i] < 1) throw std::invalid_argument("ExperimentSpec: x must be >= 1");
        if (i > 0 && x_grid[i] <= x_grid[i - 1])
            throw std::invalid_argument("ExperimentSpec: x grid must be strictly increasing");
    }
    for (u64 a : a_values)
        if (a >= p) throw std::invalid_argument("ExperimentSpec: residue a out of range");
}

std::vector<std::vector<u64>> restricted_tau_sums(const std::vector<u64>& x_grid,
                                                  unsigned k, u64 q, u64 p) {
    if (x_grid.empty()) return {};
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (x_grid[i] <= x_grid[i - 1])
            throw std::invalid_argument("restricted_tau_sums: grid must be strictly increasing");
    u64 xmax = x_grid.back();

    std::vector<u64> acc(p, 0);
    std::vector<std::vector<u64>> out;
    out.reserve(x_grid.size());
    std::size_t cut = 0;

    DigitSumStream digits(q);
    stream_tau(xmax, k, [&](u64 /*first_n*/, std::span<const u64> vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            auto [n, s] = digits.next();
            acc[s % p] += vals[i];
            while (cut < x_grid.size() && x_grid[cut] == n) {
                out.push_back(acc);
                ++cut;
            }
        }
        for (u64 v : acc)
            if (v >= (u64(1) << 62)) throw std::overflow_error("restricted sums near overflow");
    });
    return out;
}

u64 restricted_tau_sum(u64 x, unsigned k, u64 q, u64 p, u64 a) {
    if (a >= p) throw std::invalid_argument("restricted_tau_sum: residue out of range");
    return restricted_tau_sums({x}, k, q, p)[0][a];
}

Rat main_term(u64 x, unsigned k, u64 p) {
    return Rat((i64)divisor_summatory(x, k), (i64)p);
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& x_abs_err) {
    FitResult r;
    std::vector<double> lx, ly;
    for (auto [x, e] : x_abs_err) {
        if (e > 0) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(e));
        } else {
            ++r.points_dropped;
        }
    }
    r.points_used = (unsigned)lx.size();
    if (lx.size() < 3) return r;

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) return r;
    r.slope = sxy / sxx;
    double icept = my - r.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double pred = icept + r.slope * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    r.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    r.ok = true;
    return r;
}

bool theorem_gate(u64 q, unsigned k) {
    if (k < 1) throw std::invalid_argument("theorem_gate: k must be >= 1");
    return theta(q) < 1.0 / (double)k;
}

ErrorReport error_table(const ExperimentSpec& spec) {
    spec.validate();
    ErrorReport rep;
    rep.gate = theorem_gate(spec.q, spec.k);
    rep.gelfond_condition = std::gcd(spec.p, spec.q - 1) == 1;

    std::vector<u64> a_values = spec.a_values;
    if (a_values.empty()) {
        a_values.resize(spec.p);
        for (u64 a = 0; a < spec.p; ++a) a_values[a] = a;
    }

    auto sums = restricted_tau_sums(spec.x_grid, spec.k, spec.q, spec.p);
    auto totals = divisor_summatory_many(spec.x_grid, spec.k);  // independent pass

    std::vector<std::pair<double, double>> fit_pts;
    for (std::size_t xi = 0; xi < spec.x_grid.size(); ++xi) {
        u64 x = spec.x_grid[xi];
        i64 D = (i64)totals[xi];
        double max_abs = 0;
        for (u64 a : a_values) {
            ErrorRow row;
            row.x = x;
            row.a = a;
            row.restricted_sum = sums[xi][a];
            row.main = Rat(D, (i64)spec.p);
            row.error = Rat((i64)(spec.p * sums[xi][a]) - D, (i64)spec.p);
            row.relative_error = row.error.to_double() / row.main.to_double();
            max_abs = std::max(max_abs, std::fabs(row.error.to_double()));
            rep.rows.push_back(row);
        }
        rep.max_abs_error.push_back(max_abs);
        fit_pts.push_back({(double)x, max_abs});
    }

    rep.fit = fit_exponent(fit_pts);
    rep.lambda_hat = rep.fit.ok ? rep.fit.slope : std::numeric_limits<double>::quiet_NaN();
    double base = 1.0 - 1.0 / (double)spec.k + theta(spec.q);
    if (spec.p == 2 && spec.q == 2) {
        double lambda_ref = std::log(3.0) / (2.0 * std::log(2.0));
        rep.predicted_exponent = std::max(base, lambda_ref);
    } else {
        rep.predicted_exponent = base;
    }
    return rep;
}

GelfondReport gelfond_error_check(const std::vector<u64>& x_grid, u64 q, u64 p,
                                  u64 m, u64 l, u64 a, bool require_gelfond) {
    ResidueSpec spec = ResidueSpec::make(q, p, a, m, l);
    if (require_gelfond && !spec.gelfond_condition)
        throw std::invalid_argument("gelfond_error_check: gcd(p, q-1) != 1");
    if (x_grid.empty()) throw std::invalid_argument("gelfond_error_check: empty grid");

    GelfondReport rep;
    rep.gelfond_condition = spec.gelfond_condition;
    i64 mp = (i64)(m * p);
    for (u64 x : x_grid) {
        GelfondRow row;
        row.x = x;
        row.count = count_digit_class(x, spec);
        row.main = Rat((i64)x, mp);
        row.error = Rat((i64)(row.count * m * p) - (i64)x, mp);
        rep.rows.push_back(row);
    }

    if (p == 2 && q == 2) {
        rep.regression_checked = true;
        rep.reference_exponent = std::log(3.0) / (2.0 * std::log(2.0));
        double e0 = std::fabs(rep.rows.front().error.to_double());
        rep.calibration_c = e0 / std::pow((double)x_grid.front(), rep.reference_exponent);
        for (std::size_t i = 1; i < rep.rows.size(); ++i) {
            double bound = rep.calibration_c *
                           std::pow((double)rep.rows[i].x, rep.reference_exponent);
            if (std::fabs(rep.rows[i].error.to_double()) > bound * (1.0 + 1e-9))
                rep.regression_ok = false;
        }
    }
    return rep;
}

std::vector<u64> default_grid(u64 xmax) {
    std::vector<u64> g;
    for (int j = 0;; ++j) {
        u64 x = (u64)std::llround(std::pow(10.0, 3.0 + 0.5 * j));
        if (x > xmax) break;
        if (g.empty() || x > g.back()) g.push_back(x);
    }
    return g;
}

}  // namespace gtau
