#ifndef GTAU_ASYMPTOTICS_HPP
#define GTAU_ASYMPTOTICS_HPP

#include <optional>
#include <vector>

#include "gtau/common.hpp"
#include "gtau/rational.hpp"

namespace gtau {

// Parameter set for one restricted-mean-value experiment.
struct ExperimentSpec {
    unsigned k = 2;
    u64 q = 2;
    u64 p = 2;
    std::vector<u64> x_grid;            // strictly increasing
    std::vector<u64> a_values;          // empty = all residues 0..p-1

    void validate() const;
};

struct ErrorRow {
    u64 x = 0;
    u64 a = 0;
    u64 restricted_sum = 0;
    Rat main;                 // divisor_summatory(x,k) / p, exact
    Rat error;                // restricted_sum - main, exact
    double relative_error = 0;
};

struct FitResult {
    bool ok = false;
    double slope = 0;
    double r2 = 0;
    unsigned points_used = 0;
    unsigned points_dropped = 0;  // zero-error points removed before the fit
};

struct ErrorReport {
    std::vector<ErrorRow> rows;  // grid-major, residue-minor
    std::vector<double> max_abs_error;  // per grid x
    FitResult fit;               // ln|E| against ln x on per-x max errors
    double lambda_hat = 0;       // fit.slope when fit.ok
    double predicted_exponent = 0;
    bool gate = false;           // theta(q) < 1/k
    bool gelfond_condition = false;
};

// Exact restricted sums sum_{n<=x, S(n)=a mod p} tau_k(n) at several cut
// points from one streaming pass; result[xi][a].
std::vector<std::vector<u64>> restricted_tau_sums(const std::vector<u64>& x_grid,
                                                  unsigned k, u64 q, u64 p);

u64 restricted_tau_sum(u64 x, unsigned k, u64 q, u64 p, u64 a);

Rat main_term(u64 x, unsigned k, u64 p);

// Least-squares slope of ln|E| against ln x with r^2; zero errors dropped.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& x_abs_err);

bool theorem_gate(u64 q, unsigned k);

ErrorReport error_table(const ExperimentSpec& spec);

// Gelfond count study: exact T0(x) against the x/(mp) main term.
struct GelfondRow {
    u64 x = 0;
    u64 count = 0;
    Rat main;
    Rat error;
};

struct GelfondReport {
    std::vector<GelfondRow> rows;
    bool gelfond_condition = false;
    // p = q = 2 only: |error| <= C x^(ln3 / 2ln2) with C calibrated on the
    // first grid point and checked on the rest.
    bool regression_checked = false;
    bool regression_ok = true;
    double calibration_c = 0;
    double reference_exponent = 0;
};

GelfondReport gelfond_error_check(const std::vector<u64>& x_grid, u64 q, u64 p,
                                  u64 m, u64 l, u64 a, bool require_gelfond = true);

// Default experiment grid: round(10^(3 + j/2)), j = 0.., capped at xmax.
std::vector<u64> default_grid(u64 xmax);

}  // namespace gtau

#endif
