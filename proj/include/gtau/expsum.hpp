#ifndef GTAU_EXPSUM_HPP
#define GTAU_EXPSUM_HPP

#include <complex>
#include <vector>

#include "gtau/common.hpp"

namespace gtau {

// Parameters of S_Q(alpha, z) = sum_{n < q^Q} e(alpha n + (z/p) S(n)),
// with e(x) = exp(2 pi i x) and S(n) the base-q digit sum.
struct ExpSumParams {
    int Q = 1;
    u64 q = 2;
    u64 p = 2;
    i64 z = 1;
    double alpha = 0.0;

    u64 z_mod_p() const;
    // gcd(z, p) = 1, gcd(p, q-1) = 1, z not divisible by p.
    bool gelfond_regime() const;
    void validate() const;
};

// alpha = num/den, taken mod 1. Phases alpha * q^l are then computed in
// exact residue arithmetic, so factor evaluation does not degrade with Q.
struct RationalAngle {
    u64 num = 0;
    u64 den = 1;
};

// Direct summation over n < q^Q (oracle scale, capped at 1e7 terms).
std::complex<double> expsum_direct(const ExpSumParams& P);

// Product over digit positions of the closed-form geometric factor.
// Integer points of alpha q^l + z/p give the factor q exactly; the float
// path detects them within 1e-12, the rational path exactly.
std::complex<double> expsum_product(const ExpSumParams& P);
std::complex<double> expsum_product(int Q, u64 q, u64 p, i64 z, RationalAngle alpha);

// theta(q) = ln(6 (1 + ln q)) / ln q.
double theta(u64 q);

struct NormScanResult {
    double sup_abs = 0;
    double argmax_alpha = 0;
    double lambda_hat = 0;  // ln(sup_abs) / (Q ln q)
    u64 grid_size = 0;
};

// Grid scan of |S_Q(alpha, z)| over [0,1) plus golden-section refinement
// around the grid argmax. The grid is forced odd and offset off the dyadic
// lattice: a 2^k uniform grid consists entirely of zeros of the product
// once Q > k (every dyadic point kills some factor for q = 2), so a naive
// power-of-two grid scans nothing. Result is a certified lower bound on
// the true sup, never an upper bound.
NormScanResult sup_norm_scan(int Q, u64 q, u64 p, i64 z, u64 grid_size,
                             bool require_gelfond = true);

struct L1Result {
    double integral = 0;
    double error_bound = 0;  // |integral - truth| <= error_bound
    double theta_bound = 0;  // q^(Q theta(q))
    u64 panels = 0;
};

// Integral of |S_Q(alpha, z)| over [0,1). Small q^Q: oscillation-resolving
// adaptive Simpson with exact dyadic-rational phases. Large q^Q: the
// substitution alpha = (x+j)/q peels one geometric factor per step, so the
// integral equals the integral of a Q-fold kernel iterate; that iterate is
// propagated as per-cell interval bounds, giving a two-sided enclosure
// without resolving the ~q^Q zeros pointwise. Throws NonConvergenceError
// if tol cannot be certified within the work budget.
enum class L1Method { automatic, simpson, kernel };
L1Result l1_norm(int Q, u64 q, u64 p, i64 z, double tol,
                 L1Method method = L1Method::automatic);

struct KernelBound {
    double lhs = 0;
    double rhs = 0;
};

// lhs = (1/q) sum_j min(q, 1/(2 ||(x+j)/q + z/p||)), rhs = 6 (1 + ln q).
KernelBound kernel_sum_bound_check(double x, u64 q, u64 p, i64 z);

// Uniformly sampled complex function and derivative on [t0, t1].
struct SampledCurve {
    double t0 = 0;
    double t1 = 1;
    std::vector<std::complex<double>> f;
    std::vector<std::complex<double>> df;
};

struct GallagherResult {
    double lhs = 0;
    double rhs = 0;
    double slack = 0;  // rhs - lhs
};

// Large-sieve inequality check: sum over a delta-separated point set
// against (1/delta) * int |f| + int |f'| (trapezoid). Rejects point sets
// that violate the spacing or containment preconditions.
GallagherResult gallagher_check(const SampledCurve& curve, double delta,
                                const std::vector<double>& points);

}  // namespace gtau

#endif
