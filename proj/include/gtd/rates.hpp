#pragma once

#include <utility>
#include <vector>

#include "gtd/params.hpp"
#include "gtd/signature.hpp"

namespace gtd {

// One-particle birth/death rates on Z at level n:
//   right(x) = (x - u)(x - u') = x^2 - s_u x + p_u   with u = z + n - 1
//   left(x)  = (x + w)(x + w') = x^2 + s_w x + p_w
Rational right_rate(const param_quadruple& q, long long n, long long x);
Rational left_rate(const param_quadruple& q, long long n, long long x);

struct bd_transition {
    long long to;
    Rational rate;
};

// Nonzero off-diagonal row of the one-particle generator at x.
std::vector<bd_transition> bd_rates(const param_quadruple& q, long long n, long long x);

// c_n = sum_{j=0}^{n-1} (j(j-1) + s j) with s = s_total(q, n); this is the
// eigenvalue of the sum of n one-particle generators on the Vandermonde.
Rational d_constant(const param_quadruple& q, long long n);

// N-particle generator on length-n signatures (distinct l-coordinates):
// moving l_i -> l_i +/- 1 carries the one-particle rate times the ratio of
// Vandermonde factors; the ratio vanishes exactly when the move collides.
struct sig_transition {
    signature to;
    Rational rate;
};
Rational multilevel_rate(const param_quadruple& q, const signature& from, const signature& to);
std::vector<sig_transition> multilevel_rates(const param_quadruple& q, const signature& from);
// Same rate computed through the dimension-ratio form (cross-check path).
Rational multilevel_rate_dim_form(const param_quadruple& q, const signature& from,
                                  const signature& to);
// Closed form for the diagonal: -(sum_i right(l_i) + left(l_i)) - c_n.
Rational multilevel_diagonal(const param_quadruple& q, const signature& from);

// Conditioned chain on { s : base interlaces s }: each coordinate performs an
// independent walk in its interlacing interval with the *bare* one-particle
// rates at level n = |s| (the link ratios cancel inside the interval).
std::vector<sig_transition> fiber_rates(const param_quadruple& q, const signature& base,
                                        const signature& from);

// Natural scale and speed measure of the one-sided chain on {0, 1, 2, ...}
// with level-n rates (down-rate at 0 suppressed).  Log-space accumulation;
// slopes are least-squares fits of log x_k (resp. log x_k mu_k) against
// log k over the top decade.
struct natural_scale_data {
    std::vector<double> log_x;    // log x_k, k = 1..K (x_0 = 0 excluded)
    std::vector<double> log_xmu;  // log(x_k mu_k), k = 1..K
    double x_slope = 0.0;
    double xmu_slope = 0.0;
};
natural_scale_data natural_scale(const param_quadruple& q, long long n, std::size_t K);

}  // namespace gtd
