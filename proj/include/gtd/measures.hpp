#pragma once

#include <random>
#include <string>
#include <vector>

#include "gtd/params.hpp"
#include "gtd/rates.hpp"
#include "gtd/signature.hpp"
#include "gtd/symbolic_checks.hpp"

namespace gtd {

// W(x+1)/W(x) for the level-n weight, exact:
//   ((N-1-x)^2 + s_z (N-1-x) + p_z) / ((x+1)^2 + s_w (x+1) + p_w)
Rational zw_weight_step(const param_quadruple& q, long long n, long long x);

// Relative level-n measure M'(lambda)/M'(lambda_ref) with lambda_ref the
// signature whose l-coordinates are (N-1, ..., 0); exact, zero outside the
// truncated support when q is degenerate.
Rational zw_relative_weight(const param_quadruple& q, const signature& lambda);

// Exact detailed balance M'(a) D(a,b) = M'(b) D(b,a) over all neighbor pairs
// with a in the box of signatures with |l_i| <= box (or parts within the
// truncated range -- pass the box accordingly).
check_report check_reversibility(const param_quadruple& q, std::size_t n, long long lo,
                                 long long hi);

// Exact column identity sum_a M'(a) D(a, nu) = 0 for every nu in the box
// (the column has finitely many nonzero entries).
check_report check_invariance(const param_quadruple& q, std::size_t n, long long lo,
                              long long hi);

// Exact consistency on the truncated graph: the level-(n+1) measure pushed
// through the link is proportional to the level-n measure.
check_report check_consistency_truncated(const truncated_spec& ts, std::size_t n);

struct consistency_report {
    bool conclusive = false;
    bool ok = false;
    double max_residual = 0.0;
    double certified_error = 0.0;
    std::string detail;
};

// Numeric consistency for admissible q: normalized level-n measure versus
// the level-(n+1) measure pushed through the link, on signatures with
// |l_i| <= box.  Normalizing constants come from windowed weight moments
// with a power-law tail certificate (Hankel-determinant identity).
consistency_report check_consistency_numeric(const param_quadruple& q, std::size_t n,
                                             long long box, double tol);

// Moments S_d = sum_x x^d W_n(x) over the far window |x| <= horizon, with a
// certified remainder bound from x^{-(sigma - 1/2)} domination (the ratio
// monotonicity is verified on the summed range).
struct moment_data {
    std::vector<double> s;     // S_0 .. S_dmax
    std::vector<double> tail;  // remainder bounds per degree
    bool domination_ok = false;
};
moment_data weight_moments(const param_quadruple& q, long long n, int dmax, long long horizon);

// Normalizing constant of the level-n measure (sum over all signatures of
// dim^2 prod W), via the Hankel determinant of weight moments.
double zw_normalizer(const param_quadruple& q, std::size_t n, long long horizon,
                     double* err_bound);

// Inverse-CDF sampler for the level-1 measure over an adaptive window
// capturing >= 1 - tail_eps of mass.
long long sample_zw_level1(const param_quadruple& q, std::mt19937_64& rng, double tail_eps);

// Metropolis chain on length-n signatures with single-coordinate +/-1
// proposals and exact acceptance ratios; stationary law is the level-n
// measure.  Returns `count` states after burn-in, thinned.
std::vector<signature> sample_zw_levelN_mcmc(const param_quadruple& q, std::size_t n,
                                             std::mt19937_64& rng, std::size_t burn_in,
                                             std::size_t thin, std::size_t count,
                                             const signature& init);

// Jacobi-type ensemble density on the ordered simplex 1 >= y_1 >= ... >= y_n >= 0:
//   density proportional to prod_{i<j} (y_i - y_j)^2 prod_i (1 - y_i)^a y_i^b,
// normalized by quadrature for n <= 2.
double jacobi_density(int n, double a, double b, const std::vector<double>& y);

// Moment check for n = 1: integrates the binomial link kernel against the
// density and compares with the truncated level-N measure on single-column
// signatures; orientation of (a, b) fixed by the exact N = 1 consistency
// computation.
check_report jacobi_moment_check(const Rational& a, const Rational& b, int n_level, double tol);

}  // namespace gtd
