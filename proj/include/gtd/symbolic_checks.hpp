#pragma once

#include <string>
#include <vector>

#include "gtd/params.hpp"
#include "gtd/polynomial.hpp"
#include "gtd/rates.hpp"
#include "gtd/signature.hpp"

namespace gtd {

struct check_report {
    bool ok = false;
    std::string detail;  // witness values on failure, summary on success
};

// Exact image of a univariate polynomial under the one-particle generator
//   (D f)(x) = right(x)(f(x+1) - f(x)) + left(x)(f(x-1) - f(x))
// at level n.
poly apply_D_symbolic(const param_quadruple& q, long long n, const poly& p);

// Same operator acting in variable i of a multivariate polynomial.
poly apply_D_symbolic_var(const param_quadruple& q, long long n, const poly& p, int i);

// (D_1 + ... + D_N) V_N == c_N V_N as polynomials; reports the extracted
// eigenvalue and compares it with d_constant.
check_report verify_vandermonde_eigen(const param_quadruple& q, int n);

// Row-wise generator intertwining at a length-(N+1) signature: the composite
// maps lambda -> (signatures of length N) built from the level-(N+1)
// generator followed by the link, and from the link followed by the level-N
// generator, agree exactly.
check_report verify_intertwining_rows(const param_quadruple& q, const signature& lambda);

// sum_{y=a}^{b-1} (y+c)^{falling m} == ((b+c)^{falling m+1} - (a+c)^{falling m+1})/(m+1)
check_report falling_factorial_sum_identity(long long a, long long b, const Rational& c, int m);

// Falling-factorial Schur-like polynomials: determinant of (x_i + c)^{falling
// (mu_j + N - j)} over the Vandermonde, normalized by the Pochhammer-type
// prefactor.  mu is a nonnegative signature of length N; F has N variables,
// G has N+1 (with mu extended by a trailing zero).
poly F_poly(const signature& mu, const Rational& c, int n);
poly G_poly(const signature& mu, const Rational& c, int n);

// Transfer through the link: sum_nu link(lambda,nu) F_{mu,c}(nu coords) equals
// G_{mu,c}(lambda coords).  lambda has length N+1, mu length N.
check_report check_link_transfer(const signature& lambda, const signature& mu, const Rational& c);

// Triangular action of the level-N generator on F_{mu,v}: the image equals
// eigen(mu) F_{mu,v} + sum_j coeff_j F_{mu-e_j,v} with the explicit
// coefficients; requires a rational root pair (v, v') of the w-quadratic.
check_report check_generator_triangular_action(const Rational& s_z, const Rational& p_z,
                                               const Rational& v, const Rational& v_prime,
                                               const signature& lambda, const signature& mu);

// Orthogonal-polynomial eigenrelation for the level-N one-particle chain.
// Exact mode: finite support {-l, ..., k+N-1} of the truncated series, exact
// Gram-Schmidt and pointwise equality D p_j = gamma_j p_j for j <= j_max.
check_report askey_lesky_exact(const truncated_spec& ts, int n, int j_max);

// Numeric mode: windowed moments with power-law tail domination, long-double
// Gram-Schmidt, residual check on |x| <= check_window.
check_report askey_lesky_numeric(const param_quadruple& q, int n, int j_max,
                                 long long moment_horizon, long long check_window, double tol);

}  // namespace gtd
