#pragma once

#include <map>
#include <string>
#include <vector>

#include "gtd/params.hpp"
#include "gtd/polynomial.hpp"
#include "gtd/rational.hpp"
#include "gtd/signature.hpp"

namespace gtd {

// Polynomial with Rational coefficients in the countable variable family
// phi_n, n in Z.  A monomial is the weakly increasing multiset of its
// variable indices, so structural equality is canonical.
class phi_poly {
  public:
    using monomial = std::vector<long long>;

    phi_poly() = default;

    static phi_poly constant(const Rational& c);
    static phi_poly variable(long long n);

    bool is_zero() const { return terms_.empty(); }
    const std::map<monomial, Rational>& terms() const { return terms_; }

    void add_term(monomial m, const Rational& c);

    phi_poly operator+(const phi_poly& o) const;
    phi_poly operator-(const phi_poly& o) const;
    phi_poly operator*(const phi_poly& o) const;
    phi_poly operator*(const Rational& c) const;
    phi_poly operator-() const;
    bool operator==(const phi_poly& o) const = default;

    // d/d phi_n
    phi_poly derivative(long long n) const;
    // phi_n -> phi_{n+m} on every variable
    phi_poly reindex(long long m) const;

    std::string str() const;

  private:
    std::map<monomial, Rational> terms_;
};

// Finite index window; the quotient sets phi_n = 0 outside it.
struct phi_window {
    long long lo = 0;
    long long hi = 0;
    bool contains(long long n) const { return lo <= n && n <= hi; }
};

// Drops every monomial containing an out-of-window index.
phi_poly window_quotient(const phi_poly& f, const phi_window& w);

// det[phi_{nu_i - i + j}]_{i,j=1..N} in the free ring.
phi_poly phi_det(const signature& nu);

// True when every determinant row of phi_det(nu) meets the window, i.e.
// nu_i in [lo + i - N, hi + i - 1]; outside this box the determinant is
// identically zero in the quotient.
bool in_window_box(const signature& nu, const phi_window& w);

// Straightening of the monomial phi_{n_1}...phi_{n_N} in the window
// quotient: the expansion sum_nu K(nu | n) phi_nu over box signatures.
// Implemented for N <= 2 (closed-form Kostka coefficients).
std::map<signature, Rational> kostka_expand(const std::vector<long long>& n, const phi_window& w);

// Straightens a polynomial whose monomials all have exactly `degree`
// factors; throws if a monomial has a different degree.
std::map<signature, Rational> straighten(const phi_poly& f, std::size_t degree,
                                         const phi_window& w);

// Coefficients of the formal generator, restricted to the window quotient:
// second-order A_{n1 n2} (requires n1 >= n2) and first-order B_n.
phi_poly coeff_A(long long n1, long long n2, const phi_window& w);
phi_poly coeff_B(const param_quadruple& q, long long n, const phi_window& w);

// Image of f under the formal second-order operator
//   sum_n A_{nn} d^2/dphi_n^2 + 2 sum_{n1>n2} A_{n1n2} d^2/dphi_{n1}dphi_{n2}
//   + sum_n B_n d/dphi_n
// computed in the window quotient.
phi_poly formal_generator_apply(const param_quadruple& q, const phi_poly& f, const phi_window& w);

// Image of phi_nu under the generator lifted from level N = nu.size():
//   sum_mu (dim mu / dim nu) * D(mu, nu) * phi_mu,
// where D is the level-N generator and mu runs over nu and its rate
// neighbors; reduced to the window quotient.
phi_poly lifted_generator_apply(const param_quadruple& q, const signature& nu,
                                const phi_window& w);

// Parameter shift matching the reindexing phi_n -> phi_{n+m}.
param_quadruple shift_params(const param_quadruple& q, long long m);

// Image of phi_r on the n-particle simplex: the coefficient of u^r in
// prod_i ((1 - y_i) + y_i u); zero unless 0 <= r <= n.
poly phi_on_simplex(int n, long long r);

// Algebra map sending a window polynomial over [-l, k] to a symmetric
// polynomial in n = k + l simplex coordinates (indices are first shifted by
// +l so the window becomes [0, n]).  Constants map to constants, so this
// realizes the quotient modulo sum_n phi_n = 1.
poly reduce_to_simplex(const phi_poly& f, long long k, long long l);

// --- Jacobi differential operator on symmetric polynomials ---------------

// Image of the symmetric polynomial f under the n-variable Jacobi operator,
// computed through the Vandermonde conjugation (exact division; throws if f
// is not symmetric enough for the division to be exact).
poly jacobi_operator_apply(int n, const Rational& a, const Rational& b, const poly& f);

// Same operator from the expanded form, with each singular first-order pair
// combined into an exactly divisible difference; cross-check for the above.
poly jacobi_operator_apply_direct(int n, const Rational& a, const Rational& b, const poly& f);

}  // namespace gtd
