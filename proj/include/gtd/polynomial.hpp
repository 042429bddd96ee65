#pragma once

#include <map>
#include <vector>

#include "gtd/rational.hpp"

namespace gtd {

// Sparse multivariate polynomial over Rational with a fixed number of
// variables.  Monomials are exponent vectors; the map keeps a canonical
// term order so equality is structural.
class poly {
  public:
    using key = std::vector<int>;

    explicit poly(int arity = 0) : arity_(arity) {}

    static poly constant(int arity, const Rational& c);
    static poly variable(int arity, int i);

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<key, Rational>& terms() const { return terms_; }
    int degree() const;  // total degree, -1 for the zero polynomial

    void add_term(const key& k, const Rational& c);

    poly operator+(const poly& o) const;
    poly operator-(const poly& o) const;
    poly operator*(const poly& o) const;
    poly operator*(const Rational& c) const;
    poly operator-() const;
    bool operator==(const poly& o) const = default;

    // substitute x_i -> x_i + delta
    poly shift_var(int i, const Rational& delta) const;
    // partial derivative in x_i
    poly derivative(int i) const;
    Rational eval(const std::vector<Rational>& point) const;
    // coefficient extraction with respect to x_i: result[d] has x_i removed
    std::vector<poly> coeffs_in(int i) const;

    std::string str() const;  // for diagnostics

  private:
    int arity_;
    std::map<key, Rational> terms_;
};

// (x_var + c)(x_var + c - 1)...(x_var + c - m + 1); m >= 0.
poly falling_factorial(int arity, int var, const Rational& c, int m);

// prod_{i<j} (x_i - x_j)
poly vandermonde(int n);

// Exact division of f by (x_i - x_j); throws if the division leaves a
// remainder.  Synthetic division in x_i with poly coefficients.
poly divide_linear_diff(const poly& f, int i, int j);

// Determinant by permutation expansion (fine for the small orders used here).
poly det_poly(const std::vector<std::vector<poly>>& m);

}  // namespace gtd
