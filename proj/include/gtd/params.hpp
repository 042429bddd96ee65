#pragma once

#include <optional>
#include <string>

#include "gtd/rational.hpp"

namespace gtd {

// Parameter quadruple (z, z', w, w') stored through the symmetric functions
//   s_z = z + z',  p_z = z z',  s_w = w + w',  p_w = w w'.
// This keeps complex-conjugate pairs inside exact rational arithmetic: every
// rate and weight below is a polynomial in the symmetric functions.
struct param_quadruple {
    Rational s_z, p_z, s_w, p_w;

    bool operator==(const param_quadruple&) const = default;
};

// True iff k^2 + s*k + p > 0 for every integer k.  The parabola opens
// upwards, so the minimum over the integers sits at floor or ceil of the
// vertex -s/2; checking those two values is an exact criterion.
bool quadratic_positive_on_integers(const Rational& s, const Rational& p);

// Admissible parameters: both quadratics positive on the integers and
// s_z + s_w > -1 (so that level-N weights have enough moments).
bool check_admissible(const param_quadruple& q);

// Level-N shift of the z-side pair: u = z + N - 1, u' = z' + N - 1.
// Returned as symmetric functions of (u, u').  The w-side is unshifted.
struct level_pair {
    Rational s_u, p_u;
};
level_pair level_shift(const param_quadruple& q, long long n);

// s = -(u + u' + v + v') at level N; this constant controls the drift of all
// one-particle generators at that level.
Rational s_total(const param_quadruple& q, long long n);

// Degenerate series: z = k, z' = k + a, w = l, w' = l + b with integers
// k, l >= 0, k + l >= 1 and rationals a, b > -1.  Dynamics then live on
// signatures with parts in [-l, k].
struct truncated_spec {
    long long k = 0;
    long long l = 0;
    Rational a = 0;
    Rational b = 0;

    bool valid() const;
    param_quadruple params() const;

    // Support box for signature parts at every level.
    long long support_lo() const { return -l; }
    long long support_hi() const { return k; }
};

}  // namespace gtd
