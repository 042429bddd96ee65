#pragma once

#include <string>
#include <vector>

#include "gtd/signature.hpp"

namespace gtd {

// Boundary coordinates: two weakly decreasing nonnegative arrays per sign
// plus totals delta_{+/-}.  The slack gamma = delta - sum(alpha + beta) is
// the Poisson weight of the generating function.
struct omega_point {
    std::vector<double> alpha_plus, beta_plus;
    std::vector<double> alpha_minus, beta_minus;
    double delta_plus = 0, delta_minus = 0;

    double gamma_plus() const;
    double gamma_minus() const;
    bool valid(std::string* why = nullptr) const;
};

// Truncated Laurent expansion of the generating function Phi_omega on an
// integer window; mass outside the window and the series-truncation error
// are reported, never silently dropped.
struct laurent_window {
    long long n_min = 0, n_max = -1;
    std::vector<double> coeffs;  // coeffs[i] = phi_{n_min + i}
    double tail = 0;             // 1 - sum of reported coefficients
    double series_error = 0;     // l1 bound from factor truncation

    bool covers(long long n) const { return n >= n_min && n <= n_max; }
    double phi(long long n) const;
};

// Laurent coefficients of Phi_omega on [n_min, n_max].  Each elementary
// factor is a probability distribution on the integers (Bernoulli, geometric,
// Poisson, and their reflections); the coefficients are their convolution.
laurent_window phi_coeffs(const omega_point& w, long long n_min, long long n_max,
                          double tol = 1e-13);

// Boundary link: dim(s) * det[ phi_{s_i - i + j} ].  The window must cover
// every index the determinant reads; otherwise "window coverage failure".
double link_infinity(const laurent_window& win, const signature& s);
double link_infinity(const omega_point& w, const signature& s, double tol = 1e-13);

// The point with generating function u * Phi_omega(u): the leading minus
// Bernoulli weight flips to a plus Bernoulli weight 1 - beta_1^-; the slacks
// gamma_{+/-} are unchanged, so the deltas move by the transferred mass.
omega_point shift_omega(const omega_point& w);

// Frobenius coordinates of a partition: p_i = nu_i - i, q_i = nu'_i - i for
// i up to the number of diagonal boxes.
struct frobenius_coords {
    std::vector<long long> p, q;
    std::size_t d = 0;
};
frobenius_coords frobenius(const std::vector<long long>& partition);

// Plug-in boundary estimate from the top row of a triangular array: Frobenius
// coordinates of the positive/negative parts divided by the depth.  A pure
// estimator; no convergence claim.
omega_point path_end_estimate(const gt_scheme& scheme);

}  // namespace gtd
