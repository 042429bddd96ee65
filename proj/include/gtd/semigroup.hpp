#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gtd/measures.hpp"
#include "gtd/params.hpp"
#include "gtd/signature.hpp"

namespace gtd {

// Transition matrix of the one-particle chain restricted to an integer
// window.  Truncation drops outflow (substochastic), so entries are lower
// bounds on the true probabilities; the per-row defect 1 - rowsum is
// reported, never hidden.
struct window_matrix {
    long long lo = 0, hi = 0;
    double t = 0;
    Eigen::MatrixXd p;
    Eigen::VectorXd defect;
    double series_tail = 0;  // uniformization series remainder bound

    std::size_t index(long long x) const { return static_cast<std::size_t>(x - lo); }
    std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
};

window_matrix bd_semigroup(const param_quadruple& q, long long n, double t, long long lo,
                           long long hi, double tol);

// Jump-count-split evaluation of the minimal-solution partial sums: only
// trajectories with at most n_max jumps contribute.  Monotone nondecreasing
// in n_max and bounded above by bd_semigroup.
window_matrix minimal_series(const param_quadruple& q, long long n, double t, long long lo,
                             long long hi, int n_max);

// Transition matrix over an explicit set of signatures.
struct sig_matrix {
    std::vector<signature> states;
    double t = 0;
    Eigen::MatrixXd p;
    Eigen::VectorXd defect;
    double series_tail = 0;
    int clamped = 0;          // determinant round-off values clamped to 0
    bool negativity_error = false;  // determinant below -1e-10 observed

    std::size_t index(const signature& s) const;
};

// Karlin-McGregor assembly: P_N(t; a, b) = e^{-c_N t} (dim b / dim a)
// det[ P_1(t; l_i(a), l_j(b)) ], with P_1 supplied on a window covering all
// l-coordinates of the given states.
sig_matrix km_semigroup(const param_quadruple& q, double t, const std::vector<signature>& states,
                        long long window_lo, long long window_hi, double tol);

// Dense generator and exact (matrix-exponential) semigroup of the finite
// truncated chain on level n.
std::pair<std::vector<signature>, Eigen::MatrixXd> exact_truncated_generator(
    const truncated_spec& ts, std::size_t n);
sig_matrix exact_truncated_semigroup(const truncated_spec& ts, std::size_t n, double t);

// Link matrix between explicit state lists (rows: upper, columns: lower).
Eigen::MatrixXd link_matrix(const std::vector<signature>& upper,
                            const std::vector<signature>& lower);

struct intertwining_report {
    bool ok = false;
    bool conclusive = true;
    double residual = 0;
    double slack = 0;  // certified defect contribution to the residual
    std::string detail;
};

// ||P_{n+1}(t) L - L P_n(t)||_max on the truncated graph; exact matrices.
intertwining_report check_semigroup_intertwining_truncated(const truncated_spec& ts,
                                                           std::size_t n, double t, double tol);

// Same residual for admissible q on windows: levels n and n+1 built by
// Karlin-McGregor over signature boxes |l_i| <= state_box, one-particle
// window |x| <= p1_window; residual evaluated on rows with |l_i| <= inner.
intertwining_report check_semigroup_intertwining_generic(const param_quadruple& q, std::size_t n,
                                                         double t, long long state_box,
                                                         long long p1_window, long long inner,
                                                         double tol);

}  // namespace gtd
