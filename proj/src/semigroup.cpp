#include "gtd/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gtd/rates.hpp"

namespace gtd {

namespace {

// log Poisson(n; mu) computed stably.
double log_poisson(double mu, long long n) {
    return -mu + static_cast<double>(n) * std::log(mu) - std::lgamma(static_cast<double>(n) + 1.0);
}

// Number of series terms needed so the Poisson tail beyond n_max is <= tol.
// Works from the mode with a geometric tail bound: for n >= mu the ratios
// p_{k+1}/p_k = mu/(k+1) are decreasing, so sum_{k>n} p_k <= p_n r/(1-r) with
// r = mu/(n+1).  Accumulating exp(-mu) directly would underflow for large mu.
long long poisson_terms(double mu, double tol) {
    if (mu <= 0) return 0;
    long long n = static_cast<long long>(mu);
    while (true) {
        ++n;
        double r = mu / (static_cast<double>(n) + 1.0);
        if (r < 1.0) {
            double tail = std::exp(log_poisson(mu, n)) * r / (1.0 - r);
            if (tail <= tol) return n;
        }
        if (n > static_cast<long long>(mu + 40.0 * std::sqrt(mu + 1.0) + 1e6)) {
            throw std::runtime_error("uniformization series failed to converge");
        }
    }
}

struct tridiag {
    // Rates of the one-particle chain on [lo, hi]; outflow at the edges is
    // dropped from the off-diagonals but kept in the total rate, so the
    // truncated generator is substochastic.
    std::vector<double> up, down, total;
};

tridiag window_rates(const param_quadruple& q, long long n, long long lo, long long hi) {
    tridiag r;
    std::size_t m = static_cast<std::size_t>(hi - lo + 1);
    r.up.assign(m, 0.0);
    r.down.assign(m, 0.0);
    r.total.assign(m, 0.0);
    for (long long x = lo; x <= hi; ++x) {
        std::size_t i = static_cast<std::size_t>(x - lo);
        double bu = to_double(right_rate(q, n, x));
        double bd = to_double(left_rate(q, n, x));
        if (bu < 0 || bd < 0) throw std::runtime_error("negative birth-death rate in window");
        r.total[i] = bu + bd;
        if (x < hi) r.up[i] = bu;
        if (x > lo) r.down[i] = bd;
    }
    return r;
}

}  // namespace

window_matrix bd_semigroup(const param_quadruple& q, long long n, double t, long long lo,
                           long long hi, double tol) {
    if (hi < lo) throw std::invalid_argument("bd_semigroup: empty window");
    window_matrix out;
    out.lo = lo;
    out.hi = hi;
    out.t = t;
    std::size_t m = static_cast<std::size_t>(hi - lo + 1);
    out.p = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    out.defect = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    if (t == 0) return out;
    if (t < 0) throw std::invalid_argument("bd_semigroup: negative time");

    tridiag r = window_rates(q, n, lo, hi);
    double lambda = 0;
    for (double v : r.total) lambda = std::max(lambda, v);
    if (lambda == 0) return out;

    double mu = lambda * t;
    long long n_max = poisson_terms(mu, tol / 2.0);
    out.series_tail = tol / 2.0;

    // M = I + Q/lambda is substochastic with nonnegative entries; iterate
    // V <- V M (tridiagonal right-multiply) and accumulate Poisson weights.
    Eigen::MatrixXd v = out.p;  // V = M^0
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(v.rows(), v.cols());
    Eigen::MatrixXd next(v.rows(), v.cols());
    std::vector<double> stay(m), up(m), down(m);
    for (std::size_t j = 0; j < m; ++j) {
        stay[j] = 1.0 - r.total[j] / lambda;
        up[j] = r.up[j] / lambda;
        down[j] = r.down[j] / lambda;
    }
    for (long long term = 0;; ++term) {
        double w = std::exp(log_poisson(mu, term));
        s += w * v;
        if (term == n_max) break;
        // next(i, j) = sum_k V(i, k) M(k, j): column j receives from columns
        // j (stay), j-1 (up move), j+1 (down move).
        for (std::size_t j = 0; j < m; ++j) {
            next.col(static_cast<Eigen::Index>(j)) = stay[j] * v.col(static_cast<Eigen::Index>(j));
            if (j > 0) next.col(static_cast<Eigen::Index>(j)) += up[j - 1] * v.col(static_cast<Eigen::Index>(j - 1));
            if (j + 1 < m) next.col(static_cast<Eigen::Index>(j)) += down[j + 1] * v.col(static_cast<Eigen::Index>(j + 1));
        }
        v.swap(next);
    }
    out.p = s;
    for (std::size_t i = 0; i < m; ++i) {
        out.defect(static_cast<Eigen::Index>(i)) = 1.0 - s.row(static_cast<Eigen::Index>(i)).sum();
    }
    return out;
}

window_matrix minimal_series(const param_quadruple& q, long long n, double t, long long lo,
                             long long hi, int n_max) {
    if (hi < lo) throw std::invalid_argument("minimal_series: empty window");
    if (n_max < 0) throw std::invalid_argument("minimal_series: negative jump bound");
    window_matrix out;
    out.lo = lo;
    out.hi = hi;
    out.t = t;
    std::size_t m = static_cast<std::size_t>(hi - lo + 1);
    Eigen::Index em = static_cast<Eigen::Index>(m);
    out.p = Eigen::MatrixXd::Zero(em, em);
    out.defect = Eigen::VectorXd::Zero(em);
    if (t < 0) throw std::invalid_argument("minimal_series: negative time");

    tridiag r = window_rates(q, n, lo, hi);
    double lambda = 0;
    for (double v : r.total) lambda = std::max(lambda, v);
    if (lambda == 0 || t == 0) {
        out.p = Eigen::MatrixXd::Identity(em, em);
        for (std::size_t i = 0; i < m; ++i) {
            out.defect(static_cast<Eigen::Index>(i)) = 0.0;
        }
        return out;
    }
    double mu = lambda * t;
    long long terms = poisson_terms(mu, 1e-14);
    out.series_tail = 1e-14;

    // Split M = D + J into its diagonal (no jump) and off-diagonal (one jump)
    // parts; u_r^{(k)} collects the weight of uniformized paths of length k
    // containing exactly r real jumps.  Then
    //   S_{n_max}(t) = sum_k Poisson(k; mu) sum_{r <= n_max} u_r^{(k)}.
    std::vector<double> stay(m), up(m), down(m);
    for (std::size_t j = 0; j < m; ++j) {
        stay[j] = 1.0 - r.total[j] / lambda;
        up[j] = r.up[j] / lambda;
        down[j] = r.down[j] / lambda;
    }
    std::size_t rmax = static_cast<std::size_t>(n_max);
    std::vector<Eigen::MatrixXd> u(rmax + 1, Eigen::MatrixXd::Zero(em, em));
    u[0] = Eigen::MatrixXd::Identity(em, em);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(em, em);
    Eigen::MatrixXd jd(em, em), jj(em, em);
    auto mul_diag = [&](const Eigen::MatrixXd& a, Eigen::MatrixXd& dst) {
        for (std::size_t j = 0; j < m; ++j) dst.col(static_cast<Eigen::Index>(j)) = stay[j] * a.col(static_cast<Eigen::Index>(j));
    };
    auto mul_jump = [&](const Eigen::MatrixXd& a, Eigen::MatrixXd& dst) {
        for (std::size_t j = 0; j < m; ++j) {
            dst.col(static_cast<Eigen::Index>(j)).setZero();
            if (j > 0) dst.col(static_cast<Eigen::Index>(j)) += up[j - 1] * a.col(static_cast<Eigen::Index>(j - 1));
            if (j + 1 < m) dst.col(static_cast<Eigen::Index>(j)) += down[j + 1] * a.col(static_cast<Eigen::Index>(j + 1));
        }
    };
    for (long long k = 0;; ++k) {
        double w = std::exp(log_poisson(mu, k));
        for (std::size_t rr = 0; rr <= std::min<std::size_t>(rmax, static_cast<std::size_t>(k)); ++rr) {
            s += w * u[rr];
        }
        if (k == terms) break;
        for (std::size_t rr = std::min<std::size_t>(rmax, static_cast<std::size_t>(k) + 1); rr-- > 0;) {
            mul_diag(u[rr + 1], jd);
            mul_jump(u[rr], jj);
            u[rr + 1] = jd + jj;
        }
        mul_diag(u[0], jd);
        u[0] = jd;
    }
    out.p = s;
    for (std::size_t i = 0; i < m; ++i) {
        out.defect(static_cast<Eigen::Index>(i)) = 1.0 - s.row(static_cast<Eigen::Index>(i)).sum();
    }
    return out;
}

std::size_t sig_matrix::index(const signature& s) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].parts == s.parts) return i;
    }
    throw std::out_of_range("sig_matrix: state not in list");
}

sig_matrix km_semigroup(const param_quadruple& q, double t, const std::vector<signature>& states,
                        long long window_lo, long long window_hi, double tol) {
    if (states.empty()) throw std::invalid_argument("km_semigroup: no states");
    std::size_t n = states[0].parts.size();
    for (const auto& s : states) {
        if (s.parts.size() != n || !s.valid()) {
            throw std::invalid_argument("km_semigroup: mixed or invalid states");
        }
        for (long long l : s.l_coords()) {
            if (l < window_lo || l > window_hi) {
                throw std::invalid_argument("km_semigroup: state outside one-particle window");
            }
        }
    }
    window_matrix p1 = bd_semigroup(q, static_cast<long long>(n), t, window_lo, window_hi, tol);

    sig_matrix out;
    out.states = states;
    out.t = t;
    std::size_t m = states.size();
    Eigen::Index em = static_cast<Eigen::Index>(m);
    out.p = Eigen::MatrixXd::Zero(em, em);
    out.defect = Eigen::VectorXd::Zero(em);
    out.series_tail = p1.series_tail;

    double cn = to_double(d_constant(q, n));
    double pref = std::exp(-cn * t);
    std::vector<Integer> dims(m);
    std::vector<std::vector<long long>> ls(m);
    for (std::size_t i = 0; i < m; ++i) {
        dims[i] = dim(states[i]);
        ls[i] = states[i].l_coords();
    }
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        p1.p(static_cast<Eigen::Index>(p1.index(ls[a][i])),
                             static_cast<Eigen::Index>(p1.index(ls[b][j])));
                }
            }
            double det = sub.determinant();
            double val = pref * to_double(Rational(dims[b]) / Rational(dims[a])) * det;
            if (val < 0) {
                if (val < -1e-10) {
                    out.negativity_error = true;
                } else {
                    ++out.clamped;
                    val = 0;
                }
            }
            out.p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = val;
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        out.defect(static_cast<Eigen::Index>(a)) = 1.0 - out.p.row(static_cast<Eigen::Index>(a)).sum();
    }
    return out;
}

std::pair<std::vector<signature>, Eigen::MatrixXd> exact_truncated_generator(
    const truncated_spec& ts, std::size_t n) {
    if (!ts.valid()) throw std::invalid_argument("exact_truncated_generator: bad spec");
    std::vector<signature> states = signatures_in_box(n, ts.support_lo(), ts.support_hi());
    param_quadruple q = ts.params();
    std::size_t m = states.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    std::map<std::vector<long long>, std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) idx[states[i].parts] = i;
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [to, rate] : multilevel_rates(q, states[i])) {
            auto it = idx.find(to.parts);
            // Rates out of the truncated support vanish identically, so every
            // nonzero target must be inside the box.
            if (it == idx.end()) throw std::runtime_error("truncated chain leaks outside support");
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(it->second)) = to_double(rate);
        }
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            to_double(multilevel_diagonal(q, states[i]));
    }
    return {std::move(states), std::move(g)};
}

sig_matrix exact_truncated_semigroup(const truncated_spec& ts, std::size_t n, double t) {
    auto [states, g] = exact_truncated_generator(ts, n);
    sig_matrix out;
    out.states = std::move(states);
    out.t = t;
    Eigen::MatrixXd gt = g * t;
    out.p = gt.exp();
    out.defect = Eigen::VectorXd::Zero(out.p.rows());
    for (Eigen::Index i = 0; i < out.p.rows(); ++i) out.defect(i) = 1.0 - out.p.row(i).sum();
    return out;
}

Eigen::MatrixXd link_matrix(const std::vector<signature>& upper,
                            const std::vector<signature>& lower) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(upper.size()),
                                              static_cast<Eigen::Index>(lower.size()));
    for (std::size_t i = 0; i < upper.size(); ++i) {
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (interlaces(lower[j], upper[i])) {
                l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    to_double(link(upper[i], lower[j]));
            }
        }
    }
    return l;
}

intertwining_report check_semigroup_intertwining_truncated(const truncated_spec& ts,
                                                           std::size_t n, double t, double tol) {
    sig_matrix up = exact_truncated_semigroup(ts, n + 1, t);
    sig_matrix low = exact_truncated_semigroup(ts, n, t);
    Eigen::MatrixXd l = link_matrix(up.states, low.states);
    Eigen::MatrixXd lhs = up.p * l;
    Eigen::MatrixXd rhs = l * low.p;
    intertwining_report rep;
    rep.residual = (lhs - rhs).cwiseAbs().maxCoeff();
    rep.slack = 0;
    rep.ok = rep.residual <= tol;
    rep.conclusive = true;
    if (!rep.ok) {
        rep.detail = "max residual " + std::to_string(rep.residual) + " exceeds " + std::to_string(tol);
    }
    return rep;
}

intertwining_report check_semigroup_intertwining_generic(const param_quadruple& q, std::size_t n,
                                                         double t, long long state_box,
                                                         long long p1_window, long long inner,
                                                         double tol) {
    // Signature boxes are expressed through l-coordinates: parts such that all
    // l_i lie in [-B, B] correspond to parts[i] in [-B - (N-1) + i, B + i]
    // (0-based); enumerate in a parts box and filter.
    auto box_states = [](std::size_t len, long long b) {
        std::vector<signature> all =
            signatures_in_box(len, -b - static_cast<long long>(len), b + static_cast<long long>(len));
        std::vector<signature> keep;
        for (auto& s : all) {
            bool in = true;
            for (long long l : s.l_coords()) {
                if (l < -b || l > b) in = false;
            }
            if (in) keep.push_back(s);
        }
        return keep;
    };
    std::vector<signature> up_states = box_states(n + 1, state_box);
    std::vector<signature> low_states = box_states(n, state_box);

    sig_matrix up = km_semigroup(q, t, up_states, -p1_window, p1_window, 1e-13);
    sig_matrix low = km_semigroup(q, t, low_states, -p1_window, p1_window, 1e-13);
    intertwining_report rep;
    if (up.negativity_error || low.negativity_error) {
        rep.ok = false;
        rep.conclusive = false;
        rep.detail = "determinant negativity below tolerance in Karlin-McGregor assembly";
        return rep;
    }
    Eigen::MatrixXd l = link_matrix(up.states, low.states);
    Eigen::MatrixXd lhs = up.p * l;
    Eigen::MatrixXd rhs = l * low.p;

    double worst = 0, worst_slack = 0;
    for (std::size_t a = 0; a < up.states.size(); ++a) {
        bool central = true;
        for (long long lc : up.states[a].l_coords()) {
            if (lc < -inner || lc > inner) central = false;
        }
        if (!central) continue;
        double row = (lhs.row(static_cast<Eigen::Index>(a)) - rhs.row(static_cast<Eigen::Index>(a)))
                         .cwiseAbs()
                         .maxCoeff();
        // Both sides under-count by at most the truncation defects of the
        // rows involved, so the defect is honest slack on the comparison.
        double slack = std::abs(up.defect(static_cast<Eigen::Index>(a)));
        double low_defect = 0;
        for (std::size_t b2 = 0; b2 < low.states.size(); ++b2) {
            if (l(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b2)) > 0) {
                low_defect = std::max(low_defect, std::abs(low.defect(static_cast<Eigen::Index>(b2))));
            }
        }
        slack += low_defect;
        worst = std::max(worst, row);
        worst_slack = std::max(worst_slack, slack);
    }
    rep.residual = worst;
    rep.slack = worst_slack;
    rep.ok = worst <= tol;
    rep.conclusive = worst_slack <= tol;
    if (!rep.ok) {
        rep.detail = "max inner-row residual " + std::to_string(worst) + " exceeds " +
                     std::to_string(tol) + " (defect slack " + std::to_string(worst_slack) + ")";
    }
    return rep;
}

}  // namespace gtd
