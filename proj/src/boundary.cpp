#include "gtd/boundary.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gtd {

namespace {

bool weakly_decreasing_nonneg(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0) return false;
        if (i > 0 && v[i] > v[i - 1]) return false;
    }
    return true;
}

// Probability vector on a contiguous integer range [off, off + w.size()).
struct pmf {
    long long off = 0;
    std::vector<double> w{1.0};
};

pmf convolve(const pmf& a, const pmf& b) {
    pmf c;
    c.off = a.off + b.off;
    c.w.assign(a.w.size() + b.w.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.w.size(); ++i) {
        if (a.w[i] == 0) continue;
        for (std::size_t j = 0; j < b.w.size(); ++j) c.w[i + j] += a.w[i] * b.w[j];
    }
    return c;
}

pmf reflect(pmf p) {
    std::reverse(p.w.begin(), p.w.end());
    p.off = -(p.off + static_cast<long long>(p.w.size()) - 1);
    return p;
}

// (1 - beta) + beta u
pmf bernoulli_pmf(double beta) { return pmf{0, {1.0 - beta, beta}}; }

// 1 / (1 - alpha (u - 1)) = sum_k (1 - r) r^k u^k with r = alpha / (1 + alpha)
pmf geometric_pmf(double alpha, double slice_tol, double& tail) {
    if (alpha == 0) return pmf{};
    double r = alpha / (1.0 + alpha);
    pmf p;
    p.w.clear();
    double term = 1.0 - r;
    double remaining = r;  // tail mass after emitting terms 0..k is r^{k+1}
    while (remaining > slice_tol) {
        p.w.push_back(term);
        term *= r;
        remaining *= r;
        if (p.w.size() > 4000000) throw std::runtime_error("geometric factor failed to truncate");
    }
    p.w.push_back(term);
    tail += remaining;
    return p;
}

// e^{gamma (u - 1)}
pmf poisson_pmf(double gamma, double slice_tol, double& tail) {
    if (gamma == 0) return pmf{};
    pmf p;
    p.w.clear();
    double term = std::exp(-gamma);
    double cum = 0;
    long long k = 0;
    while (true) {
        p.w.push_back(term);
        cum += term;
        if (1.0 - cum <= slice_tol) break;
        ++k;
        term *= gamma / static_cast<double>(k);
        if (k > static_cast<long long>(gamma + 40.0 * std::sqrt(gamma + 1.0) + 1000.0)) {
            throw std::runtime_error("exponential factor failed to truncate");
        }
    }
    tail += 1.0 - cum;
    return p;
}

}  // namespace

double omega_point::gamma_plus() const {
    double s = delta_plus;
    for (double a : alpha_plus) s -= a;
    for (double b : beta_plus) s -= b;
    return s;
}

double omega_point::gamma_minus() const {
    double s = delta_minus;
    for (double a : alpha_minus) s -= a;
    for (double b : beta_minus) s -= b;
    return s;
}

bool omega_point::valid(std::string* why) const {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (!weakly_decreasing_nonneg(alpha_plus) || !weakly_decreasing_nonneg(alpha_minus)) {
        return fail("alpha arrays must be weakly decreasing and nonnegative");
    }
    if (!weakly_decreasing_nonneg(beta_plus) || !weakly_decreasing_nonneg(beta_minus)) {
        return fail("beta arrays must be weakly decreasing and nonnegative");
    }
    for (double b : beta_plus) {
        if (b > 1.0) return fail("beta coordinates must lie in [0, 1]");
    }
    for (double b : beta_minus) {
        if (b > 1.0) return fail("beta coordinates must lie in [0, 1]");
    }
    double b1p = beta_plus.empty() ? 0.0 : beta_plus[0];
    double b1m = beta_minus.empty() ? 0.0 : beta_minus[0];
    if (b1p + b1m > 1.0 + 1e-15) return fail("beta_1^+ + beta_1^- must be <= 1");
    if (gamma_plus() < -1e-15 || gamma_minus() < -1e-15) {
        return fail("delta must dominate the coordinate sums");
    }
    return true;
}

double laurent_window::phi(long long n) const {
    if (!covers(n)) return 0.0;
    return coeffs[static_cast<std::size_t>(n - n_min)];
}

laurent_window phi_coeffs(const omega_point& w, long long n_min, long long n_max, double tol) {
    std::string why;
    if (!w.valid(&why)) throw std::invalid_argument("phi_coeffs: invalid point: " + why);
    if (n_max < n_min) throw std::invalid_argument("phi_coeffs: empty window");

    std::size_t truncated_factors = 2 + w.alpha_plus.size() + w.alpha_minus.size();
    double slice_tol = tol / static_cast<double>(truncated_factors);

    double series_error = 0;
    pmf acc;  // delta at 0
    for (double b : w.beta_plus) acc = convolve(acc, bernoulli_pmf(b));
    for (double b : w.beta_minus) acc = convolve(acc, reflect(bernoulli_pmf(b)));
    for (double a : w.alpha_plus) acc = convolve(acc, geometric_pmf(a, slice_tol, series_error));
    for (double a : w.alpha_minus) {
        acc = convolve(acc, reflect(geometric_pmf(a, slice_tol, series_error)));
    }
    double gp = std::max(0.0, w.gamma_plus());
    double gm = std::max(0.0, w.gamma_minus());
    acc = convolve(acc, poisson_pmf(gp, slice_tol, series_error));
    acc = convolve(acc, reflect(poisson_pmf(gm, slice_tol, series_error)));

    laurent_window out;
    out.n_min = n_min;
    out.n_max = n_max;
    out.coeffs.assign(static_cast<std::size_t>(n_max - n_min + 1), 0.0);
    for (std::size_t i = 0; i < acc.w.size(); ++i) {
        long long n = acc.off + static_cast<long long>(i);
        if (n >= n_min && n <= n_max) out.coeffs[static_cast<std::size_t>(n - n_min)] = acc.w[i];
    }
    out.series_error = series_error;
    out.tail = 1.0 - std::accumulate(out.coeffs.begin(), out.coeffs.end(), 0.0);
    return out;
}

double link_infinity(const laurent_window& win, const signature& s) {
    if (!s.valid()) throw std::invalid_argument("link_infinity: invalid signature");
    std::size_t n = s.size();
    long long need_lo = s.parts[n - 1] - static_cast<long long>(n) + 1;
    long long need_hi = s.parts[0] - 1 + static_cast<long long>(n);
    if (!win.covers(need_lo) || !win.covers(need_hi)) {
        throw std::runtime_error("window coverage failure: need [" + std::to_string(need_lo) +
                                 ", " + std::to_string(need_hi) + "] inside [" +
                                 std::to_string(win.n_min) + ", " + std::to_string(win.n_max) + "]");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            long long idx = s.parts[i] - static_cast<long long>(i + 1) + static_cast<long long>(j + 1);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = win.phi(idx);
        }
    }
    return to_double(Rational(dim(s))) * m.determinant();
}

double link_infinity(const omega_point& w, const signature& s, double tol) {
    std::size_t n = s.size();
    long long lo = s.parts[n - 1] - static_cast<long long>(n) + 1;
    long long hi = s.parts[0] - 1 + static_cast<long long>(n);
    return link_infinity(phi_coeffs(w, lo, hi, tol), s);
}

omega_point shift_omega(const omega_point& w) {
    std::string why;
    if (!w.valid(&why)) throw std::invalid_argument("shift_omega: invalid point: " + why);
    omega_point out = w;
    double b1m = w.beta_minus.empty() ? 0.0 : w.beta_minus[0];
    out.beta_plus.insert(out.beta_plus.begin(), 1.0 - b1m);
    if (!out.beta_minus.empty()) out.beta_minus.erase(out.beta_minus.begin());
    out.delta_plus = w.delta_plus + 1.0 - b1m;
    out.delta_minus = w.delta_minus - b1m;
    return out;
}

frobenius_coords frobenius(const std::vector<long long>& partition) {
    std::vector<long long> nu;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (partition[i] < 0 || (i > 0 && partition[i] > partition[i - 1])) {
            throw std::invalid_argument("frobenius: not a partition");
        }
        if (partition[i] > 0) nu.push_back(partition[i]);
    }
    frobenius_coords out;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (nu[i] >= static_cast<long long>(i + 1)) ++out.d;
    }
    for (std::size_t i = 0; i < out.d; ++i) {
        out.p.push_back(nu[i] - static_cast<long long>(i + 1));
        long long col = 0;  // nu'_{i+1}
        for (long long part : nu) {
            if (part >= static_cast<long long>(i + 1)) ++col;
        }
        out.q.push_back(col - static_cast<long long>(i + 1));
    }
    return out;
}

omega_point path_end_estimate(const gt_scheme& scheme) {
    if (scheme.depth() < 2 || !scheme.valid()) {
        throw std::invalid_argument("path_end_estimate: need a valid array of depth >= 2");
    }
    const signature& top = scheme.top();
    double n = static_cast<double>(top.size());
    std::vector<long long> pos, neg;
    for (long long part : top.parts) {
        if (part > 0) pos.push_back(part);
    }
    for (auto it = top.parts.rbegin(); it != top.parts.rend(); ++it) {
        if (*it < 0) neg.push_back(-*it);
    }
    frobenius_coords fp = frobenius(pos);
    frobenius_coords fn = frobenius(neg);
    omega_point est;
    for (long long v : fp.p) est.alpha_plus.push_back(static_cast<double>(v) / n);
    for (long long v : fp.q) est.beta_plus.push_back(static_cast<double>(v) / n);
    for (long long v : fn.p) est.alpha_minus.push_back(static_cast<double>(v) / n);
    for (long long v : fn.q) est.beta_minus.push_back(static_cast<double>(v) / n);
    est.delta_plus = static_cast<double>(std::accumulate(pos.begin(), pos.end(), 0LL)) / n;
    est.delta_minus = static_cast<double>(std::accumulate(neg.begin(), neg.end(), 0LL)) / n;
    return est;
}

}  // namespace gtd
