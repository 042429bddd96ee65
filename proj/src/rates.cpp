#include "gtd/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace gtd {

Rational right_rate(const param_quadruple& q, long long n, long long x) {
    level_pair u = level_shift(q, n);
    Rational xx(x);
    return xx * xx - u.s_u * xx + u.p_u;
}

Rational left_rate(const param_quadruple& q, long long n, long long x) {
    Rational xx(x);
    return xx * xx + q.s_w * xx + q.p_w;
}

std::vector<bd_transition> bd_rates(const param_quadruple& q, long long n, long long x) {
    std::vector<bd_transition> out;
    Rational r = right_rate(q, n, x);
    if (r != 0) out.push_back({x + 1, r});
    Rational l = left_rate(q, n, x);
    if (l != 0) out.push_back({x - 1, l});
    return out;
}

Rational d_constant(const param_quadruple& q, long long n) {
    Rational s = s_total(q, n);
    Rational acc = 0;
    for (long long j = 0; j < n; ++j) acc += Rational(j) * Rational(j - 1) + s * Rational(j);
    return acc;
}

namespace {

// Vandermonde ratio prod_{j != i} (l_i + step - l_j)/(l_i - l_j); zero when
// the moved coordinate lands on another one.
Rational vandermonde_ratio(const std::vector<long long>& l, std::size_t i, long long step) {
    Rational r = 1;
    for (std::size_t j = 0; j < l.size(); ++j) {
        if (j == i) continue;
        r *= Rational(l[i] + step - l[j]) / Rational(l[i] - l[j]);
    }
    return r;
}

}  // namespace

Rational multilevel_rate(const param_quadruple& q, const signature& from, const signature& to) {
    if (from.size() != to.size()) return Rational(0);
    auto lf = from.l_coords();
    auto lt = to.l_coords();
    std::size_t idx = lf.size();
    long long step = 0;
    for (std::size_t i = 0; i < lf.size(); ++i) {
        if (lf[i] == lt[i]) continue;
        if (idx != lf.size()) return Rational(0);  // more than one coordinate moved
        idx = i;
        step = lt[i] - lf[i];
    }
    if (idx == lf.size() || (step != 1 && step != -1)) return Rational(0);
    long long n = static_cast<long long>(from.size());
    Rational bare = (step == 1) ? right_rate(q, n, lf[idx]) : left_rate(q, n, lf[idx]);
    return bare * vandermonde_ratio(lf, idx, step);
}

std::vector<sig_transition> multilevel_rates(const param_quadruple& q, const signature& from) {
    std::vector<sig_transition> out;
    long long n = static_cast<long long>(from.size());
    auto l = from.l_coords();
    for (std::size_t i = 0; i < from.size(); ++i) {
        for (long long step : {1LL, -1LL}) {
            Rational bare =
                (step == 1) ? right_rate(q, n, l[i]) : left_rate(q, n, l[i]);
            if (bare == 0) continue;
            Rational ratio = vandermonde_ratio(l, i, step);
            if (ratio == 0) continue;
            signature to = from;
            to.parts[i] += step;
            out.push_back({std::move(to), bare * ratio});
        }
    }
    return out;
}

Rational multilevel_rate_dim_form(const param_quadruple& q, const signature& from,
                                  const signature& to) {
    if (from.size() != to.size()) return Rational(0);
    auto lf = from.l_coords();
    auto lt = to.l_coords();
    std::size_t idx = lf.size();
    long long step = 0;
    for (std::size_t i = 0; i < lf.size(); ++i) {
        if (lf[i] == lt[i]) continue;
        if (idx != lf.size()) return Rational(0);
        idx = i;
        step = lt[i] - lf[i];
    }
    if (idx == lf.size() || (step != 1 && step != -1)) return Rational(0);
    if (!to.valid()) return Rational(0);
    // strictly-decreasing l-coordinates required on both sides
    for (std::size_t i = 0; i + 1 < lt.size(); ++i)
        if (lt[i] <= lt[i + 1]) return Rational(0);
    long long n = static_cast<long long>(from.size());
    Rational bare = (step == 1) ? right_rate(q, n, lf[idx]) : left_rate(q, n, lf[idx]);
    return Rational(dim(to)) / Rational(dim(from)) * bare;
}

Rational multilevel_diagonal(const param_quadruple& q, const signature& from) {
    long long n = static_cast<long long>(from.size());
    Rational acc = 0;
    for (long long x : from.l_coords()) acc += right_rate(q, n, x) + left_rate(q, n, x);
    return -acc - d_constant(q, n);
}

std::vector<sig_transition> fiber_rates(const param_quadruple& q, const signature& base,
                                        const signature& from) {
    std::vector<sig_transition> out;
    if (!interlaces(base, from)) return out;
    long long n = static_cast<long long>(from.size());
    auto l = from.l_coords();
    for (std::size_t i = 0; i < from.size(); ++i) {
        // coordinate i is confined to [base_i, base_{i-1}] (in part values);
        // interior moves carry the bare level-n rates.
        for (long long step : {1LL, -1LL}) {
            signature to = from;
            to.parts[i] += step;
            if (!interlaces(base, to)) continue;
            Rational bare = (step == 1) ? right_rate(q, n, l[i]) : left_rate(q, n, l[i]);
            if (bare == 0) continue;
            out.push_back({std::move(to), bare});
        }
    }
    return out;
}

natural_scale_data natural_scale(const param_quadruple& q, long long n, std::size_t K) {
    natural_scale_data out;
    out.log_x.reserve(K);
    out.log_xmu.reserve(K);
    // log-space recursions:
    //   term_0 = 1/beta_0,  term_l = term_{l-1} * delta_l / beta_l
    //   x_k = sum_{l<k} term_l,  mu_k = mu_{k-1} * beta_{k-1} / delta_k
    double log_term = -std::log(to_double(right_rate(q, n, 0)));
    double x = 0.0;       // x_k accumulated directly (values stay moderate)
    double log_mu = 0.0;  // mu_0 = 1
    for (std::size_t k = 1; k <= K; ++k) {
        x += std::exp(log_term);
        double beta_k = to_double(right_rate(q, n, static_cast<long long>(k)));
        double delta_k = to_double(left_rate(q, n, static_cast<long long>(k)));
        log_mu += std::log(to_double(right_rate(q, n, static_cast<long long>(k) - 1))) -
                  std::log(delta_k);
        out.log_x.push_back(std::log(x));
        out.log_xmu.push_back(std::log(x) + log_mu);
        log_term += std::log(delta_k) - std::log(beta_k);
    }
    auto fit = [&](const std::vector<double>& ys) {
        // least squares of ys[k-1] against log k over k in [K/10, K]
        std::size_t k0 = std::max<std::size_t>(2, K / 10);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double m = 0;
        for (std::size_t k = k0; k <= K; ++k) {
            double lx = std::log(static_cast<double>(k));
            double ly = ys[k - 1];
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            m += 1;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    out.x_slope = fit(out.log_x);
    out.xmu_slope = fit(out.log_xmu);
    return out;
}

}  // namespace gtd
