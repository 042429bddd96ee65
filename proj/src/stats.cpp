#include "gtd/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gtd {

double chi_square_survival(double stat, double dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_survival: dof must be positive");
    if (stat <= 0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

chi_square_result chi_square_test(const std::vector<double>& observed,
                                  const std::vector<double>& expected_probs, double total,
                                  double min_expected) {
    if (observed.size() != expected_probs.size()) {
        throw std::invalid_argument("chi_square_test: mismatched lengths");
    }
    double seen = 0, mass = 0;
    for (double o : observed) seen += o;
    for (double p : expected_probs) mass += p;
    if (seen > total + 1e-9 || mass > 1.0 + 1e-9) {
        throw std::invalid_argument("chi_square_test: counts exceed total or probabilities exceed 1");
    }
    double pool_obs = total - seen;          // implicit remainder cell
    double pool_exp = total * (1.0 - mass);
    chi_square_result r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = total * expected_probs[i];
        if (e < min_expected) {
            pool_obs += observed[i];
            pool_exp += e;
            continue;
        }
        r.stat += (observed[i] - e) * (observed[i] - e) / e;
        ++r.cells;
    }
    if (pool_exp >= min_expected) {
        r.stat += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
        ++r.cells;
    }
    r.dof = static_cast<double>(r.cells) - 1.0;
    r.p_value = r.dof >= 1.0 ? chi_square_survival(r.stat, r.dof) : 1.0;
    return r;
}

chi_square_result two_sample_chi_square(const std::vector<double>& a, const std::vector<double>& b,
                                        double min_expected) {
    if (a.size() != b.size()) throw std::invalid_argument("two_sample_chi_square: mismatched lengths");
    double na = 0, nb = 0;
    for (double v : a) na += v;
    for (double v : b) nb += v;
    if (na <= 0 || nb <= 0) throw std::invalid_argument("two_sample_chi_square: empty sample");
    double n = na + nb;
    // Pool columns whose smaller expected count is below the threshold.
    std::vector<double> ca, cb;
    double pa = 0, pb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double col = a[i] + b[i];
        double emin = std::min(na, nb) * col / n;
        if (emin < min_expected) {
            pa += a[i];
            pb += b[i];
        } else {
            ca.push_back(a[i]);
            cb.push_back(b[i]);
        }
    }
    if (pa + pb > 0 && std::min(na, nb) * (pa + pb) / n >= min_expected) {
        ca.push_back(pa);
        cb.push_back(pb);
    }
    chi_square_result r;
    r.cells = ca.size();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        double col = ca[i] + cb[i];
        double ea = na * col / n, eb = nb * col / n;
        r.stat += (ca[i] - ea) * (ca[i] - ea) / ea + (cb[i] - eb) * (cb[i] - eb) / eb;
    }
    r.dof = static_cast<double>(r.cells) - 1.0;
    r.p_value = r.dof >= 1.0 ? chi_square_survival(r.stat, r.dof) : 1.0;
    return r;
}

ks_result ks_exponential(std::vector<double> samples, double rate) {
    if (samples.empty() || rate <= 0) throw std::invalid_argument("ks_exponential: bad input");
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    ks_result r;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = 1.0 - std::exp(-rate * samples[i]);
        double lo = f - static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n - f;
        r.statistic = std::max({r.statistic, lo, hi});
    }
    r.critical_01 = 1.628 / std::sqrt(n);
    r.pass = r.statistic <= r.critical_01;
    return r;
}

}  // namespace gtd
