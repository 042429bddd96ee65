#pragma once

#include <cstddef>
#include <vector>

namespace gtd {

// Survival function of the chi-square distribution with `dof` degrees of
// freedom evaluated at `stat`.
double chi_square_survival(double stat, double dof);

struct chi_square_result {
    double stat = 0;
    double dof = 0;
    double p_value = 1;
    std::size_t cells = 0;  // cells actually used after pooling
};

// Goodness-of-fit test: observed counts against expected cell probabilities
// (same length).  Mass and observations not covered by the listed cells form
// an implicit remainder cell; cells with expected count below min_expected
// are pooled into it.
chi_square_result chi_square_test(const std::vector<double>& observed,
                                  const std::vector<double>& expected_probs, double total,
                                  double min_expected = 5.0);

// Homogeneity test for two categorical samples given as aligned count
// vectors; columns with small expected counts are pooled.
chi_square_result two_sample_chi_square(const std::vector<double>& a, const std::vector<double>& b,
                                        double min_expected = 5.0);

struct ks_result {
    double statistic = 0;
    double critical_01 = 0;  // asymptotic 1% critical value 1.628 / sqrt(n)
    bool pass = false;
};

// One-sample Kolmogorov-Smirnov test against Exp(rate) with known rate.
ks_result ks_exponential(std::vector<double> samples, double rate);

}  // namespace gtd
