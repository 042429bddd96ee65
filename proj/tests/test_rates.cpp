#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtd/params.hpp"
#include "gtd/rates.hpp"
#include "gtd/signature.hpp"

namespace {

using gtd::Rational;
using gtd::signature;

signature sig(std::initializer_list<long long> parts) {
    return signature(std::vector<long long>(parts));
}

const gtd::param_quadruple q1{1, Rational(1, 4), 1, Rational(1, 4)};
const gtd::param_quadruple q2{0, 1, 0, 1};  // complex-conjugate pair

}  // namespace

TEST_CASE("one-particle rates are the level-shifted quadratics") {
    // level 1: right(x) = x^2 - x + 1/4, left(x) = x^2 + x + 1/4
    CHECK(gtd::right_rate(q1, 1, 0) == Rational(1, 4));
    CHECK(gtd::right_rate(q1, 1, 1) == Rational(1, 4));
    CHECK(gtd::left_rate(q1, 1, 0) == Rational(1, 4));
    CHECK(gtd::left_rate(q1, 1, 1) == Rational(9, 4));
    CHECK(gtd::left_rate(q1, 1, -1) == Rational(1, 4));
    // level 2: right(x) = x^2 - 3x + 9/4
    CHECK(gtd::right_rate(q1, 2, 0) == Rational(9, 4));
    CHECK(gtd::right_rate(q1, 2, 1) == Rational(1, 4));
    CHECK(gtd::right_rate(q1, 2, 2) == Rational(1, 4));
    // left is level independent
    CHECK(gtd::left_rate(q1, 2, 1) == gtd::left_rate(q1, 1, 1));

    // all rates strictly positive for admissible parameters
    for (long long x = -10; x <= 10; ++x) {
        CHECK(gtd::right_rate(q2, 3, x) > 0);
        CHECK(gtd::left_rate(q2, 3, x) > 0);
    }
}

TEST_CASE("birth-death row collects both moves") {
    auto row = gtd::bd_rates(q1, 1, 0);
    REQUIRE(row.size() == 2);
    bool saw_up = false, saw_down = false;
    for (const auto& tr : row) {
        if (tr.to == 1) {
            saw_up = true;
            CHECK(tr.rate == Rational(1, 4));
        }
        if (tr.to == -1) {
            saw_down = true;
            CHECK(tr.rate == Rational(1, 4));
        }
    }
    CHECK(saw_up);
    CHECK(saw_down);

    // truncated parameters kill the outward rates at the support edge
    gtd::truncated_spec ts{1, 0, 0, 0};
    auto qt = ts.params();
    auto edge = gtd::bd_rates(qt, 1, 1);
    for (const auto& tr : edge) CHECK(tr.to == 0);  // right(1) = 0 at level 1
}

TEST_CASE("Vandermonde drift constant") {
    // c_n = sum_{j<n} (j(j-1) + s j), s = s_total
    CHECK(gtd::d_constant(q1, 1) == 0);
    CHECK(gtd::d_constant(q1, 2) == -4);
    CHECK(gtd::d_constant(q1, 3) == -16);
    CHECK(gtd::d_constant(q2, 2) == gtd::s_total(q2, 2));
}

TEST_CASE("multilevel rates on the smallest truncated graph") {
    gtd::truncated_spec ts{1, 0, 0, 0};
    auto q = ts.params();
    // level 2, lambda = (1,0): both neighbor rates equal 2
    CHECK(gtd::multilevel_rate(q, sig({1, 0}), sig({0, 0})) == 2);
    CHECK(gtd::multilevel_rate(q, sig({1, 0}), sig({1, 1})) == 2);
    // moves leaving the support carry rate zero
    CHECK(gtd::multilevel_rate(q, sig({1, 0}), sig({2, 0})) == 0);
    CHECK(gtd::multilevel_rate(q, sig({1, 0}), sig({1, -1})) == 0);
    // corners: bare rate 1 scaled by the dimension ratio dim(1,0)/dim = 2
    CHECK(gtd::multilevel_rate(q, sig({0, 0}), sig({1, 0})) == 2);
    CHECK(gtd::multilevel_rate(q, sig({1, 1}), sig({1, 0})) == 2);
    // colliding move has rate zero through the Vandermonde ratio
    CHECK(gtd::multilevel_rate(q, sig({1, 0}), sig({1, 1})) ==
          gtd::multilevel_rate_dim_form(q, sig({1, 0}), sig({1, 1})));
}

TEST_CASE("multilevel rate agrees with the dimension-ratio form") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long long> part(-4, 4);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<long long> parts(3);
        for (auto& p : parts) p = part(rng);
        std::sort(parts.begin(), parts.end(), std::greater<>());
        signature from(parts);
        for (const auto& tr : gtd::multilevel_rates(q1, from)) {
            CHECK(tr.rate == gtd::multilevel_rate_dim_form(q1, from, tr.to));
            CHECK(tr.rate > 0);
        }
    }
}

TEST_CASE("diagonal closed form balances the off-diagonal row") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<long long> part(-3, 3);
    for (const auto& q : {q1, q2}) {
        for (int trial = 0; trial < 15; ++trial) {
            std::vector<long long> parts(3);
            for (auto& p : parts) p = part(rng);
            std::sort(parts.begin(), parts.end(), std::greater<>());
            signature from(parts);
            Rational total = 0;
            for (const auto& tr : gtd::multilevel_rates(q, from)) total += tr.rate;
            CHECK(total == -gtd::multilevel_diagonal(q, from));
        }
    }
}

TEST_CASE("fiber walk uses bare rates inside the interlacing interval") {
    // base (0): upper signatures (s1, s2) with s1 >= 0 >= s2
    signature base = sig({0});
    auto row = gtd::fiber_rates(q1, base, sig({0, 0}));
    REQUIRE(row.size() == 2);
    for (const auto& tr : row) {
        if (tr.to == sig({1, 0})) CHECK(tr.rate == gtd::right_rate(q1, 2, 1));
        if (tr.to == sig({0, -1})) CHECK(tr.rate == gtd::left_rate(q1, 2, 0));
    }
    // moves breaking interlacing with the base are absent
    for (const auto& tr : gtd::fiber_rates(q1, base, sig({2, 0}))) {
        CHECK(gtd::interlaces(base, tr.to));
    }
}

TEST_CASE("natural scale exponents match the parameter sum") {
    // slope of log x_k is s_z + s_w + 1; slope of log(x_k mu_k) is -1
    auto ns1 = gtd::natural_scale(q1, 1, 10000);
    CHECK(std::fabs(ns1.x_slope - 3.0) < 0.1);
    CHECK(std::fabs(ns1.xmu_slope + 1.0) < 0.1);
    gtd::param_quadruple q3{3, Rational(9, 4), 3, Rational(9, 4)};
    auto ns3 = gtd::natural_scale(q3, 1, 10000);
    CHECK(std::fabs(ns3.x_slope - 7.0) < 0.1);
    CHECK(std::fabs(ns3.xmu_slope + 1.0) < 0.1);
}
