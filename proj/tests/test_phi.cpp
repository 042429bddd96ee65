#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "gtd/params.hpp"
#include "gtd/phi_algebra.hpp"
#include "gtd/polynomial.hpp"
#include "gtd/signature.hpp"

namespace {

using gtd::phi_poly;
using gtd::phi_window;
using gtd::poly;
using gtd::Rational;
using gtd::signature;

signature sig(std::initializer_list<long long> parts) {
    return signature(std::vector<long long>(parts));
}

phi_poly phi(long long n) { return phi_poly::variable(n); }

}  // namespace

TEST_CASE("free algebra arithmetic") {
    phi_poly f = phi(0) * phi(1) + phi(1) * phi(0);
    phi_poly g = phi(0) * phi(1) * Rational(2);
    CHECK(f == g);
    CHECK((f - g).is_zero());
    CHECK(f.derivative(0) == phi(1) * Rational(2));
    CHECK(f.derivative(2).is_zero());
    // product-rule on a square
    phi_poly sq = phi(3) * phi(3);
    CHECK(sq.derivative(3) == phi(3) * Rational(2));
    CHECK(f.reindex(2) == phi(2) * phi(3) * Rational(2));
}

TEST_CASE("window quotient kills out-of-window factors") {
    phi_window w{0, 2};
    phi_poly f = phi(1) * phi(3) + phi(0) + phi(-1) * Rational(5);
    CHECK(gtd::window_quotient(f, w) == phi(0));
}

TEST_CASE("determinant expansion of a two-row pattern") {
    // phi_(a,b) = phi_a phi_b - phi_{a+1} phi_{b-1}
    phi_poly d = gtd::phi_det(sig({2, 1}));
    CHECK(d == phi(2) * phi(1) - phi(3) * phi(0));
    CHECK(gtd::phi_det(sig({0})) == phi(0));
}

TEST_CASE("window box membership matches quotient vanishing") {
    phi_window w{0, 2};
    for (const auto& nu : gtd::signatures_in_box(2, -2, 4)) {
        bool in_box = gtd::in_window_box(nu, w);
        bool nonzero = !gtd::window_quotient(gtd::phi_det(nu), w).is_zero();
        CHECK(in_box == nonzero);
    }
}

TEST_CASE("straightening telescopes in a window") {
    phi_window w{-1, 4};
    auto k = gtd::kostka_expand({1, 1}, w);
    REQUIRE(k.size() == 3);
    CHECK(k.at(sig({1, 1})) == 1);
    CHECK(k.at(sig({2, 0})) == 1);
    CHECK(k.at(sig({3, -1})) == 1);

    auto k2 = gtd::kostka_expand({0, 1}, phi_window{0, 1});
    REQUIRE(k2.size() == 1);
    CHECK(k2.at(sig({1, 0})) == 1);
    CHECK(gtd::kostka_expand({1, 0}, phi_window{0, 1}) == k2);

    // the straightened expansion reassembles the monomial modulo the quotient
    phi_poly recomposed;
    for (const auto& [nu, c] : k) {
        recomposed = recomposed + gtd::window_quotient(gtd::phi_det(nu), w) * c;
    }
    CHECK(recomposed == gtd::window_quotient(phi(1) * phi(1), w));
}

TEST_CASE("second-order coefficients in the smallest window") {
    phi_window w{0, 1};
    CHECK(gtd::coeff_A(0, 0, w) == phi(0) * phi(1));
    CHECK(gtd::coeff_A(1, 1, w) == phi(0) * phi(1));
    CHECK(gtd::coeff_A(1, 0, w) == -(phi(0) * phi(1)));
}

TEST_CASE("first-order coefficients and conservation") {
    gtd::truncated_spec ts{1, 0, 0, 0};
    auto q = ts.params();
    phi_window w{0, 1};
    CHECK(gtd::coeff_B(q, 0, w) == phi(1) - phi(0));
    CHECK(gtd::coeff_B(q, 1, w) == phi(0) - phi(1));
    // the operator annihilates the relation sum phi_n = const
    CHECK(gtd::formal_generator_apply(q, phi(0) + phi(1), w).is_zero());

    gtd::truncated_spec wide{2, 1, Rational(1, 2), Rational(1, 3)};
    phi_window w2{-1, 2};
    phi_poly total;
    for (long long n = -1; n <= 2; ++n) total = total + phi(n);
    CHECK(gtd::formal_generator_apply(wide.params(), total, w2).is_zero());
}

TEST_CASE("formal generator equals the lifted generator on determinants") {
    gtd::truncated_spec ts{1, 0, 0, 0};
    auto q = ts.params();
    phi_window w{0, 1};
    CHECK(gtd::formal_generator_apply(q, phi(0), w) == -phi(0) + phi(1));
    CHECK(gtd::lifted_generator_apply(q, sig({0}), w) == -phi(0) + phi(1));

    for (const auto& tsx :
         {gtd::truncated_spec{1, 0, 0, 0}, gtd::truncated_spec{1, 1, 0, 0},
          gtd::truncated_spec{2, 0, 0, 0},
          gtd::truncated_spec{1, 1, Rational(1, 2), Rational(1, 3)}}) {
        auto qx = tsx.params();
        phi_window wx{tsx.support_lo(), tsx.support_hi()};
        for (std::size_t n = 1; n <= 2; ++n) {
            for (const auto& nu : gtd::signatures_in_box(n, wx.lo, wx.hi)) {
                phi_poly lhs = gtd::formal_generator_apply(qx, gtd::phi_det(nu), wx);
                phi_poly rhs = gtd::lifted_generator_apply(qx, nu, wx);
                CHECK_MESSAGE(lhs == rhs, "window image mismatch");
                CHECK(gtd::straighten(lhs, n, wx) == gtd::straighten(rhs, n, wx));
            }
        }
    }
}

TEST_CASE("reindexing intertwines the generator with the parameter shift") {
    gtd::truncated_spec ts{1, 1, 0, 0};
    auto q = ts.params();
    phi_window w{-1, 1};
    for (long long m : {-1LL, 1LL}) {
        auto qm = gtd::shift_params(q, m);
        phi_window wm{w.lo + m, w.hi + m};
        for (std::size_t n = 1; n <= 2; ++n) {
            for (const auto& nu : gtd::signatures_in_box(n, w.lo, w.hi)) {
                phi_poly direct = gtd::formal_generator_apply(q, gtd::phi_det(nu), w).reindex(m);
                phi_poly moved =
                    gtd::formal_generator_apply(qm, gtd::phi_det(nu).reindex(m), wm);
                CHECK(direct == moved);
            }
        }
    }
}

TEST_CASE("simplex reduction of window variables") {
    // one variable: phi_0 -> 1 - y, phi_1 -> y
    poly r0 = gtd::phi_on_simplex(1, 0);
    poly r1 = gtd::phi_on_simplex(1, 1);
    poly y = poly::variable(1, 0);
    CHECK(r0 == poly::constant(1, 1) - y);
    CHECK(r1 == y);
    CHECK(gtd::phi_on_simplex(1, 2).is_zero());
    // two variables: phi_1 -> y1(1-y2) + y2(1-y1)
    poly y1 = poly::variable(2, 0), y2 = poly::variable(2, 1);
    poly one2 = poly::constant(2, 1);
    CHECK(gtd::phi_on_simplex(2, 1) == y1 * (one2 - y2) + y2 * (one2 - y1));
    CHECK(gtd::phi_on_simplex(2, 2) == y1 * y2);
    // constants reduce to constants: the relation sum phi = 1 is respected
    gtd::truncated_spec ts{1, 1, 0, 0};
    phi_poly total = phi(-1) + phi(0) + phi(1);
    CHECK(gtd::reduce_to_simplex(total, 1, 1) == poly::constant(2, 1));
}

TEST_CASE("reduced operator is the Jacobi operator, one variable") {
    for (const auto& ab : {std::pair<Rational, Rational>{0, 0},
                           std::pair<Rational, Rational>{Rational(1, 2), Rational(1, 3)},
                           std::pair<Rational, Rational>{2, 1}}) {
        gtd::truncated_spec ts{1, 0, ab.first, ab.second};
        auto q = ts.params();
        phi_window w{0, 1};
        for (const auto& nu : gtd::signatures_in_box(1, 0, 1)) {
            poly lhs = gtd::reduce_to_simplex(gtd::formal_generator_apply(q, gtd::phi_det(nu), w),
                                              ts.k, ts.l);
            // density pairing swaps the exponents
            poly rhs = gtd::jacobi_operator_apply(1, ts.b, ts.a,
                                                  gtd::reduce_to_simplex(gtd::phi_det(nu), ts.k,
                                                                         ts.l));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("reduced operator is the Jacobi operator, two variables") {
    gtd::truncated_spec ts{1, 1, Rational(1, 2), Rational(1, 3)};
    auto q = ts.params();
    phi_window w{-1, 1};
    for (std::size_t n : {1u, 2u}) {
        for (const auto& nu : gtd::signatures_in_box(n, -1, 1)) {
            phi_poly base = gtd::phi_det(nu);
            poly lhs =
                gtd::reduce_to_simplex(gtd::formal_generator_apply(q, base, w), ts.k, ts.l);
            poly rhs = gtd::jacobi_operator_apply(2, ts.b, ts.a,
                                                  gtd::reduce_to_simplex(base, ts.k, ts.l));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("shifted Legendre polynomials are exact eigenfunctions") {
    poly y = poly::variable(1, 0);
    poly one = poly::constant(1, 1);
    std::vector<poly> legendre = {
        one,
        y * Rational(2) - one,
        y * y * Rational(6) - y * Rational(6) + one,
        y * y * y * Rational(20) - y * y * Rational(30) + y * Rational(12) - one};
    for (int m = 0; m <= 3; ++m) {
        poly img = gtd::jacobi_operator_apply(1, 0, 0, legendre[static_cast<std::size_t>(m)]);
        CHECK(img == legendre[static_cast<std::size_t>(m)] * Rational(-m * (m + 1)));
    }
}

TEST_CASE("conjugated and direct forms of the symmetric operator agree") {
    poly y1 = poly::variable(2, 0), y2 = poly::variable(2, 1);
    poly e1 = y1 + y2;
    poly e2 = y1 * y2;
    Rational a(1, 2), b(1, 3);
    for (const auto& f : {poly::constant(2, 1), e1, e2, e1 * e1, e1 * e2 - e2}) {
        CHECK(gtd::jacobi_operator_apply(2, a, b, f) ==
              gtd::jacobi_operator_apply_direct(2, a, b, f));
    }
}
