#include "gtd/phi_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gtd/rates.hpp"

namespace gtd {

phi_poly phi_poly::constant(const Rational& c) {
    phi_poly f;
    f.add_term({}, c);
    return f;
}

phi_poly phi_poly::variable(long long n) {
    phi_poly f;
    f.add_term({n}, 1);
    return f;
}

void phi_poly::add_term(monomial m, const Rational& c) {
    if (c == 0) return;
    std::sort(m.begin(), m.end());
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

phi_poly phi_poly::operator+(const phi_poly& o) const {
    phi_poly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

phi_poly phi_poly::operator-(const phi_poly& o) const {
    phi_poly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

phi_poly phi_poly::operator*(const phi_poly& o) const {
    phi_poly out;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            monomial m;
            m.reserve(m1.size() + m2.size());
            std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
            out.add_term(std::move(m), c1 * c2);
        }
    }
    return out;
}

phi_poly phi_poly::operator*(const Rational& c) const {
    phi_poly out;
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

phi_poly phi_poly::operator-() const { return *this * Rational(-1); }

phi_poly phi_poly::derivative(long long n) const {
    phi_poly out;
    for (const auto& [m, c] : terms_) {
        auto lo = std::lower_bound(m.begin(), m.end(), n);
        if (lo == m.end() || *lo != n) continue;
        auto hi = std::upper_bound(lo, m.end(), n);
        long long mult = hi - lo;
        monomial reduced = m;
        reduced.erase(reduced.begin() + (lo - m.begin()));
        out.add_term(std::move(reduced), c * Rational(mult));
    }
    return out;
}

phi_poly phi_poly::reindex(long long m) const {
    phi_poly out;
    for (const auto& [mono, c] : terms_) {
        monomial shifted = mono;
        for (auto& idx : shifted) idx += m;
        out.terms_.emplace(std::move(shifted), c);
    }
    return out;
}

std::string phi_poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rational_to_string(c);
        for (long long idx : m) os << "*phi_" << idx;
    }
    return os.str();
}

phi_poly window_quotient(const phi_poly& f, const phi_window& w) {
    phi_poly out;
    for (const auto& [m, c] : f.terms()) {
        bool inside = std::all_of(m.begin(), m.end(), [&](long long n) { return w.contains(n); });
        if (inside) out.add_term(m, c);
    }
    return out;
}

phi_poly phi_det(const signature& nu) {
    std::size_t n = nu.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    phi_poly out;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (perm[i] > perm[j]) ++inversions;
            }
        }
        phi_poly::monomial m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = nu.parts[i] - static_cast<long long>(i) + perm[i];
        }
        out.add_term(std::move(m), (inversions % 2 == 0) ? 1 : -1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

bool in_window_box(const signature& nu, const phi_window& w) {
    long long n = static_cast<long long>(nu.size());
    for (long long i = 1; i <= n; ++i) {
        long long p = nu.parts[i - 1];
        if (p < w.lo + i - n || p > w.hi + i - 1) return false;
    }
    return true;
}

std::map<signature, Rational> kostka_expand(const std::vector<long long>& n,
                                            const phi_window& w) {
    std::map<signature, Rational> out;
    if (n.size() == 1) {
        signature nu({n[0]});
        if (in_window_box(nu, w)) out[nu] += 1;
        return out;
    }
    if (n.size() == 2) {
        long long n1 = std::max(n[0], n[1]);
        long long n2 = std::min(n[0], n[1]);
        // phi_{n1} phi_{n2} = sum_p phi_{(n1+p, n2-p)}; out-of-box terms
        // vanish in the quotient.
        long long p_max = std::min(w.hi - n1, n2 - w.lo);
        for (long long p = 0; p <= p_max; ++p) {
            out[signature({n1 + p, n2 - p})] += 1;
        }
        return out;
    }
    throw std::logic_error("kostka_expand: straightening implemented for N <= 2");
}

std::map<signature, Rational> straighten(const phi_poly& f, std::size_t degree,
                                         const phi_window& w) {
    std::map<signature, Rational> out;
    for (const auto& [m, c] : f.terms()) {
        if (m.size() != degree) {
            throw std::invalid_argument("straighten: monomial of unexpected degree");
        }
        for (const auto& [nu, k] : kostka_expand(m, w)) {
            out[nu] += c * k;
            if (out[nu] == 0) out.erase(nu);
        }
    }
    return out;
}

phi_poly coeff_A(long long n1, long long n2, const phi_window& w) {
    if (n1 < n2) throw std::invalid_argument("coeff_A: requires n1 >= n2");
    phi_poly out;
    long long diff = n1 - n2;
    long long span = w.hi - w.lo + 2;
    for (long long p = 0; p <= span; ++p) {
        Rational c(diff + 2 * p + 1);
        if (w.contains(n1 + p + 1) && w.contains(n2 - p)) out.add_term({n1 + p + 1, n2 - p}, c);
        if (w.contains(n1 + p) && w.contains(n2 - p - 1)) out.add_term({n1 + p, n2 - p - 1}, c);
    }
    if (diff != 0 && w.contains(n1) && w.contains(n2)) {
        out.add_term({n1, n2}, Rational(-diff));
    }
    for (long long p = 1; p <= span; ++p) {
        if (w.contains(n1 + p) && w.contains(n2 - p)) {
            out.add_term({n1 + p, n2 - p}, Rational(-2 * (diff + 2 * p)));
        }
    }
    return out;
}

phi_poly coeff_B(const param_quadruple& q, long long n, const phi_window& w) {
    phi_poly out;
    Rational np1(n + 1);
    Rational nm1(n - 1);
    Rational nn(n);
    if (w.contains(n + 1)) {
        out.add_term({n + 1}, np1 * np1 + q.s_w * np1 + q.p_w);
    }
    if (w.contains(n - 1)) {
        out.add_term({n - 1}, nm1 * nm1 - q.s_z * nm1 + q.p_z);
    }
    if (w.contains(n)) {
        out.add_term({n}, -(2 * nn * nn + (q.s_w - q.s_z) * nn + q.p_z + q.p_w));
    }
    return out;
}

phi_poly formal_generator_apply(const param_quadruple& q, const phi_poly& f,
                                const phi_window& w) {
    phi_poly fq = window_quotient(f, w);
    phi_poly out;
    for (long long n = w.lo; n <= w.hi; ++n) {
        phi_poly d1 = fq.derivative(n);
        if (d1.is_zero()) continue;
        out = out + coeff_B(q, n, w) * d1;
        out = out + coeff_A(n, n, w) * d1.derivative(n);
        for (long long n2 = w.lo; n2 < n; ++n2) {
            phi_poly cross = d1.derivative(n2);
            if (cross.is_zero()) continue;
            out = out + coeff_A(n, n2, w) * cross * Rational(2);
        }
    }
    return window_quotient(out, w);
}

phi_poly lifted_generator_apply(const param_quadruple& q, const signature& nu,
                                const phi_window& w) {
    if (!nu.valid()) throw std::invalid_argument("lifted_generator_apply: invalid signature");
    phi_poly out = window_quotient(phi_det(nu), w) * multilevel_diagonal(q, nu);
    Rational dim_nu(dim(nu));
    for (std::size_t i = 0; i < nu.size(); ++i) {
        for (int delta : {+1, -1}) {
            signature mu = nu;
            mu.parts[i] += delta;
            if (!mu.valid()) continue;
            Rational r = multilevel_rate(q, mu, nu);
            if (r == 0) continue;
            Rational coef = r * Rational(dim(mu)) / dim_nu;
            out = out + window_quotient(phi_det(mu), w) * coef;
        }
    }
    return out;
}

param_quadruple shift_params(const param_quadruple& q, long long m) {
    Rational mr(m);
    return {q.s_z + 2 * mr, q.p_z + mr * q.s_z + mr * mr,
            q.s_w - 2 * mr, q.p_w - mr * q.s_w + mr * mr};
}

poly phi_on_simplex(int n, long long r) {
    if (r < 0 || r > n) return poly(n);
    std::vector<poly> coeff(static_cast<std::size_t>(n) + 1, poly(n));
    coeff[0] = poly::constant(n, 1);
    poly one = poly::constant(n, 1);
    for (int i = 0; i < n; ++i) {
        poly yi = poly::variable(n, i);
        poly stay = one - yi;
        for (int j = i + 1; j >= 0; --j) {
            poly next = coeff[static_cast<std::size_t>(j)] * stay;
            if (j > 0) next = next + coeff[static_cast<std::size_t>(j) - 1] * yi;
            coeff[static_cast<std::size_t>(j)] = std::move(next);
        }
    }
    return coeff[static_cast<std::size_t>(r)];
}

poly reduce_to_simplex(const phi_poly& f, long long k, long long l) {
    int n = static_cast<int>(k + l);
    if (n < 1) throw std::invalid_argument("reduce_to_simplex: k + l >= 1 required");
    poly out(n);
    for (const auto& [m, c] : f.terms()) {
        poly prod = poly::constant(n, c);
        for (long long idx : m) {
            prod = prod * phi_on_simplex(n, idx + l);
            if (prod.is_zero()) break;
        }
        out = out + prod;
    }
    return out;
}

namespace {

// y_i (1 - y_i) as a polynomial of the given arity.
poly coeff2(int n, int i) {
    poly yi = poly::variable(n, i);
    return yi * (poly::constant(n, 1) - yi);
}

// b + 1 - (a + b + 2) y_i
poly coeff1(int n, int i, const Rational& a, const Rational& b) {
    return poly::constant(n, b + 1) - poly::variable(n, i) * (a + b + 2);
}

}  // namespace

poly jacobi_operator_apply(int n, const Rational& a, const Rational& b, const poly& f) {
    if (f.arity() != n) throw std::invalid_argument("jacobi_operator_apply: arity mismatch");
    poly g = vandermonde(n) * f;
    poly h(n);
    for (int i = 0; i < n; ++i) {
        poly gi = g.derivative(i);
        h = h + coeff2(n, i) * gi.derivative(i) + coeff1(n, i, a, b) * gi;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) h = divide_linear_diff(h, i, j);
    }
    Rational constant = 0;
    for (int m = 0; m < n; ++m) constant += Rational(m) * (Rational(m) + a + b + 1);
    return h + f * constant;
}

poly jacobi_operator_apply_direct(int n, const Rational& a, const Rational& b, const poly& f) {
    if (f.arity() != n) throw std::invalid_argument("jacobi_operator_apply_direct: arity mismatch");
    poly out(n);
    std::vector<poly> df;
    df.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) df.push_back(f.derivative(i));
    for (int i = 0; i < n; ++i) {
        out = out + coeff2(n, i) * df[static_cast<std::size_t>(i)].derivative(i) +
              coeff1(n, i, a, b) * df[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            poly num = coeff2(n, i) * df[static_cast<std::size_t>(i)] * Rational(2) -
                       coeff2(n, j) * df[static_cast<std::size_t>(j)] * Rational(2);
            if (!num.is_zero()) out = out + divide_linear_diff(num, i, j);
        }
    }
    return out;
}

}  // namespace gtd
