#include "gtd/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gtd {

poly poly::constant(int arity, const Rational& c) {
    poly p(arity);
    if (c != 0) p.terms_[key(arity, 0)] = c;
    return p;
}

poly poly::variable(int arity, int i) {
    poly p(arity);
    key k(arity, 0);
    k[i] = 1;
    p.terms_[k] = 1;
    return p;
}

int poly::degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) {
        int t = 0;
        for (int e : k) t += e;
        d = std::max(d, t);
    }
    return d;
}

void poly::add_term(const key& k, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_[k] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

poly poly::operator+(const poly& o) const {
    poly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

poly poly::operator-(const poly& o) const {
    poly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

poly poly::operator*(const poly& o) const {
    poly r(arity_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : o.terms_) {
            key k(arity_);
            for (int i = 0; i < arity_; ++i) k[i] = ka[i] + kb[i];
            r.add_term(k, ca * cb);
        }
    }
    return r;
}

poly poly::operator*(const Rational& c) const {
    poly r(arity_);
    if (c == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
    return r;
}

poly poly::operator-() const { return *this * Rational(-1); }

poly poly::shift_var(int i, const Rational& delta) const {
    if (delta == 0) return *this;
    poly r(arity_);
    for (const auto& [k, c] : terms_) {
        // binomial expansion of (x_i + delta)^e
        int e = k[i];
        Rational binom = 1;
        Rational dpow = 1;
        for (int t = 0; t <= e; ++t) {
            key nk = k;
            nk[i] = e - t;
            r.add_term(nk, c * binom * dpow);
            binom = binom * Rational(e - t) / Rational(t + 1);
            dpow *= delta;
        }
    }
    return r;
}

poly poly::derivative(int i) const {
    poly r(arity_);
    for (const auto& [k, c] : terms_) {
        if (k[i] == 0) continue;
        key nk = k;
        nk[i] -= 1;
        r.add_term(nk, c * Rational(k[i]));
    }
    return r;
}

Rational poly::eval(const std::vector<Rational>& point) const {
    Rational acc = 0;
    for (const auto& [k, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < arity_; ++i)
            for (int e = 0; e < k[i]; ++e) t *= point[i];
        acc += t;
    }
    return acc;
}

std::vector<poly> poly::coeffs_in(int i) const {
    int dmax = 0;
    for (const auto& [k, c] : terms_) dmax = std::max(dmax, k[i]);
    std::vector<poly> out(dmax + 1, poly(arity_));
    for (const auto& [k, c] : terms_) {
        key nk = k;
        int d = nk[i];
        nk[i] = 0;
        out[d].add_term(nk, c);
    }
    return out;
}

std::string poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rational_to_string(c);
        for (int i = 0; i < arity_; ++i)
            if (k[i] > 0) os << "*x" << i << "^" << k[i];
    }
    return os.str();
}

poly falling_factorial(int arity, int var, const Rational& c, int m) {
    poly r = poly::constant(arity, 1);
    poly x = poly::variable(arity, var);
    for (int t = 0; t < m; ++t) r = r * (x + poly::constant(arity, c - t));
    return r;
}

poly vandermonde(int n) {
    poly r = poly::constant(n, 1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            r = r * (poly::variable(n, i) - poly::variable(n, j));
    return r;
}

poly divide_linear_diff(const poly& f, int i, int j) {
    if (f.is_zero()) return f;
    auto cs = f.coeffs_in(i);
    int d = static_cast<int>(cs.size()) - 1;
    if (d < 1) throw std::runtime_error("divide_linear_diff: dividend has degree 0 in x_i");
    poly xj = poly::variable(f.arity(), j);
    // synthetic division by (x_i - x_j): q_{k-1} = c_k + x_j q_k
    std::vector<poly> qcoef(d, poly(f.arity()));
    poly carry = cs[d];
    for (int k = d; k >= 1; --k) {
        qcoef[k - 1] = carry;
        carry = cs[k - 1] + xj * carry;
    }
    if (!carry.is_zero()) throw std::runtime_error("divide_linear_diff: nonzero remainder");
    poly out(f.arity());
    poly xi = poly::variable(f.arity(), i);
    poly xpow = poly::constant(f.arity(), 1);
    for (int k = 0; k < d; ++k) {
        out = out + qcoef[k] * xpow;
        xpow = xpow * xi;
    }
    return out;
}

poly det_poly(const std::vector<std::vector<poly>>& m) {
    std::size_t n = m.size();
    if (n == 0) throw std::runtime_error("det_poly: empty matrix");
    int arity = m[0][0].arity();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    poly acc(arity);
    // iterate permutations with sign tracking via inversion count
    do {
        int inv = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (perm[a] > perm[b]) ++inv;
        poly term = poly::constant(arity, (inv % 2 == 0) ? 1 : -1);
        for (std::size_t r = 0; r < n; ++r) term = term * m[r][perm[r]];
        acc = acc + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace gtd
