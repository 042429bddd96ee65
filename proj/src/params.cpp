#include "gtd/params.hpp"

#include <sstream>

namespace gtd {

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

std::optional<Rational> parse_rational(const std::string& text) {
    // strict grammar: [+-]digits ( '/' [+-]digits )?
    auto parse_int = [](const std::string& s) -> std::optional<Integer> {
        if (s.empty()) return std::nullopt;
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '+' || s[0] == '-') {
            neg = (s[0] == '-');
            i = 1;
        }
        if (i == s.size()) return std::nullopt;
        Integer v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            v = v * 10 + (s[i] - '0');
        }
        return neg ? Integer(-v) : v;
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        auto p = parse_int(text);
        if (!p) return std::nullopt;
        return Rational(*p);
    }
    auto p = parse_int(text.substr(0, slash));
    auto q = parse_int(text.substr(slash + 1));
    if (!p || !q || *q == 0) return std::nullopt;
    return Rational(*p) / Rational(*q);
}

Integer rational_floor(const Rational& r) {
    Integer n = numerator(r), d = denominator(r);  // d > 0 canonically
    Integer q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

bool quadratic_positive_on_integers(const Rational& s, const Rational& p) {
    Rational vertex = -s / 2;
    Integer m = rational_floor(vertex);
    auto value = [&](const Integer& k) {
        Rational x(k);
        return x * x + s * x + p;
    };
    return value(m) > 0 && value(m + 1) > 0;
}

bool check_admissible(const param_quadruple& q) {
    return quadratic_positive_on_integers(q.s_z, q.p_z) &&
           quadratic_positive_on_integers(q.s_w, q.p_w) &&
           q.s_z + q.s_w > -1;
}

level_pair level_shift(const param_quadruple& q, long long n) {
    Rational h(n - 1);
    return {q.s_z + 2 * h, q.p_z + h * q.s_z + h * h};
}

Rational s_total(const param_quadruple& q, long long n) {
    level_pair u = level_shift(q, n);
    return -(u.s_u + q.s_w);
}

bool truncated_spec::valid() const {
    return k >= 0 && l >= 0 && k + l >= 1 && a > -1 && b > -1;
}

param_quadruple truncated_spec::params() const {
    Rational kk(k), ll(l);
    return {2 * kk + a, kk * (kk + a), 2 * ll + b, ll * (ll + b)};
}

}  // namespace gtd
