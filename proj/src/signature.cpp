#include "gtd/signature.hpp"

#include <stdexcept>

namespace gtd {

bool signature::valid() const {
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
        if (parts[i] < parts[i + 1]) return false;
    return true;
}

std::vector<long long> signature::l_coords() const {
    std::vector<long long> l(parts.size());
    long long n = static_cast<long long>(parts.size());
    for (long long i = 0; i < n; ++i) l[i] = parts[i] + (n - 1 - i);
    return l;
}

bool interlaces(const signature& lower, const signature& upper) {
    if (lower.size() + 1 != upper.size()) return false;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(upper.parts[i] >= lower.parts[i])) return false;
        if (!(lower.parts[i] >= upper.parts[i + 1])) return false;
    }
    return true;
}

Integer dim(const signature& s) {
    auto l = s.l_coords();
    Integer num = 1;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j) num *= Integer(l[i] - l[j]);
    Integer den = 1;
    Integer fact = 1;
    for (std::size_t m = 1; m + 1 < s.size() + 1; ++m) {
        fact *= Integer(m);
        den *= fact;
    }
    // num is divisible by den (it is a product of hook ratios); keep exact.
    return num / den;
}

Rational link(const signature& upper, const signature& lower) {
    if (!interlaces(lower, upper)) return Rational(0);
    return Rational(dim(lower)) / Rational(dim(upper));
}

std::vector<std::pair<signature, Rational>> enumerate_down(const signature& s) {
    std::vector<std::pair<signature, Rational>> out;
    if (s.size() == 0) return out;
    std::size_t n = s.size() - 1;
    if (n == 0) {
        out.emplace_back(signature{{}}, Rational(1));
        return out;
    }
    // odometer over the independent ranges lower_i in [s_{i+1}, s_i]
    std::vector<long long> cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = s.parts[i + 1];
    Rational denom(dim(s));
    while (true) {
        signature nu{cur};
        out.emplace_back(nu, Rational(dim(nu)) / denom);
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (cur[i] < s.parts[i]) {
                ++cur[i];
                for (std::size_t j = 0; j < i; ++j) cur[j] = s.parts[j + 1];
                break;
            }
        }
        if (i == n) break;
    }
    return out;
}

std::vector<signature> signatures_in_box(std::size_t n, long long lo, long long hi) {
    std::vector<signature> out;
    if (lo > hi) return out;
    if (n == 0) {
        out.push_back(signature{{}});
        return out;
    }
    std::vector<long long> cur(n, lo);
    // odometer respecting weak decrease: parts[i] ranges in [lo, parts[i-1]]
    while (true) {
        out.push_back(signature{cur});
        std::size_t i = n;
        while (i > 0) {
            --i;
            long long cap = (i == 0) ? hi : cur[i - 1];
            if (cur[i] < cap) {
                ++cur[i];
                for (std::size_t j = i + 1; j < n; ++j) cur[j] = lo;
                i = n + 1;
                break;
            }
        }
        if (i != n + 1) break;
    }
    return out;
}

bool gt_scheme::valid() const {
    if (levels.empty()) return false;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j].size() != j + 1 || !levels[j].valid()) return false;
        if (j > 0 && !interlaces(levels[j - 1], levels[j])) return false;
    }
    return true;
}

gt_scheme sample_down_path(const signature& s, std::mt19937_64& rng) {
    gt_scheme scheme;
    scheme.levels.resize(s.size());
    scheme.levels[s.size() - 1] = s;
    signature cur = s;
    for (std::size_t lvl = s.size(); lvl > 1; --lvl) {
        auto rows = enumerate_down(cur);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double u = unif(rng);
        double acc = 0.0;
        std::size_t pick = rows.size() - 1;  // guard against roundoff at u ~ 1
        for (std::size_t i = 0; i < rows.size(); ++i) {
            acc += to_double(rows[i].second);
            if (u < acc) {
                pick = i;
                break;
            }
        }
        cur = rows[pick].first;
        scheme.levels[lvl - 2] = cur;
    }
    return scheme;
}

std::vector<gt_scheme> enumerate_schemes(const signature& top) {
    std::vector<gt_scheme> out;
    if (top.size() == 1) {
        gt_scheme s;
        s.levels = {top};
        out.push_back(std::move(s));
        return out;
    }
    for (const auto& [nu, w] : enumerate_down(top)) {
        (void)w;
        for (auto& sub : enumerate_schemes(nu)) {
            gt_scheme s;
            s.levels = sub.levels;
            s.levels.push_back(top);
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 mixes (seed, index) into a well-spread engine seed
    std::uint64_t x = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    auto mix = [&]() {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::seed_seq seq{mix(), mix(), mix(), mix()};
    return std::mt19937_64(seq);
}

}  // namespace gtd
