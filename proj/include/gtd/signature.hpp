#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "gtd/rational.hpp"

namespace gtd {

// A signature of length N is a weakly decreasing tuple of integers.
struct signature {
    std::vector<long long> parts;

    signature() = default;
    explicit signature(std::vector<long long> p) : parts(std::move(p)) {}

    std::size_t size() const { return parts.size(); }
    bool valid() const;

    // Strictly decreasing coordinates l_i = parts[i] + (N - 1 - i), 0-based.
    std::vector<long long> l_coords() const;

    auto operator<=>(const signature&) const = default;
};

// lower interlaces upper: |lower| + 1 == |upper| and
// upper_1 >= lower_1 >= upper_2 >= ... >= lower_N >= upper_{N+1}.
bool interlaces(const signature& lower, const signature& upper);

// Number of monotone paths from the empty signature up to s (equivalently,
// triangular arrays with top row s); Weyl product over l-coordinates.
Integer dim(const signature& s);

// Stochastic link from a length-(N+1) signature to length-N ones:
// dim(lower)/dim(upper) when lower interlaces upper, else 0.
Rational link(const signature& upper, const signature& lower);

// All signatures interlacing s from below, with their link weights.
std::vector<std::pair<signature, Rational>> enumerate_down(const signature& s);

// All length-n signatures with parts in [lo, hi].
std::vector<signature> signatures_in_box(std::size_t n, long long lo, long long hi);

// Triangular array: levels[j] has length j+1, each level interlaced by the
// one below it.  levels.back() is the top row.
struct gt_scheme {
    std::vector<signature> levels;

    bool valid() const;
    const signature& top() const { return levels.back(); }
    std::size_t depth() const { return levels.size(); }

    auto operator<=>(const gt_scheme&) const = default;
};

// Samples a uniform triangular array with top row s by walking down the
// stochastic links; the link weights telescope to 1/dim(s) per array.
gt_scheme sample_down_path(const signature& s, std::mt19937_64& rng);

// All triangular arrays with the given top row.
std::vector<gt_scheme> enumerate_schemes(const signature& top);

// Derives a per-trajectory engine from a master seed; trajectories are
// independent of scheduling order, which keeps batch output reproducible
// for any thread count.
std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index);

}  // namespace gtd
