#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtd/params.hpp"
#include "gtd/signature.hpp"

namespace gtd {

// ---------------------------------------------------------------------------
// Generic bivariate / multilevel construction
// ---------------------------------------------------------------------------

// Row-access description of an intertwined pair: an autonomous lower chain,
// an upper chain, and a stochastic link from upper states to lower states.
struct bivariate_spec {
    std::function<std::map<gt_scheme, Rational>(const gt_scheme&)> lower_row;  // off-diagonal
    std::function<std::map<signature, Rational>(const signature&)> upper_row;  // off-diagonal
    std::function<Rational(const signature&, const gt_scheme&)> link;
};

// Product of links down the array, topped by the extra level `top`:
//   link(top, lower.top()) * prod_j link(lower.levels[j+1], lower.levels[j]).
Rational scheme_link(const signature& top, const gt_scheme& lower);

// Off-diagonal row of the bivariate chain at s = (lower levels, top level):
//   - lower moves keeping the link positive run free at the lower rate;
//   - upper moves carry the ratio link(new_top, lower)/link(old_top, lower);
//   - lower moves that kill the link recruit a compensating upper move drawn
//     from the normalized displacement distribution (construction fault if
//     that distribution has no mass).
std::map<gt_scheme, Rational> bivariate_row(const bivariate_spec& bs, const gt_scheme& s);

// Multilevel chain on triangular arrays, exact rational rates.
// Direct form: one level-k coordinate moves at its level-k rate, modulated by
// the link ratio to the level below (blocked when interlacing would break),
// and pushes the forced coordinates of the levels above.
std::map<gt_scheme, Rational> multilevel_row_direct(const param_quadruple& q, const gt_scheme& s);
// Same row through the nested bivariate recursion (cross-check path).
std::map<gt_scheme, Rational> multilevel_row_nested(const param_quadruple& q, const gt_scheme& s);
// Closed form for the diagonal: negative sum of link-modulated exit rates.
Rational multilevel_diagonal_direct(const param_quadruple& q, const gt_scheme& s);

// ---------------------------------------------------------------------------
// Simulators
// ---------------------------------------------------------------------------

struct event_record {
    double t = 0;
    int level = 0;  // 1-based level of the initiating coordinate (0: particle systems)
    int index = 0;  // 1-based coordinate index
    int dir = 0;    // +1 right, -1 left
    int chain = 0;  // number of additional coordinates dragged along
};

// standard: the block-push dynamics.  The other two deliberately break the
// law while preserving state validity; they exist as negative controls for
// the statistical harness and must fail its tests.
enum class push_variant { standard, no_blocking, no_left_push };

struct sim_result {
    std::vector<event_record> events;
    gt_scheme final_state;
};

sim_result simulate_blockpush(const param_quadruple& q, const gt_scheme& init, double t_max,
                              std::mt19937_64& rng, push_variant variant = push_variant::standard);

// Total exit rate of the simulator at a state (for holding-time checks).
Rational blockpush_total_rate(const param_quadruple& q, const gt_scheme& s,
                              push_variant variant = push_variant::standard);

struct exclusion_result {
    std::vector<event_record> events;
    std::vector<long long> final_state;
};

// Particle system y_1 < ... < y_N: right jumps push maximal consecutive runs,
// left jumps are blocked by occupancy.
exclusion_result simulate_exclusion(const param_quadruple& q, const std::vector<long long>& init,
                                    double t_max, std::mt19937_64& rng);

std::vector<long long> corner_projection(const gt_scheme& s);

// ---------------------------------------------------------------------------
// Statistical and exact harnesses
// ---------------------------------------------------------------------------

// Exact sampler of the truncated level-n measure (enumerates the support).
signature sample_truncated_top(const truncated_spec& ts, std::size_t n, std::mt19937_64& rng);

// Central initial state: top row from the invariant measure (exact in the
// truncated case, Metropolis otherwise), lower levels uniform given the top.
gt_scheme sample_central_scheme(const param_quadruple& q, std::size_t n, std::mt19937_64& rng);
gt_scheme sample_central_scheme(const truncated_spec& ts, std::size_t n, std::mt19937_64& rng);

// Deterministic batch of central initial arrays derived from the master
// seed: exact inverse-table sampling in the truncated case, one Metropolis
// chain otherwise.
std::vector<gt_scheme> central_init_batch(const param_quadruple& q, std::size_t n,
                                          std::size_t count, std::uint64_t seed);
std::vector<gt_scheme> central_init_batch(const truncated_spec& ts, std::size_t n,
                                          std::size_t count, std::uint64_t seed);

struct projection_report {
    bool ok = false;
    bool diagonal_exact = false;
    double autonomy_residual = 0;   // lower-marginal identity
    double intertwine_residual = 0; // link-average identity
    std::string detail;
};

// Exact matrix-exponential verification on the truncated graph that the
// multilevel semigroup (a) collapses to the depth-(n-1) semigroup when the
// top level is summed out and (b) averages under the link to the level-n
// semigroup.
projection_report check_projection_identities(const truncated_spec& ts, std::size_t n, double t,
                                              double tol);

struct mc_report {
    bool ok = false;
    bool conclusive = true;
    double p_value = 0;
    double statistic = 0;
    std::size_t dof = 0;
    std::string detail;
};

// Monte Carlo top-row marginal at time t from a fixed initial array versus
// the Karlin-McGregor row over the given reference states (chi-square at the
// given significance; mass outside the reference states pools into a
// remainder cell).
mc_report mc_top_marginal_check(const param_quadruple& q, const gt_scheme& init, double t,
                                std::size_t paths, std::uint64_t seed, double significance,
                                const std::vector<signature>& km_states, long long p1_lo,
                                long long p1_hi, push_variant variant = push_variant::standard);

// Pooled conditional-uniformity chi-square of final arrays bucketed by top
// row; the statistic behind check_centrality_preservation, usable directly
// on already-simulated samples.
mc_report centrality_of_finals(const std::vector<gt_scheme>& finals, double significance);

// Centrality preservation: from a central initial law, at time t the lower
// levels remain uniform conditionally on the top row.  Chi-square pooled over
// top-row buckets with enough hits.
mc_report check_centrality_preservation(const param_quadruple& q, std::size_t n, double t,
                                        std::size_t paths, std::uint64_t seed,
                                        double significance,
                                        push_variant variant = push_variant::standard);
mc_report check_centrality_preservation(const truncated_spec& ts, std::size_t n, double t,
                                        std::size_t paths, std::uint64_t seed,
                                        double significance,
                                        push_variant variant = push_variant::standard);

struct collapse_report {
    bool top_lumpable = false;      // expected false in general (recorded, not required)
    bool drop_top_ok = false;       // bottom levels are autonomous
    bool central_average_ok = false;  // link-averaged top rates equal the level-n generator
    bool corner_ok = false;         // corner projection is the particle system
    std::string detail;
};

// Exact lumpability checks of the truncated multilevel chain.
collapse_report check_collapsibility(const truncated_spec& ts, std::size_t n);

// Empirical mean of y_N / N where y is the corner projection of a central
// sample; a static probe of the stationary particle density (no evolution).
double stationary_density_probe(const param_quadruple& q, std::size_t n, std::size_t samples,
                                std::mt19937_64& rng);

}  // namespace gtd
