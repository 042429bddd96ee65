#include "gtd/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

#include "gtd/measures.hpp"
#include "gtd/rates.hpp"
#include "gtd/semigroup.hpp"
#include "gtd/stats.hpp"

namespace gtd {

namespace {

gt_scheme with_top(const gt_scheme& lower, const signature& top) {
    gt_scheme s = lower;
    s.levels.push_back(top);
    return s;
}

gt_scheme drop_top(const gt_scheme& s) {
    gt_scheme t = s;
    t.levels.pop_back();
    return t;
}

bool quadratic_nonneg_on_integers(const Rational& s, const Rational& p) {
    Integer m = rational_floor(-s / 2);
    auto value = [&](const Integer& k) { return Rational(k) * Rational(k) + s * Rational(k) + p; };
    return value(m) >= 0 && value(m + 1) >= 0;
}

void require_nonneg_rates(const param_quadruple& q) {
    if (!quadratic_nonneg_on_integers(q.s_z, q.p_z) ||
        !quadratic_nonneg_on_integers(q.s_w, q.p_w)) {
        throw std::domain_error("jump rates would be negative: parameters not admissible");
    }
}

// Per-level rate evaluation in doubles for the simulators.
struct rate_engine {
    std::vector<double> su, pu;  // level-shifted symmetric functions, levels 1..n
    double sw = 0, pw = 0;

    rate_engine(const param_quadruple& q, std::size_t n) {
        su.resize(n + 1);
        pu.resize(n + 1);
        for (std::size_t k = 1; k <= n; ++k) {
            level_pair lp = level_shift(q, static_cast<long long>(k));
            su[k] = to_double(lp.s_u);
            pu[k] = to_double(lp.p_u);
        }
        sw = to_double(q.s_w);
        pw = to_double(q.p_w);
    }
    double right(std::size_t k, long long l) const {
        double x = static_cast<double>(l);
        return x * x - su[k] * x + pu[k];
    }
    double left(std::size_t k, long long l) const {
        double x = static_cast<double>(l);
        return x * x + sw * x + pw;
    }
};

struct move_option {
    int level, index, dir;  // 1-based level and index
    double rate;
};

// All simulator moves with positive rate at s under the given variant.
std::vector<move_option> enumerate_moves(const rate_engine& e, const gt_scheme& s,
                                         push_variant variant) {
    std::vector<move_option> out;
    std::size_t n = s.depth();
    for (std::size_t k = 1; k <= n; ++k) {
        const auto& parts = s.levels[k - 1].parts;
        for (std::size_t i = 1; i <= k; ++i) {
            long long part = parts[i - 1];
            long long l = part + static_cast<long long>(k - i);
            // Right move.  Blocked when the coordinate sits on top of its
            // upper-left neighbor one level below; a within-level collision
            // implies that same blocking, so one test covers both.
            double rr = e.right(k, l);
            bool blocked_r = (k >= 2 && i >= 2 && s.levels[k - 2].parts[i - 2] == part) ||
                             (i >= 2 && parts[i - 2] == part);
            if (rr < -1e-9) throw std::domain_error("negative right rate in simulator");
            if (rr > 0 && (variant == push_variant::no_blocking || !blocked_r)) {
                out.push_back({static_cast<int>(k), static_cast<int>(i), +1, rr});
            }
            // Left move.
            double lr = e.left(k, l);
            bool blocked_l = (k >= 2 && i <= k - 1 && s.levels[k - 2].parts[i - 1] == part) ||
                             (i <= k - 1 && parts[i] == part);
            bool pushes_l = (k < n && s.levels[k].parts[i] == part);
            if (lr < -1e-9) throw std::domain_error("negative left rate in simulator");
            if (variant == push_variant::no_left_push && pushes_l) continue;
            if (lr > 0 && (variant == push_variant::no_blocking || !blocked_l)) {
                out.push_back({static_cast<int>(k), static_cast<int>(i), -1, lr});
            }
        }
    }
    return out;
}

// Applies one coordinate move and resolves every conflict it creates by
// moving the offending neighbor one step in the same direction.  Under the
// standard rules only upward pushes can fire; the within-level and downward
// branches exist for the no_blocking control variant.  Returns the number of
// coordinates moved.
int apply_move(gt_scheme& s, int k, int i, int dir) {
    std::deque<std::pair<int, int>> todo{{k, i}};
    std::set<std::pair<int, int>> seen{{k, i}};
    int n = static_cast<int>(s.depth());
    int moved = 0;
    auto enqueue = [&](int j, int m) {
        if (seen.insert({j, m}).second) todo.push_back({j, m});
    };
    while (!todo.empty()) {
        auto [j, m] = todo.front();
        todo.pop_front();
        auto& parts = s.levels[j - 1].parts;
        parts[m - 1] += dir;
        ++moved;
        long long v = parts[m - 1];
        if (dir > 0) {
            if (j < n && s.levels[j].parts[m - 1] < v) enqueue(j + 1, m);        // push up
            if (m >= 2 && parts[m - 2] < v) enqueue(j, m - 1);                   // bulldoze
            if (j >= 2 && m >= 2 && s.levels[j - 2].parts[m - 2] < v) enqueue(j - 1, m - 1);
        } else {
            if (j < n && s.levels[j].parts[m] > v) enqueue(j + 1, m + 1);        // push up
            if (m <= j - 1 && parts[m] > v) enqueue(j, m + 1);                   // bulldoze
            if (j >= 2 && m <= j - 1 && s.levels[j - 2].parts[m - 1] > v) enqueue(j - 1, m);
        }
    }
    return moved;
}

}  // namespace

Rational scheme_link(const signature& top, const gt_scheme& lower) {
    Rational r = link(top, lower.top());
    for (std::size_t j = lower.depth(); j-- > 1;) {
        if (r == 0) return 0;
        r *= link(lower.levels[j], lower.levels[j - 1]);
    }
    return r;
}

std::map<gt_scheme, Rational> bivariate_row(const bivariate_spec& bs, const gt_scheme& s) {
    if (s.depth() < 2) throw std::invalid_argument("bivariate_row: depth >= 2 required");
    gt_scheme low = drop_top(s);
    const signature& xs = s.top();
    Rational lx = bs.link(xs, low);
    if (lx == 0) throw std::invalid_argument("bivariate_row: state outside the pair space");

    std::map<gt_scheme, Rational> out;
    std::map<signature, Rational> up_row = bs.upper_row(xs);

    for (const auto& [ylow, qr] : bs.lower_row(low)) {
        if (bs.link(xs, ylow) != 0) {
            // Free lower move; the upper level keeps up through the link.
            out[with_top(ylow, xs)] += qr;
        } else {
            // The lower move strands the upper level: it recruits an upper
            // displacement from the normalized compatible distribution.
            Rational delta = 0;
            std::vector<std::pair<signature, Rational>> cand;
            for (const auto& [zs, ur] : up_row) {
                Rational w = ur * bs.link(zs, ylow);
                if (w != 0) {
                    cand.emplace_back(zs, w);
                    delta += w;
                }
            }
            if (delta == 0) {
                throw std::runtime_error(
                    "bivariate construction fault: lower move with no compatible upper "
                    "displacement (commutation violation)");
            }
            for (const auto& [zs, w] : cand) out[with_top(ylow, zs)] += qr * w / delta;
        }
    }
    for (const auto& [zs, ur] : up_row) {
        Rational lz = bs.link(zs, low);
        if (lz != 0) out[with_top(low, zs)] += ur * lz / lx;
    }
    return out;
}

std::map<gt_scheme, Rational> multilevel_row_direct(const param_quadruple& q, const gt_scheme& s) {
    if (!s.valid()) throw std::invalid_argument("multilevel_row_direct: invalid array");
    std::size_t n = s.depth();
    std::map<gt_scheme, Rational> out;
    for (std::size_t kk = 0; kk < n; ++kk) {
        const signature& xk = s.levels[kk];
        for (const auto& tr : multilevel_rates(q, xk)) {
            Rational rate = tr.rate;
            if (kk > 0) {
                const signature& below = s.levels[kk - 1];
                if (!interlaces(below, tr.to)) continue;  // blocked move
                rate *= link(tr.to, below) / link(xk, below);
            }
            if (rate == 0) continue;
            gt_scheme target = s;
            target.levels[kk] = tr.to;
            // Resolve forced displacements of the levels above.  In the
            // triangular-array instance the compatible displacement is unique,
            // so no branching occurs (asserted).
            for (std::size_t j = kk + 1; j < n; ++j) {
                if (interlaces(target.levels[j - 1], target.levels[j])) break;
                Rational delta = 0;
                std::vector<signature> cand;
                for (const auto& utr : multilevel_rates(q, target.levels[j])) {
                    if (!interlaces(target.levels[j - 1], utr.to)) continue;
                    Rational w = utr.rate * link(utr.to, target.levels[j - 1]);
                    if (w != 0) {
                        cand.push_back(utr.to);
                        delta += w;
                    }
                }
                if (delta == 0) {
                    throw std::runtime_error("multilevel construction fault: no compatible displacement");
                }
                if (cand.size() != 1) {
                    throw std::logic_error("multilevel: displacement distribution is not a point mass");
                }
                target.levels[j] = cand[0];
            }
            out[target] += rate;
        }
    }
    return out;
}

std::map<gt_scheme, Rational> multilevel_row_nested(const param_quadruple& q, const gt_scheme& s) {
    if (!s.valid()) throw std::invalid_argument("multilevel_row_nested: invalid array");
    if (s.depth() == 1) {
        std::map<gt_scheme, Rational> out;
        for (const auto& tr : multilevel_rates(q, s.levels[0])) {
            out[gt_scheme{{tr.to}}] += tr.rate;
        }
        return out;
    }
    bivariate_spec bs;
    bs.lower_row = [&q](const gt_scheme& low) { return multilevel_row_nested(q, low); };
    bs.upper_row = [&q](const signature& xs) {
        std::map<signature, Rational> r;
        for (const auto& tr : multilevel_rates(q, xs)) r[tr.to] += tr.rate;
        return r;
    };
    bs.link = [](const signature& top, const gt_scheme& low) { return scheme_link(top, low); };
    return bivariate_row(bs, s);
}

Rational multilevel_diagonal_direct(const param_quadruple& q, const gt_scheme& s) {
    Rational total = 0;
    for (std::size_t kk = 0; kk < s.depth(); ++kk) {
        const signature& xk = s.levels[kk];
        for (const auto& tr : multilevel_rates(q, xk)) {
            Rational rate = tr.rate;
            if (kk > 0) {
                const signature& below = s.levels[kk - 1];
                if (!interlaces(below, tr.to)) continue;
                rate *= link(tr.to, below) / link(xk, below);
            }
            total += rate;
        }
    }
    return -total;
}

sim_result simulate_blockpush(const param_quadruple& q, const gt_scheme& init, double t_max,
                              std::mt19937_64& rng, push_variant variant) {
    if (!init.valid()) throw std::invalid_argument("simulate_blockpush: invalid initial array");
    require_nonneg_rates(q);
    rate_engine eng(q, init.depth());
    gt_scheme s = init;
    sim_result res;
    double t = 0;
    std::exponential_distribution<double> exp1(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    while (true) {
        std::vector<move_option> moves = enumerate_moves(eng, s, variant);
        double total = 0;
        for (const auto& m : moves) total += m.rate;
        if (total <= 0) break;
        t += exp1(rng) / total;
        if (t > t_max) break;
        double pick = unif(rng) * total;
        std::size_t sel = 0;
        for (; sel + 1 < moves.size(); ++sel) {
            pick -= moves[sel].rate;
            if (pick <= 0) break;
        }
        int moved = apply_move(s, moves[sel].level, moves[sel].index, moves[sel].dir);
        if (!s.valid()) throw std::logic_error("simulator produced an invalid array");
        res.events.push_back({t, moves[sel].level, moves[sel].index, moves[sel].dir, moved - 1});
    }
    res.final_state = s;
    return res;
}

Rational blockpush_total_rate(const param_quadruple& q, const gt_scheme& s, push_variant variant) {
    std::size_t n = s.depth();
    Rational total = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const auto& parts = s.levels[k - 1].parts;
        for (std::size_t i = 1; i <= k; ++i) {
            long long part = parts[i - 1];
            long long l = part + static_cast<long long>(k - i);
            bool blocked_r = (k >= 2 && i >= 2 && s.levels[k - 2].parts[i - 2] == part) ||
                             (i >= 2 && parts[i - 2] == part);
            if (variant == push_variant::no_blocking || !blocked_r) {
                total += right_rate(q, static_cast<long long>(k), l);
            }
            bool blocked_l = (k >= 2 && i <= k - 1 && s.levels[k - 2].parts[i - 1] == part) ||
                             (i <= k - 1 && parts[i] == part);
            bool pushes_l = (k < n && s.levels[k].parts[i] == part);
            if (variant == push_variant::no_left_push && pushes_l) continue;
            if (variant == push_variant::no_blocking || !blocked_l) {
                total += left_rate(q, static_cast<long long>(k), l);
            }
        }
    }
    return total;
}

exclusion_result simulate_exclusion(const param_quadruple& q, const std::vector<long long>& init,
                                    double t_max, std::mt19937_64& rng) {
    for (std::size_t i = 1; i < init.size(); ++i) {
        if (init[i] <= init[i - 1]) {
            throw std::invalid_argument("simulate_exclusion: initial positions must increase");
        }
    }
    if (init.empty()) throw std::invalid_argument("simulate_exclusion: empty configuration");
    require_nonneg_rates(q);
    double sz = to_double(q.s_z), pz = to_double(q.p_z);
    double sw = to_double(q.s_w), pw = to_double(q.p_w);
    std::vector<long long> y = init;
    std::size_t n = y.size();
    exclusion_result res;
    double t = 0;
    std::exponential_distribution<double> exp1(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<move_option> moves;
    while (true) {
        moves.clear();
        for (std::size_t k = 1; k <= n; ++k) {
            double m = static_cast<double>(y[k - 1] - static_cast<long long>(k) + 1);
            double rr = m * m - sz * m + pz;
            if (rr < -1e-9) throw std::domain_error("negative right rate in exclusion process");
            if (rr > 0) moves.push_back({0, static_cast<int>(k), +1, rr});
            double x = static_cast<double>(y[k - 1]);
            double lr = x * x + sw * x + pw;
            if (lr < -1e-9) throw std::domain_error("negative left rate in exclusion process");
            bool blocked = k >= 2 && y[k - 1] == y[k - 2] + 1;
            if (lr > 0 && !blocked) moves.push_back({0, static_cast<int>(k), -1, lr});
        }
        double total = 0;
        for (const auto& m : moves) total += m.rate;
        if (total <= 0) break;
        t += exp1(rng) / total;
        if (t > t_max) break;
        double pick = unif(rng) * total;
        std::size_t sel = 0;
        for (; sel + 1 < moves.size(); ++sel) {
            pick -= moves[sel].rate;
            if (pick <= 0) break;
        }
        std::size_t k = static_cast<std::size_t>(moves[sel].index);
        int chain = 0;
        if (moves[sel].dir > 0) {
            // The maximal consecutive run starting at y_k moves together.
            std::size_t j = k;
            while (j < n && y[j] == y[j - 1] + 1) ++j;
            for (std::size_t m = k; m <= j; ++m) ++y[m - 1];
            chain = static_cast<int>(j - k);
        } else {
            --y[k - 1];
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (y[i] <= y[i - 1]) throw std::logic_error("exclusion simulator broke the ordering");
        }
        res.events.push_back({t, 0, moves[sel].index, moves[sel].dir, chain});
    }
    res.final_state = y;
    return res;
}

std::vector<long long> corner_projection(const gt_scheme& s) {
    std::vector<long long> y(s.depth());
    for (std::size_t j = 1; j <= s.depth(); ++j) {
        y[j - 1] = s.levels[j - 1].parts[0] + static_cast<long long>(j) - 1;
    }
    return y;
}

signature sample_truncated_top(const truncated_spec& ts, std::size_t n, std::mt19937_64& rng) {
    param_quadruple q = ts.params();
    std::vector<signature> states = signatures_in_box(n, ts.support_lo(), ts.support_hi());
    std::vector<double> w(states.size());
    double total = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        w[i] = to_double(zw_relative_weight(q, states[i]));
        total += w[i];
    }
    std::uniform_real_distribution<double> unif(0.0, total);
    double pick = unif(rng);
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        pick -= w[i];
        if (pick <= 0) return states[i];
    }
    return states.back();
}

gt_scheme sample_central_scheme(const param_quadruple& q, std::size_t n, std::mt19937_64& rng) {
    signature zero(std::vector<long long>(n, 0));
    std::vector<signature> tops = sample_zw_levelN_mcmc(q, n, rng, 4000, 3, 1, zero);
    return sample_down_path(tops[0], rng);
}

gt_scheme sample_central_scheme(const truncated_spec& ts, std::size_t n, std::mt19937_64& rng) {
    return sample_down_path(sample_truncated_top(ts, n, rng), rng);
}

namespace {

std::vector<gt_scheme> truncated_scheme_space(const truncated_spec& ts, std::size_t depth) {
    std::vector<gt_scheme> all;
    for (const auto& top : signatures_in_box(depth, ts.support_lo(), ts.support_hi())) {
        for (auto& sch : enumerate_schemes(top)) all.push_back(std::move(sch));
    }
    std::sort(all.begin(), all.end());
    return all;
}

struct exact_chain {
    std::vector<gt_scheme> states;
    std::map<gt_scheme, std::size_t> index;
    std::vector<std::map<gt_scheme, Rational>> rows;  // off-diagonal
    std::vector<Rational> diag;
    bool diagonal_exact = true;

    Eigen::MatrixXd generator() const {
        Eigen::Index m = static_cast<Eigen::Index>(states.size());
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (const auto& [to, rate] : rows[i]) {
                g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(index.at(to))) =
                    to_double(rate);
            }
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = to_double(diag[i]);
        }
        return g;
    }
};

exact_chain build_exact_chain(const param_quadruple& q, std::vector<gt_scheme> states) {
    exact_chain c;
    c.states = std::move(states);
    for (std::size_t i = 0; i < c.states.size(); ++i) c.index[c.states[i]] = i;
    c.rows.reserve(c.states.size());
    for (const auto& s : c.states) {
        auto row = multilevel_row_direct(q, s);
        Rational sum = 0;
        for (const auto& [to, rate] : row) {
            if (c.index.find(to) == c.index.end()) {
                throw std::runtime_error("truncated multilevel chain leaks outside its space");
            }
            sum += rate;
        }
        Rational closed = multilevel_diagonal_direct(q, s);
        if (closed != -sum) c.diagonal_exact = false;
        c.diag.push_back(-sum);
        c.rows.push_back(std::move(row));
    }
    return c;
}

}  // namespace

projection_report check_projection_identities(const truncated_spec& ts, std::size_t n, double t,
                                              double tol) {
    if (n < 2) throw std::invalid_argument("check_projection_identities: need depth >= 2");
    param_quadruple q = ts.params();
    exact_chain up = build_exact_chain(q, truncated_scheme_space(ts, n));
    exact_chain low = build_exact_chain(q, truncated_scheme_space(ts, n - 1));
    Eigen::MatrixXd p_up = (up.generator() * t).exp();
    Eigen::MatrixXd p_low = (low.generator() * t).exp();

    projection_report rep;
    rep.diagonal_exact = up.diagonal_exact && low.diagonal_exact;

    // Lower-marginal autonomy: summing the transition matrix over the top
    // level reproduces the depth-(n-1) semigroup.
    for (std::size_t a = 0; a < up.states.size(); ++a) {
        std::size_t la = low.index.at(drop_top(up.states[a]));
        std::map<std::size_t, double> agg;
        for (std::size_t b = 0; b < up.states.size(); ++b) {
            agg[low.index.at(drop_top(up.states[b]))] +=
                p_up(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
        for (std::size_t lb = 0; lb < low.states.size(); ++lb) {
            double lhs = agg.count(lb) ? agg[lb] : 0.0;
            double rhs = p_low(static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(lb));
            rep.autonomy_residual = std::max(rep.autonomy_residual, std::abs(lhs - rhs));
        }
    }

    // Link-average identity: starting the array from the link distribution
    // under a fixed top row evolves as the level-n chain tied to the link.
    sig_matrix p_top = exact_truncated_semigroup(ts, n, t);
    for (std::size_t xi = 0; xi < p_top.states.size(); ++xi) {
        const signature& x = p_top.states[xi];
        for (std::size_t b = 0; b < up.states.size(); ++b) {
            double lhs = 0;
            for (std::size_t a = 0; a < up.states.size(); ++a) {
                if (!(up.states[a].top() == x)) continue;
                lhs += to_double(scheme_link(x, drop_top(up.states[a]))) *
                       p_up(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
            const signature& yb = up.states[b].top();
            double rhs = p_top.p(static_cast<Eigen::Index>(xi),
                                 static_cast<Eigen::Index>(p_top.index(yb))) *
                         to_double(scheme_link(yb, drop_top(up.states[b])));
            rep.intertwine_residual = std::max(rep.intertwine_residual, std::abs(lhs - rhs));
        }
    }
    rep.ok = rep.diagonal_exact && rep.autonomy_residual <= tol && rep.intertwine_residual <= tol;
    if (!rep.ok) {
        rep.detail = "autonomy residual " + std::to_string(rep.autonomy_residual) +
                     ", link-average residual " + std::to_string(rep.intertwine_residual) +
                     (rep.diagonal_exact ? "" : ", diagonal closed form mismatch");
    }
    return rep;
}

mc_report mc_top_marginal_check(const param_quadruple& q, const gt_scheme& init, double t,
                                std::size_t paths, std::uint64_t seed, double significance,
                                const std::vector<signature>& km_states, long long p1_lo,
                                long long p1_hi, push_variant variant) {
    sig_matrix km = km_semigroup(q, t, km_states, p1_lo, p1_hi, 1e-13);
    std::size_t row = km.index(init.top());

    std::map<signature, std::size_t> pos;
    for (std::size_t i = 0; i < km_states.size(); ++i) pos[km_states[i]] = i;
    std::vector<double> observed(km_states.size(), 0.0);
    for (std::size_t p = 0; p < paths; ++p) {
        std::mt19937_64 rng = make_stream(seed, p);
        sim_result res = simulate_blockpush(q, init, t, rng, variant);
        auto it = pos.find(res.final_state.top());
        if (it != pos.end()) observed[it->second] += 1.0;
    }
    std::vector<double> expected(km_states.size());
    for (std::size_t i = 0; i < km_states.size(); ++i) {
        expected[i] = km.p(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i));
    }
    chi_square_result cs = chi_square_test(observed, expected, static_cast<double>(paths));
    mc_report rep;
    rep.statistic = cs.stat;
    rep.dof = static_cast<std::size_t>(cs.dof);
    rep.p_value = cs.p_value;
    rep.conclusive = cs.dof >= 1.0;
    rep.ok = rep.conclusive && cs.p_value >= significance;
    rep.detail = "chi-square " + std::to_string(cs.stat) + " on " + std::to_string(rep.dof) +
                 " dof, p = " + std::to_string(cs.p_value);
    return rep;
}

mc_report centrality_of_finals(const std::vector<gt_scheme>& finals, double significance) {
    std::map<signature, std::map<gt_scheme, double>> buckets;
    for (const auto& s : finals) buckets[s.top()][s] += 1.0;
    double stat = 0, dof = 0;
    std::size_t used = 0;
    for (const auto& [top, counts] : buckets) {
        double total = 0;
        for (const auto& [sch, c] : counts) total += c;
        Integer d = dim(top);
        if (d <= 1) continue;
        double cells = static_cast<double>(d);
        double expected = total / cells;
        if (total < 30 || expected < 5) continue;
        // Conditional uniformity over all arrays under this top row.
        double s = 0;
        double seen = 0;
        for (const auto& [sch, c] : counts) {
            s += (c - expected) * (c - expected) / expected;
            seen += 1.0;
        }
        s += (cells - seen) * expected;  // unobserved arrays contribute (0-e)^2/e each
        stat += s;
        dof += cells - 1.0;
        ++used;
    }
    mc_report rep;
    rep.statistic = stat;
    rep.dof = static_cast<std::size_t>(dof);
    rep.conclusive = dof >= 1.0;
    rep.p_value = rep.conclusive ? chi_square_survival(stat, dof) : 1.0;
    rep.ok = rep.conclusive && rep.p_value >= significance;
    rep.detail = std::to_string(used) + " top-row buckets, chi-square " + std::to_string(stat) +
                 " on " + std::to_string(rep.dof) + " dof, p = " + std::to_string(rep.p_value);
    return rep;
}

namespace {

mc_report centrality_from_inits(const param_quadruple& q, const std::vector<gt_scheme>& inits,
                                double t, std::uint64_t seed, double significance,
                                push_variant variant) {
    std::vector<gt_scheme> finals;
    finals.reserve(inits.size());
    for (std::size_t p = 0; p < inits.size(); ++p) {
        std::mt19937_64 rng = make_stream(seed, p);
        finals.push_back(simulate_blockpush(q, inits[p], t, rng, variant).final_state);
    }
    return centrality_of_finals(finals, significance);
}

}  // namespace

std::vector<gt_scheme> central_init_batch(const param_quadruple& q, std::size_t n,
                                          std::size_t count, std::uint64_t seed) {
    std::mt19937_64 init_rng = make_stream(seed, 0xFFFFFFFFULL);
    signature zero(std::vector<long long>(n, 0));
    // Single-site +-1 moves decorrelate in O(width^2) steps per coordinate, so
    // thin aggressively: downstream chi-square checks treat the batch as i.i.d.
    std::size_t thin = 60 * n * n;
    std::vector<signature> tops = sample_zw_levelN_mcmc(q, n, init_rng, 4000, thin, count, zero);
    std::vector<gt_scheme> inits;
    inits.reserve(count);
    for (const auto& top : tops) inits.push_back(sample_down_path(top, init_rng));
    return inits;
}

std::vector<gt_scheme> central_init_batch(const truncated_spec& ts, std::size_t n,
                                          std::size_t count, std::uint64_t seed) {
    param_quadruple q = ts.params();
    std::mt19937_64 init_rng = make_stream(seed, 0xFFFFFFFFULL);
    // Exact stationary top sample over the finite support.
    std::vector<signature> states = signatures_in_box(n, ts.support_lo(), ts.support_hi());
    std::vector<double> w(states.size());
    double total = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        w[i] = to_double(zw_relative_weight(q, states[i]));
        total += w[i];
    }
    std::uniform_real_distribution<double> unif(0.0, total);
    std::vector<gt_scheme> inits;
    inits.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        double pick = unif(init_rng);
        std::size_t sel = states.size() - 1;
        for (std::size_t i = 0; i + 1 < states.size(); ++i) {
            pick -= w[i];
            if (pick <= 0) {
                sel = i;
                break;
            }
        }
        inits.push_back(sample_down_path(states[sel], init_rng));
    }
    return inits;
}

mc_report check_centrality_preservation(const param_quadruple& q, std::size_t n, double t,
                                        std::size_t paths, std::uint64_t seed, double significance,
                                        push_variant variant) {
    return centrality_from_inits(q, central_init_batch(q, n, paths, seed), t, seed, significance,
                                 variant);
}

mc_report check_centrality_preservation(const truncated_spec& ts, std::size_t n, double t,
                                        std::size_t paths, std::uint64_t seed, double significance,
                                        push_variant variant) {
    return centrality_from_inits(ts.params(), central_init_batch(ts, n, paths, seed), t, seed,
                                 significance, variant);
}

collapse_report check_collapsibility(const truncated_spec& ts, std::size_t n) {
    if (n < 2) throw std::invalid_argument("check_collapsibility: need depth >= 2");
    param_quadruple q = ts.params();
    exact_chain chain = build_exact_chain(q, truncated_scheme_space(ts, n));
    collapse_report rep;
    std::string detail;

    // Aggregated off-diagonal rates into top-row fibers, per state.
    std::vector<std::map<signature, Rational>> top_agg(chain.states.size());
    // Aggregated off-diagonal rates into lower-part fibers, per state.
    std::vector<std::map<gt_scheme, Rational>> low_agg(chain.states.size());
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        for (const auto& [to, rate] : chain.rows[i]) {
            if (!(to.top() == chain.states[i].top())) top_agg[i][to.top()] += rate;
            gt_scheme lo = drop_top(to);
            if (!(lo == drop_top(chain.states[i]))) low_agg[i][lo] += rate;
        }
    }

    // (1) Strong lumpability onto the top row: fiber-constant aggregated rates.
    rep.top_lumpable = true;
    std::map<signature, std::size_t> first_rep;
    for (std::size_t i = 0; i < chain.states.size() && rep.top_lumpable; ++i) {
        auto [it, fresh] = first_rep.try_emplace(chain.states[i].top(), i);
        if (fresh) continue;
        if (top_agg[i] != top_agg[it->second]) {
            rep.top_lumpable = false;
            detail += "top-row lumping fails at fiber of top row with differing rows; ";
        }
    }

    // (2) Dropping the top level leaves the autonomous depth-(n-1) chain.
    rep.drop_top_ok = true;
    for (std::size_t i = 0; i < chain.states.size() && rep.drop_top_ok; ++i) {
        auto expected = multilevel_row_direct(q, drop_top(chain.states[i]));
        if (low_agg[i] != expected) {
            rep.drop_top_ok = false;
            detail += "lower-marginal aggregation mismatch; ";
        }
    }

    // (3) Link-averaged top-row rates equal the level-n generator.
    rep.central_average_ok = true;
    std::map<signature, std::map<signature, Rational>> averaged;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        const signature& top = chain.states[i].top();
        Rational wgt = scheme_link(top, drop_top(chain.states[i]));
        for (const auto& [nu, rate] : top_agg[i]) averaged[top][nu] += wgt * rate;
    }
    for (auto& [top, row] : averaged) {
        std::map<signature, Rational> expected;
        for (const auto& tr : multilevel_rates(q, top)) expected[tr.to] += tr.rate;
        for (auto it = row.begin(); it != row.end();) {
            it = it->second == 0 ? row.erase(it) : std::next(it);
        }
        if (row != expected) {
            rep.central_average_ok = false;
            detail += "link-averaged top rates differ from the level generator; ";
        }
    }

    // (4) Corner projection is strongly lumpable onto the particle system.
    rep.corner_ok = true;
    std::map<std::vector<long long>, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        classes[corner_projection(chain.states[i])].push_back(i);
    }
    for (const auto& [y, members] : classes) {
        // Expected particle-system row at y.
        std::map<std::vector<long long>, Rational> expected;
        std::size_t nn = y.size();
        for (std::size_t k = 1; k <= nn; ++k) {
            long long m = y[k - 1] - static_cast<long long>(k) + 1;
            Rational rr = Rational(m) * Rational(m) - q.s_z * Rational(m) + q.p_z;
            if (rr != 0) {
                std::vector<long long> target = y;
                std::size_t j = k;
                while (j < nn && y[j] == y[j - 1] + 1) ++j;
                for (std::size_t mi = k; mi <= j; ++mi) ++target[mi - 1];
                expected[target] += rr;
            }
            Rational lr = Rational(y[k - 1]) * Rational(y[k - 1]) + q.s_w * Rational(y[k - 1]) + q.p_w;
            bool blocked = k >= 2 && y[k - 1] == y[k - 2] + 1;
            if (lr != 0 && !blocked) {
                std::vector<long long> target = y;
                --target[k - 1];
                expected[target] += lr;
            }
        }
        for (std::size_t i : members) {
            std::map<std::vector<long long>, Rational> agg;
            for (const auto& [to, rate] : chain.rows[i]) {
                std::vector<long long> ty = corner_projection(to);
                if (ty != y) agg[ty] += rate;
            }
            if (agg != expected) {
                rep.corner_ok = false;
                detail += "corner projection rates differ from the particle system; ";
                break;
            }
        }
        if (!rep.corner_ok) break;
    }
    rep.detail = detail;
    return rep;
}

double stationary_density_probe(const param_quadruple& q, std::size_t n, std::size_t samples,
                                std::mt19937_64& rng) {
    signature zero(std::vector<long long>(n, 0));
    std::vector<signature> tops = sample_zw_levelN_mcmc(q, n, rng, 4000, 3, samples, zero);
    // The probe reads the top corner of the central array, which depends on
    // the top row alone: y_n = l_1 = top_1 + n - 1.
    double acc = 0;
    for (const auto& top : tops) {
        acc += static_cast<double>(top.parts[0] + static_cast<long long>(n) - 1) /
               static_cast<double>(n);
    }
    return acc / static_cast<double>(samples);
}

}  // namespace gtd
