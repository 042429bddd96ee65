#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gtd/dynamics.hpp"
#include "gtd/io.hpp"
#include "gtd/measures.hpp"
#include "gtd/params.hpp"
#include "gtd/phi_algebra.hpp"
#include "gtd/rates.hpp"
#include "gtd/semigroup.hpp"
#include "gtd/signature.hpp"
#include "gtd/stats.hpp"
#include "gtd/symbolic_checks.hpp"

namespace {

constexpr const char* GTDYN_VERSION = "0.1.0";

using ordered_json = nlohmann::ordered_json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config file: flat key=value lines; '#' starts a comment; flags override.
// ---------------------------------------------------------------------------

using config_map = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

config_map load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);
    config_map out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw usage_error("config line without '=': " + t);
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

// Applies a config value to `target` unless the flag was given on the
// command line.
template <typename T>
void merge_opt(CLI::App* cmd, const config_map& cfg, const std::string& key, T& target) {
    if (cmd->count("--" + key) > 0) return;
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    if constexpr (std::is_same_v<T, std::string>) {
        target = it->second;
    } else {
        std::istringstream is(it->second);
        T v{};
        if (!(is >> v) || is.peek() != EOF) {
            throw usage_error("config value for '" + key + "' is not valid: " + it->second);
        }
        target = v;
    }
}

// ---------------------------------------------------------------------------
// Parameter resolution
// ---------------------------------------------------------------------------

struct param_choice {
    bool truncated = false;
    gtd::param_quadruple q;
    gtd::truncated_spec ts;
    std::string sz, pz, sw, pw;  // resolved rational literals (for the report)
    std::string truncated_text;
};

gtd::Rational parse_rational_or_die(const std::string& text, const std::string& what) {
    auto r = gtd::parse_rational(text);
    if (!r) {
        throw usage_error(what + " must be an integer or p/q rational literal, got '" + text +
                          "' (decimal floats are rejected)");
    }
    return *r;
}

param_choice resolve_params(const std::string& sz, const std::string& pz, const std::string& sw,
                            const std::string& pw, const std::string& truncated,
                            bool allow_default) {
    bool generic_given = !sz.empty() || !pz.empty() || !sw.empty() || !pw.empty();
    bool truncated_given = !truncated.empty();
    if (generic_given && truncated_given) {
        throw usage_error("give either --sz/--pz/--sw/--pw or --truncated, not both");
    }
    param_choice out;
    if (truncated_given) {
        std::vector<std::string> fields;
        std::stringstream ss(truncated);
        std::string item;
        while (std::getline(ss, item, ',')) fields.push_back(trim(item));
        if (fields.size() != 4) throw usage_error("--truncated expects k,l,a,b");
        gtd::Rational kr = parse_rational_or_die(fields[0], "k");
        gtd::Rational lr = parse_rational_or_die(fields[1], "l");
        if (gtd::Rational(gtd::rational_floor(kr)) != kr ||
            gtd::Rational(gtd::rational_floor(lr)) != lr) {
            throw usage_error("--truncated k and l must be integers");
        }
        out.ts.k = gtd::rational_floor(kr).convert_to<long long>();
        out.ts.l = gtd::rational_floor(lr).convert_to<long long>();
        out.ts.a = parse_rational_or_die(fields[2], "a");
        out.ts.b = parse_rational_or_die(fields[3], "b");
        if (!out.ts.valid()) {
            throw usage_error("--truncated needs k,l >= 0 integers with k+l >= 1 and a,b > -1");
        }
        out.truncated = true;
        out.q = out.ts.params();
        out.truncated_text = truncated;
    } else if (generic_given) {
        if (sz.empty() || pz.empty() || sw.empty() || pw.empty()) {
            throw usage_error("generic parameters need all four of --sz --pz --sw --pw");
        }
        out.q = {parse_rational_or_die(sz, "--sz"), parse_rational_or_die(pz, "--pz"),
                 parse_rational_or_die(sw, "--sw"), parse_rational_or_die(pw, "--pw")};
        if (!gtd::check_admissible(out.q)) {
            throw usage_error("parameters are not admissible");
        }
    } else if (allow_default) {
        out.q = {gtd::Rational(1), gtd::Rational(1, 4), gtd::Rational(1), gtd::Rational(1, 4)};
    } else {
        throw usage_error("parameters required: --sz/--pz/--sw/--pw or --truncated");
    }
    out.sz = gtd::rational_to_string(out.q.s_z);
    out.pz = gtd::rational_to_string(out.q.p_z);
    out.sw = gtd::rational_to_string(out.q.s_w);
    out.pw = gtd::rational_to_string(out.q.p_w);
    return out;
}

ordered_json param_json(const param_choice& pc) {
    ordered_json j;
    j["mode"] = pc.truncated ? "truncated" : "generic";
    if (pc.truncated) j["truncated"] = pc.truncated_text;
    j["sz"] = pc.sz;
    j["pz"] = pc.pz;
    j["sw"] = pc.sw;
    j["pw"] = pc.pw;
    return j;
}

// ---------------------------------------------------------------------------
// Worker pool (deterministic: work is indexed, output assembled in order)
// ---------------------------------------------------------------------------

std::size_t resolve_threads() {
    if (const char* env = std::getenv("GT_DYNAMICS_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 1 && v <= 1024) {
            return static_cast<std::size_t>(v);
        }
        throw usage_error("GT_DYNAMICS_THREADS must be a positive integer");
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    std::size_t threads = std::min(resolve_threads(), count);
    if (count == 0) return;
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open output file: " + path);
    return out;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct verify_options {
    std::string sz, pz, sw, pw, truncated;
    std::string suite;
    int level = 2;
    int count = 25;
    long long box = 6;
    std::uint64_t seed = 1;
    std::string out;
};

void add_record(std::vector<ordered_json>& records, int& failed, const std::string& instance,
                bool ok, const std::string& witness = "") {
    ordered_json r;
    r["instance"] = instance;
    r["status"] = ok ? "exact-pass" : "fail";
    if (!ok && !witness.empty()) r["witness"] = witness;
    if (!ok) ++failed;
    records.push_back(std::move(r));
}

gtd::signature random_signature(std::size_t n, long long box, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> u(-box, box);
    std::vector<long long> parts(n);
    for (auto& p : parts) p = u(rng);
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return gtd::signature(parts);
}

int run_verify(const verify_options& opt) {
    param_choice pc = resolve_params(opt.sz, opt.pz, opt.sw, opt.pw, opt.truncated, false);
    std::vector<ordered_json> records;
    int failed = 0;
    int inconclusive = 0;

    if (opt.suite == "intertwining") {
        if (opt.level < 2) throw usage_error("--level must be >= 2 for the intertwining suite");
        std::mt19937_64 rng(opt.seed);
        std::vector<gtd::signature> lambdas;
        lambdas.push_back(gtd::signature(std::vector<long long>(opt.level, 0)));
        for (int i = 1; i < opt.count; ++i) {
            lambdas.push_back(random_signature(static_cast<std::size_t>(opt.level), opt.box, rng));
        }
        for (const auto& lambda : lambdas) {
            auto rep = gtd::verify_intertwining_rows(pc.q, lambda);
            add_record(records, failed, "intertwining " + gtd::to_json(lambda), rep.ok,
                       rep.detail);
        }
    } else if (opt.suite == "measures") {
        auto rev = gtd::check_reversibility(pc.q, opt.level, -opt.box, opt.box);
        add_record(records, failed, "reversibility", rev.ok, rev.detail);
        auto inv = gtd::check_invariance(pc.q, opt.level, -opt.box, opt.box);
        add_record(records, failed, "invariance", inv.ok, inv.detail);
        if (pc.truncated) {
            for (int n = 1; n <= opt.level; ++n) {
                auto con = gtd::check_consistency_truncated(pc.ts, n);
                add_record(records, failed,
                           "link consistency level " + std::to_string(n), con.ok, con.detail);
            }
        }
    } else if (opt.suite == "generator-b2") {
        if (!pc.truncated) throw usage_error("the generator-b2 suite needs --truncated");
        gtd::phi_window w{pc.ts.support_lo(), pc.ts.support_hi()};
        for (std::size_t n = 1; n <= 2; ++n) {
            for (const auto& nu : gtd::signatures_in_box(n, w.lo, w.hi)) {
                gtd::phi_poly lhs = gtd::formal_generator_apply(pc.q, gtd::phi_det(nu), w);
                gtd::phi_poly rhs = gtd::lifted_generator_apply(pc.q, nu, w);
                bool raw = lhs == rhs;
                bool straightened =
                    gtd::straighten(lhs, n, w) == gtd::straighten(rhs, n, w);
                add_record(records, failed, "generator identity " + gtd::to_json(nu),
                           raw && straightened,
                           raw ? "straightened forms differ" : "window images differ");
            }
        }
        gtd::phi_poly total;
        for (long long n = w.lo; n <= w.hi; ++n) total = total + gtd::phi_poly::variable(n);
        add_record(records, failed, "conservation",
                   gtd::formal_generator_apply(pc.q, total, w).is_zero());
        for (long long m : {-1LL, 1LL}) {
            gtd::phi_window shifted{w.lo + m, w.hi + m};
            bool ok = true;
            for (const auto& nu : gtd::signatures_in_box(2, w.lo, w.hi)) {
                gtd::phi_poly direct =
                    gtd::formal_generator_apply(pc.q, gtd::phi_det(nu), w).reindex(m);
                gtd::phi_poly moved = gtd::formal_generator_apply(
                    gtd::shift_params(pc.q, m), gtd::phi_det(nu).reindex(m), shifted);
                ok = ok && direct == moved;
            }
            add_record(records, failed, "shift covariance m=" + std::to_string(m), ok);
        }
    } else {
        throw usage_error("unknown suite '" + opt.suite +
                          "' (available: intertwining, measures, generator-b2)");
    }

    ordered_json report;
    report["version"] = GTDYN_VERSION;
    report["command"] = "verify";
    report["suite"] = opt.suite;
    report["config"] = param_json(pc);
    report["config"]["level"] = opt.level;
    report["config"]["count"] = opt.count;
    report["config"]["box"] = opt.box;
    report["config"]["seed"] = opt.seed;
    report["records"] = records;
    report["failed"] = failed;
    report["inconclusive"] = inconclusive;
    report["warning"] = inconclusive > 0;
    report["ok"] = failed == 0;
    std::string text = report.dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        open_out(opt.out) << text;
    }
    return failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct simulate_options {
    std::string mode;  // gt | exclusion
    std::string sz, pz, sw, pw, truncated;
    int levels = 2;
    double T = 1.0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::string init = "central";
    std::string variant = "standard";
    std::string prefix = "run";
};

gtd::push_variant parse_variant(const std::string& text) {
    if (text == "standard") return gtd::push_variant::standard;
    if (text == "no-blocking") return gtd::push_variant::no_blocking;
    if (text == "no-left-push") return gtd::push_variant::no_left_push;
    throw usage_error("unknown --variant '" + text +
                      "' (standard, no-blocking, no-left-push)");
}

ordered_json mc_json(const gtd::mc_report& rep) {
    ordered_json j;
    j["ok"] = rep.ok;
    j["conclusive"] = rep.conclusive;
    j["p_value"] = rep.p_value;
    j["statistic"] = rep.statistic;
    j["dof"] = rep.dof;
    j["detail"] = rep.detail;
    return j;
}

int run_simulate(const simulate_options& opt) {
    if (opt.mode != "gt" && opt.mode != "exclusion") {
        throw usage_error("simulate mode must be 'gt' or 'exclusion'");
    }
    if (opt.levels < 1) throw usage_error("--levels must be >= 1");
    if (opt.init != "central" && opt.init != "zero") {
        throw usage_error("--init must be 'central' or 'zero'");
    }
    param_choice pc = resolve_params(opt.sz, opt.pz, opt.sw, opt.pw, opt.truncated, true);
    gtd::push_variant variant = parse_variant(opt.variant);
    std::size_t n = static_cast<std::size_t>(opt.levels);

    ordered_json report;
    report["version"] = GTDYN_VERSION;
    report["command"] = "simulate";
    report["config"] = param_json(pc);
    report["config"]["mode"] = opt.mode;
    report["config"]["levels"] = opt.levels;
    report["config"]["T"] = opt.T;
    report["config"]["paths"] = opt.paths;
    report["config"]["seed"] = opt.seed;
    report["config"]["init"] = opt.init;
    report["config"]["variant"] = opt.variant;
    report["config"]["output_prefix"] = opt.prefix;

    auto events_out = open_out(opt.prefix + "_events.jsonl");
    auto summary_out = open_out(opt.prefix + "_summary.csv");

    if (opt.mode == "gt") {
        std::vector<gtd::gt_scheme> inits;
        if (opt.paths > 0) {
            if (opt.init == "central") {
                inits = pc.truncated ? gtd::central_init_batch(pc.ts, n, opt.paths, opt.seed)
                                     : gtd::central_init_batch(pc.q, n, opt.paths, opt.seed);
            } else {
                gtd::gt_scheme zero;
                for (std::size_t k = 1; k <= n; ++k) {
                    zero.levels.emplace_back(std::vector<long long>(k, 0));
                }
                inits.assign(opt.paths, zero);
            }
        }
        std::vector<gtd::sim_result> results(opt.paths);
        parallel_for(opt.paths, [&](std::size_t i) {
            std::mt19937_64 rng = gtd::make_stream(opt.seed, i);
            results[i] = gtd::simulate_blockpush(pc.q, inits[i], opt.T, rng, variant);
        });
        for (std::size_t i = 0; i < opt.paths; ++i) {
            ordered_json head;
            head["path"] = i;
            head["init"] = ordered_json::parse(gtd::to_json(inits[i]));
            head["final"] = ordered_json::parse(gtd::to_json(results[i].final_state));
            events_out << head.dump() << "\n";
            for (const auto& e : results[i].events) events_out << gtd::to_json(e) << "\n";
        }
        // Per-level histograms of the final arrays.
        std::map<std::pair<int, gtd::signature>, std::size_t> hist;
        for (const auto& r : results) {
            for (std::size_t k = 0; k < r.final_state.depth(); ++k) {
                hist[{static_cast<int>(k) + 1, r.final_state.levels[k]}] += 1;
            }
        }
        summary_out << gtd::csv_row({"level", "state", "count"});
        for (const auto& [key, count] : hist) {
            summary_out << gtd::csv_row({std::to_string(key.first), gtd::to_json(key.second),
                                         std::to_string(count)});
        }
        if (opt.init == "central" && opt.paths > 0) {
            std::vector<gtd::gt_scheme> finals;
            finals.reserve(opt.paths);
            for (const auto& r : results) finals.push_back(r.final_state);
            report["centrality"] = mc_json(gtd::centrality_of_finals(finals, 0.01));
        } else {
            report["centrality"] = nullptr;
        }
    } else {
        std::vector<std::vector<long long>> inits;
        if (opt.paths > 0) {
            if (opt.init == "central") {
                auto schemes = pc.truncated
                                   ? gtd::central_init_batch(pc.ts, n, opt.paths, opt.seed)
                                   : gtd::central_init_batch(pc.q, n, opt.paths, opt.seed);
                inits.reserve(opt.paths);
                for (const auto& s : schemes) inits.push_back(gtd::corner_projection(s));
            } else {
                std::vector<long long> packed(n);
                for (std::size_t i = 0; i < n; ++i) packed[i] = static_cast<long long>(i);
                inits.assign(opt.paths, packed);
            }
        }
        std::vector<gtd::exclusion_result> results(opt.paths);
        parallel_for(opt.paths, [&](std::size_t i) {
            std::mt19937_64 rng = gtd::make_stream(opt.seed, i);
            results[i] = gtd::simulate_exclusion(pc.q, inits[i], opt.T, rng);
        });
        for (std::size_t i = 0; i < opt.paths; ++i) {
            ordered_json head;
            head["path"] = i;
            head["init"] = inits[i];
            head["final"] = results[i].final_state;
            events_out << head.dump() << "\n";
            for (const auto& e : results[i].events) events_out << gtd::to_json(e) << "\n";
        }
        std::map<std::vector<long long>, std::size_t> hist;
        for (const auto& r : results) hist[r.final_state] += 1;
        summary_out << gtd::csv_row({"config", "count"});
        for (const auto& [cfg, count] : hist) {
            summary_out << gtd::csv_row({ordered_json(cfg).dump(), std::to_string(count)});
        }
        if (opt.init == "central" && opt.paths > 0) {
            // Stationarity: the initial and final samples must share one law.
            std::map<std::vector<long long>, std::size_t> cell;
            for (const auto& c : inits) cell.try_emplace(c, cell.size());
            for (const auto& r : results) cell.try_emplace(r.final_state, cell.size());
            std::vector<double> a(cell.size(), 0.0), b(cell.size(), 0.0);
            for (const auto& c : inits) a[cell[c]] += 1.0;
            for (const auto& r : results) b[cell[r.final_state]] += 1.0;
            auto cs = gtd::two_sample_chi_square(a, b);
            ordered_json j;
            j["ok"] = cs.dof < 1.0 || cs.p_value >= 0.01;
            j["conclusive"] = cs.dof >= 1.0;
            j["p_value"] = cs.p_value;
            j["statistic"] = cs.stat;
            j["dof"] = cs.dof;
            report["stationarity"] = j;
        } else {
            report["stationarity"] = nullptr;
        }
    }

    open_out(opt.prefix + "_report.json") << report.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// semigroup
// ---------------------------------------------------------------------------

struct semigroup_options {
    std::string sz, pz, sw, pw, truncated;
    int level = 1;
    double t = 1.0;
    long long window = 40;
    double tol = -1;  // <0: default per mode
    std::string prefix = "semigroup";
};

int run_semigroup(const semigroup_options& opt) {
    param_choice pc = resolve_params(opt.sz, opt.pz, opt.sw, opt.pw, opt.truncated, false);
    if (opt.level < 1) throw usage_error("--level must be >= 1");
    if (opt.t < 0) throw usage_error("--t must be >= 0");
    std::size_t n = static_cast<std::size_t>(opt.level);

    ordered_json report;
    report["version"] = GTDYN_VERSION;
    report["command"] = "semigroup";
    report["config"] = param_json(pc);
    report["config"]["level"] = opt.level;
    report["config"]["t"] = opt.t;
    report["config"]["output_prefix"] = opt.prefix;

    auto matrix_out = open_out(opt.prefix + "_matrix.csv");
    auto write_matrix = [&](const std::vector<gtd::signature>& states,
                            const Eigen::MatrixXd& p) {
        std::vector<std::string> head{"state"};
        for (const auto& s : states) head.push_back(gtd::to_json(s));
        matrix_out << gtd::csv_row(head);
        for (std::size_t i = 0; i < states.size(); ++i) {
            std::vector<std::string> row{gtd::to_json(states[i])};
            for (std::size_t j = 0; j < states.size(); ++j) {
                row.push_back(gtd::format_double(p(static_cast<Eigen::Index>(i),
                                                   static_cast<Eigen::Index>(j))));
            }
            matrix_out << gtd::csv_row(row);
        }
    };

    if (pc.truncated) {
        double tol = opt.tol < 0 ? 1e-10 : opt.tol;
        gtd::sig_matrix m = gtd::exact_truncated_semigroup(pc.ts, n, opt.t);
        write_matrix(m.states, m.p);
        double residual = 0;
        double min_entry = 0;
        for (Eigen::Index i = 0; i < m.p.rows(); ++i) {
            residual = std::max(residual, std::abs(m.p.row(i).sum() - 1.0));
            min_entry = std::min(min_entry, m.p.row(i).minCoeff());
        }
        report["config"]["tol"] = tol;
        report["states"] = m.states.size();
        report["row_sum_residual"] = residual;
        report["min_entry"] = min_entry;
        bool ok = residual <= tol && min_entry >= -tol;
        report["ok"] = ok;
        open_out(opt.prefix + "_report.json") << report.dump(2) << "\n";
        if (!ok) {
            throw accuracy_error("row-sum residual " + std::to_string(residual) +
                                 " exceeds tolerance " + std::to_string(tol));
        }
        return 0;
    }

    // Generic parameters: Karlin-McGregor window with per-row defect report.
    if (opt.window < 5) throw usage_error("--window must be >= 5");
    long long box = opt.window / 5;
    long long inner = std::max<long long>(1, opt.window / 20);
    std::vector<gtd::signature> states;
    for (const auto& s :
         gtd::signatures_in_box(n, -box - static_cast<long long>(n), box)) {
        auto l = s.l_coords();
        bool ok = true;
        for (long long c : l) ok = ok && (-box <= c && c <= box);
        if (ok) states.push_back(s);
    }
    gtd::sig_matrix m = gtd::km_semigroup(pc.q, opt.t, states, -opt.window, opt.window, 1e-13);
    write_matrix(m.states, m.p);
    double inner_defect = 0;
    double outer_defect = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto l = states[i].l_coords();
        bool is_inner = true;
        for (long long c : l) is_inner = is_inner && (-inner <= c && c <= inner);
        double d = m.defect(static_cast<Eigen::Index>(i));
        if (is_inner) inner_defect = std::max(inner_defect, d);
        outer_defect = std::max(outer_defect, d);
    }
    report["config"]["window"] = opt.window;
    report["states"] = states.size();
    report["state_box"] = box;
    report["inner_box"] = inner;
    report["series_tail"] = m.series_tail;
    report["negative_values_clamped"] = m.clamped;
    report["negativity_error"] = m.negativity_error;
    report["inner_defect"] = inner_defect;
    report["max_defect"] = outer_defect;
    bool ok = !m.negativity_error;
    if (opt.tol >= 0) ok = ok && inner_defect <= opt.tol;
    report["ok"] = ok;
    if (opt.tol >= 0) report["config"]["tol"] = opt.tol;
    open_out(opt.prefix + "_report.json") << report.dump(2) << "\n";
    if (!ok) {
        throw accuracy_error(
            "stochasticity shortfall: inner defect " + std::to_string(inner_defect) +
            "; largest certified inner box " + std::to_string(inner) + " of state box " +
            std::to_string(box));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gelfand-Tsetlin interlacing dynamics: verification, simulation, semigroups"};
    app.set_version_flag("--version", GTDYN_VERSION);
    app.require_subcommand(1);

    verify_options vo;
    std::string v_config;
    auto* v = app.add_subcommand("verify", "run exact verification suites");
    v->add_option("--sz", vo.sz, "rational s_z (e.g. 1 or 5/4)");
    v->add_option("--pz", vo.pz, "rational p_z");
    v->add_option("--sw", vo.sw, "rational s_w");
    v->add_option("--pw", vo.pw, "rational p_w");
    v->add_option("--truncated", vo.truncated, "truncated parameters k,l,a,b");
    v->add_option("--suite", vo.suite, "intertwining | measures | generator-b2")->required();
    v->add_option("--level", vo.level, "level N the suite runs at");
    v->add_option("--count", vo.count, "number of random instances");
    v->add_option("--box", vo.box, "bound on random signature parts");
    v->add_option("--seed", vo.seed, "seed for instance generation");
    v->add_option("--out", vo.out, "report path (default: stdout)");
    v->add_option("--config", v_config, "flat key=value config file");

    simulate_options so;
    std::string s_config;
    auto* s = app.add_subcommand("simulate", "simulate interlacing or particle dynamics");
    s->add_option("mode", so.mode, "gt | exclusion")->required();
    s->add_option("--sz", so.sz, "rational s_z");
    s->add_option("--pz", so.pz, "rational p_z");
    s->add_option("--sw", so.sw, "rational s_w");
    s->add_option("--pw", so.pw, "rational p_w");
    s->add_option("--truncated", so.truncated, "truncated parameters k,l,a,b");
    s->add_option("--levels", so.levels, "number of levels / particles")->required();
    s->add_option("--T", so.T, "time horizon");
    s->add_option("--paths", so.paths, "number of trajectories")->required();
    s->add_option("--seed", so.seed, "master seed")->required();
    s->add_option("--init", so.init, "central | zero");
    s->add_option("--variant", so.variant, "standard | no-blocking | no-left-push");
    s->add_option("--output-prefix", so.prefix, "prefix for events/summary/report files");
    s->add_option("--config", s_config, "flat key=value config file");

    semigroup_options go;
    std::string g_config;
    auto* g = app.add_subcommand("semigroup", "transition matrices and defect reports");
    g->add_option("--sz", go.sz, "rational s_z");
    g->add_option("--pz", go.pz, "rational p_z");
    g->add_option("--sw", go.sw, "rational s_w");
    g->add_option("--pw", go.pw, "rational p_w");
    g->add_option("--truncated", go.truncated, "truncated parameters k,l,a,b");
    g->add_option("--level", go.level, "level N")->required();
    g->add_option("--t", go.t, "time")->required();
    g->add_option("--window", go.window, "level-1 window half-width (generic mode)");
    g->add_option("--tol", go.tol, "accuracy gate (default 1e-10 truncated, off generic)");
    g->add_option("--output-prefix", go.prefix, "prefix for matrix/report files");
    g->add_option("--config", g_config, "flat key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            return app.exit(e);
        }
        app.exit(e);
        return 2;
    }

    try {
        if (v->parsed()) {
            if (!v_config.empty()) {
                config_map cfg = load_config_file(v_config);
                merge_opt(v, cfg, "sz", vo.sz);
                merge_opt(v, cfg, "pz", vo.pz);
                merge_opt(v, cfg, "sw", vo.sw);
                merge_opt(v, cfg, "pw", vo.pw);
                merge_opt(v, cfg, "truncated", vo.truncated);
                merge_opt(v, cfg, "level", vo.level);
                merge_opt(v, cfg, "count", vo.count);
                merge_opt(v, cfg, "box", vo.box);
                merge_opt(v, cfg, "seed", vo.seed);
                merge_opt(v, cfg, "out", vo.out);
            }
            return run_verify(vo);
        }
        if (s->parsed()) {
            if (!s_config.empty()) {
                config_map cfg = load_config_file(s_config);
                merge_opt(s, cfg, "sz", so.sz);
                merge_opt(s, cfg, "pz", so.pz);
                merge_opt(s, cfg, "sw", so.sw);
                merge_opt(s, cfg, "pw", so.pw);
                merge_opt(s, cfg, "truncated", so.truncated);
                merge_opt(s, cfg, "levels", so.levels);
                merge_opt(s, cfg, "T", so.T);
                merge_opt(s, cfg, "paths", so.paths);
                merge_opt(s, cfg, "seed", so.seed);
                merge_opt(s, cfg, "init", so.init);
                merge_opt(s, cfg, "variant", so.variant);
                merge_opt(s, cfg, "output-prefix", so.prefix);
            }
            return run_simulate(so);
        }
        if (g->parsed()) {
            if (!g_config.empty()) {
                config_map cfg = load_config_file(g_config);
                merge_opt(g, cfg, "sz", go.sz);
                merge_opt(g, cfg, "pz", go.pz);
                merge_opt(g, cfg, "sw", go.sw);
                merge_opt(g, cfg, "pw", go.pw);
                merge_opt(g, cfg, "truncated", go.truncated);
                merge_opt(g, cfg, "level", go.level);
                merge_opt(g, cfg, "t", go.t);
                merge_opt(g, cfg, "window", go.window);
                merge_opt(g, cfg, "tol", go.tol);
                merge_opt(g, cfg, "output-prefix", go.prefix);
            }
            return run_semigroup(go);
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
