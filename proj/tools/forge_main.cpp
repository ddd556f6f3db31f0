#include "CLI11.hpp"
#include "json.hpp"

#include "forge/core.hpp"
#include "forge/distance.hpp"
#include "forge/ensemble.hpp"
#include "forge/graph_metrics.hpp"
#include "forge/lattice.hpp"
#include "forge/lifting.hpp"
#include "forge/pipeline.hpp"
#include "forge/simulator.hpp"
#include "forge/trapping.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace forge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<double> parse_snr_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double a, step, b;
        char c1, c2;
        std::istringstream is(spec);
        if (!(is >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || step <= 0)
            throw std::runtime_error("bad snr range, expected a:step:b");
        for (double v = a; v <= b + 1e-9; v += step) out.push_back(v);
    } else {
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::runtime_error("empty snr grid");
    return out;
}

DecoderConfig parse_decoder(const std::string& spec) {
    DecoderConfig cfg;
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    double arg = colon == std::string::npos ? 0.0 : std::stod(spec.substr(colon + 1));
    if (name == "sp") {
        cfg.algorithm = DecoderAlgorithm::sum_product;
    } else if (name == "ms") {
        cfg.algorithm = DecoderAlgorithm::min_sum;
    } else if (name == "nms") {
        cfg.algorithm = DecoderAlgorithm::normalized_min_sum;
        cfg.factor = arg > 0 ? arg : 0.75;
    } else if (name == "oms") {
        cfg.algorithm = DecoderAlgorithm::offset_min_sum;
        cfg.offset = arg;
    } else {
        throw std::runtime_error("unknown decoder " + spec);
    }
    return cfg;
}

// Accept either an alist ("n m" header) or an exponent matrix ("J L z").
SparseBinaryMatrix load_h(const std::string& text) {
    try {
        return parse_alist(text);
    } catch (const std::exception&) {
        return expand(parse_exponent_matrix(text));
    }
}

json candidate_json(const Candidate& c) {
    json j;
    j["threshold_db"] = c.threshold_db;
    j["penalty"] = c.penalty;
    j["score"] = c.score;
    j["distance_lb"] = c.distance_lb;
    j["distance_ub"] = c.distance_ub;
    j["distance_exact"] = c.distance_exact;
    j["p_ub"] = c.p_ub;
    j["girth"] = c.girth;
    j["budget_flag"] = c.budget_flag;
    json ts = json::array();
    for (const auto& t : c.trapping_sets)
        ts.push_back({{"a", t.a}, {"b", t.b}, {"pseudoweight", t.pseudoweight}});
    j["trapping_sets"] = ts;
    j["exponent_matrix"] = format_exponent_matrix(c.em);
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-cyclic LDPC construction and analysis toolkit"};
    app.require_subcommand(1);
    // --h is a data flag below, so help stays long-form only
    app.set_help_flag("--help", "print help");
    uint64_t seed = 1;
    int threads = 1;
    bool as_json = false;
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--threads", threads, "worker thread count");
    app.add_flag("--json", as_json, "JSON output");

    auto add_sub = [&](const char* name, const char* desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "print help");
        sub->fallthrough(); // let global --seed/--threads/--json trail the subcommand
        return sub;
    };

    // lift
    auto* lift_cmd = add_sub("lift", "assign circulant shifts to a base matrix");
    std::string lift_base, lift_method = "fc";
    int lift_rows = 0, lift_cols = 0, lift_z = 0, lift_girth = 6, lift_restarts = 100;
    long long lift_steps = 100000;
    lift_cmd->add_option("--base", lift_base, "base matrix file, - for stdin");
    lift_cmd->add_option("--rows", lift_rows, "all-ones base rows (if no --base)");
    lift_cmd->add_option("--cols", lift_cols, "all-ones base cols (if no --base)");
    lift_cmd->add_option("--z", lift_z, "circulant size")->required();
    lift_cmd->add_option("--girth", lift_girth, "target girth");
    lift_cmd->add_option("--method", lift_method, "fc | sa | guess");
    lift_cmd->add_option("--steps", lift_steps, "annealing step budget");
    lift_cmd->add_option("--restarts", lift_restarts, "restart budget");

    // analyze
    auto* an_cmd = add_sub("analyze", "graph metrics of a parity-check matrix");
    std::string an_h;
    an_cmd->add_option("--h", an_h, "alist file, - for stdin")->required();

    // distance
    auto* d_cmd = add_sub("distance", "minimum distance of the code of H");
    std::string d_h, d_method = "bz";
    int d_q = 2, d_beta = 2;
    long long d_budget = 1 << 20;
    d_cmd->add_option("--h", d_h, "alist file, - for stdin")->required();
    d_cmd->add_option("--q", d_q, "field size (2 or 3)");
    d_cmd->add_option("--method", d_method, "brute | bz | lattice | prob");
    d_cmd->add_option("--budget", d_budget, "enumeration budget");
    d_cmd->add_option("--beta", d_beta, "BKZ block size");

    // threshold
    auto* t_cmd = add_sub("threshold", "iterative decoding threshold of a protograph");
    std::string t_base;
    int t_iters = 200;
    bool t_poly = false;
    t_cmd->add_option("--base", t_base, "base matrix file, - for stdin")->required();
    t_cmd->add_option("--iters", t_iters, "message-passing iterations");
    t_cmd->add_flag("--poly", t_poly, "polynomial mutual-information fit");

    // ts
    auto* ts_cmd = add_sub("ts", "trapping-set enumeration and weighting");
    std::string ts_h;
    int ts_a = 5, ts_b = 2, ts_z = 1;
    double ts_sigma = 0;
    bool ts_weight = false;
    ts_cmd->add_option("--h", ts_h, "alist file, - for stdin")->required();
    ts_cmd->add_option("--a-max", ts_a, "max variable nodes");
    ts_cmd->add_option("--b-max", ts_b, "max odd checks");
    ts_cmd->add_flag("--weight", ts_weight, "LP pseudoweights");
    ts_cmd->add_option("--sigma", ts_sigma, "noise level for the union bound");
    ts_cmd->add_option("--z", ts_z, "circulant multiplier for the union bound");

    // simulate
    auto* s_cmd = add_sub("simulate", "Monte-Carlo BER/FER measurement");
    std::string s_h, s_dec = "sp", s_sched = "flooding", s_snr = "1.0:0.5:3.0";
    int s_iters = 50;
    long long s_min_errors = 100, s_max_frames = 100000;
    s_cmd->add_option("--h", s_h, "alist file, - for stdin")->required();
    s_cmd->add_option("--decoder", s_dec, "sp | ms | nms:f | oms:o");
    s_cmd->add_option("--schedule", s_sched, "flooding | layered");
    s_cmd->add_option("--iters", s_iters, "decoder iterations");
    s_cmd->add_option("--snr", s_snr, "a:step:b range or comma list, dB");
    s_cmd->add_option("--min-errors", s_min_errors, "frame errors per point (0: frames only)");
    s_cmd->add_option("--max-frames", s_max_frames, "frame cap per point");

    // svp
    auto* v_cmd = add_sub("svp", "shortest lattice vector");
    std::string v_basis, v_strategy = "se";
    int v_beta = 0;
    v_cmd->add_option("--basis", v_basis, "basis file (m dim, then rows), - for stdin")
        ->required();
    v_cmd->add_option("--beta", v_beta, "BKZ block size before enumeration (0: none)");
    v_cmd->add_option("--strategy", v_strategy, "fkp | se | parallel | batched");

    // pipeline
    auto* p_cmd = add_sub("pipeline", "end-to-end code construction");
    std::string p_config, p_em;
    p_cmd->add_option("--config", p_config, "JSON config file, - for stdin")->required();
    p_cmd->add_option("--em", p_em, "pre-lifted exponent matrix (analysis pass)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lift_cmd) {
            BaseMatrix base;
            if (!lift_base.empty()) {
                base = parse_base_matrix(slurp(lift_base));
            } else if (lift_rows > 0 && lift_cols > 0) {
                base.J = lift_rows;
                base.L = lift_cols;
                base.entries.assign(size_t(lift_rows) * lift_cols, 1);
            } else {
                throw std::runtime_error("need --base or --rows/--cols");
            }
            LiftConfig cfg;
            cfg.target_girth = lift_girth;
            cfg.max_restarts = lift_restarts;
            cfg.max_steps = lift_steps;
            cfg.rng_seed = seed;
            LiftResult res = lift_method == "sa" ? lift_simulated_annealing(base, lift_z, cfg)
                             : lift_method == "guess" ? lift_guess_and_test(base, lift_z, cfg)
                                                      : lift_forbidden_coefficients(base, lift_z, cfg);
            if (!res.success) {
                std::cerr << "lift failed: girth " << lift_girth << " unreachable within budget\n";
                return kExitInfeasible;
            }
            int g = girth(tanner_from(expand(res.em)));
            if (as_json) {
                json j;
                j["girth"] = g;
                j["restarts"] = res.restarts;
                j["steps"] = res.steps;
                j["exponent_matrix"] = format_exponent_matrix(res.em);
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << format_exponent_matrix(res.em);
            }
            return kExitOk;
        }

        if (*an_cmd) {
            auto h = load_h(slurp(an_h));
            auto g = tanner_from(h);
            int gg = girth(g);
            json j;
            j["n"] = g.n;
            j["m"] = g.m;
            j["girth"] = gg == kInfiniteGirth ? -1 : gg;
            if (gg != kInfiniteGirth) {
                json cyc;
                for (int len = gg; len <= gg + 4; len += 2)
                    cyc[std::to_string(len)] = count_cycles(g, len);
                j["cycles"] = cyc;
                auto ace = ace_spectrum(g, gg + 4);
                json a;
                for (const auto& [len, hist] : ace.ace)
                    a[std::to_string(len)] = hist.begin()->first; // min ACE per length
                j["ace_min"] = a;
            }
            if (as_json) {
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "n=" << g.n << " m=" << g.m << " girth="
                          << (gg == kInfiniteGirth ? -1 : gg) << '\n';
                if (gg != kInfiniteGirth)
                    for (int len = gg; len <= gg + 4; len += 2)
                        std::cout << "cycles[" << len << "]=" << count_cycles(g, len) << '\n';
            }
            return kExitOk;
        }

        if (*d_cmd) {
            auto h = load_h(slurp(d_h));
            auto g = derive_generator(h, d_q);
            DistanceReport rep;
            if (d_method == "brute") {
                rep = brute_force_distance(g);
            } else if (d_method == "bz") {
                rep = brouwer_zimmermann(g, d_budget, threads);
            } else if (d_method == "lattice") {
                LatticeDistanceConfig cfg;
                cfg.beta = d_beta;
                cfg.threads = threads;
                cfg.max_points = size_t(d_budget);
                rep = lattice_distance(g, cfg);
            } else if (d_method == "prob") {
                ProbabilisticConfig cfg;
                cfg.beta = d_beta;
                cfg.samples = d_budget;
                cfg.seed = seed;
                rep = probabilistic_distance(g, cfg);
            } else {
                throw std::runtime_error("unknown method " + d_method);
            }
            if (as_json) {
                json j;
                j["lower_bound"] = rep.lower_bound;
                j["upper_bound"] = rep.upper_bound;
                j["exact"] = rep.exact;
                j["enumerated"] = rep.enumerated;
                j["trace"] = rep.trace;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "d in [" << rep.lower_bound << ", " << rep.upper_bound << "]"
                          << (rep.exact ? " exact" : " bounds-only") << '\n';
            }
            return rep.exact || d_method == "prob" ? kExitOk : kExitBudget;
        }

        if (*t_cmd) {
            auto base = parse_base_matrix(slurp(t_base));
            auto res = pexit_threshold(base, t_iters, -1,
                                       t_poly ? MutualInfoMethod::polynomial
                                              : MutualInfoMethod::quadrature);
            if (!res.found) {
                std::cerr << "no threshold in the search window\n";
                return kExitInfeasible;
            }
            if (as_json) {
                json j;
                j["ebno_db"] = res.ebno_db;
                j["sigma"] = res.sigma;
                j["iterations"] = res.iterations;
                j["rate"] = res.rate;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "threshold " << res.ebno_db << " dB (sigma " << res.sigma
                          << ", " << res.iterations << " iters)\n";
            }
            return kExitOk;
        }

        if (*ts_cmd) {
            auto h = load_h(slurp(ts_h));
            auto sets = enumerate_ts(tanner_from(h), ts_a, ts_b);
            if (ts_weight || ts_sigma > 0) weight_trapping_sets(h, sets, seed);
            json arr = json::array();
            for (const auto& t : sets)
                arr.push_back({{"a", t.a}, {"b", t.b}, {"nodes", t.nodes},
                               {"pseudoweight", t.pseudoweight}});
            json j;
            j["count"] = sets.size();
            j["sets"] = arr;
            if (ts_sigma > 0) j["union_bound"] = ts_union_bound(sets, ts_z, ts_sigma);
            if (as_json) {
                std::cout << j.dump(2) << '\n';
            } else {
                for (const auto& t : sets)
                    std::cout << "TS(" << t.a << "," << t.b << ") w=" << t.pseudoweight << '\n';
                if (ts_sigma > 0)
                    std::cout << "union_bound=" << ts_union_bound(sets, ts_z, ts_sigma) << '\n';
            }
            return kExitOk;
        }

        if (*s_cmd) {
            auto h = load_h(slurp(s_h));
            DecoderConfig dec = parse_decoder(s_dec);
            dec.schedule = s_sched == "layered" ? Schedule::layered : Schedule::flooding;
            dec.max_iters = s_iters;
            MonteCarloConfig mc;
            mc.snr_db = parse_snr_grid(s_snr);
            mc.min_errors = s_min_errors;
            mc.max_frames = s_max_frames;
            mc.seed = seed;
            mc.threads = threads;
            auto pts = monte_carlo(h, dec, mc);
            if (as_json) {
                json arr = json::array();
                for (const auto& p : pts)
                    arr.push_back({{"snr_db", p.snr_db}, {"frames", p.frames},
                                   {"bit_errs", p.bit_errs}, {"frame_errs", p.frame_errs},
                                   {"ber", p.ber}, {"fer", p.fer},
                                   {"ber_ci", {p.ber_lo, p.ber_hi}},
                                   {"fer_ci", {p.fer_lo, p.fer_hi}}});
                std::cout << arr.dump(2) << '\n';
            } else {
                std::cout << to_csv(pts);
            }
            return kExitOk;
        }

        if (*v_cmd) {
            std::istringstream is(slurp(v_basis));
            auto basis = read_basis(is);
            if (v_beta > 0) basis = bkz_reduce(basis, v_beta).basis;
            auto gso = orthogonalize(basis);
            EnumStrategy strat = v_strategy == "fkp"        ? EnumStrategy::fkp
                                 : v_strategy == "parallel" ? EnumStrategy::parallel
                                 : v_strategy == "batched"  ? EnumStrategy::batched
                                                            : EnumStrategy::schnorr_euchner;
            auto res = enumerate_shortest(basis, initial_radius(basis, gso), strat, threads);
            if (!res.found) {
                std::cerr << "no vector inside the initial radius\n";
                return kExitInfeasible;
            }
            if (as_json) {
                json j;
                j["norm_sq"] = res.norm_sq;
                j["coords"] = res.x;
                j["vector"] = basis.vector_of(res.x);
                j["nodes"] = res.nodes;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "norm_sq=" << res.norm_sq << '\n';
            }
            return kExitOk;
        }

        if (*p_cmd) {
            json jc = json::parse(slurp(p_config));
            PipelineConfig cfg;
            cfg.J = jc.value("J", cfg.J);
            cfg.L = jc.value("L", cfg.L);
            cfg.z = jc.value("z", cfg.z);
            cfg.z_min = jc.value("z_min", cfg.z_min);
            cfg.target_n = jc.value("target_n", cfg.target_n);
            cfg.snr_db = jc.value("snr_db", cfg.snr_db);
            cfg.p_ber = jc.value("p_ber", cfg.p_ber);
            cfg.card = jc.value("card", cfg.card);
            cfg.iteration_cap = jc.value("iteration_cap", cfg.iteration_cap);
            cfg.pexit_iters = jc.value("pexit_iters", cfg.pexit_iters);
            cfg.distance_budget = jc.value("distance_budget", cfg.distance_budget);
            cfg.lift_girth = jc.value("lift_girth", cfg.lift_girth);
            cfg.sa_steps = jc.value("sa_steps", cfg.sa_steps);
            cfg.ts_a_max = jc.value("ts_a_max", cfg.ts_a_max);
            cfg.ts_b_max = jc.value("ts_b_max", cfg.ts_b_max);
            cfg.penalty_alpha = jc.value("penalty_alpha", cfg.penalty_alpha);
            cfg.penalty_beta = jc.value("penalty_beta", cfg.penalty_beta);
            cfg.seed = jc.value("seed", seed);
            cfg.threads = jc.value("threads", threads);
            if (jc.contains("mask")) cfg.mask = jc["mask"].get<std::vector<uint8_t>>();
            PipelineReport rep;
            if (!p_em.empty()) {
                auto em = parse_exponent_matrix(slurp(p_em));
                rep = construct_pipeline(cfg, &em);
            } else {
                rep = construct_pipeline(cfg);
            }
            json j;
            j["iterations"] = rep.iterations;
            j["budget_exhausted"] = rep.budget_exhausted;
            json cands = json::array();
            for (const auto& c : rep.candidates) cands.push_back(candidate_json(c));
            j["candidates"] = cands;
            j["trace"] = rep.trace;
            std::cout << j.dump(2) << '\n';
            if (rep.candidates.empty()) return kExitInfeasible;
            return rep.budget_exhausted ? kExitBudget : kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
