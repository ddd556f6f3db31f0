#include "forge/pipeline.hpp"

#include "forge/distance.hpp"
#include "forge/ensemble.hpp"
#include "forge/graph_metrics.hpp"
#include "forge/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace forge {

void PipelineConfig::validate() const {
    if (J < 1 || L <= J) throw std::invalid_argument("base matrix must have L > J >= 1");
    if (card < 1) throw std::invalid_argument("card must be at least 1");
    int z0 = z ? z : (L ? static_cast<int>(target_n / L) : 0);
    if (z0 < z_min) throw std::invalid_argument("starting z below z_min");
    if (!mask.empty() && static_cast<int>(mask.size()) != J * L)
        throw std::invalid_argument("mask size must be J*L");
    if (p_ber <= 0 || p_ber >= 1) throw std::invalid_argument("p_ber must be in (0,1)");
}

namespace {

// Max code size for the dense phases (lattice distance, LP weighting).
constexpr int kDenseLimit = 128;

std::string kv(std::initializer_list<std::pair<const char*, std::string>> items) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : items) {
        if (!first) os << ' ';
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Protograph-mode integer matrix for the permanent bound.
PolynomialMatrix proto_cells(const BaseMatrix& b) {
    PolynomialMatrix pm;
    pm.J = b.J;
    pm.L = b.L;
    pm.z = 0;
    pm.q = 2;
    pm.cells.assign(static_cast<size_t>(b.J) * b.L, {});
    for (int j = 0; j < b.J; ++j)
        for (int l = 0; l < b.L; ++l)
            if (b.at(j, l)) pm.at(j, l) = {0}; // cell size is the integer entry
    return pm;
}

double ebno_from_snr(double snr_db, double rate) {
    return snr_db - 10.0 * std::log10(rate);
}

long long cycles_at_girth(const TannerGraph& g) {
    int gg = girth(g);
    return gg == kInfiniteGirth ? 0 : count_cycles(g, gg);
}

} // namespace

void rank_candidates(std::vector<Candidate>& cands, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<uint64_t> coin(cands.size());
    for (auto& c : coin) c = rng();
    std::vector<size_t> idx(cands.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const Candidate &x = cands[a], &y = cands[b];
        if (x.score != y.score) return x.score < y.score;
        if (x.distance_ub != y.distance_ub) return x.distance_ub > y.distance_ub;
        if (x.girth != y.girth) return x.girth > y.girth;
        return coin[a] < coin[b];
    });
    std::vector<Candidate> out;
    out.reserve(cands.size());
    for (size_t i : idx) out.push_back(std::move(cands[i]));
    cands = std::move(out);
}

PipelineReport construct_pipeline(const PipelineConfig& cfg, const ExponentMatrix* prelifted) {
    cfg.validate();
    PipelineReport rep;
    std::mt19937_64 rng(cfg.seed);
    auto trace = [&](int step, std::initializer_list<std::pair<const char*, std::string>> items) {
        rep.trace.push_back("step=" + std::to_string(step) + " " + kv(items));
    };

    // Expansion-phase analysis shared between constructed and pre-lifted codes.
    auto analyze = [&](const ExponentMatrix& em, double threshold_db, double sigma_star,
                       Candidate& cand, bool filter) -> bool {
        cand.em = em;
        cand.threshold_db = threshold_db;
        auto h = expand(em);
        auto tg = tanner_from(h);
        cand.girth = girth(tg);
        auto g = derive_generator(h, 2);
        double rate = double(g.k) / g.n;
        double ebno = ebno_from_snr(cfg.snr_db, rate);

        // distance: cheap QC permanent bound, exact lattice pass on small codes
        PolynomialMatrix pm = PolynomialMatrix::from_exponent(em);
        long long d_vs = 0;
        try {
            d_vs = vs_upper_bound(pm, VsMode::shifts, cfg.threads);
            trace(6, {{"vs_bound", num(double(d_vs))}});
        } catch (const std::exception& e) {
            trace(6, {{"vs_bound", "unavailable"}, {"reason", e.what()}});
        }
        cand.distance_ub = static_cast<int>(d_vs);
        if (h.n_cols <= kDenseLimit) {
            LatticeDistanceConfig lc;
            lc.beta = 2;
            lc.threads = cfg.threads;
            lc.max_points = cfg.distance_budget;
            if (d_vs > 0) lc.upper_hint = d_vs;
            auto dr = lattice_distance(g, lc);
            cand.distance_lb = dr.lower_bound;
            cand.distance_ub = dr.upper_bound;
            cand.distance_exact = dr.exact;
            cand.budget_flag |= !dr.exact;
            trace(6, {{"distance_lb", num(dr.lower_bound)},
                      {"distance_ub", num(dr.upper_bound)},
                      {"exact", dr.exact ? "1" : "0"}});
        } else {
            cand.budget_flag |= d_vs == 0;
            trace(6, {{"distance", "vs-bound-only"}, {"n", num(h.n_cols)}});
        }
        if (cand.distance_ub > 0) {
            cand.p_ub = union_bound({{cand.distance_ub, double(em.z)}}, g.k, g.n, ebno);
            trace(6, {{"p_ub", num(cand.p_ub)}});
            if (filter && cand.p_ub > cfg.p_ber) {
                trace(6, {{"reject", "union-bound"},
                          {"p_ub", num(cand.p_ub)}, {"p_ber", num(cfg.p_ber)}});
                return false;
            }
        }

        // trapping sets: dense phases only at desk scale
        if (h.n_cols <= kDenseLimit) {
            cand.trapping_sets = enumerate_ts(tg, cfg.ts_a_max, cfg.ts_b_max, 1024);
            if (cand.trapping_sets.size() > 16) cand.trapping_sets.resize(16);
            weight_trapping_sets(h, cand.trapping_sets, cfg.seed);
            trace(7, {{"trapping_sets", num(double(cand.trapping_sets.size()))}});
        } else {
            cand.budget_flag = true;
            trace(7, {{"trapping_sets", "skipped"}, {"n", num(h.n_cols)}});
        }

        // finite-length penalty and the ranking score
        double sigma_gate = std::pow(10.0, -cfg.snr_db / 20.0);
        double p_wf = waterfall_penalty(g.n, sigma_gate, sigma_star, cfg.penalty_alpha,
                                        cfg.penalty_beta);
        cand.penalty = cand.threshold_db - p_wf;
        cand.score = cand.threshold_db + cand.penalty;
        trace(8, {{"penalty", num(cand.penalty)}, {"score", num(cand.score)}});
        return true;
    };

    if (prelifted) {
        // pure analysis pass over the supplied code
        auto thr = pexit_threshold(prelifted->base(), cfg.pexit_iters);
        trace(2, {{"mode", "prelifted"},
                  {"threshold", thr.found ? num(thr.ebno_db) : "none"}});
        Candidate cand;
        analyze(*prelifted, thr.found ? thr.ebno_db : cfg.snr_db,
                thr.found ? thr.sigma : std::pow(10.0, -cfg.snr_db / 20.0), cand,
                /*filter=*/false);
        rep.candidates.push_back(std::move(cand));
        rep.iterations = 1;
        rank_candidates(rep.candidates, cfg.seed);
        return rep;
    }

    int z = cfg.z ? cfg.z : static_cast<int>(cfg.target_n / cfg.L);
    BaseMatrix base;
    base.J = cfg.J;
    base.L = cfg.L;
    base.entries.assign(size_t(cfg.J) * cfg.L, 1); // regular degree profile
    std::vector<uint8_t> mask = cfg.mask;
    trace(1, {{"init", "regular"}, {"J", num(cfg.J)}, {"L", num(cfg.L)}, {"z", num(z)}});

    for (int iter = 1; iter <= cfg.iteration_cap; ++iter) {
        rep.iterations = iter;
        // protograph optimization phase
        if (!mask.empty())
            for (size_t i = 0; i < mask.size(); ++i)
                if (mask[i] && (rng() & 1)) base.entries[i] ^= 1;
        auto thr = pexit_threshold(base, cfg.pexit_iters);
        double threshold_db = thr.found ? thr.ebno_db : HUGE_VAL;
        trace(2, {{"threshold", thr.found ? num(thr.ebno_db) : "none"}});

        double rate0 = protograph_rate(base);
        double ebno0 = ebno_from_snr(cfg.snr_db, rate0);
        long long d_hat = 0;
        try {
            d_hat = vs_upper_bound(proto_cells(base), VsMode::protograph, cfg.threads);
        } catch (const std::exception&) {
        }
        long long n0 = base.L * z, k0 = n0 - base.J * z;
        double p_ub = d_hat > 0 ? union_bound_single(d_hat, double(n0), k0, n0, ebno0)
                                : 1.0;
        trace(3, {{"d_hat", num(double(d_hat))}, {"p_ub", num(p_ub)}});

        if (!(p_ub <= cfg.p_ber && threshold_db <= cfg.snr_db)) {
            if (z > cfg.z_min) {
                // grow the protograph, shrink the circulant
                base.J += 1;
                base.entries.resize(size_t(base.J) * base.L, 1);
                mask.clear();
                z = std::max(cfg.z_min, z / 2);
                trace(4, {{"branch", "4.2"}, {"J", num(base.J)}, {"z", num(z)}});
                continue;
            }
            trace(4, {{"branch", "4.3"}, {"stop", "z-at-minimum"}});
            break;
        }
        trace(4, {{"branch", "4.1"}});

        // protograph expansion phase
        LiftConfig lc;
        lc.target_girth = cfg.lift_girth;
        lc.rng_seed = rng();
        lc.max_steps = cfg.sa_steps;
        auto lift = lift_forbidden_coefficients(base, z, lc);
        if (!lift.success) {
            rep.budget_exhausted = true;
            trace(5, {{"lift", "failed"}});
            continue;
        }
        trace(5, {{"lift", "forbidden-coefficients"}, {"girth_target", num(lc.target_girth)}});

        Candidate cand;
        if (!analyze(lift.em, threshold_db, thr.sigma, cand, /*filter=*/true)) continue;

        // connectivity refinement: keep the annealed lift if it improves the
        // (girth, short-cycle count) pair
        LiftConfig sc = lc;
        sc.rng_seed = rng();
        auto sa = lift_simulated_annealing(base, z, sc, &lift.em);
        if (sa.success) {
            auto tg2 = tanner_from(expand(sa.em));
            int g2 = girth(tg2);
            long long c2 = cycles_at_girth(tg2);
            auto tg1 = tanner_from(expand(cand.em));
            long long c1 = cycles_at_girth(tg1);
            if (g2 > cand.girth || (g2 == cand.girth && c2 < c1)) {
                trace(9, {{"refined", "1"}, {"girth", num(g2)}, {"cycles", num(double(c2))}});
                Candidate cand2;
                if (analyze(sa.em, threshold_db, thr.sigma, cand2, /*filter=*/true))
                    cand = std::move(cand2);
            } else {
                trace(9, {{"refined", "0"}});
            }
        }

        rep.candidates.push_back(std::move(cand));
        trace(10, {{"candidates", num(double(rep.candidates.size()))},
                   {"card", num(cfg.card)}});
        if (static_cast<int>(rep.candidates.size()) >= cfg.card) break;
    }

    rep.budget_exhausted |= static_cast<int>(rep.candidates.size()) < cfg.card;
    rank_candidates(rep.candidates, cfg.seed);
    return rep;
}

} // namespace forge
