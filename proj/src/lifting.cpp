#include "forge/lifting.hpp"

#include "forge/graph_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace forge {

namespace {

long long egcd(long long a, long long b, long long& x, long long& y) {
    if (!b) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1, g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// All s in [0,z) with c*s == rhs (mod z).
std::vector<int> solve_congruence(long long c, long long rhs, int z) {
    c = ((c % z) + z) % z;
    rhs = ((rhs % z) + z) % z;
    std::vector<int> out;
    if (c == 0) {
        if (rhs == 0)
            for (int s = 0; s < z; ++s) out.push_back(s);
        return out;
    }
    long long x, y, g = egcd(c, z, x, y);
    if (rhs % g) return out;
    long long step = z / g;
    long long s0 = ((rhs / g) % step) * (((x % step) + step) % step) % step;
    for (long long t = 0; t < g; ++t) out.push_back(static_cast<int>((s0 + t * step) % z));
    std::sort(out.begin(), out.end());
    return out;
}

using CellSeq = std::vector<std::pair<int, int>>;

CellSeq canonical_chain(const CellSeq& seq) {
    int n = static_cast<int>(seq.size());
    CellSeq best = seq;
    CellSeq rev(n);
    for (int i = 0; i < n; ++i) rev[i] = seq[((1 - i) % n + n) % n];
    const CellSeq* variants[2] = {&seq, &rev};
    for (const CellSeq* base : variants)
        for (int rot = 0; rot < n; rot += 2) {
            CellSeq cand(n);
            for (int i = 0; i < n; ++i) cand[i] = (*base)[(i + rot) % n];
            if (cand < best) best = cand;
        }
    return best;
}

// Aggregated view of one chain class for fast congruence work.
struct IndexedChain {
    std::vector<std::pair<int, int>> cell_coeff; // (cell id, net signed coefficient)
    int length = 0;
    double weight = 1.0;
    int cur_sum = 0; // maintained mod z during annealing
};

struct ChainIndex {
    int z = 1;
    std::vector<IndexedChain> chains;
    std::vector<std::vector<int>> cell_chains; // cell id -> chain indices
    std::vector<int> cells;                    // nonzero cell ids, raster order
};

ChainIndex build_chain_index(const BaseMatrix& base, int z, int max_len, double weight_base) {
    ChainIndex idx;
    idx.z = z;
    idx.cell_chains.resize(static_cast<size_t>(base.J) * base.L);
    for (int j = 0; j < base.J; ++j)
        for (int l = 0; l < base.L; ++l)
            if (base.at(j, l)) idx.cells.push_back(j * base.L + l);
    for (const auto& chain : enumerate_chains(base, max_len)) {
        IndexedChain ic;
        ic.length = chain.length();
        ic.weight = std::pow(weight_base, (max_len - ic.length) / 2);
        std::map<int, int> coeff;
        for (size_t i = 0; i < chain.cells.size(); ++i) {
            int cell = chain.cells[i].first * base.L + chain.cells[i].second;
            coeff[cell] += i % 2 ? -1 : 1;
        }
        ic.cell_coeff.assign(coeff.begin(), coeff.end());
        int id = static_cast<int>(idx.chains.size());
        for (const auto& [cell, c] : ic.cell_coeff) idx.cell_chains[cell].push_back(id);
        idx.chains.push_back(std::move(ic));
    }
    return idx;
}

int chain_sum_of(const IndexedChain& ic, const std::vector<int>& shifts, int z) {
    long long s = 0;
    for (const auto& [cell, c] : ic.cell_coeff) s += static_cast<long long>(c) * shifts[cell];
    return static_cast<int>(((s % z) + z) % z);
}

bool girth_ok(const ChainIndex& idx, const std::vector<int>& shifts) {
    for (const auto& ic : idx.chains)
        if (chain_sum_of(ic, shifts, idx.z) == 0) return false;
    return true;
}

ExponentMatrix to_em(const BaseMatrix& base, int z, const std::vector<int>& shifts) {
    ExponentMatrix em;
    em.J = base.J;
    em.L = base.L;
    em.z = z;
    em.shifts.assign(static_cast<size_t>(base.J) * base.L, -1);
    for (size_t i = 0; i < em.shifts.size(); ++i)
        if (base.entries[i]) em.shifts[i] = shifts[i];
    return em;
}

void verify_lift(const ExponentMatrix& em, int target_girth) {
    int g = girth(tanner_from(expand(em)));
    if (g < target_girth) throw std::logic_error("lifter returned a matrix below the target girth");
}

} // namespace

int chain_sum(const CycleChain& chain, const ExponentMatrix& em) {
    long long s = 0;
    for (size_t i = 0; i < chain.cells.size(); ++i) {
        auto [j, l] = chain.cells[i];
        int p = em.at(j, l);
        if (p < 0) throw std::invalid_argument("chain touches a zero (shift -1) cell");
        s += i % 2 ? -p : p;
    }
    return static_cast<int>(((s % em.z) + em.z) % em.z);
}

std::vector<CycleChain> enumerate_chains(const BaseMatrix& base, int max_len) {
    if (max_len > 12) throw std::invalid_argument("chain enumeration capped at length 12");
    std::set<CellSeq> seen;
    std::vector<CycleChain> out;
    CellSeq seq;

    // Extend the alternating cell sequence; move i (from cells[i]) stays in the
    // same row when i is even, in the same column when i is odd.
    std::function<void(int)> dfs = [&](int target_len) {
        int i = static_cast<int>(seq.size());
        if (i == target_len) {
            // Closure move target_len-1 is a column move back to cells[0].
            if (seq.back().second == seq[0].second && seq.back().first != seq[0].first) {
                auto key = canonical_chain(seq);
                if (seen.insert(key).second) {
                    CycleChain c;
                    c.cells = key;
                    out.push_back(std::move(c));
                }
            }
            return;
        }
        auto [j, l] = seq.back();
        if ((i - 1) % 2 == 0) { // row move: same row, new column
            for (int l2 = 0; l2 < base.L; ++l2)
                if (l2 != l && base.at(j, l2)) {
                    seq.emplace_back(j, l2);
                    dfs(target_len);
                    seq.pop_back();
                }
        } else { // column move: same column, new row
            for (int j2 = 0; j2 < base.J; ++j2)
                if (j2 != j && base.at(j2, l)) {
                    seq.emplace_back(j2, l);
                    dfs(target_len);
                    seq.pop_back();
                }
        }
    };

    for (int len = 4; len <= max_len; len += 2)
        for (int j = 0; j < base.J; ++j)
            for (int l = 0; l < base.L; ++l)
                if (base.at(j, l)) {
                    seq = {{j, l}};
                    dfs(len);
                }
    return out;
}

LiftResult lift_forbidden_coefficients(const BaseMatrix& base, int z, const LiftConfig& cfg) {
    base.validate();
    auto idx = build_chain_index(base, z, cfg.target_girth - 2, cfg.length_weight_base);
    std::mt19937_64 rng(cfg.rng_seed);
    LiftResult res;
    std::vector<int> shifts(static_cast<size_t>(base.J) * base.L, -1);
    std::vector<int> unassigned(idx.chains.size());

    for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
        for (int c : idx.cells) shifts[c] = -1;
        for (size_t i = 0; i < idx.chains.size(); ++i)
            unassigned[i] = static_cast<int>(idx.chains[i].cell_coeff.size());
        bool ok = true;
        for (int cell : idx.cells) {
            std::vector<char> forbidden(z, 0);
            for (int cid : idx.cell_chains[cell]) {
                if (unassigned[cid] != 1) continue;
                const auto& ic = idx.chains[cid];
                long long rest = 0, c_here = 0;
                for (const auto& [cc, coef] : ic.cell_coeff) {
                    if (cc == cell)
                        c_here = coef;
                    else
                        rest += static_cast<long long>(coef) * shifts[cc];
                }
                for (int s : solve_congruence(c_here, -rest, z)) forbidden[s] = 1;
            }
            std::vector<int> allowed;
            for (int s = 0; s < z; ++s)
                if (!forbidden[s]) allowed.push_back(s);
            if (allowed.empty()) {
                ok = false;
                break;
            }
            shifts[cell] = allowed[rng() % allowed.size()];
            for (int cid : idx.cell_chains[cell]) --unassigned[cid];
        }
        if (ok) {
            if (!girth_ok(idx, shifts)) throw std::logic_error("forbidden-shift bookkeeping failed");
            res.success = true;
            res.restarts = attempt;
            res.em = to_em(base, z, shifts);
            verify_lift(res.em, cfg.target_girth);
            return res;
        }
    }
    res.restarts = cfg.max_restarts + 1;
    return res;
}

LiftResult lift_guess_and_test(const BaseMatrix& base, int z, const LiftConfig& cfg) {
    base.validate();
    auto idx = build_chain_index(base, z, cfg.target_girth - 2, cfg.length_weight_base);
    std::mt19937_64 rng(cfg.rng_seed);
    LiftResult res;
    std::vector<int> shifts(static_cast<size_t>(base.J) * base.L, -1);
    for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
        for (int c : idx.cells) shifts[c] = static_cast<int>(rng() % z);
        if (girth_ok(idx, shifts)) {
            res.success = true;
            res.restarts = attempt;
            res.em = to_em(base, z, shifts);
            verify_lift(res.em, cfg.target_girth);
            return res;
        }
    }
    res.restarts = cfg.max_restarts + 1;
    return res;
}

LiftResult lift_simulated_annealing(const BaseMatrix& base, int z, const LiftConfig& cfg,
                                    const ExponentMatrix* init) {
    base.validate();
    auto idx = build_chain_index(base, z, cfg.target_girth - 2, cfg.length_weight_base);
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<int> shifts(static_cast<size_t>(base.J) * base.L, -1);
    double best_phi = std::numeric_limits<double>::infinity();
    long long best_closed = -1;
    std::vector<int> best_shifts;

    LiftResult res;
    bool first_round = true;
    while (res.steps < cfg.max_steps) {
        if (first_round && init) {
            if (init->J != base.J || init->L != base.L || init->z != z)
                throw std::invalid_argument("initial matrix shape mismatch");
            shifts = init->shifts;
        } else {
            for (int c : idx.cells) shifts[c] = static_cast<int>(rng() % z);
        }
        first_round = false;

        double phi = 0;
        long long closed = 0;
        for (auto& ic : idx.chains) {
            ic.cur_sum = chain_sum_of(ic, shifts, z);
            if (ic.cur_sum == 0) {
                phi += ic.weight;
                ++closed;
            }
        }
        if (phi < best_phi) {
            best_phi = phi;
            best_closed = closed;
            best_shifts = shifts;
        }

        long long nstep = 0;
        int stall = 0;
        std::vector<double> theta(z);
        while (res.steps < cfg.max_steps && stall < cfg.stall_window && phi > 0) {
            ++res.steps;
            ++nstep;
            int cell = idx.cells[rng() % idx.cells.size()];
            int s_old = shifts[cell];
            std::fill(theta.begin(), theta.end(), 0.0);
            for (int cid : idx.cell_chains[cell]) {
                const auto& ic = idx.chains[cid];
                long long c_here = 0;
                for (const auto& [cc, coef] : ic.cell_coeff)
                    if (cc == cell) c_here = coef;
                long long rest = ic.cur_sum - c_here * s_old;
                for (int s : solve_congruence(c_here, -rest, z)) theta[s] += ic.weight;
            }
            double tmin = theta[0], tmax = theta[0];
            for (int s = 1; s < z; ++s) {
                tmin = std::min(tmin, theta[s]);
                tmax = std::max(tmax, theta[s]);
            }
            double temp = nstep == 1 ? tmax : cfg.eta * phi / (static_cast<double>(nstep) * nstep);
            int s_new;
            if (temp <= 1e-12 || tmax == tmin) {
                // Degenerate temperature: greedy among the minimizers.
                std::vector<int> mins;
                for (int s = 0; s < z; ++s)
                    if (theta[s] == tmin) mins.push_back(s);
                s_new = mins[rng() % mins.size()];
            } else {
                double total = 0;
                for (int s = 0; s < z; ++s) total += std::exp(-(theta[s] - tmin) / temp);
                double pick = unif(rng) * total, acc = 0;
                s_new = z - 1;
                for (int s = 0; s < z; ++s) {
                    acc += std::exp(-(theta[s] - tmin) / temp);
                    if (pick <= acc) {
                        s_new = s;
                        break;
                    }
                }
            }
            if (s_new != s_old) {
                for (int cid : idx.cell_chains[cell]) {
                    auto& ic = idx.chains[cid];
                    long long c_here = 0;
                    for (const auto& [cc, coef] : ic.cell_coeff)
                        if (cc == cell) c_here = coef;
                    if (ic.cur_sum == 0) {
                        phi -= ic.weight;
                        --closed;
                    }
                    long long ns = ic.cur_sum + c_here * (s_new - s_old);
                    ic.cur_sum = static_cast<int>(((ns % z) + z) % z);
                    if (ic.cur_sum == 0) {
                        phi += ic.weight;
                        ++closed;
                    }
                }
                shifts[cell] = s_new;
            }
            if (phi < best_phi) {
                best_phi = phi;
                best_closed = closed;
                best_shifts = shifts;
                stall = 0;
            } else {
                ++stall;
            }
        }
        if (phi == 0) break;
    }

    res.em = to_em(base, z, best_shifts);
    res.residual_cycles = best_closed;
    res.success = best_closed == 0;
    if (res.success) verify_lift(res.em, cfg.target_girth);
    return res;
}

ExponentMatrix adapt_length(const ExponentMatrix& em0, int z_k, AdaptMode mode, int r) {
    em0.validate();
    if (z_k < 1 || z_k > em0.z) throw std::invalid_argument("target circulant size must be in [1, z0]");
    if (mode == AdaptMode::floor_scale_modular && (r < 1 || r >= em0.z))
        throw std::invalid_argument("mapping coefficient must be in [1, z0)");
    ExponentMatrix em = em0;
    em.z = z_k;
    for (int& e : em.shifts) {
        if (e < 0) continue;
        switch (mode) {
            case AdaptMode::floor:
                e = static_cast<int>(static_cast<long long>(z_k) * e / em0.z);
                break;
            case AdaptMode::modular:
                e = e % z_k;
                break;
            case AdaptMode::floor_scale_modular: {
                long long scaled = static_cast<long long>(r) * e % em0.z;
                e = static_cast<int>(static_cast<long long>(z_k) * scaled / em0.z);
                break;
            }
        }
    }
    em.validate();
    return em;
}

int select_fsm_r(const ExponentMatrix& em0, int z_k, int target_girth) {
    auto base = em0.base();
    auto chains = enumerate_chains(base, target_girth - 2);
    int best_r = 1;
    long long best_penalty = -1, best_count = -1;
    for (int r = 1; r < em0.z; ++r) {
        auto em = adapt_length(em0, z_k, AdaptMode::floor_scale_modular, r);
        int achieved = target_girth;
        long long count = 0;
        for (const auto& c : chains)
            if (chain_sum(c, em) == 0) {
                ++count;
                achieved = std::min(achieved, c.length());
            }
        long long penalty = target_girth - achieved;
        if (best_penalty < 0 || penalty < best_penalty ||
            (penalty == best_penalty && count < best_count)) {
            best_penalty = penalty;
            best_count = count;
            best_r = r;
        }
    }
    return best_r;
}

} // namespace forge
