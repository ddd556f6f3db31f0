#include "forge/distance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace forge {

namespace {

int weight_of(const std::vector<uint8_t>& v) {
    int w = 0;
    for (uint8_t x : v) w += x != 0;
    return w;
}

bool lex_less_u8(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// One generator form of the information-set chain.
struct ChainForm {
    std::vector<std::vector<uint8_t>> rows; // k x n
    int relative_rank = 0;
};

// Successive Gauss passes, each pivoting preferentially on columns not yet in
// any earlier information set; stops when no new positions can be covered.
std::vector<ChainForm> information_set_chain(const GeneratorMatrix& g) {
    const int k = g.k, n = g.n, q = g.q;
    std::vector<char> covered(n, 0);
    std::vector<ChainForm> chain;
    for (;;) {
        std::vector<std::vector<uint8_t>> m(k, std::vector<uint8_t>(n));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < n; ++c) m[r][c] = g.at(r, c);
        // Column priority: uncovered first.
        std::vector<int> order;
        for (int c = 0; c < n; ++c)
            if (!covered[c]) order.push_back(c);
        int uncovered_count = static_cast<int>(order.size());
        for (int c = 0; c < n; ++c)
            if (covered[c]) order.push_back(c);

        std::vector<int> pivots;
        int row = 0;
        for (int oi = 0; oi < n && row < k; ++oi) {
            int c = order[oi];
            int pr = -1;
            for (int r = row; r < k; ++r)
                if (m[r][c] != 0) {
                    pr = r;
                    break;
                }
            if (pr < 0) continue;
            std::swap(m[row], m[pr]);
            int inv = gf_inv(m[row][c], q);
            for (int cc = 0; cc < n; ++cc) m[row][cc] = static_cast<uint8_t>(m[row][cc] * inv % q);
            for (int r = 0; r < k; ++r) {
                if (r == row || m[r][c] == 0) continue;
                int f = m[r][c];
                for (int cc = 0; cc < n; ++cc)
                    m[r][cc] = static_cast<uint8_t>(((m[r][cc] - f * m[row][cc]) % q + q) % q);
            }
            pivots.push_back(oi);
            ++row;
        }
        if (row < k) throw std::invalid_argument("generator rows are linearly dependent");
        int rj = 0;
        for (int p : pivots) rj += p < uncovered_count;
        if (rj == 0) break;
        for (int p : pivots) covered[order[p]] = 1;
        chain.push_back({std::move(m), rj});
        if (std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; })) break;
    }
    return chain;
}

// Visit every codeword encoded from a message of weight w whose first nonzero
// position is `first`. Returns false if the visitor aborted.
bool visit_weight_class(const std::vector<std::vector<uint8_t>>& rows, int q, int w,
                        int first, const std::function<bool(const std::vector<uint8_t>&)>& fn) {
    const int k = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows[0].size());
    std::vector<uint8_t> acc(n, 0);
    std::function<bool(int, int)> rec = [&](int pos, int remaining) -> bool {
        if (remaining == 0) return fn(acc);
        for (int p = pos; p <= k - remaining; ++p)
            for (int val = 1; val < q; ++val) {
                for (int c = 0; c < n; ++c)
                    acc[c] = static_cast<uint8_t>((acc[c] + val * rows[p][c]) % q);
                bool ok = rec(p + 1, remaining - 1);
                for (int c = 0; c < n; ++c)
                    acc[c] = static_cast<uint8_t>(((acc[c] - val * rows[p][c]) % q + q) % q);
                if (!ok) return false;
            }
        return true;
    };
    // Fix the first chosen position.
    for (int val = 1; val < q; ++val) {
        for (int c = 0; c < n; ++c)
            acc[c] = static_cast<uint8_t>((acc[c] + val * rows[first][c]) % q);
        bool ok = rec(first + 1, w - 1);
        for (int c = 0; c < n; ++c)
            acc[c] = static_cast<uint8_t>(((acc[c] - val * rows[first][c]) % q + q) % q);
        if (!ok) return false;
    }
    return true;
}

} // namespace

DistanceReport brute_force_distance(const GeneratorMatrix& g) {
    g.validate();
    double total = std::pow(static_cast<double>(g.q), g.k);
    if (total > static_cast<double>(1 << 26)) throw std::invalid_argument("instance too large");
    DistanceReport rep;
    rep.upper_bound = g.n - g.k + 1;
    std::vector<std::vector<uint8_t>> rows(g.k, std::vector<uint8_t>(g.n));
    for (int r = 0; r < g.k; ++r)
        for (int c = 0; c < g.n; ++c) rows[r][c] = g.at(r, c);
    int best = g.n + 1;
    std::vector<uint8_t> wit;
    std::vector<uint8_t> acc(g.n, 0);
    long long seen = 0;
    std::function<void(int)> rec = [&](int pos) {
        if (pos == g.k) {
            ++seen;
            int w = weight_of(acc);
            if (w > 0 && (w < best || (w == best && lex_less_u8(acc, wit)))) {
                best = w;
                wit = acc;
            }
            return;
        }
        rec(pos + 1);
        for (int val = 1; val < g.q; ++val) {
            for (int c = 0; c < g.n; ++c)
                acc[c] = static_cast<uint8_t>((acc[c] + rows[pos][c]) % g.q);
            rec(pos + 1);
        }
        for (int c = 0; c < g.n; ++c)
            acc[c] = static_cast<uint8_t>((acc[c] + rows[pos][c]) % g.q);
        // acc is restored: q increments of row pos sum to zero mod q.
    };
    rec(0);
    rep.enumerated = seen - 1;
    rep.lower_bound = rep.upper_bound = best;
    rep.exact = true;
    rep.witness = std::move(wit);
    rep.trace.push_back("brute_force");
    return rep;
}

DistanceReport brouwer_zimmermann(const GeneratorMatrix& g, long long max_codewords,
                                  int threads) {
    g.validate();
    auto chain = information_set_chain(g);
    const int k = g.k, q = g.q;
    DistanceReport rep;
    rep.lower_bound = 1;
    rep.upper_bound = g.n - k + 1;
    rep.trace.push_back("chain_forms=" + std::to_string(chain.size()));

    long long budget = max_codewords < 0 ? std::numeric_limits<long long>::max() : max_codewords;
    std::atomic<long long> used{0};
    int best = static_cast<int>(rep.upper_bound) + 1;
    std::vector<uint8_t> wit;
    std::mutex mx;
    bool aborted = false;

    for (int w = 1; w <= k; ++w) {
        for (const auto& form : chain) {
            std::atomic<int> next_first{0};
            auto worker = [&]() {
                int local_best = g.n + 1;
                std::vector<uint8_t> local_wit;
                for (;;) {
                    int first = next_first.fetch_add(1);
                    if (first > k - w) break;
                    bool ok = visit_weight_class(
                        form.rows, q, w, first, [&](const std::vector<uint8_t>& cw) {
                            if (used.fetch_add(1) >= budget) return false;
                            int ww = weight_of(cw);
                            if (ww > 0 && (ww < local_best ||
                                           (ww == local_best && lex_less_u8(cw, local_wit)))) {
                                local_best = ww;
                                local_wit = cw;
                            }
                            return true;
                        });
                    if (!ok) break;
                }
                std::lock_guard<std::mutex> lk(mx);
                if (local_best < best || (local_best == best && lex_less_u8(local_wit, wit))) {
                    best = local_best;
                    wit = local_wit;
                }
            };
            int nt = std::max(1, threads);
            std::vector<std::thread> pool;
            for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();
            if (used.load() >= budget) {
                aborted = true;
                break;
            }
        }
        if (aborted) break;
        long long lb = 0;
        for (const auto& form : chain)
            lb += std::max(0, (w + 1) - (k - form.relative_rank));
        rep.lower_bound = std::max(rep.lower_bound, lb);
        if (best <= static_cast<int>(rep.upper_bound)) rep.upper_bound = best;
        // Only stop once a witness certifies the upper bound.
        if (!wit.empty() && rep.lower_bound >= rep.upper_bound) break;
        if (w == k) rep.lower_bound = rep.upper_bound; // full enumeration done
    }
    rep.enumerated = used.load();
    if (best <= static_cast<int>(rep.upper_bound) && !wit.empty()) {
        rep.upper_bound = best;
        rep.witness = wit;
    }
    rep.exact = !aborted && rep.lower_bound >= rep.upper_bound;
    if (rep.exact) rep.lower_bound = rep.upper_bound;
    rep.trace.push_back(aborted ? "budget_exhausted" : "converged");
    return rep;
}

PolynomialMatrix PolynomialMatrix::from_exponent(const ExponentMatrix& em, int q) {
    PolynomialMatrix pm;
    pm.J = em.J;
    pm.L = em.L;
    pm.z = em.z;
    pm.q = q;
    pm.cells.assign(static_cast<size_t>(em.J) * em.L, {});
    for (int j = 0; j < em.J; ++j)
        for (int l = 0; l < em.L; ++l) {
            int s = em.at(j, l);
            if (s >= 0) pm.at(j, l) = {(s + 1) % em.z}; // x^W maps to shift W-1
        }
    return pm;
}

long long permanent(const std::vector<std::vector<long long>>& a) {
    const int m = static_cast<int>(a.size());
    if (m == 0) return 1;
    // Ryser with Gray-code column subsets.
    std::vector<long long> rowsum(m, 0);
    long long total = 0;
    uint64_t gray = 0;
    for (uint64_t it = 1; it < (uint64_t(1) << m); ++it) {
        uint64_t ng = it ^ (it >> 1);
        uint64_t diff = ng ^ gray;
        int col = __builtin_ctzll(diff);
        bool added = ng & diff;
        for (int r = 0; r < m; ++r) rowsum[r] += added ? a[r][col] : -a[r][col];
        gray = ng;
        long long prod = 1;
        for (int r = 0; r < m; ++r) prod *= rowsum[r];
        int bits = __builtin_popcountll(ng);
        total += ((m - bits) % 2 ? -1 : 1) * prod;
    }
    return total;
}

namespace {

// Weight (nonzero coefficients mod q) of the permanent of a J x J polynomial
// minor; coefficients live mod x^z - 1 when z > 0.
long long poly_permanent_weight(const PolynomialMatrix& pm, const std::vector<int>& rows,
                                const std::vector<int>& cols) {
    const int m = static_cast<int>(rows.size());
    int maxe = 0;
    for (int j : rows)
        for (int l : cols)
            for (int e : pm.at(j, l)) maxe = std::max(maxe, e);
    const int P = pm.z > 0 ? pm.z : m * maxe + 1;
    std::vector<std::vector<long long>> rowsum(m, std::vector<long long>(P, 0));
    std::vector<long long> total(P, 0), prod(P), tmp(P);
    uint64_t gray = 0;
    for (uint64_t it = 1; it < (uint64_t(1) << m); ++it) {
        uint64_t ng = it ^ (it >> 1);
        uint64_t diff = ng ^ gray;
        int ci = __builtin_ctzll(diff);
        bool added = ng & diff;
        for (int r = 0; r < m; ++r)
            for (int e : pm.at(rows[r], cols[ci])) {
                int ee = pm.z > 0 ? e % pm.z : e;
                rowsum[r][ee] += added ? 1 : -1;
            }
        gray = ng;
        std::fill(prod.begin(), prod.end(), 0LL);
        prod[0] = 1;
        for (int r = 0; r < m; ++r) {
            std::fill(tmp.begin(), tmp.end(), 0LL);
            for (int i = 0; i < P; ++i) {
                if (prod[i] == 0) continue;
                for (int e = 0; e < P; ++e) {
                    if (rowsum[r][e] == 0) continue;
                    int idx = i + e;
                    if (pm.z > 0) idx %= pm.z;
                    tmp[idx] += prod[i] * rowsum[r][e];
                }
            }
            prod.swap(tmp);
        }
        int bits = __builtin_popcountll(ng);
        long long sign = (m - bits) % 2 ? -1 : 1;
        for (int i = 0; i < P; ++i) total[i] += sign * prod[i];
    }
    long long w = 0;
    for (long long c : total) w += ((c % pm.q) + pm.q) % pm.q != 0;
    return w;
}

long long vs_subset_sum(const PolynomialMatrix& pm, VsMode mode,
                        const std::vector<int>& subset) {
    const int J = pm.J;
    std::vector<int> rows(J);
    std::iota(rows.begin(), rows.end(), 0);
    long long sum = 0;
    for (size_t drop = 0; drop < subset.size(); ++drop) {
        std::vector<int> cols;
        for (size_t t = 0; t < subset.size(); ++t)
            if (t != drop) cols.push_back(subset[t]);
        if (mode == VsMode::protograph) {
            std::vector<std::vector<long long>> a(J, std::vector<long long>(J, 0));
            for (int r = 0; r < J; ++r)
                for (int c = 0; c < J; ++c) a[r][c] = static_cast<long long>(pm.at(r, cols[c]).size());
            sum += permanent(a);
        } else {
            sum += poly_permanent_weight(pm, rows, cols);
        }
    }
    return sum;
}

} // namespace

long long vs_upper_bound(const PolynomialMatrix& pm, VsMode mode, int threads,
                         long long max_subsets) {
    const int J = pm.J, L = pm.L;
    if (J + 1 > L) throw std::invalid_argument("need at least J+1 columns");
    if (J > 60) throw std::invalid_argument("row count too large for subset permanents");
    double count = 1;
    for (int i = 0; i < J + 1; ++i) count = count * (L - i) / (i + 1);
    if (count > static_cast<double>(max_subsets))
        throw std::runtime_error("column-subset enumeration infeasible at this size");

    // Materialize the subsets, then split across workers with a min-reduction.
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur(J + 1);
    std::iota(cur.begin(), cur.end(), 0);
    for (;;) {
        subsets.push_back(cur);
        int i = J;
        while (i >= 0 && cur[i] == L - (J + 1) + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int t = i + 1; t <= J; ++t) cur[t] = cur[t - 1] + 1;
    }
    int nt = std::max(1, threads);
    std::vector<long long> local(nt, 0);
    std::vector<std::thread> pool;
    auto work = [&](int tid) {
        long long best = 0;
        for (size_t s = tid; s < subsets.size(); s += nt) {
            long long sum = vs_subset_sum(pm, mode, subsets[s]);
            if (sum > 0 && (best == 0 || sum < best)) best = sum;
        }
        local[tid] = best;
    };
    for (int t = 1; t < nt; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    long long best = 0;
    for (long long b : local)
        if (b > 0 && (best == 0 || b < best)) best = b;
    return best; // 0 = every subset sum vanished (unbounded by this method)
}

LatticeBasis embed(const GeneratorMatrix& g, long long n_scale) {
    if (g.q != 2 && g.q != 3) throw std::invalid_argument("field must be GF(2) or GF(3)");
    if (n_scale < 1) throw std::invalid_argument("scale must be >= 1");
    LatticeBasis b;
    b.m = g.n + g.k;
    b.dim = g.n + g.k;
    b.rows.assign(b.m, std::vector<long long>(b.dim, 0));
    for (int i = 0; i < g.k; ++i) {
        for (int c = 0; c < g.n; ++c) b.rows[i][c] = n_scale * g.at(i, c);
        b.rows[i][g.n + i] = 1;
    }
    for (int j = 0; j < g.n; ++j) b.rows[g.k + j][j] = n_scale * g.q;
    return b;
}

namespace {

// Decode a lattice vector of the embedding into a codeword: the code block
// must be N times a minimal-residue vector and the tag block nonzero.
bool codeword_of(const std::vector<long long>& v, int n, int k, int q, long long N,
                 std::vector<uint8_t>& out) {
    bool tag_nz = false;
    for (int i = 0; i < k; ++i) tag_nz = tag_nz || v[n + i] != 0;
    if (!tag_nz) return false;
    out.assign(n, 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        if (v[i] % N != 0) return false;
        long long r = v[i] / N;
        if (std::llabs(r) > q / 2) return false;
        out[i] = static_cast<uint8_t>(((r % q) + q) % q);
        any = any || out[i] != 0;
    }
    return any;
}

} // namespace

DistanceReport lattice_distance(const GeneratorMatrix& g, const LatticeDistanceConfig& cfg) {
    g.validate();
    const int n = g.n, k = g.k, q = g.q;
    long long N = cfg.n_scale > 0
                      ? cfg.n_scale
                      : static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(k)))) + 1;
    DistanceReport rep;
    rep.lower_bound = std::max(1LL, cfg.lower_hint);
    rep.upper_bound = n - k + 1;
    rep.trace.push_back("embed N=" + std::to_string(N));

    auto red = bkz_reduce(embed(g, N), cfg.beta);
    // Harvest: reduced rows whose code block reads off as a codeword.
    int best = n + 1;
    std::vector<uint8_t> wit, cw;
    for (const auto& row : red.basis.rows)
        if (codeword_of(row, n, k, q, N, cw) && is_codeword(g, cw)) {
            int w = weight_of(cw);
            if (w < best || (w == best && lex_less_u8(cw, wit))) {
                best = w;
                wit = cw;
            }
        }
    if (best <= n) {
        rep.upper_bound = std::min<long long>(rep.upper_bound, best);
        rep.witness = wit;
        rep.trace.push_back("harvest d_ub=" + std::to_string(best));
    }
    if (!rep.witness.empty() && rep.upper_bound <= rep.lower_bound) {
        rep.exact = true;
        rep.lower_bound = rep.upper_bound;
        rep.trace.push_back("bounds met before enumeration");
        return rep;
    }

    long long d_target = rep.upper_bound;
    if (cfg.upper_hint > 0) d_target = std::min(d_target, cfg.upper_hint);

    // Enumerate over the unit-scale embedding: the tag sublattice q*Z^k drops
    // junk points into any codeword ball, and a small code-block scale keeps
    // their count manageable. A weight-d codeword has a representative with
    // minimal-residue entries, so its squared norm is at most d plus the tag
    // budget (message weight <= d for systematic generators, else <= k).
    auto red1 = N == 1 ? red : bkz_reduce(embed(g, 1), cfg.beta);
    for (const auto& row : red1.basis.rows)
        if (codeword_of(row, n, k, q, 1, cw) && is_codeword(g, cw)) {
            int w = weight_of(cw);
            if (w < best || (w == best && lex_less_u8(cw, wit))) {
                best = w;
                wit = cw;
            }
        }
    d_target = std::min<long long>(d_target, best);
    // With an identity submatrix on the information columns, message digits are
    // codeword coordinates, so message weight <= codeword weight.
    bool info_identity = false;
    if (static_cast<int>(g.info_cols.size()) >= k) {
        info_identity = true;
        for (int r = 0; r < k && info_identity; ++r)
            for (int rr = 0; rr < k && info_identity; ++rr)
                info_identity = g.at(rr, g.info_cols[r]) == (rr == r ? 1 : 0);
    } else if (g.systematic) {
        info_identity = true;
        for (int r = 0; r < k && info_identity; ++r)
            for (int rr = 0; rr < k && info_identity; ++rr)
                info_identity = g.at(rr, r) == (rr == r ? 1 : 0);
    }
    long long tag_bound = info_identity ? std::min<long long>(k, d_target) : k;
    double radius = static_cast<double>(d_target + tag_bound);

    std::vector<std::pair<std::vector<long long>, long long>> pts;
    try {
        pts = enumerate_below(red1.basis, radius, cfg.max_points);
    } catch (const std::runtime_error&) {
        rep.exact = false;
        if (best <= n && static_cast<long long>(best) < rep.upper_bound) {
            rep.upper_bound = best;
            rep.witness = wit;
        }
        rep.trace.push_back("enumeration budget exhausted");
        return rep;
    }
    rep.enumerated = static_cast<long long>(pts.size());
    for (const auto& [x, nsq] : pts) {
        auto v = red1.basis.vector_of(x);
        if (!codeword_of(v, n, k, q, 1, cw) || !is_codeword(g, cw)) continue;
        int w = weight_of(cw);
        if (w < best || (w == best && lex_less_u8(cw, wit))) {
            best = w;
            wit = cw;
        }
        (void)nsq;
    }
    if (best <= n) {
        // Every codeword of weight <= d_target has a vector inside the ball, so
        // a completed sweep pins the minimum exactly.
        rep.upper_bound = best;
        rep.witness = wit;
        rep.exact = true;
        rep.lower_bound = best;
        rep.trace.push_back("enumeration complete");
    }
    return rep;
}

DistanceReport probabilistic_distance(const GeneratorMatrix& g, const ProbabilisticConfig& cfg) {
    g.validate();
    const int n = g.n, k = g.k, q = g.q;
    long long N = cfg.n_scale > 0
                      ? cfg.n_scale
                      : static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(k)))) + 1;
    DistanceReport rep;
    rep.lower_bound = 1;
    rep.upper_bound = n - k + 1;
    rep.trace.push_back("probabilistic N=" + std::to_string(N));

    auto red = bkz_reduce(embed(g, N), cfg.beta);
    int best = n + 1;
    std::vector<uint8_t> wit, cw;
    auto consider = [&](const std::vector<long long>& v) {
        if (!codeword_of(v, n, k, q, N, cw) || !is_codeword(g, cw)) return;
        int w = weight_of(cw);
        if (w < best || (w == best && lex_less_u8(cw, wit))) {
            best = w;
            wit = cw;
        }
    };
    for (const auto& row : red.basis.rows) consider(row);

    std::mt19937_64 rng(cfg.seed);
    SamplingConfig sc;
    sc.u = std::min(cfg.u, red.basis.m - 1);
    sc.gamma = cfg.gamma;
    sc.log2_prob_floor = -std::numeric_limits<double>::infinity();
    long long budget = cfg.samples;
    while (budget > 0) {
        LatticeBasis pb = red.basis;
        // Random row permutation; the sample loop re-orthogonalizes (Givens).
        for (int i = pb.m - 1; i > 0; --i) {
            int j = static_cast<int>(rng() % (i + 1));
            pb.rows[i].swap(pb.rows[j]);
        }
        try {
            auto s = sampling_search(pb, sc);
            if (s.status == SamplingResult::Status::found) consider(pb.vector_of(s.x));
        } catch (const DependentRows&) {
            // A permutation can make the GSO numerically fragile; skip it.
        }
        budget -= 1LL << sc.u;
        ++rep.enumerated;
    }
    if (best <= n) {
        rep.upper_bound = best;
        rep.witness = wit;
    }
    rep.exact = false;
    return rep;
}

} // namespace forge
