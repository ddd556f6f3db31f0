#include "forge/trapping.hpp"

#include "forge/ensemble.hpp"
#include "forge/graph_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <stdexcept>

namespace forge {

int odd_checks(const TannerGraph& g, const std::vector<int>& nodes) {
    std::vector<int> touch(g.m, 0);
    for (int v : nodes)
        for (int c : g.var_adj[v]) ++touch[c];
    int b = 0;
    for (int t : touch) b += t % 2;
    return b;
}

std::vector<TrappingSet> enumerate_ts(const TannerGraph& g, int a_max, int b_max,
                                      size_t max_subsets) {
    std::vector<TrappingSet> out;
    int gg = girth(g);
    if (gg == kInfiniteGirth) return out;

    // Seed from cycles of length girth..girth+4; bail out of the raw cycle
    // walk once the subset budget is clearly covered.
    struct SeedBudget {};
    std::set<std::vector<int>> seeds;
    size_t walked = 0;
    try {
        for (int len = gg; len <= gg + 4; len += 2)
            for_each_cycle(g, len, [&](const std::vector<int>& cyc) {
                if (seeds.size() >= max_subsets || ++walked > 64 * max_subsets)
                    throw SeedBudget{};
                std::vector<int> vars;
                for (int id : cyc)
                    if (id < g.n) vars.push_back(id);
                std::sort(vars.begin(), vars.end());
                if (static_cast<int>(vars.size()) <= a_max) seeds.insert(vars);
            });
    } catch (const SeedBudget&) {
    }

    std::set<std::vector<int>> visited;
    std::deque<std::vector<int>> queue;
    for (const auto& s : seeds)
        if (visited.insert(s).second) queue.push_back(s);

    auto push = [&](std::vector<int> s) {
        if (visited.size() >= max_subsets) return; // budget: stop growing
        if (visited.insert(s).second) queue.push_back(std::move(s));
    };

    while (!queue.empty()) {
        std::vector<int> s = queue.front();
        queue.pop_front();
        int b = odd_checks(g, s);
        if (b <= b_max) {
            TrappingSet ts;
            ts.a = static_cast<int>(s.size());
            ts.b = b;
            ts.nodes = s;
            out.push_back(std::move(ts));
        }
        // cycle unions
        for (const auto& c : seeds) {
            std::vector<int> u;
            std::set_union(s.begin(), s.end(), c.begin(), c.end(), std::back_inserter(u));
            if (static_cast<int>(u.size()) <= a_max) push(std::move(u));
        }
        // nodes with two or more edges into the touched checks
        std::vector<char> touched(g.m, 0), in_set(g.n, 0);
        for (int v : s) {
            in_set[v] = 1;
            for (int c : g.var_adj[v]) touched[c] = 1;
        }
        for (int v = 0; v < g.n; ++v) {
            if (in_set[v] || static_cast<int>(s.size()) + 1 > a_max) continue;
            int deg = 0;
            for (int c : g.var_adj[v]) deg += touched[c];
            if (deg < 2) continue;
            std::vector<int> u = s;
            u.insert(std::lower_bound(u.begin(), u.end(), v), v);
            push(std::move(u));
        }
    }
    std::sort(out.begin(), out.end(), [](const TrappingSet& x, const TrappingSet& y) {
        return std::tie(x.a, x.b, x.nodes) < std::tie(y.a, y.b, y.nodes);
    });
    return out;
}

LinearProgram build_fundamental_polytope(const SparseBinaryMatrix& h) {
    LinearProgram lp;
    lp.n = h.n_cols;
    for (const auto& row : h.rows) {
        int w = static_cast<int>(row.size());
        if (w > 16) throw std::invalid_argument("check weight too large for subset rows");
        if (w == 0) continue;
        for (uint32_t mask = 0; mask < (1u << w); ++mask) {
            if (__builtin_popcount(mask) % 2 == 0) continue;
            std::vector<double> r(lp.n, 0.0);
            for (int t = 0; t < w; ++t) r[row[t]] = (mask >> t) & 1 ? 1.0 : -1.0;
            lp.rows.push_back(std::move(r));
            lp.rhs.push_back(__builtin_popcount(mask) - 1.0);
        }
    }
    return lp;
}

namespace {

constexpr double kTol = 1e-9;

// Two-phase dense simplex, Bland's rule. Rows are <= constraints (rhs of any
// sign); variables are nonnegative. Returns false on infeasibility.
struct Simplex {
    int n = 0, m = 0, n_art = 0;
    std::vector<std::vector<double>> t; // m rows x (n + m + n_art + 1)
    std::vector<int> basis;

    bool solve(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
               const std::vector<double>& obj, std::vector<double>& x, double& value) {
        n = static_cast<int>(obj.size());
        m = static_cast<int>(rows.size());
        // slack columns n..n+m; artificials appended for negative rhs rows
        std::vector<int> art_of(m, -1);
        n_art = 0;
        for (int i = 0; i < m; ++i)
            if (rhs[i] < 0) art_of[i] = n_art++;
        int cols = n + m + n_art + 1;
        t.assign(m, std::vector<double>(cols, 0.0));
        basis.assign(m, 0);
        for (int i = 0; i < m; ++i) {
            double f = rhs[i] < 0 ? -1.0 : 1.0;
            for (int j = 0; j < n; ++j) t[i][j] = f * rows[i][j];
            t[i][n + i] = f; // slack
            t[i][cols - 1] = f * rhs[i];
            if (art_of[i] >= 0) {
                t[i][n + m + art_of[i]] = 1.0;
                basis[i] = n + m + art_of[i];
            } else {
                basis[i] = n + i;
            }
        }
        if (n_art > 0) {
            std::vector<double> phase1(n + m + n_art, 0.0);
            for (int j = n + m; j < n + m + n_art; ++j) phase1[j] = 1.0;
            double v1 = run(phase1, n + m + n_art);
            if (v1 > 1e-7) return false;
            // pivot out artificials left basic at zero, then drop their
            // columns -- a degenerate artificial must not rise in phase 2
            for (int i = 0; i < m; ++i) {
                if (basis[i] < n + m) continue;
                int piv = -1;
                for (int j = 0; j < n + m && piv < 0; ++j)
                    if (std::abs(t[i][j]) > kTol) piv = j;
                if (piv >= 0) pivot(i, piv);
            }
            for (int i = m - 1; i >= 0; --i) {
                if (basis[i] < n + m) continue; // redundant all-zero row
                t.erase(t.begin() + i);
                basis.erase(basis.begin() + i);
                --m;
            }
            for (auto& row : t) row.erase(row.begin() + n + m, row.end() - 1);
        }
        std::vector<double> phase2(n + m, 0.0);
        for (int j = 0; j < n; ++j) phase2[j] = obj[j];
        value = run(phase2, n + m);
        x.assign(n, 0.0);
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) x[basis[i]] = t[i].back();
        return true;
    }

    void pivot(int leave, int enter) {
        const int cols = static_cast<int>(t[0].size());
        double p = t[leave][enter];
        for (int j = 0; j < cols; ++j) t[leave][j] /= p;
        for (int i = 0; i < m; ++i) {
            if (i == leave || std::abs(t[i][enter]) < 1e-14) continue;
            double f = t[i][enter];
            for (int j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    double run(const std::vector<double>& c, int enter_limit) {
        for (int iter = 0; iter < 100000; ++iter) {
            // reduced costs under the current basis
            int enter = -1;
            for (int j = 0; j < enter_limit && enter < 0; ++j) {
                double r = c[j];
                for (int i = 0; i < m; ++i) r -= c[basis[i]] * t[i][j];
                if (r < -kTol) enter = j;
            }
            if (enter < 0) break;
            int leave = -1;
            double best = 0;
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= kTol) continue;
                double ratio = t[i].back() / t[i][enter];
                if (leave < 0 || ratio < best - kTol ||
                    (ratio < best + kTol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) throw std::runtime_error("unbounded program on a boxed polytope");
            pivot(leave, enter);
        }
        double v = 0;
        for (int i = 0; i < m; ++i) v += c[basis[i]] * t[i].back();
        return v;
    }
};

} // namespace

LpResult lp_min_weight(const SparseBinaryMatrix& h, const std::vector<double>& objective,
                       const std::vector<int>& force_one) {
    if (static_cast<int>(objective.size()) != h.n_cols)
        throw std::invalid_argument("objective length mismatch");
    LinearProgram lp = build_fundamental_polytope(h);
    for (int v = 0; v < lp.n; ++v) { // box x <= 1
        std::vector<double> r(lp.n, 0.0);
        r[v] = 1.0;
        lp.rows.push_back(std::move(r));
        lp.rhs.push_back(1.0);
    }
    for (int v : force_one) { // -x_v <= -1, i.e. x_v = 1 with the box
        std::vector<double> r(lp.n, 0.0);
        r[v] = -1.0;
        lp.rows.push_back(std::move(r));
        lp.rhs.push_back(-1.0);
    }
    LpResult res;
    Simplex sx;
    res.optimal = sx.solve(lp.rows, lp.rhs, objective, res.x, res.value);
    if (res.optimal) {
        double s = 0, s2 = 0;
        for (double v : res.x) {
            s += v;
            s2 += v * v;
        }
        res.pseudoweight = s2 > kTol ? s * s / s2 : 0.0;
    }
    return res;
}

void weight_trapping_sets(const SparseBinaryMatrix& h, std::vector<TrappingSet>& sets,
                          uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.01);
    for (auto& ts : sets) {
        std::vector<double> lambda(h.n_cols, 2.0);
        for (int v : ts.nodes) lambda[v] = -1.0;
        if (seed > 0)
            for (auto& l : lambda) l += jitter(rng);
        auto res = lp_min_weight(h, lambda);
        ts.pseudoweight = res.optimal ? res.pseudoweight : 0.0;
    }
}

double ts_error_probability(double m_lambda, const std::vector<double>& mu_max, int iter,
                            int d_v, int d_c) {
    if (m_lambda <= 0) throw std::invalid_argument("channel mean must be positive");
    double m_ext = 0, sum_inv = 0, sum_ext = 0;
    for (int j = 1; j <= iter; ++j) {
        double mu = mu_max.empty() ? 1.0
                                   : mu_max[std::min<size_t>(j - 1, mu_max.size() - 1)];
        if (mu <= 0) throw std::invalid_argument("growth parameters must be positive");
        double in = std::min(m_lambda + (d_v - 1) * m_ext, 3000.0);
        m_ext = phi_inv(1.0 - std::pow(1.0 - phi(in), d_c - 1.0));
        sum_inv += 1.0 / mu;
        sum_ext += m_ext / mu;
    }
    double num = 2.0 * m_lambda + 2.0 * sum_ext;
    double den = std::sqrt((1.0 + sum_inv) * m_lambda + sum_ext);
    return q_func(num / den);
}

double ts_union_bound(const std::vector<TrappingSet>& sets, int z, double sigma) {
    double sum = 0;
    for (const auto& ts : sets) sum += q_func(std::sqrt(ts.a * ts.pseudoweight) / sigma);
    return z * sum;
}

} // namespace forge
