#include "forge/graph_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace forge {

namespace {

// Combined simple-graph adjacency: variables 0..n-1, checks n..n+m-1.
std::vector<std::vector<int>> combined_adjacency(const TannerGraph& g) {
    std::vector<std::vector<int>> adj(g.n + g.m);
    for (int v = 0; v < g.n; ++v)
        for (int c : g.var_adj[v]) {
            adj[v].push_back(g.n + c);
            adj[g.n + c].push_back(v);
        }
    return adj;
}

} // namespace

int girth(const TannerGraph& g) {
    auto adj = combined_adjacency(g);
    int N = static_cast<int>(adj.size());
    int best = kInfiniteGirth;
    std::vector<int> dist(N), parent(N);
    for (int root = 0; root < N; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[root] = 0;
        parent[root] = -1;
        std::deque<int> q{root};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            if (best != kInfiniteGirth && 2 * dist[u] >= best - 1) break;
            for (int v : adj[u]) {
                if (v == parent[u]) continue;
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push_back(v);
                } else if (parent[v] != u) { // skip the tree edge seen from the far side
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    return best;
}

void for_each_cycle(const TannerGraph& g, int length,
                    const std::function<void(const std::vector<int>&)>& fn) {
    if (length < 3) return;
    auto adj = combined_adjacency(g);
    int N = static_cast<int>(adj.size());
    std::vector<std::set<int>> nbr(N);
    for (int u = 0; u < N; ++u) nbr[u] = {adj[u].begin(), adj[u].end()};

    std::vector<char> used(N, 0);
    std::vector<int> path;
    int start = 0;

    std::function<void(int)> dfs = [&](int u) {
        if (static_cast<int>(path.size()) == length) {
            // Emit once per cycle: direction fixed by path[1] < path.back().
            if (nbr[u].count(start) && path[1] < path.back()) fn(path);
            return;
        }
        for (int v : adj[u]) {
            if (v <= start || used[v]) continue;
            used[v] = 1;
            path.push_back(v);
            dfs(v);
            path.pop_back();
            used[v] = 0;
        }
    };

    for (start = 0; start < N; ++start) {
        used[start] = 1;
        path = {start};
        dfs(start);
        used[start] = 0;
    }
}

long long count_cycles(const TannerGraph& g, int length) {
    long long count = 0;
    for_each_cycle(g, length, [&](const std::vector<int>&) { ++count; });
    return count;
}

long long qc_count_cycles(const ExponentMatrix& em, int length) {
    if (length < 4 || length % 2) throw std::invalid_argument("cycle length must be even >= 4");
    const int m = length / 2, J = em.J, L = em.L, z = em.z;
    long long directed = 0;

    // Walk var(l_t, B_t) -> chk(j_t, A_t) -> var(l_{t+1}, B_{t+1}); offsets are
    // relative to the start, so the whole orbit of size z is counted at once.
    std::vector<std::pair<int, int>> vars, chks; // visited (l,B) / (j,A)
    std::function<void(int, int, int)> step = [&](int t, int l, int B) {
        for (int j = 0; j < J; ++j) {
            int p1 = em.at(j, l);
            if (p1 < 0) continue;
            int A = ((B - p1) % z + z) % z;
            if (std::find(chks.begin(), chks.end(), std::make_pair(j, A)) != chks.end()) continue;
            chks.emplace_back(j, A);
            for (int l2 = 0; l2 < L; ++l2) {
                int p2 = em.at(j, l2);
                if (p2 < 0) continue;
                int B2 = (A + p2) % z;
                if (t + 1 == m) {
                    if (l2 == vars[0].first && B2 == vars[0].second) ++directed;
                    continue;
                }
                if (std::find(vars.begin(), vars.end(), std::make_pair(l2, B2)) != vars.end())
                    continue;
                vars.emplace_back(l2, B2);
                step(t + 1, l2, B2);
                vars.pop_back();
            }
            chks.pop_back();
        }
    };

    for (int l0 = 0; l0 < L; ++l0) {
        vars = {{l0, 0}};
        chks.clear();
        step(0, l0, 0);
    }
    if ((static_cast<long long>(z) * directed) % (2 * m) != 0)
        throw std::logic_error("directed chain count not divisible by cycle multiplicity");
    return static_cast<long long>(z) * directed / (2 * m);
}

AceSpectrum ace_spectrum(const TannerGraph& g, int max_len) {
    AceSpectrum s;
    int gir = girth(g);
    if (gir == kInfiniteGirth) return s;
    max_len = std::min(max_len, gir + 6);
    int emd_cutoff = gir + 4;
    for (int len = gir; len <= max_len; len += 2) {
        for_each_cycle(g, len, [&](const std::vector<int>& nodes) {
            int ace = 0;
            std::set<int> cyc_checks;
            std::vector<int> vars;
            for (int u : nodes) {
                if (u < g.n) {
                    vars.push_back(u);
                    ace += g.var_degree(u) - 2;
                } else {
                    cyc_checks.insert(u - g.n);
                }
            }
            s.ace[len][ace]++;
            if (len <= emd_cutoff) {
                int emd = 0;
                for (int v : vars)
                    for (int c : g.var_adj[v])
                        if (!cyc_checks.count(c)) ++emd;
                s.emd[len][emd]++;
            }
        });
    }
    return s;
}

long long tanner_lower_bound(int girth, int d_vn) {
    if (d_vn < 2) throw std::invalid_argument("variable degree must be >= 2");
    if (d_vn == 2) return 2;
    long long e = (girth - 2) / 4;
    long long pw = 1;
    for (long long i = 0; i < e; ++i) pw *= d_vn - 1;
    return 1 + static_cast<long long>(d_vn) * (pw - 1) / (d_vn - 2);
}

namespace {

// Largest eigenvalue of H^T H restricted to the complement of `deflate`
// (empty = full space), by power iteration to 1e-8 relative tolerance.
double power_iterate(const SparseBinaryMatrix& h, const std::vector<double>* deflate,
                     std::vector<double>* out_vec) {
    int n = h.n_cols;
    std::vector<double> x(n), hx(h.n_rows), y(n);
    uint64_t s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        x[i] = static_cast<double>((s >> 11) % 1000) / 1000.0 + 0.001;
    }
    // Project twice: one pass can leave an O(1) relative component along the
    // deflated direction when the orthogonal part is near rounding noise.
    auto project = [&]() {
        if (!deflate) return;
        for (int pass = 0; pass < 2; ++pass) {
            double d = 0;
            for (int i = 0; i < n; ++i) d += x[i] * (*deflate)[i];
            for (int i = 0; i < n; ++i) x[i] -= d * (*deflate)[i];
        }
    };
    auto norm = [&]() {
        double nn = 0;
        for (double v : x) nn += v * v;
        return std::sqrt(nn);
    };
    auto normalize = [&]() {
        double nn = norm();
        if (nn < 1e-150) return false;
        for (double& v : x) v /= nn;
        return true;
    };
    project();
    if (!normalize()) return 0.0;
    double lambda = 0;
    for (int it = 0; it < 10000; ++it) {
        for (int r = 0; r < h.n_rows; ++r) {
            double acc = 0;
            for (int c : h.rows[r]) acc += x[c];
            hx[r] = acc;
        }
        std::fill(y.begin(), y.end(), 0.0);
        for (int r = 0; r < h.n_rows; ++r)
            for (int c : h.rows[r]) y[c] += hx[r];
        double rq = 0;
        for (int i = 0; i < n; ++i) rq += x[i] * y[i];
        x.swap(y);
        double pre = norm();
        project();
        // If projection wipes the iterate out, the operator maps the complement
        // of the deflated direction to (numerically) nothing beyond rq.
        if (deflate && norm() <= 1e-10 * std::max(pre, 1e-300)) {
            lambda = rq;
            break;
        }
        if (!normalize()) { lambda = 0; break; }
        if (it > 2 && std::abs(rq - lambda) <= 1e-8 * std::max(1.0, std::abs(rq))) {
            lambda = rq;
            break;
        }
        lambda = rq;
    }
    if (out_vec) *out_vec = x;
    return std::max(lambda, 0.0);
}

} // namespace

SpectralBound spectral_bounds(const SparseBinaryMatrix& h) {
    auto g = tanner_from(h);
    if (g.n == 0 || g.m == 0) throw std::invalid_argument("empty matrix");
    int col_w = g.var_degree(0), row_w = g.chk_degree(0);
    for (int v = 0; v < g.n; ++v)
        if (g.var_degree(v) != col_w) throw std::invalid_argument("irregular column weights");
    for (int c = 0; c < g.m; ++c)
        if (g.chk_degree(c) != row_w) throw std::invalid_argument("irregular row weights");

    std::vector<double> v1;
    double l1 = power_iterate(h, nullptr, &v1);
    double l2 = power_iterate(h, &v1, nullptr);
    SpectralBound b;
    b.mu1 = std::sqrt(l1);
    b.mu2 = std::sqrt(std::max(l2, 0.0));
    double m = col_w, j = row_w, n = g.n;
    double denom = m * j - b.mu2;
    b.bound_a = n * (2 * m - b.mu2) / denom;
    b.bound_b = 2 * n * (2 * m + j - 2 - b.mu2) / (j * denom);
    b.ratio = b.mu1 > 0 ? b.mu2 / b.mu1 : 0.0;
    return b;
}

} // namespace forge
