#include "forge/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

namespace forge {

std::vector<long long> LatticeBasis::vector_of(const std::vector<long long>& x) const {
    std::vector<long long> v(dim, 0);
    for (int i = 0; i < m; ++i)
        if (x[i] != 0)
            for (int d = 0; d < dim; ++d) v[d] += x[i] * rows[i][d];
    return v;
}

long long LatticeBasis::norm_sq(const std::vector<long long>& x) const {
    auto v = vector_of(x);
    __int128 acc = 0;
    for (long long c : v) acc += static_cast<__int128>(c) * c;
    if (acc > std::numeric_limits<long long>::max())
        throw std::overflow_error("norm exceeds 64-bit range");
    return static_cast<long long>(acc);
}

LatticeBasis read_basis(std::istream& in) {
    LatticeBasis b;
    if (!(in >> b.m >> b.dim) || b.m < 1 || b.dim < 1)
        throw std::runtime_error("basis header must be 'm dim'");
    b.rows.assign(b.m, std::vector<long long>(b.dim));
    for (auto& row : b.rows)
        for (auto& v : row)
            if (!(in >> v)) throw std::runtime_error("basis file truncated");
    return b;
}

void write_basis(std::ostream& out, const LatticeBasis& b) {
    out << b.m << ' ' << b.dim << '\n';
    for (const auto& row : b.rows) {
        for (int d = 0; d < b.dim; ++d) out << (d ? " " : "") << row[d];
        out << '\n';
    }
}

DependentRows::DependentRows(int pivot_row)
    : std::runtime_error("linearly dependent basis row " + std::to_string(pivot_row)),
      pivot(pivot_row) {}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

GsoData gso_mgs(const std::vector<std::vector<long long>>& rows, int dim) {
    int m = static_cast<int>(rows.size());
    GsoData g;
    g.norms_sq.resize(m);
    g.mu.resize(m);
    std::vector<std::vector<double>> q(m, std::vector<double>(dim));
    for (int i = 0; i < m; ++i) {
        for (int d = 0; d < dim; ++d) q[i][d] = static_cast<double>(rows[i][d]);
        double orig = dot(q[i], q[i]);
        g.mu[i].assign(i, 0.0);
        // Two MGS passes (reorthogonalization) for dependable pivot detection.
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < i; ++j) {
                double p = dot(q[i], q[j]) / g.norms_sq[j];
                g.mu[i][j] += p;
                for (int d = 0; d < dim; ++d) q[i][d] -= p * q[j][d];
            }
        g.norms_sq[i] = dot(q[i], q[i]);
        if (g.norms_sq[i] <= 1e-20 * std::max(1.0, orig)) throw DependentRows(i);
    }
    return g;
}

GsoData gso_from_r(const std::vector<std::vector<double>>& r, int m,
                   const std::vector<double>& orig_norms) {
    GsoData g;
    g.norms_sq.resize(m);
    g.mu.resize(m);
    for (int j = 0; j < m; ++j) {
        double d = r[j][j];
        if (d * d <= 1e-20 * std::max(1.0, orig_norms[j])) throw DependentRows(j);
        g.norms_sq[j] = d * d;
    }
    for (int i = 0; i < m; ++i) {
        g.mu[i].assign(i, 0.0);
        for (int j = 0; j < i; ++j) g.mu[i][j] = r[j][i] / r[j][j];
    }
    return g;
}

GsoData gso_householder(const std::vector<std::vector<long long>>& rows, int dim) {
    int m = static_cast<int>(rows.size());
    // Columns of A are the basis vectors; reduce A to upper-triangular R.
    std::vector<std::vector<double>> a(dim, std::vector<double>(m));
    std::vector<double> orig(m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int d = 0; d < dim; ++d) {
            a[d][i] = static_cast<double>(rows[i][d]);
            orig[i] += a[d][i] * a[d][i];
        }
    std::vector<double> v(dim);
    for (int j = 0; j < m; ++j) {
        double nn = 0;
        for (int d = j; d < dim; ++d) nn += a[d][j] * a[d][j];
        double alpha = std::sqrt(nn);
        if (a[j][j] > 0) alpha = -alpha;
        double vn = 0;
        for (int d = j; d < dim; ++d) {
            v[d] = a[d][j];
            if (d == j) v[d] -= alpha;
            vn += v[d] * v[d];
        }
        if (vn > 0) {
            for (int c = j; c < m; ++c) {
                double p = 0;
                for (int d = j; d < dim; ++d) p += v[d] * a[d][c];
                p = 2 * p / vn;
                for (int d = j; d < dim; ++d) a[d][c] -= p * v[d];
            }
        }
    }
    std::vector<std::vector<double>> r(m, std::vector<double>(m, 0.0));
    for (int j = 0; j < m; ++j) {
        double sgn = a[j][j] < 0 ? -1.0 : 1.0;
        for (int c = j; c < m; ++c) r[j][c] = sgn * a[j][c];
    }
    return gso_from_r(r, m, orig);
}

GsoData gso_givens(const std::vector<std::vector<long long>>& rows, int dim) {
    int m = static_cast<int>(rows.size());
    std::vector<std::vector<double>> a(dim, std::vector<double>(m));
    std::vector<double> orig(m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int d = 0; d < dim; ++d) {
            a[d][i] = static_cast<double>(rows[i][d]);
            orig[i] += a[d][i] * a[d][i];
        }
    for (int j = 0; j < m; ++j)
        for (int r = dim - 1; r > j; --r) {
            if (a[r][j] == 0) continue;
            double x = a[r - 1][j], y = a[r][j];
            double h = std::hypot(x, y);
            double c = x / h, s = y / h;
            for (int t = j; t < m; ++t) {
                double u = a[r - 1][t], w = a[r][t];
                a[r - 1][t] = c * u + s * w;
                a[r][t] = -s * u + c * w;
            }
            a[r][j] = 0;
        }
    std::vector<std::vector<double>> rr(m, std::vector<double>(m, 0.0));
    for (int j = 0; j < m; ++j) {
        double sgn = a[j][j] < 0 ? -1.0 : 1.0;
        for (int c = j; c < m; ++c) rr[j][c] = sgn * a[j][c];
    }
    return gso_from_r(rr, m, orig);
}

void canonicalize_sign(std::vector<long long>& x) {
    for (long long v : x) {
        if (v > 0) return;
        if (v < 0) break;
    }
    for (auto& v : x) v = -v;
}

bool lex_less(const std::vector<long long>& a, const std::vector<long long>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Depth-first enumeration over GSO levels [lo, hi]; levels above hi are fixed
// by the caller. Pruning bound is read through a pointer so radius updates by
// the leaf callback take effect immediately (serial) or stay frozen (parallel
// branch snapshots).
struct EnumCore {
    const GsoData* g = nullptr;
    int lo = 0, hi = 0;
    bool zigzag = true;
    bool use_table = false; // batched center-update sweep per level change
    double eps = 1e-6;
    const double* bound = nullptr;
    std::function<void(const std::vector<double>&, double)> leaf;

    std::vector<double> xs;
    std::vector<std::vector<double>> acc; // acc[i][j] = -sum_{t>i} xs[t] mu[t][j]
    long long nodes = 0;

    void init() {
        xs.assign(hi + 1, 0.0);
        if (use_table) acc.assign(hi + 1, std::vector<double>(hi + 1, 0.0));
    }
    double center(int i) const {
        if (use_table) return acc[i][i];
        double c = 0;
        for (int j = i + 1; j <= hi; ++j) c -= xs[j] * g->mu[j][i];
        return c;
    }
    void sweep(int i) { // one batched multiply-accumulate pass after fixing xs[i]
        if (!use_table) return;
        for (int j = lo; j < i; ++j) acc[i - 1][j] = acc[i][j] - xs[i] * g->mu[i][j];
    }
    void run() {
        init();
        level(hi, 0.0, true);
    }
    void run_top(double xv) {
        init();
        double li = xv * xv * g->norms_sq[hi];
        if (li > *bound + eps) return;
        ++nodes;
        xs[hi] = xv;
        if (hi == lo) {
            leaf(xs, li);
            return;
        }
        sweep(hi);
        level(hi - 1, li, xv == 0.0);
    }
    bool try_x(int i, double c, double ni, double lnext, bool zero_above, double xv) {
        double d = xv - c;
        double li = lnext + d * d * ni;
        if (li > *bound + eps) return false;
        ++nodes;
        xs[i] = xv;
        if (i == lo) {
            leaf(xs, li);
            return true;
        }
        sweep(i);
        level(i - 1, li, zero_above && xv == 0.0);
        return true;
    }
    void level(int i, double lnext, bool zero_above) {
        double ni = g->norms_sq[i];
        if (zero_above) {
            // Half-tree symmetry: first nonzero coordinate from the top >= 0.
            for (double xv = 0;; xv += 1)
                if (!try_x(i, 0.0, ni, lnext, true, xv)) break;
            return;
        }
        double c = center(i);
        if (zigzag) {
            double x0 = std::floor(c + 0.5);
            if (!try_x(i, c, ni, lnext, false, x0)) return;
            double up = x0 + 1, down = x0 - 1;
            bool uok = true, dok = true;
            while (uok || dok) {
                bool pick_up = !dok || (uok && (up - c) <= (c - down));
                if (pick_up) {
                    if (try_x(i, c, ni, lnext, false, up)) up += 1;
                    else uok = false;
                } else {
                    if (try_x(i, c, ni, lnext, false, down)) down -= 1;
                    else dok = false;
                }
            }
        } else {
            // Plain ascending interval sweep.
            double rem = *bound + eps - lnext;
            if (rem <= 0) return;
            double r = std::sqrt(rem / ni);
            for (double xv = std::ceil(c - r); xv <= std::floor(c + r) + 0.5; xv += 1)
                try_x(i, c, ni, lnext, false, xv);
        }
    }
};

EnumResult enum_serial(const LatticeBasis& b, const GsoData& g, double a2, bool zigzag,
                       bool table) {
    EnumResult res;
    const int m = b.m;
    long long best = std::numeric_limits<long long>::max();
    double fb = a2;
    EnumCore core;
    core.g = &g;
    core.lo = 0;
    core.hi = m - 1;
    core.zigzag = zigzag;
    core.use_table = table;
    core.bound = &fb;
    core.leaf = [&](const std::vector<double>& xsv, double l1) {
        std::vector<long long> x(m);
        bool nz = false;
        for (int i = 0; i < m; ++i) {
            x[i] = llround(xsv[i]);
            nz = nz || x[i] != 0;
        }
        if (!nz) return;
        long long exact = b.norm_sq(x);
        if (static_cast<double>(exact) > a2 + 1e-6) return;
        double err = std::abs(l1 - static_cast<double>(exact)) /
                     std::max(1.0, static_cast<double>(exact));
        res.max_leaf_error = std::max(res.max_leaf_error, err);
        canonicalize_sign(x);
        if (exact < best) {
            best = exact;
            res.x = x;
            res.accepted_norms.push_back(exact);
            fb = std::min(fb, static_cast<double>(best) + 0.25);
        } else if (exact == best && lex_less(x, res.x)) {
            res.x = x;
        }
    };
    core.run();
    res.nodes = core.nodes;
    if (best != std::numeric_limits<long long>::max()) {
        res.found = true;
        res.norm_sq = best;
    }
    return res;
}

EnumResult enum_parallel(const LatticeBasis& b, const GsoData& g, double a2, int threads) {
    const int m = b.m;
    std::vector<double> tops;
    for (double xv = 0; xv * xv * g.norms_sq[m - 1] <= a2 + 1e-6; xv += 1) tops.push_back(xv);

    std::atomic<long long> abest{std::numeric_limits<long long>::max()};
    std::atomic<size_t> next{0};
    std::atomic<long long> total_nodes{0};
    std::mutex mx;
    EnumResult res;
    long long best = std::numeric_limits<long long>::max();

    auto worker = [&]() {
        for (;;) {
            size_t t = next.fetch_add(1);
            if (t >= tops.size()) break;
            long long snap = abest.load();
            // Snapshot at branch entry: sound (never below the final best).
            double fb = snap == std::numeric_limits<long long>::max()
                            ? a2
                            : std::min(a2, static_cast<double>(snap) + 0.25);
            EnumCore core;
            core.g = &g;
            core.lo = 0;
            core.hi = m - 1;
            core.zigzag = true;
            core.bound = &fb;
            core.leaf = [&](const std::vector<double>& xsv, double l1) {
                std::vector<long long> x(m);
                bool nz = false;
                for (int i = 0; i < m; ++i) {
                    x[i] = llround(xsv[i]);
                    nz = nz || x[i] != 0;
                }
                if (!nz) return;
                long long exact = b.norm_sq(x);
                if (static_cast<double>(exact) > a2 + 1e-6) return;
                std::lock_guard<std::mutex> lk(mx);
                double err = std::abs(l1 - static_cast<double>(exact)) /
                             std::max(1.0, static_cast<double>(exact));
                res.max_leaf_error = std::max(res.max_leaf_error, err);
                canonicalize_sign(x);
                if (exact < best) {
                    best = exact;
                    res.x = x;
                    res.accepted_norms.push_back(exact);
                    abest.store(best);
                } else if (exact == best && lex_less(x, res.x)) {
                    res.x = x;
                }
            };
            core.run_top(tops[t]);
            total_nodes += core.nodes;
        }
    };

    std::vector<std::thread> pool;
    int nt = std::max(1, threads);
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    res.nodes = total_nodes.load();
    if (best != std::numeric_limits<long long>::max()) {
        res.found = true;
        res.norm_sq = best;
    }
    return res;
}

std::vector<std::vector<long long>> identity_ll(int m) {
    std::vector<std::vector<long long>> u(m, std::vector<long long>(m, 0));
    for (int i = 0; i < m; ++i) u[i][i] = 1;
    return u;
}

void row_submul(std::vector<long long>& a, const std::vector<long long>& b, long long q) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= q * b[i];
}

// In-place LLL on rows with the transform carried along.
void lll_in_place(std::vector<std::vector<long long>>& rows,
                  std::vector<std::vector<long long>>& u, int dim, double delta) {
    int m = static_cast<int>(rows.size());
    if (m < 2) return;
    GsoData g = gso_mgs(rows, dim);
    int k = 1;
    while (k < m) {
        for (int j = k - 1; j >= 0; --j) {
            long long q = llround(g.mu[k][j]);
            if (q != 0) {
                row_submul(rows[k], rows[j], q);
                row_submul(u[k], u[j], q);
                for (int jj = 0; jj < j; ++jj) g.mu[k][jj] -= static_cast<double>(q) * g.mu[j][jj];
                g.mu[k][j] -= static_cast<double>(q);
            }
        }
        double lhs = g.norms_sq[k];
        double rhs = (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.norms_sq[k - 1];
        if (lhs >= rhs - 1e-12 * g.norms_sq[k - 1]) {
            ++k;
        } else {
            rows[k].swap(rows[k - 1]);
            u[k].swap(u[k - 1]);
            g = gso_mgs(rows, dim);
            k = std::max(k - 1, 1);
        }
    }
}

// k x k unimodular matrix whose first row is the primitive vector x.
// Column gcd-elimination on x is mirrored as inverse row operations on u,
// preserving x_orig == x_cur * u.
std::vector<std::vector<long long>> unimodular_completion(std::vector<long long> x) {
    int k = static_cast<int>(x.size());
    auto u = identity_ll(k);
    auto addmul = [&](int i, int j, long long t) { // x[j] += t * x[i]
        x[j] += t * x[i];
        row_submul(u[i], u[j], t);
    };
    auto do_swap = [&](int i, int j) {
        std::swap(x[i], x[j]);
        u[i].swap(u[j]);
    };
    auto negate = [&](int i) {
        x[i] = -x[i];
        for (auto& v : u[i]) v = -v;
    };
    for (;;) {
        int p = -1;
        for (int i = 0; i < k; ++i)
            if (x[i] != 0 && (p < 0 || std::llabs(x[i]) < std::llabs(x[p]))) p = i;
        if (p < 0) throw std::invalid_argument("zero vector has no unimodular completion");
        if (p != 0) do_swap(0, p);
        if (x[0] < 0) negate(0);
        bool done = true;
        for (int j = 1; j < k; ++j) {
            if (x[j] == 0) continue;
            long long q = x[j] / x[0];
            if (x[j] - q * x[0] < 0) q -= 1; // floor division
            addmul(0, j, -q);
            if (x[j] != 0) done = false;
        }
        if (done) break;
    }
    if (x[0] != 1) throw std::invalid_argument("coefficient vector is not primitive");
    return u;
}

} // namespace

GsoData orthogonalize(const LatticeBasis& b, GsoMethod method) {
    if (b.m < 1 || static_cast<int>(b.rows.size()) != b.m)
        throw std::invalid_argument("empty or inconsistent basis");
    switch (method) {
        case GsoMethod::mgs: return gso_mgs(b.rows, b.dim);
        case GsoMethod::householder: return gso_householder(b.rows, b.dim);
        case GsoMethod::givens: return gso_givens(b.rows, b.dim);
    }
    throw std::logic_error("unknown method");
}

ReductionResult lll_reduce(const LatticeBasis& b, double delta) {
    if (!(delta > 0.5 && delta <= 1.0)) throw std::invalid_argument("delta must be in (0.5, 1]");
    ReductionResult r;
    r.basis = b;
    r.transform = identity_ll(b.m);
    lll_in_place(r.basis.rows, r.transform, b.dim, delta);
    return r;
}

ReductionResult bkz_reduce(const LatticeBasis& b, int beta, double delta, int max_tours) {
    if (beta < 2 || beta > b.m) throw std::invalid_argument("block size must be in [2, m]");
    if (!(delta > 0.5 && delta <= 1.0)) throw std::invalid_argument("delta must be in (0.5, 1]");
    ReductionResult r;
    r.basis = b;
    r.transform = identity_ll(b.m);
    auto& rows = r.basis.rows;
    lll_in_place(rows, r.transform, b.dim, delta);

    const int m = b.m;
    for (int tour = 0; tour < max_tours; ++tour) {
        bool changed = false;
        for (int i = 0; i + 1 < m; ++i) {
            int h = std::min(i + beta - 1, m - 1);
            GsoData g = gso_mgs(rows, b.dim);
            double cur = delta * g.norms_sq[i] * (1 - 1e-9);
            double fbest = std::numeric_limits<double>::infinity();
            std::vector<long long> bx;
            EnumCore core;
            core.g = &g;
            core.lo = i;
            core.hi = h;
            core.zigzag = true;
            core.eps = 1e-9;
            core.bound = &cur;
            core.leaf = [&](const std::vector<double>& xsv, double l1) {
                bool nz = false;
                for (int t = i; t <= h; ++t) nz = nz || xsv[t] != 0.0;
                if (!nz || l1 >= fbest) return;
                fbest = l1;
                bx.assign(h - i + 1, 0);
                for (int t = i; t <= h; ++t) bx[t - i] = llround(xsv[t]);
                cur = std::min(cur, fbest * (1 - 1e-12));
            };
            core.run();
            if (bx.empty()) continue;

            long long gg = 0;
            for (long long v : bx) gg = std::gcd(gg, std::llabs(v));
            if (gg > 1)
                for (auto& v : bx) v /= gg;
            auto comp = unimodular_completion(bx);
            int k = h - i + 1;
            std::vector<std::vector<long long>> nrows(k), ntr(k);
            for (int rix = 0; rix < k; ++rix) {
                nrows[rix].assign(b.dim, 0);
                ntr[rix].assign(m, 0);
                for (int c = 0; c < k; ++c) {
                    if (comp[rix][c] == 0) continue;
                    for (int d = 0; d < b.dim; ++d)
                        nrows[rix][d] += comp[rix][c] * rows[i + c][d];
                    for (int d = 0; d < m; ++d)
                        ntr[rix][d] += comp[rix][c] * r.transform[i + c][d];
                }
            }
            for (int rix = 0; rix < k; ++rix) {
                rows[i + rix] = std::move(nrows[rix]);
                r.transform[i + rix] = std::move(ntr[rix]);
            }
            lll_in_place(rows, r.transform, b.dim, delta);
            changed = true;
        }
        if (!changed) break;
    }
    return r;
}

EnumResult enumerate_shortest(const LatticeBasis& b, double a2_init, EnumStrategy strategy,
                              int threads) {
    if (a2_init <= 0) throw std::invalid_argument("radius must be positive");
    auto g = orthogonalize(b, GsoMethod::mgs);
    switch (strategy) {
        case EnumStrategy::fkp: return enum_serial(b, g, a2_init, false, false);
        case EnumStrategy::schnorr_euchner: return enum_serial(b, g, a2_init, true, false);
        case EnumStrategy::batched: return enum_serial(b, g, a2_init, true, true);
        case EnumStrategy::parallel: return enum_parallel(b, g, a2_init, threads);
    }
    throw std::logic_error("unknown strategy");
}

EnumResult enumerate_batched(const LatticeBasis& b, double a2_init) {
    return enumerate_shortest(b, a2_init, EnumStrategy::batched, 1);
}

std::vector<std::pair<std::vector<long long>, long long>>
enumerate_below(const LatticeBasis& b, double a2, size_t max_points) {
    auto g = orthogonalize(b, GsoMethod::mgs);
    std::vector<std::pair<std::vector<long long>, long long>> out;
    double fb = a2;
    EnumCore core;
    core.g = &g;
    core.lo = 0;
    core.hi = b.m - 1;
    core.zigzag = true;
    core.bound = &fb;
    core.leaf = [&](const std::vector<double>& xsv, double) {
        std::vector<long long> x(b.m);
        bool nz = false;
        for (int i = 0; i < b.m; ++i) {
            x[i] = llround(xsv[i]);
            nz = nz || x[i] != 0;
        }
        if (!nz) return;
        long long exact = b.norm_sq(x);
        if (static_cast<double>(exact) > a2 + 1e-6) return;
        canonicalize_sign(x);
        out.emplace_back(std::move(x), exact);
        if (out.size() > max_points) throw std::runtime_error("too many lattice points below radius");
    };
    core.run();
    return out;
}

double hermite_constant_bound(int m) {
    if (m < 1) throw std::invalid_argument("rank must be positive");
    return (2.0 / M_PI) * std::pow(std::tgamma(2.0 + m / 2.0), 2.0 / m);
}

double initial_radius(const LatticeBasis& b, const GsoData& g) {
    __int128 b1 = 0;
    for (long long v : b.rows[0]) b1 += static_cast<__int128>(v) * v;
    double logdet2 = 0; // log of det^2 = sum log norms_sq
    for (double n : g.norms_sq) logdet2 += std::log(n);
    double det_pow = std::exp(logdet2 / b.m); // det^(2/m)
    double hermite = std::ceil(hermite_constant_bound(b.m)) * det_pow;
    return std::min(static_cast<double>(b1), hermite);
}

double gaussian_node_estimate(const GsoData& g, double a2, int k) {
    int m = static_cast<int>(g.norms_sq.size());
    if (k < 1 || k > m) throw std::invalid_argument("level out of range");
    double a = std::sqrt(a2);
    double vk = std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0) * std::pow(a, k);
    double denom = 1;
    for (int i = m - k; i < m; ++i) denom *= std::sqrt(g.norms_sq[i]);
    return 0.5 * vk / denom;
}

double exp_length(const std::vector<double>& norms_sq, int k, int u, double q) {
    int m = static_cast<int>(norms_sq.size());
    if (k < 1 || u < 1 || k > m - u) throw std::invalid_argument("bad (k, u) for profile");
    double s = 0;
    for (int i = 1; i <= k - 1; ++i) s += std::pow(q, k - i) * norms_sq[i - 1] / 12.0;
    for (int i = k; i <= m - u - 1; ++i) s += norms_sq[i - 1] / 12.0;
    for (int i = m - u; i <= m - 1; ++i) s += norms_sq[i - 1] / 3.0;
    s += norms_sq[m - 1];
    return s;
}

double log_success_prob_bound(const std::vector<double>& norms_sq, int k, int u,
                              double gamma) {
    double target = gamma * norms_sq[0];
    if (exp_length(norms_sq, k, u, 1.0) <= target) return -1.0;
    if (exp_length(norms_sq, k, u, 0.0) >= target)
        return -std::numeric_limits<double>::infinity();
    // Regula falsi on [0, 1]; plain bisection as the fallback (60 steps).
    double a = 0.0, b = 1.0;
    double fa = exp_length(norms_sq, k, u, a) - target;
    double fb = exp_length(norms_sq, k, u, b) - target;
    double q = 0.5;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        q = a - fa * (b - a) / (fb - fa);
        if (!(q > a && q < b)) break;
        double fq = exp_length(norms_sq, k, u, q) - target;
        if (std::abs(fq) < 1e-12 * std::max(1.0, std::abs(target))) {
            converged = true;
            break;
        }
        if ((fq < 0) == (fa < 0)) {
            a = q;
            fa = fq;
        } else {
            b = q;
            fb = fq;
        }
        if (b - a < 1e-15) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        a = 0.0;
        b = 1.0;
        for (int it = 0; it < 60; ++it) {
            q = 0.5 * (a + b);
            double fq = exp_length(norms_sq, k, u, q) - target;
            if (fq < 0) a = q;
            else b = q;
        }
        q = 0.5 * (a + b);
    }
    return std::floor(k * (k - 1) / 4.0 * std::log2(q) - 1.0);
}

double success_probability(const std::vector<double>& norms_sq, int u, double gamma) {
    int m = static_cast<int>(norms_sq.size());
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= m - u; ++k)
        best = std::max(best, log_success_prob_bound(norms_sq, k, u, gamma));
    return best;
}

SamplingResult sampling_search(const LatticeBasis& b, const SamplingConfig& cfg) {
    const int m = b.m;
    if (cfg.u < 1 || cfg.u > std::min(m - 1, 30))
        throw std::invalid_argument("sampling dimension out of range");
    auto g = orthogonalize(b, GsoMethod::mgs);

    SamplingResult res;
    res.log2_success_bound = success_probability(g.norms_sq, cfg.u, cfg.gamma);
    if (res.log2_success_bound < cfg.log2_prob_floor) {
        res.status = SamplingResult::Status::infeasible;
        return res;
    }

    __int128 b1 = 0;
    for (long long v : b.rows[0]) b1 += static_cast<__int128>(v) * v;
    double accept = 0.99 * static_cast<double>(b1);

    long long total = std::min(1LL << cfg.u, cfg.max_samples);
    std::vector<long long> coords(m);
    std::vector<double> vmu(m);
    for (long long xc = 1; xc <= total; ++xc) {
        std::fill(coords.begin(), coords.end(), 0LL);
        coords[m - 1] = 1;
        std::fill(vmu.begin(), vmu.end(), 0.0);
        for (int j = 0; j < m - 1; ++j) vmu[j] = g.mu[m - 1][j];
        vmu[m - 1] = 1.0;
        long long bits = xc;
        for (int j = m - 2; j >= 0; --j) {
            double vj = vmu[j];
            long long y = static_cast<long long>(std::ceil(vj - 0.5));
            if (bits % 2 == 1) {
                if (vj - static_cast<double>(y) <= 0) y -= 1;
                else y += 1;
            }
            bits /= 2;
            if (y != 0) {
                coords[j] -= y;
                for (int t = 0; t < j; ++t) vmu[t] -= static_cast<double>(y) * g.mu[j][t];
                vmu[j] -= static_cast<double>(y);
            }
        }
        long long nsq = b.norm_sq(coords);
        if (nsq != 0 && static_cast<double>(nsq) <= accept + 1e-9) {
            canonicalize_sign(coords);
            res.status = SamplingResult::Status::found;
            res.x = coords;
            res.norm_sq = nsq;
            return res;
        }
    }
    res.status = SamplingResult::Status::not_found;
    return res;
}

bool is_unimodular(const std::vector<std::vector<long long>>& u) {
    size_t m = u.size();
    for (const auto& row : u)
        if (row.size() != m) return false;
    const long long primes[2] = {1000000007LL, 998244353LL};
    long long dets[2];
    for (int pi = 0; pi < 2; ++pi) {
        long long p = primes[pi];
        std::vector<std::vector<long long>> a(m, std::vector<long long>(m));
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) a[i][j] = ((u[i][j] % p) + p) % p;
        long long det = 1;
        for (size_t c = 0; c < m; ++c) {
            size_t piv = c;
            while (piv < m && a[piv][c] == 0) ++piv;
            if (piv == m) return false;
            if (piv != c) {
                a[piv].swap(a[c]);
                det = p - det;
            }
            det = static_cast<long long>(static_cast<__int128>(det) * a[c][c] % p);
            // inverse of pivot mod p
            long long inv = 1, base = a[c][c], e = p - 2;
            while (e) {
                if (e & 1) inv = static_cast<long long>(static_cast<__int128>(inv) * base % p);
                base = static_cast<long long>(static_cast<__int128>(base) * base % p);
                e >>= 1;
            }
            for (size_t r = c + 1; r < m; ++r) {
                if (a[r][c] == 0) continue;
                long long f = static_cast<long long>(static_cast<__int128>(a[r][c]) * inv % p);
                for (size_t j = c; j < m; ++j)
                    a[r][j] = static_cast<long long>(
                        ((a[r][j] - static_cast<__int128>(f) * a[c][j]) % p + p) % p);
            }
        }
        dets[pi] = det % p;
    }
    bool plus = dets[0] == 1 && dets[1] == 1;
    bool minus = dets[0] == primes[0] - 1 && dets[1] == primes[1] - 1;
    return plus || minus;
}

} // namespace forge
