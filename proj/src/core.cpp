#include "forge/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace forge {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Strict integer token parse; rejects trailing junk.
int parse_int(const std::string& tok) {
    size_t pos = 0;
    int v;
    try {
        v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        fail("non-integer token '" + tok + "'");
    }
    if (pos != tok.size()) fail("non-integer token '" + tok + "'");
    return v;
}

std::vector<std::vector<std::string>> tokenize_lines(std::istream& in) {
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
}

} // namespace

void BaseMatrix::validate() const {
    if (J <= 0 || L <= 0) fail("base matrix must have positive dimensions");
    if (entries.size() != static_cast<size_t>(J) * L) fail("base matrix entry count mismatch");
    for (int e : entries)
        if (e != 0 && e != 1) fail("base matrix entries must be 0 or 1");
    for (int j = 0; j < J; ++j) {
        bool any = false;
        for (int l = 0; l < L; ++l) any |= at(j, l) != 0;
        if (!any) fail("base matrix row " + std::to_string(j) + " is all-zero");
    }
    for (int l = 0; l < L; ++l) {
        bool any = false;
        for (int j = 0; j < J; ++j) any |= at(j, l) != 0;
        if (!any) fail("base matrix column " + std::to_string(l) + " is all-zero");
    }
    for (int c : punctured_cols)
        if (c < 0 || c >= L) fail("punctured column index out of range");
}

BaseMatrix ExponentMatrix::base() const {
    BaseMatrix b;
    b.J = J;
    b.L = L;
    b.entries.resize(shifts.size());
    for (size_t i = 0; i < shifts.size(); ++i) b.entries[i] = shifts[i] >= 0 ? 1 : 0;
    return b;
}

void ExponentMatrix::validate() const {
    if (J <= 0 || L <= 0) fail("exponent matrix must have positive dimensions");
    if (z < 1) fail("circulant size must be >= 1");
    if (shifts.size() != static_cast<size_t>(J) * L) fail("exponent matrix entry count mismatch");
    for (int s : shifts)
        if (s < -1 || s >= z) fail("shift " + std::to_string(s) + " outside {-1} u [0, z)");
}

size_t SparseBinaryMatrix::ones() const {
    size_t c = 0;
    for (const auto& r : rows) c += r.size();
    return c;
}

bool SparseBinaryMatrix::get(int r, int c) const {
    const auto& row = rows[r];
    return std::binary_search(row.begin(), row.end(), c);
}

std::vector<std::vector<uint8_t>> SparseBinaryMatrix::dense() const {
    std::vector<std::vector<uint8_t>> d(n_rows, std::vector<uint8_t>(n_cols, 0));
    for (int r = 0; r < n_rows; ++r)
        for (int c : rows[r]) d[r][c] = 1;
    return d;
}

SparseBinaryMatrix SparseBinaryMatrix::from_dense(const std::vector<std::vector<uint8_t>>& d) {
    SparseBinaryMatrix h;
    h.n_rows = static_cast<int>(d.size());
    h.n_cols = h.n_rows ? static_cast<int>(d[0].size()) : 0;
    h.rows.resize(h.n_rows);
    for (int r = 0; r < h.n_rows; ++r)
        for (int c = 0; c < h.n_cols; ++c)
            if (d[r][c]) h.rows[r].push_back(c);
    return h;
}

size_t TannerGraph::edge_count() const {
    size_t e = 0;
    for (const auto& a : var_adj) e += a.size();
    return e;
}

TannerGraph tanner_from(const SparseBinaryMatrix& h) {
    TannerGraph g;
    g.n = h.n_cols;
    g.m = h.n_rows;
    g.var_adj.resize(g.n);
    g.chk_adj.resize(g.m);
    for (int r = 0; r < h.n_rows; ++r)
        for (int c : h.rows[r]) {
            g.chk_adj[r].push_back(c);
            g.var_adj[c].push_back(r);
        }
    return g;
}

std::vector<uint8_t> GeneratorMatrix::encode(const std::vector<uint8_t>& msg) const {
    std::vector<uint8_t> out(n, 0);
    for (int r = 0; r < k; ++r) {
        if (!msg[r]) continue;
        for (int c = 0; c < n; ++c)
            out[c] = static_cast<uint8_t>((out[c] + msg[r] * at(r, c)) % q);
    }
    return out;
}

void GeneratorMatrix::validate() const {
    if (q != 2 && q != 3) fail("alphabet must be 2 or 3");
    if (k < 0 || n <= 0 || k > n) fail("bad generator dimensions");
    if (a.size() != static_cast<size_t>(k) * n) fail("generator entry count mismatch");
    for (uint8_t v : a)
        if (v >= q) fail("generator entry outside alphabet");
    auto d = std::vector<std::vector<uint8_t>>(k, std::vector<uint8_t>(n));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < n; ++c) d[r][c] = at(r, c);
    auto piv = gf_row_reduce(d, q);
    if (static_cast<int>(piv.size()) != k) fail("generator rows are dependent over GF(q)");
}

int gf_inv(int a, int q) {
    a %= q;
    if (a == 0) fail("division by zero in GF(q)");
    return a == 1 ? 1 : q - 1; // for q in {2,3}: 1^-1 = 1, 2^-1 = 2 (mod 3)
}

std::vector<int> gf_row_reduce(std::vector<std::vector<uint8_t>>& m, int q) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c]) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(m[r], m[sel]);
        int inv = gf_inv(m[r][c], q);
        for (int j = c; j < cols; ++j) m[r][j] = static_cast<uint8_t>(m[r][j] * inv % q);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !m[i][c]) continue;
            int f = m[i][c];
            for (int j = c; j < cols; ++j)
                m[i][j] = static_cast<uint8_t>((m[i][j] + (q - f) * m[r][j]) % q);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

SparseBinaryMatrix expand(const ExponentMatrix& em) {
    em.validate();
    SparseBinaryMatrix h;
    h.n_rows = em.J * em.z;
    h.n_cols = em.L * em.z;
    h.rows.resize(h.n_rows);
    for (int j = 0; j < em.J; ++j)
        for (int l = 0; l < em.L; ++l) {
            int s = em.at(j, l);
            if (s < 0) continue;
            // Row a of the block has its single 1 at column (a + s) mod z.
            for (int a = 0; a < em.z; ++a)
                h.rows[j * em.z + a].push_back(l * em.z + (a + s) % em.z);
        }
    for (auto& r : h.rows) std::sort(r.begin(), r.end());
    return h;
}

GeneratorMatrix derive_generator(const SparseBinaryMatrix& h, int q) {
    if (q != 2 && q != 3) fail("alphabet must be 2 or 3");
    if (h.ones() == 0) fail("cannot derive generator of an all-zero parity-check matrix");
    auto d = h.dense();
    auto pivots = gf_row_reduce(d, q);
    int n = h.n_cols;
    int rank = static_cast<int>(pivots.size());
    int k = n - rank;

    std::vector<bool> is_pivot(n, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    GeneratorMatrix g;
    g.k = k;
    g.n = n;
    g.q = q;
    g.a.assign(static_cast<size_t>(k) * n, 0);
    for (int i = 0; i < k; ++i) {
        int f = free_cols[i];
        g.at(i, f) = 1;
        // Pivot column pivots[r] carries -R[r][f] so that G * H^T = 0.
        for (int r = 0; r < rank; ++r)
            g.at(i, pivots[r]) = static_cast<uint8_t>((q - d[r][f] % q) % q);
    }
    g.info_cols = free_cols;
    g.info_cols.insert(g.info_cols.end(), pivots.begin(), pivots.end());
    g.systematic = true;
    for (int i = 0; i < k; ++i) g.systematic &= free_cols[i] == i;
    return g;
}

std::vector<std::vector<uint8_t>> parity_from_generator(const GeneratorMatrix& g) {
    // Nullspace of the row space of G, by the same elimination used above.
    auto d = std::vector<std::vector<uint8_t>>(g.k, std::vector<uint8_t>(g.n));
    for (int r = 0; r < g.k; ++r)
        for (int c = 0; c < g.n; ++c) d[r][c] = g.at(r, c);
    auto pivots = gf_row_reduce(d, g.q);
    int rank = static_cast<int>(pivots.size());
    std::vector<bool> is_pivot(g.n, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<std::vector<uint8_t>> h;
    for (int f = 0; f < g.n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<uint8_t> row(g.n, 0);
        row[f] = 1;
        for (int r = 0; r < rank; ++r)
            row[pivots[r]] = static_cast<uint8_t>((g.q - d[r][f] % g.q) % g.q);
        h.push_back(std::move(row));
    }
    return h;
}

bool is_codeword(const GeneratorMatrix& g, const std::vector<uint8_t>& word) {
    auto h = parity_from_generator(g);
    for (const auto& row : h) {
        int s = 0;
        for (int c = 0; c < g.n; ++c) s += row[c] * word[c];
        if (s % g.q != 0) return false;
    }
    return true;
}

ExponentMatrix read_exponent_matrix(std::istream& in) {
    auto lines = tokenize_lines(in);
    if (lines.empty() || lines[0].size() != 3)
        fail("exponent matrix header must be 'J L z'");
    ExponentMatrix em;
    em.J = parse_int(lines[0][0]);
    em.L = parse_int(lines[0][1]);
    em.z = parse_int(lines[0][2]);
    if (em.J <= 0 || em.L <= 0 || em.z < 1) fail("bad exponent matrix header values");
    if (static_cast<int>(lines.size()) != em.J + 1)
        fail("expected " + std::to_string(em.J) + " matrix rows");
    for (int j = 0; j < em.J; ++j) {
        const auto& row = lines[j + 1];
        if (static_cast<int>(row.size()) != em.L)
            fail("row " + std::to_string(j) + " has " + std::to_string(row.size()) +
                 " entries, expected " + std::to_string(em.L));
        for (const auto& tok : row) em.shifts.push_back(parse_int(tok));
    }
    em.validate();
    return em;
}

ExponentMatrix parse_exponent_matrix(const std::string& text) {
    std::istringstream in(text);
    return read_exponent_matrix(in);
}

void write_exponent_matrix(std::ostream& out, const ExponentMatrix& em) {
    out << em.J << ' ' << em.L << ' ' << em.z << '\n';
    for (int j = 0; j < em.J; ++j) {
        for (int l = 0; l < em.L; ++l) out << (l ? " " : "") << em.at(j, l);
        out << '\n';
    }
}

std::string format_exponent_matrix(const ExponentMatrix& em) {
    std::ostringstream os;
    write_exponent_matrix(os, em);
    return os.str();
}

BaseMatrix read_base_matrix(std::istream& in) {
    auto lines = tokenize_lines(in);
    if (lines.empty() || lines[0].size() != 2) fail("base matrix header must be 'J L'");
    BaseMatrix b;
    b.J = parse_int(lines[0][0]);
    b.L = parse_int(lines[0][1]);
    size_t expect = static_cast<size_t>(b.J) + 1;
    bool has_punct = lines.size() == expect + 1 && lines.back()[0] == "punctured:";
    if (lines.size() != expect && !has_punct) fail("unexpected base matrix row count");
    for (int j = 0; j < b.J; ++j) {
        const auto& row = lines[j + 1];
        if (static_cast<int>(row.size()) != b.L)
            fail("base row " + std::to_string(j) + " has wrong length");
        for (const auto& tok : row) {
            int v = parse_int(tok);
            if (v != 0 && v != 1) fail("base matrix entries must be 0 or 1 (multi-edge rejected)");
            b.entries.push_back(v);
        }
    }
    if (has_punct)
        for (size_t i = 1; i < lines.back().size(); ++i)
            b.punctured_cols.push_back(parse_int(lines.back()[i]));
    std::sort(b.punctured_cols.begin(), b.punctured_cols.end());
    b.validate();
    return b;
}

BaseMatrix parse_base_matrix(const std::string& text) {
    std::istringstream in(text);
    return read_base_matrix(in);
}

void write_base_matrix(std::ostream& out, const BaseMatrix& b) {
    out << b.J << ' ' << b.L << '\n';
    for (int j = 0; j < b.J; ++j) {
        for (int l = 0; l < b.L; ++l) out << (l ? " " : "") << b.at(j, l);
        out << '\n';
    }
    if (!b.punctured_cols.empty()) {
        out << "punctured:";
        for (int c : b.punctured_cols) out << ' ' << c;
        out << '\n';
    }
}

SparseBinaryMatrix read_alist(std::istream& in) {
    std::vector<int> v;
    std::string tok;
    while (in >> tok) v.push_back(parse_int(tok));
    size_t p = 0;
    auto next = [&]() {
        if (p >= v.size()) fail("truncated alist");
        return v[p++];
    };
    int n = next(), m = next();
    if (n <= 0 || m <= 0) fail("bad alist dimensions");
    int dvmax = next(), dcmax = next();
    std::vector<int> dv(n), dc(m);
    for (int i = 0; i < n; ++i) {
        dv[i] = next();
        if (dv[i] < 0 || dv[i] > dvmax) fail("bad alist column degree");
    }
    for (int i = 0; i < m; ++i) {
        dc[i] = next();
        if (dc[i] < 0 || dc[i] > dcmax) fail("bad alist row degree");
    }
    SparseBinaryMatrix h;
    h.n_rows = m;
    h.n_cols = n;
    h.rows.resize(m);
    // Column lists first (1-indexed check ids); padding zeros allowed up to dvmax.
    for (int c = 0; c < n; ++c) {
        std::vector<int> got;
        for (int e = 0; e < dv[c]; ++e) {
            int r = next();
            if (r < 1 || r > m) fail("alist check index out of range");
            got.push_back(r - 1);
        }
        // Tolerate fixed-width padding: peek for zeros up to dvmax.
        for (int e = dv[c]; e < dvmax && p < v.size() && v[p] == 0; ++e) ++p;
        for (int r : got) h.rows[r].push_back(c);
    }
    // Row lists; validate consistency with what the column lists produced.
    for (int r = 0; r < m; ++r) {
        std::vector<int> got;
        for (int e = 0; e < dc[r]; ++e) {
            int c = next();
            if (c < 1 || c > n) fail("alist variable index out of range");
            got.push_back(c - 1);
        }
        for (int e = dc[r]; e < dcmax && p < v.size() && v[p] == 0; ++e) ++p;
        std::sort(got.begin(), got.end());
        std::sort(h.rows[r].begin(), h.rows[r].end());
        if (got != h.rows[r]) fail("alist row/column adjacency lists disagree");
    }
    return h;
}

SparseBinaryMatrix parse_alist(const std::string& text) {
    std::istringstream in(text);
    return read_alist(in);
}

void write_alist(std::ostream& out, const SparseBinaryMatrix& h) {
    int n = h.n_cols, m = h.n_rows;
    std::vector<std::vector<int>> cols(n);
    for (int r = 0; r < m; ++r)
        for (int c : h.rows[r]) cols[c].push_back(r);
    size_t dvmax = 0, dcmax = 0;
    for (const auto& c : cols) dvmax = std::max(dvmax, c.size());
    for (const auto& r : h.rows) dcmax = std::max(dcmax, r.size());
    out << n << ' ' << m << '\n' << dvmax << ' ' << dcmax << '\n';
    for (int c = 0; c < n; ++c) out << (c ? " " : "") << cols[c].size();
    out << '\n';
    for (int r = 0; r < m; ++r) out << (r ? " " : "") << h.rows[r].size();
    out << '\n';
    for (int c = 0; c < n; ++c) {
        for (size_t e = 0; e < dvmax; ++e)
            out << (e ? " " : "") << (e < cols[c].size() ? cols[c][e] + 1 : 0);
        out << '\n';
    }
    for (int r = 0; r < m; ++r) {
        for (size_t e = 0; e < dcmax; ++e)
            out << (e ? " " : "") << (e < h.rows[r].size() ? h.rows[r][e] + 1 : 0);
        out << '\n';
    }
}

std::string format_alist(const SparseBinaryMatrix& h) {
    std::ostringstream os;
    write_alist(os, h);
    return os.str();
}

} // namespace forge
