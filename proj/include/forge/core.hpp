#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace forge {

// Protograph: J x L matrix with {0,1} entries (edge present or not).
struct BaseMatrix {
    int J = 0, L = 0;
    std::vector<int> entries;        // row-major
    std::vector<int> punctured_cols; // sorted subset of [0, L)

    int at(int j, int l) const { return entries[static_cast<size_t>(j) * L + l]; }
    int& at(int j, int l) { return entries[static_cast<size_t>(j) * L + l]; }
    void validate() const; // throws std::invalid_argument on violation
};

// Circulant-shift matrix: shift -1 encodes the all-zero z x z block,
// shift s in [0, z) the identity cyclically shifted right by s.
struct ExponentMatrix {
    int J = 0, L = 0, z = 1;
    std::vector<int> shifts; // row-major

    int at(int j, int l) const { return shifts[static_cast<size_t>(j) * L + l]; }
    int& at(int j, int l) { return shifts[static_cast<size_t>(j) * L + l]; }
    BaseMatrix base() const;
    void validate() const;
};

// Sparse 0/1 matrix stored as sorted column indices per row.
struct SparseBinaryMatrix {
    int n_rows = 0, n_cols = 0;
    std::vector<std::vector<int>> rows;

    size_t ones() const;
    bool get(int r, int c) const;
    std::vector<std::vector<uint8_t>> dense() const;
    static SparseBinaryMatrix from_dense(const std::vector<std::vector<uint8_t>>& d);
};

// Bipartite adjacency of a parity-check matrix: variable nodes are columns,
// check nodes are rows.
struct TannerGraph {
    int n = 0, m = 0;
    std::vector<std::vector<int>> var_adj; // variable -> checks
    std::vector<std::vector<int>> chk_adj; // check -> variables

    int var_degree(int v) const { return static_cast<int>(var_adj[v].size()); }
    int chk_degree(int c) const { return static_cast<int>(chk_adj[c].size()); }
    size_t edge_count() const;
};

TannerGraph tanner_from(const SparseBinaryMatrix& h);

// Dense generator over GF(q), q in {2, 3}.
struct GeneratorMatrix {
    int k = 0, n = 0, q = 2;
    std::vector<uint8_t> a; // row-major k*n, entries in [0, q)
    bool systematic = false;
    // Column permutation under which the generator is systematic: the first k
    // entries list the information columns. Distances are permutation-invariant.
    std::vector<int> info_cols;

    uint8_t at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
    uint8_t& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
    std::vector<uint8_t> encode(const std::vector<uint8_t>& msg) const;
    void validate() const;
};

// --- GF(q) helpers (q = 2 or 3) ---------------------------------------------
inline int gf_add(int a, int b, int q) { return (a + b) % q; }
inline int gf_sub(int a, int b, int q) { return (a - b % q + q) % q; }
inline int gf_mul(int a, int b, int q) { return (a * b) % q; }
int gf_inv(int a, int q);

// Row-reduce `m` (rows x cols, entries mod q) in place to reduced echelon form.
// Returns the pivot column of each pivot row, in order.
std::vector<int> gf_row_reduce(std::vector<std::vector<uint8_t>>& m, int q);

// --- Operations --------------------------------------------------------------

// Replace each shift by its z x z circulant block; -1 becomes the zero block.
SparseBinaryMatrix expand(const ExponentMatrix& em);

// Nullspace basis of H over GF(q): G with k = n - rank(H), G * H^T = 0,
// systematic up to the recorded column permutation. Throws if H is all-zero.
GeneratorMatrix derive_generator(const SparseBinaryMatrix& h, int q);

// Parity-check matrix of the code generated by G (nullspace of the row space),
// as a dense 0/1..q-1 matrix; used for witness verification and round trips.
std::vector<std::vector<uint8_t>> parity_from_generator(const GeneratorMatrix& g);

bool is_codeword(const GeneratorMatrix& g, const std::vector<uint8_t>& word);

// Text format: first line "J L z", then J rows of L integers in {-1} u [0, z).
ExponentMatrix read_exponent_matrix(std::istream& in);
ExponentMatrix parse_exponent_matrix(const std::string& text);
void write_exponent_matrix(std::ostream& out, const ExponentMatrix& em);
std::string format_exponent_matrix(const ExponentMatrix& em);

// Text format: first line "J L", then J rows of L entries in {0,1};
// optional trailing line "punctured: c1 c2 ...".
BaseMatrix read_base_matrix(std::istream& in);
BaseMatrix parse_base_matrix(const std::string& text);
void write_base_matrix(std::ostream& out, const BaseMatrix& b);

// Standard alist: "n m", max degrees, column/row degree lists, then 1-indexed
// adjacency lists (zero-padded on write, padding tolerated on read).
SparseBinaryMatrix read_alist(std::istream& in);
SparseBinaryMatrix parse_alist(const std::string& text);
void write_alist(std::ostream& out, const SparseBinaryMatrix& h);
std::string format_alist(const SparseBinaryMatrix& h);

} // namespace forge
