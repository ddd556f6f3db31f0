#pragma once

#include "forge/core.hpp"
#include "forge/lattice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

struct DistanceReport {
    long long lower_bound = 1;
    long long upper_bound = 0;
    bool exact = false;
    std::vector<uint8_t> witness; // codeword over GF(q) achieving upper_bound
    std::vector<std::string> trace;
    long long enumerated = 0; // codewords / lattice points examined
};

// Exhaustive search over all q^k - 1 nonzero messages. pre: q^k <= 2^26.
DistanceReport brute_force_distance(const GeneratorMatrix& g);

// Information-set chain: successive Gauss passes on the unused columns give
// generator forms G_j with relative ranks r_j; messages are enumerated by
// ascending weight across all forms while the lower bound
// sum_j max(0, (w+1) - (k - r_j)) climbs toward the upper bound.
DistanceReport brouwer_zimmermann(const GeneratorMatrix& g,
                                  long long max_codewords = -1, int threads = 1);

// Parity-check matrix in circulant-polynomial form: each cell holds the
// monomial exponents present (empty = zero block). Exponents live mod z when
// z > 0; coefficients are counted mod q.
struct PolynomialMatrix {
    int J = 0, L = 0;
    int z = 0; // 0 = no cyclic reduction
    int q = 2;
    std::vector<std::vector<int>> cells; // row-major J*L, exponent lists

    std::vector<int>& at(int j, int l) { return cells[static_cast<size_t>(j) * L + l]; }
    const std::vector<int>& at(int j, int l) const {
        return cells[static_cast<size_t>(j) * L + l];
    }
    // Shift s maps to the monomial x^(s+1); -1 to the zero cell.
    static PolynomialMatrix from_exponent(const ExponentMatrix& em, int q = 2);
};

enum class VsMode { protograph, shifts };

// Upper bound on d_min from (J+1)-column subsets: per-minor permanents
// (integer in protograph mode, polynomial-weight in shifts mode), min+ over
// subset sums. Returns 0 when every subset sum vanishes (unbounded by this
// method). Throws when C(L, J+1) exceeds the enumeration cap.
long long vs_upper_bound(const PolynomialMatrix& pm, VsMode mode, int threads = 1,
                         long long max_subsets = 10000000);

// Integer permanent by Ryser's formula with Gray-code subset order.
long long permanent(const std::vector<std::vector<long long>>& a);

// Kannan embedding: k rows [N*G_i | e_i] plus n rows [N*q*e_j | 0];
// codewords of weight d become lattice vectors of squared norm about N^2*d.
LatticeBasis embed(const GeneratorMatrix& g, long long n_scale);

struct LatticeDistanceConfig {
    int beta = 4;
    EnumStrategy strategy = EnumStrategy::schnorr_euchner;
    int threads = 1;
    long long n_scale = 0;   // 0 = ceil(sqrt(k)) + 1
    long long upper_hint = 0; // 0 = none (a valid upper bound, e.g. the VS bound)
    long long lower_hint = 1; // merged graph-based lower bound
    size_t max_points = size_t(1) << 22; // enumeration budget
};

// embed -> BKZ -> harvest short rows -> enumerate every lattice point below
// the codeword radius N^2*d_ub + k*floor(q/2)^2 and keep codeword-type
// vectors. Completion (or upper == lower) makes the answer exact.
DistanceReport lattice_distance(const GeneratorMatrix& g,
                                const LatticeDistanceConfig& cfg = {});

struct ProbabilisticConfig {
    int u = 8;
    double gamma = 0.99;
    long long samples = 10000; // basis permutations tried
    int beta = 2;
    uint64_t seed = 1;
    long long n_scale = 0;
};

// Sampling search over permuted reduced bases; upper bound only.
DistanceReport probabilistic_distance(const GeneratorMatrix& g,
                                      const ProbabilisticConfig& cfg = {});

} // namespace forge
