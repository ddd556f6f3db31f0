#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace forge {

// Integer row basis of a lattice: rows are linearly independent vectors of
// length dim (independence checked via GSO pivots).
struct LatticeBasis {
    int m = 0;   // rank
    int dim = 0; // ambient dimension
    std::vector<std::vector<long long>> rows;

    // Ambient vector of an integer combination x (size m) of the rows.
    std::vector<long long> vector_of(const std::vector<long long>& x) const;
    // Exact squared Euclidean norm of that combination.
    long long norm_sq(const std::vector<long long>& x) const;
};

// Text format: first line "m dim", then m rows of integers.
LatticeBasis read_basis(std::istream& in);
void write_basis(std::ostream& out, const LatticeBasis& b);

struct DependentRows : std::runtime_error {
    explicit DependentRows(int pivot_row);
    int pivot; // first row with a (numerically) zero GSO pivot
};

enum class GsoMethod { mgs, householder, givens };

struct GsoData {
    std::vector<double> norms_sq;        // ||b_i^perp||^2
    std::vector<std::vector<double>> mu; // mu[i][j] for j < i (row i has i entries)
};

GsoData orthogonalize(const LatticeBasis& b, GsoMethod method = GsoMethod::mgs);

struct ReductionResult {
    LatticeBasis basis;
    // basis.rows == transform * input.rows; integer with |det| = 1.
    std::vector<std::vector<long long>> transform;
};

ReductionResult lll_reduce(const LatticeBasis& b, double delta = 0.99);
ReductionResult bkz_reduce(const LatticeBasis& b, int beta, double delta = 0.99,
                           int max_tours = 32);

enum class EnumStrategy { fkp, schnorr_euchner, parallel, batched };

struct EnumResult {
    bool found = false;
    std::vector<long long> x; // coordinates w.r.t. the given basis rows
    long long norm_sq = 0;    // exact integer norm of the winner
    long long nodes = 0;
    std::vector<long long> accepted_norms; // radius updates, strictly decreasing
    double max_leaf_error = 0; // |partial-sum l_1 - exact norm| over leaves (relative)
};

// Shortest nonzero vector with squared norm <= a2_init; equal-norm ties broken
// toward the lexicographically smallest coordinate vector whose first nonzero
// entry is positive. All strategies return identical answers.
EnumResult enumerate_shortest(const LatticeBasis& b, double a2_init,
                              EnumStrategy strategy = EnumStrategy::schnorr_euchner,
                              int threads = 1);
EnumResult enumerate_batched(const LatticeBasis& b, double a2_init);

// Every nonzero point with squared norm <= a2, one representative per +-pair
// (sign-canonical), in no particular order. No radius shrinking. Throws if the
// point count exceeds max_points.
std::vector<std::pair<std::vector<long long>, long long>>
enumerate_below(const LatticeBasis& b, double a2, size_t max_points = size_t(1) << 22);

// Hermite-constant approximation (2/pi) * Gamma(2 + m/2)^(2/m).
double hermite_constant_bound(int m);
// Default enumeration radius min(||b1||^2, ceil(gamma_m) * det^(2/m)).
double initial_radius(const LatticeBasis& b, const GsoData& g);
// Expected node count H_k = (1/2) V_k(A) / prod of the last k GSO norms.
double gaussian_node_estimate(const GsoData& g, double a2, int k);

struct SamplingConfig {
    int u = 8;                       // perturbation dimension (last u levels)
    double gamma = 0.99;             // acceptance target vs ||b1||^2
    long long max_samples = 1 << 20; // cap on the 2^u sample loop
    double log2_prob_floor = -60.0;  // below this the search is infeasible
};

struct SamplingResult {
    enum class Status { found, not_found, infeasible };
    Status status = Status::not_found;
    std::vector<long long> x; // coordinates w.r.t. the basis rows
    long long norm_sq = 0;
    double log2_success_bound = 0;
};

// Bit-indexed rounding perturbation over the last u levels; accepts the first
// vector with ||v||^2 <= gamma * ||b1||^2 (membership re-verified exactly).
SamplingResult sampling_search(const LatticeBasis& b, const SamplingConfig& cfg);

// Expected squared length of a sample, as a function of the (permuted) GSO
// profile; q in [0,1] interpolates the decay of the first k-1 terms.
double exp_length(const std::vector<double>& norms_sq, int k, int u, double q);
double log_success_prob_bound(const std::vector<double>& norms_sq, int k, int u,
                              double gamma);
// max over k of the per-k log2 bound; -inf when no k admits success.
double success_probability(const std::vector<double>& norms_sq, int u, double gamma);

// |det| == 1 over the integers (Bareiss elimination).
bool is_unimodular(const std::vector<std::vector<long long>>& u);

} // namespace forge
