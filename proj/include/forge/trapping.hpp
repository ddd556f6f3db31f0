#pragma once

#include "forge/core.hpp"

#include <cstdint>
#include <vector>

namespace forge {

struct TrappingSet {
    int a = 0;              // variable-node count
    int b = 0;              // checks touched an odd number of times
    std::vector<int> nodes; // sorted variable indices
    double pseudoweight = 0;
};

// Checks adjacent to the node set an odd number of times.
int odd_checks(const TannerGraph& g, const std::vector<int>& nodes);

// Candidate subgraphs grown from short cycles (length <= girth+4): closure
// under cycle unions plus single nodes with >= 2 neighbors among the touched
// checks, filtered to a <= a_max and b <= b_max. Unweighted.
std::vector<TrappingSet> enumerate_ts(const TannerGraph& g, int a_max, int b_max,
                                      size_t max_subsets = size_t(1) << 20);

// Inequality system cut out by the parity checks: per check row, one row for
// each odd-cardinality subset V of its support (+1 on V, -1 on the rest,
// rhs |V|-1); variables additionally boxed to [0,1].
struct LinearProgram {
    int n = 0;
    std::vector<std::vector<double>> rows; // row . x <= rhs[i]
    std::vector<double> rhs;
};

// pre: every row weight <= 16 (2^(w-1) inequalities per row).
LinearProgram build_fundamental_polytope(const SparseBinaryMatrix& h);

struct LpResult {
    bool optimal = false;
    std::vector<double> x;
    double value = 0;        // objective at the vertex
    double pseudoweight = 0; // (sum x)^2 / sum x^2, 0 at x = 0
};

// Dense simplex (Bland's rule, 1e-9 tolerance) minimizing objective over the
// polytope; force_one lists variables pinned to 1.
LpResult lp_min_weight(const SparseBinaryMatrix& h, const std::vector<double>& objective,
                       const std::vector<int>& force_one = {});

// Pseudoweight per set via the concentration objective (-1 on the set, +2 off
// it); seed > 0 jitters the objective with small Gaussian draws.
void weight_trapping_sets(const SparseBinaryMatrix& h, std::vector<TrappingSet>& sets,
                          uint64_t seed = 0);

// Failure probability of one set after `iter` message-passing iterations:
// Q of the printed mean/deviation ratio, with the extrinsic means from the
// Gaussian-approximation recursion. mu_max empty = all ones.
double ts_error_probability(double m_lambda, const std::vector<double>& mu_max, int iter,
                            int d_v, int d_c);

// P = z * sum_i Q(sqrt(a_i * w_i) / sigma) over weighted sets.
double ts_union_bound(const std::vector<TrappingSet>& sets, int z, double sigma);

} // namespace forge
