#pragma once

#include "forge/core.hpp"

#include <functional>
#include <limits>
#include <map>

namespace forge {

inline constexpr int kInfiniteGirth = std::numeric_limits<int>::max();

// Shortest cycle length via per-node truncated BFS; kInfiniteGirth for forests.
int girth(const TannerGraph& g);

// Exact number of distinct simple cycles of the given length (each counted once).
long long count_cycles(const TannerGraph& g, int length);

// Same count through the circulant structure: z x (directed closed chains with
// zero alternating shift sum and distinct expanded nodes) / (2m).
long long qc_count_cycles(const ExponentMatrix& em, int length);

// Enumerate simple cycles of exactly `length` nodes; callback gets the node
// list (variables are ids < g.n, checks are offset by g.n).
void for_each_cycle(const TannerGraph& g, int length,
                    const std::function<void(const std::vector<int>&)>& fn);

struct AceSpectrum {
    // cycle length -> (value -> number of cycles)
    std::map<int, std::map<int, long long>> ace;
    std::map<int, std::map<int, long long>> emd; // only lengths <= emd cutoff
};

// ACE(C) = sum over C's variable nodes of d(v) - 2; EMD counts edges leaving
// the cycle's induced subgraph. EMD is evaluated only up to girth+4.
AceSpectrum ace_spectrum(const TannerGraph& g, int max_len);

// d >= 1 + d_VN * ((d_VN - 1)^floor((g-2)/4) - 1) / (d_VN - 2), exact integers.
long long tanner_lower_bound(int girth, int d_vn);

struct SpectralBound {
    double mu1 = 0, mu2 = 0;   // top two adjacency eigenvalues
    double bound_a = 0, bound_b = 0;
    double ratio = 0;          // mu2 / mu1
};

// Top adjacency eigenvalues of [[0,H],[H^T,0]] via power iteration on H^T H
// with deflation; distance bounds for (m,j)-regular H. Throws on irregular H.
SpectralBound spectral_bounds(const SparseBinaryMatrix& h);

} // namespace forge
