#pragma once

#include "forge/core.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace forge {

// Closed alternating walk over nonzero base-matrix cells. Cells come in an
// even-length sequence; the move from cells[i] to cells[i+1] stays in the same
// row for even i and in the same column for odd i (cyclically).
struct CycleChain {
    std::vector<std::pair<int, int>> cells; // (row, col)
    int length() const { return static_cast<int>(cells.size()); }
};

// Alternating-sign sum of shifts along the chain, reduced to [0, z).
// Zero means the chain closes into cycles in the expanded graph.
int chain_sum(const CycleChain& chain, const ExponentMatrix& em);

// All chain classes (up to rotation/reflection) of lengths 4..max_len.
std::vector<CycleChain> enumerate_chains(const BaseMatrix& base, int max_len);

struct LiftConfig {
    int target_girth = 6;      // even, in {4,6,8,10,12}
    int max_restarts = 100;
    uint64_t rng_seed = 1;
    // Simulated annealing knobs.
    double eta = 1.0;          // temperature constant
    long long max_steps = 100000;
    int stall_window = 500;
    double length_weight_base = 16.0; // objective weight ratio between cycle lengths
};

struct LiftResult {
    bool success = false;
    ExponentMatrix em;
    int restarts = 0;
    long long steps = 0;
    long long residual_cycles = 0; // chain classes still closing (SA best)
};

// Greedy raster-order assignment with forbidden-shift marking: whenever a
// chain has exactly one unassigned cell, the shifts that would close it are
// solved for in closed form and flagged.
LiftResult lift_forbidden_coefficients(const BaseMatrix& base, int z, const LiftConfig& cfg);

// Annealed shift resampling: picks a random cell, scores every candidate
// shift by the weighted count of chains it would close, and samples with
// probability proportional to exp(-score/Temp); Temp = eta*Phi/Nstep^2.
LiftResult lift_simulated_annealing(const BaseMatrix& base, int z, const LiftConfig& cfg,
                                    const ExponentMatrix* init = nullptr);

// Uniform random full assignments, accept the first with girth >= target.
LiftResult lift_guess_and_test(const BaseMatrix& base, int z, const LiftConfig& cfg);

enum class AdaptMode { floor, modular, floor_scale_modular };

// Re-map shifts from circulant size z0 to z_k <= z0; -1 is preserved.
ExponentMatrix adapt_length(const ExponentMatrix& em0, int z_k, AdaptMode mode, int r = 1);

// Mapping coefficient minimizing (girth penalty, short-cycle count)
// lexicographically over r in [1, z0); ties resolved toward smaller r.
int select_fsm_r(const ExponentMatrix& em0, int z_k, int target_girth);

} // namespace forge
