#pragma once

#include "forge/core.hpp"
#include "forge/trapping.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

struct PipelineConfig {
    int J = 3, L = 6;            // base matrix dimensions
    int z = 0;                   // starting circulant size (0: target_n / L)
    int z_min = 4;
    long long target_n = 0;      // desired code length N = L * z
    std::vector<uint8_t> mask;   // J*L mutation mask (empty = all zero)
    double snr_db = 2.5;         // threshold gate
    double p_ber = 1e-6;         // union-bound gate
    int card = 1;                // candidates to accumulate
    int iteration_cap = 10;
    uint64_t seed = 1;
    int threads = 1;
    // per-phase budgets and knobs
    int pexit_iters = 200;
    size_t distance_budget = size_t(1) << 16;
    int lift_girth = 6;
    long long sa_steps = 100000;
    int ts_a_max = 5, ts_b_max = 2;
    double penalty_alpha = 1.0, penalty_beta = 0.0; // waterfall coefficients

    void validate() const; // card >= 1; z >= z_min at entry; mask size J*L
};

struct Candidate {
    ExponentMatrix em;
    double threshold_db = 0;
    double penalty = 0;       // threshold minus the waterfall probability
    double score = 0;         // threshold + penalty, ascending rank key
    int distance_lb = 0, distance_ub = 0;
    bool distance_exact = false;
    double p_ub = 0;          // spectrum union bound at the gate SNR
    int girth = 0;
    std::vector<TrappingSet> trapping_sets;
    bool budget_flag = false; // some phase degraded to best-effort
};

struct PipelineReport {
    std::vector<Candidate> candidates; // ranked, best first
    std::vector<std::string> trace;    // "step=<n> key=value ..." per action
    int iterations = 0;
    bool budget_exhausted = false;
};

// Score-ascending order with distance, then girth, then a seeded coin as
// tie-breakers.
void rank_candidates(std::vector<Candidate>& cands, uint64_t seed);

// Two-phase construction: mutate the masked base cells until the PEXIT
// threshold and the protograph union bound pass, growing J and halving z on
// failure; then lift, measure distance, enumerate and weight trapping sets,
// and rank. `prelifted` skips construction and analyzes the given code.
PipelineReport construct_pipeline(const PipelineConfig& cfg,
                                  const ExponentMatrix* prelifted = nullptr);

} // namespace forge
