#pragma once

#include "forge/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

// BPSK over AWGN: bit 0 -> +a, bit 1 -> -a, y = x + N(0, sigma^2).
// SNR_db = -20 log10(sigma); Eb/N0 = SNR - 10 log10(R).
struct ChannelModel {
    double sigma = 1.0;
    double amplitude = 1.0;

    double snr_db() const;
    double ebno_db(double rate) const;
    static ChannelModel from_snr(double snr_db, double amplitude = 1.0);
    static ChannelModel from_ebno(double ebno_db, double rate, double amplitude = 1.0);
    void validate() const; // sigma > 0
};

// LLR of y for the matched filter: 2 a y / sigma^2 (positive favors bit 0).
std::vector<double> channel_llr(const std::vector<uint8_t>& bits, double sigma,
                                uint64_t seed, double amplitude = 1.0);

// Unequal-variance Gaussian read channel: log-likelihood ratio of the
// mu1/sigma1 hypothesis over mu0/sigma0. With mu = -/+ a and equal sigma this
// is exactly 2 a y / sigma^2.
double llr_unequal(double y, double mu0, double sigma0, double mu1, double sigma1);

enum class DecoderAlgorithm { sum_product, min_sum, normalized_min_sum, offset_min_sum };
enum class Schedule { flooding, layered };

struct DecoderConfig {
    DecoderAlgorithm algorithm = DecoderAlgorithm::sum_product;
    Schedule schedule = Schedule::flooding;
    double factor = 1.0; // normalized_min_sum scale, in (0, 1]
    double offset = 0.0; // offset_min_sum subtrahend, >= 0
    int max_iters = 50;
    bool early_stop = true; // return on zero syndrome

    void validate() const;
};

struct DecodeResult {
    std::vector<uint8_t> bits;
    int iterations = 0;
    bool syndrome_ok = false;
};

// Message-passing decode; check updates use the tanh rule (inputs clamped to
// |m| <= 30) or the min-sum family. Layered schedule sweeps check rows
// sequentially within an iteration.
DecodeResult decode(const SparseBinaryMatrix& h, const std::vector<double>& llr,
                    const DecoderConfig& cfg);

struct MonteCarloConfig {
    std::vector<double> snr_db;
    long long min_errors = 100;   // frame errors per point; 0 = frames only
    long long max_frames = 100000;
    uint64_t seed = 1;
    int threads = 1;
};

struct SnrPoint {
    double snr_db = 0;
    long long frames = 0, bit_errs = 0, frame_errs = 0;
    double ber = 0, fer = 0;
    double ber_lo = 0, ber_hi = 0; // Agresti-Coull 95%
    double fer_lo = 0, fer_hi = 0;
};

// All-zero-codeword Monte-Carlo (valid by linearity and channel symmetry).
// Frames are seeded as (seed, snr index, frame index), so results do not
// depend on thread count; frames run in fixed-size parallel blocks with the
// stop rule applied between blocks.
std::vector<SnrPoint> monte_carlo(const SparseBinaryMatrix& h, const DecoderConfig& dec,
                                  const MonteCarloConfig& mc);

// snr_db,frames,bit_errs,frame_errs,ber,fer,ber_lo,ber_hi,fer_lo,fer_hi
std::string to_csv(const std::vector<SnrPoint>& points);

// Counter-based per-frame generator seed.
uint64_t frame_seed(uint64_t master, uint64_t snr_index, uint64_t frame_index);

} // namespace forge
