#pragma once

#include "forge/core.hpp"

#include <functional>
#include <vector>

namespace forge {

// Edge-perspective degree distributions: coefficient at index d is the
// fraction of edges attached to degree-d nodes (index 0 and 1 unused on the
// variable side except degree-1 profiles).
struct DegreeDistribution {
    std::vector<double> lambda; // lambda[d], variable side
    std::vector<double> rho;    // rho[d], check side

    static DegreeDistribution regular(int dv, int dc);
    double l_avg() const; // 1 / sum_d lambda_d / d
    double r_avg() const;
    double design_rate() const; // 1 - l_avg / r_avg
    void validate() const;      // sums to 1, nonnegative
};

// Two-branch Gaussian-approximation check-node function (switch at x = 10) and
// its inverse by monotone bisection.
double phi(double x);
double phi_inv(double y);

double q_func(double x);

struct DeResult {
    bool converged = false;
    int iterations = 0;
    std::vector<double> pe;              // per-iteration error probability
    bool gaussian_approximation = true;  // mean-only recursion, not full DE
};

// Mean-LLR recursion m^(j) = phi_inv(1 - [1 - phi(m_ch + (d_v-1) m^(j-1))]^(d_c-1)),
// degree-averaged for irregular distributions; channel mean 2/sigma^2.
DeResult ga_density_evolution(const DegreeDistribution& dd, double sigma,
                              int max_iter = 200, double target_pe = 1e-6);

enum class MutualInfoMethod { quadrature, polynomial };

// Mutual information of the consistent-Gaussian LLR channel N(s^2/2, s^2).
// Quadrature mode integrates adaptively to 1e-8; polynomial mode is the
// standard two-piece curve fit (threshold error below 0.05 dB).
double mutual_info(double sigma, MutualInfoMethod method = MutualInfoMethod::quadrature);
double mutual_info_inv(double info, MutualInfoMethod method = MutualInfoMethod::quadrature);

struct ThresholdResult {
    bool found = false;
    double ebno_db = 0;
    double sigma = 0;
    int iterations = 0;             // iterations to converge at the threshold
    std::vector<double> trajectory; // average a-priori I per iteration
    double rate = 0;
    bool gaussian_approximation = true;
};

// Protograph EXIT threshold: per-edge recursion over the base matrix
// (punctured columns see a zero-information channel), bisection on Eb/N0 to
// 0.005 dB for the smallest value where every a-posteriori I reaches 0.9999
// within max_iter. Noise map: sigma = 10^(-EbN0/20) / sqrt(4R).
ThresholdResult pexit_threshold(const BaseMatrix& base, int max_iter = 200,
                                double rate = -1, // -1: (VN-CN)/(VN-PN) from counts
                                MutualInfoMethod method = MutualInfoMethod::quadrature);

// Rate of a punctured protograph from node counts.
double protograph_rate(const BaseMatrix& base);

// Sum over the weight spectrum of omega_i/K * Q(sqrt(2 * iK/N * Eb/N0)).
double union_bound(const std::vector<std::pair<long long, double>>& spectrum,
                   long long K, long long N, double ebno_db);
// Single-term form: omega/N * Q(sqrt(2 * d*K/N * Eb/N0)).
double union_bound_single(long long d_min, double omega, long long K, long long N,
                          double ebno_db);

// Binary-input AWGN capacity at noise level sigma (LLR channel with s = 2/sigma).
double biawgn_capacity(double sigma);

// Finite-length waterfall probability Q(sqrt(N)(C(sigma) - C(sigma*) - beta*N^(-2/3))/alpha).
double waterfall_penalty(long long n, double sigma, double sigma_star, double alpha,
                         double beta,
                         const std::function<double(double)>& capacity = biawgn_capacity);

} // namespace forge
