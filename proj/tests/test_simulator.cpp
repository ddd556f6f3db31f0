#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "forge/lifting.hpp"
#include "forge/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace forge;

namespace {

SparseBinaryMatrix hamming_h() {
    return SparseBinaryMatrix::from_dense({{1, 0, 1, 0, 1, 0, 1},
                                           {0, 1, 1, 0, 0, 1, 1},
                                           {0, 0, 0, 1, 1, 1, 1}});
}

bool check_syndrome(const SparseBinaryMatrix& h, const std::vector<uint8_t>& bits) {
    for (const auto& row : h.rows) {
        int s = 0;
        for (int v : row) s ^= bits[v];
        if (s) return false;
    }
    return true;
}

// Exhaustive maximum-likelihood decode: best correlation over all codewords.
std::vector<uint8_t> ml_decode(const GeneratorMatrix& g, const std::vector<double>& llr) {
    std::vector<uint8_t> best, msg(g.k), cw;
    double best_score = -HUGE_VAL;
    for (long long u = 0; u < (1LL << g.k); ++u) {
        for (int i = 0; i < g.k; ++i) msg[i] = (u >> i) & 1;
        cw = g.encode(msg);
        double score = 0;
        for (int i = 0; i < g.n; ++i) score += (cw[i] ? -1.0 : 1.0) * llr[i];
        if (score > best_score) {
            best_score = score;
            best = cw;
        }
    }
    return best;
}

// (3,6)-regular QC parity matrix.
SparseBinaryMatrix qc_3_6(int z, int target_girth = 6) {
    BaseMatrix b;
    b.J = 3;
    b.L = 6;
    b.entries.assign(18, 1);
    LiftConfig cfg;
    cfg.target_girth = target_girth;
    cfg.max_restarts = 3000;
    cfg.max_steps = 300000;
    auto lift = target_girth >= 8 ? lift_simulated_annealing(b, z, cfg)
                                  : lift_guess_and_test(b, z, cfg);
    REQUIRE(lift.success);
    return expand(lift.em);
}

} // namespace

TEST_CASE("channel model conversions") {
    auto c = ChannelModel::from_snr(4.0);
    CHECK(c.snr_db() == doctest::Approx(4.0));
    CHECK(c.ebno_db(0.5) == doctest::Approx(4.0 + 10 * std::log10(2.0)));
    auto e = ChannelModel::from_ebno(7.0, 4.0 / 7.0);
    CHECK(e.ebno_db(4.0 / 7.0) == doctest::Approx(7.0));
    CHECK(e.sigma == doctest::Approx(0.5912).epsilon(1e-3));
    ChannelModel bad;
    bad.sigma = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("llr signs follow the bits at vanishing noise") {
    std::vector<uint8_t> bits = {0, 1, 1, 0, 1, 0, 0, 1};
    auto llr = channel_llr(bits, 1e-3, 42);
    for (size_t i = 0; i < bits.size(); ++i) CHECK((llr[i] < 0) == (bits[i] == 1));
}

TEST_CASE("llr moments match 2/sigma^2 and 4/sigma^2") {
    double sigma = 0.8;
    std::vector<uint8_t> bits(1000000, 0);
    auto llr = channel_llr(bits, sigma, 9);
    double mean = 0;
    for (double v : llr) mean += v;
    mean /= llr.size();
    double var = 0;
    for (double v : llr) var += (v - mean) * (v - mean);
    var /= llr.size() - 1;
    CHECK(mean == doctest::Approx(2.0 / (sigma * sigma)).epsilon(0.01));
    CHECK(var == doctest::Approx(4.0 / (sigma * sigma)).epsilon(0.01));
}

TEST_CASE("unequal-variance llr collapses to the matched-filter form") {
    for (double y : {-2.0, -0.3, 0.0, 0.7, 1.9})
        for (double sigma : {0.5, 1.0, 1.7}) {
            CHECK(llr_unequal(y, -1.0, sigma, 1.0, sigma) ==
                  doctest::Approx(2.0 * y / (sigma * sigma)).epsilon(1e-12));
            // amplitude a scales both means
            CHECK(llr_unequal(y, -2.0, sigma, 2.0, sigma) ==
                  doctest::Approx(4.0 * y / (sigma * sigma)).epsilon(1e-12));
        }
    // asymmetric variances shift the zero crossing toward the tighter mode
    CHECK(llr_unequal(0.0, -1.0, 0.5, 1.0, 1.5) != doctest::Approx(0.0));
}

TEST_CASE("clean input decodes instantly") {
    auto h = hamming_h();
    std::vector<double> llr(7, 8.0);
    DecoderConfig cfg;
    auto res = decode(h, llr, cfg);
    CHECK(res.syndrome_ok);
    CHECK(res.iterations <= 1);
    CHECK(res.bits == std::vector<uint8_t>(7, 0));
}

TEST_CASE("single parity check flips the weak bit") {
    auto h = SparseBinaryMatrix::from_dense({{1, 1, 1}});
    std::vector<double> llr = {5.0, 5.0, -0.1};
    for (auto alg : {DecoderAlgorithm::sum_product, DecoderAlgorithm::min_sum}) {
        DecoderConfig cfg;
        cfg.algorithm = alg;
        auto res = decode(h, llr, cfg);
        CHECK(res.syndrome_ok);
        CHECK(res.bits == std::vector<uint8_t>{0, 0, 0});
    }
    // exhaustive ML over the 4 even-weight words agrees
    auto g = derive_generator(h, 2);
    CHECK(ml_decode(g, llr) == std::vector<uint8_t>{0, 0, 0});
}

TEST_CASE("normalized min-sum at factor 1 equals min-sum bit-exactly") {
    auto h = qc_3_6(16);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        auto llr = channel_llr(std::vector<uint8_t>(h.n_cols, 0), 1.0, rng());
        DecoderConfig ms, nms;
        ms.algorithm = DecoderAlgorithm::min_sum;
        nms.algorithm = DecoderAlgorithm::normalized_min_sum;
        nms.factor = 1.0;
        auto a = decode(h, llr, ms), b = decode(h, llr, nms);
        CHECK(a.bits == b.bits);
        CHECK(a.iterations == b.iterations);
        CHECK(a.syndrome_ok == b.syndrome_ok);
    }
}

TEST_CASE("all algorithms and schedules recover moderate noise") {
    auto h = qc_3_6(16);
    std::mt19937_64 rng(11);
    for (auto alg : {DecoderAlgorithm::sum_product, DecoderAlgorithm::min_sum,
                     DecoderAlgorithm::normalized_min_sum, DecoderAlgorithm::offset_min_sum})
        for (auto sched : {Schedule::flooding, Schedule::layered}) {
            DecoderConfig cfg;
            cfg.algorithm = alg;
            cfg.schedule = sched;
            cfg.factor = 0.75;
            cfg.offset = 0.15;
            int ok = 0;
            for (int t = 0; t < 20; ++t) {
                auto llr = channel_llr(std::vector<uint8_t>(h.n_cols, 0), 0.6, rng());
                auto res = decode(h, llr, cfg);
                // flag must always match the actual syndrome of the output
                CHECK(res.syndrome_ok == check_syndrome(h, res.bits));
                ok += res.syndrome_ok && res.bits == std::vector<uint8_t>(h.n_cols, 0);
            }
            CHECK(ok == 20);
        }
}

TEST_CASE("early stop never mislabels a failed frame") {
    auto h = hamming_h();
    std::mt19937_64 rng(21);
    for (int t = 0; t < 500; ++t) {
        auto llr = channel_llr(std::vector<uint8_t>(7, 0), 1.6, rng());
        DecoderConfig cfg;
        cfg.max_iters = 5;
        auto res = decode(h, llr, cfg);
        CHECK(res.syndrome_ok == check_syndrome(h, res.bits));
    }
}

TEST_CASE("monte carlo frame accounting and csv") {
    auto h = hamming_h();
    DecoderConfig dec;
    MonteCarloConfig mc;
    mc.snr_db = {2.0};
    mc.min_errors = 0;
    mc.max_frames = 10;
    auto pts = monte_carlo(h, dec, mc);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].frames == 10);
    CHECK(pts[0].fer_hi >= pts[0].fer);
    CHECK(pts[0].fer_lo <= pts[0].fer);
    auto csv = to_csv(pts);
    CHECK(csv.rfind("snr_db,frames,bit_errs,frame_errs,ber,fer", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("ber declines with snr up to interval overlap") {
    auto h = hamming_h();
    DecoderConfig dec;
    MonteCarloConfig mc;
    mc.snr_db = {0.0, 1.5, 3.0, 4.5};
    mc.min_errors = 0;
    mc.max_frames = 3000;
    auto pts = monte_carlo(h, dec, mc);
    for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].ber_lo <= pts[i - 1].ber_hi);
    CHECK(pts.back().ber < pts.front().ber);
}

TEST_CASE("results are independent of the thread count") {
    auto h = qc_3_6(16);
    DecoderConfig dec;
    dec.algorithm = DecoderAlgorithm::min_sum;
    MonteCarloConfig a;
    a.snr_db = {1.0, 2.0};
    a.min_errors = 20;
    a.max_frames = 2000;
    a.seed = 77;
    auto b = a;
    b.threads = 4;
    auto ra = monte_carlo(h, dec, a), rb = monte_carlo(h, dec, b);
    REQUIRE(ra.size() == rb.size());
    for (size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].frames == rb[i].frames);
        CHECK(ra[i].bit_errs == rb[i].bit_errs);
        CHECK(ra[i].frame_errs == rb[i].frame_errs);
    }
}

TEST_CASE("random-codeword transmission matches all-zero statistics") {
    // channel symmetry: encode random messages, decode, compare FER intervals
    auto h = qc_3_6(11); // (66, 33)
    auto g = derive_generator(h, 2);
    DecoderConfig dec;
    double sigma = 0.85;
    std::mt19937_64 rng(5);
    long long frames = 1500, fe_zero = 0, fe_rand = 0;
    for (long long f = 0; f < frames; ++f) {
        auto llr0 = channel_llr(std::vector<uint8_t>(h.n_cols, 0), sigma, rng());
        fe_zero += !decode(h, llr0, dec).syndrome_ok ||
                   decode(h, llr0, dec).bits != std::vector<uint8_t>(h.n_cols, 0);
        std::vector<uint8_t> msg(g.k);
        for (auto& b : msg) b = rng() & 1;
        auto cw = g.encode(msg);
        auto llr = channel_llr(cw, sigma, rng());
        auto res = decode(h, llr, dec);
        fe_rand += !res.syndrome_ok || res.bits != cw;
    }
    double p0 = double(fe_zero) / frames, p1 = double(fe_rand) / frames;
    double half = 1.96 * std::sqrt(0.5 * (p0 + p1) * (1 - 0.5 * (p0 + p1)) / frames);
    CHECK(std::abs(p0 - p1) <= 2 * half + 0.01);
}

TEST_CASE("sum-product tracks maximum likelihood on the hamming code") {
    auto h = hamming_h();
    auto g = derive_generator(h, 2);
    double sigma = ChannelModel::from_ebno(7.0, 4.0 / 7.0).sigma;
    DecoderConfig dec;
    dec.max_iters = 20;
    long long frames = 20000, fe_bp = 0, fe_ml = 0;
    for (long long f = 0; f < frames; ++f) {
        auto llr = channel_llr(std::vector<uint8_t>(7, 0), sigma, frame_seed(13, 0, f));
        auto res = decode(h, llr, dec);
        fe_bp += !res.syndrome_ok || res.bits != std::vector<uint8_t>(7, 0);
        fe_ml += ml_decode(g, llr) != std::vector<uint8_t>(7, 0);
    }
    CHECK(fe_ml > 0);
    CHECK(fe_bp >= fe_ml); // ML is optimal under common noise
    CHECK(double(fe_bp) <= 2.5 * double(fe_ml) + 5);
}

TEST_CASE("regular qc code clears the waterfall sanity envelope") {
    auto h = qc_3_6(64, 8); // (384, 192), girth 8
    DecoderConfig dec;
    dec.max_iters = 50;
    MonteCarloConfig mc;
    // Eb/N0 = 2.5 dB through the analysis-side noise map sigma = 10^(-E/20)/sqrt(4R),
    // the same convention the threshold search uses; well inside the waterfall.
    double sigma = std::pow(10.0, -2.5 / 20.0) / std::sqrt(2.0);
    mc.snr_db = {-20.0 * std::log10(sigma)};
    mc.min_errors = 0;
    mc.max_frames = 1500;
    mc.threads = 4;
    auto pts = monte_carlo(h, dec, mc);
    CHECK(pts[0].ber < 1e-4);
}

TEST_CASE("frame seeds decorrelate counters") {
    CHECK(frame_seed(1, 0, 0) != frame_seed(1, 0, 1));
    CHECK(frame_seed(1, 0, 0) != frame_seed(1, 1, 0));
    CHECK(frame_seed(1, 0, 0) != frame_seed(2, 0, 0));
}
