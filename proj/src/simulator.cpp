#include "forge/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace forge {

double ChannelModel::snr_db() const { return -20.0 * std::log10(sigma); }

double ChannelModel::ebno_db(double rate) const {
    return snr_db() - 10.0 * std::log10(rate);
}

ChannelModel ChannelModel::from_snr(double snr_db, double amplitude) {
    ChannelModel c;
    c.sigma = std::pow(10.0, -snr_db / 20.0);
    c.amplitude = amplitude;
    return c;
}

ChannelModel ChannelModel::from_ebno(double ebno_db, double rate, double amplitude) {
    return from_snr(ebno_db + 10.0 * std::log10(rate), amplitude);
}

void ChannelModel::validate() const {
    if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
}

uint64_t frame_seed(uint64_t master, uint64_t snr_index, uint64_t frame_index) {
    // splitmix64 over the packed counter
    uint64_t x = master ^ (snr_index * 0x9e3779b97f4a7c15ULL) ^
                 (frame_index * 0xbf58476d1ce4e5b9ULL);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<double> channel_llr(const std::vector<uint8_t>& bits, double sigma,
                                uint64_t seed, double amplitude) {
    if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> llr(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
        double x = bits[i] ? -amplitude : amplitude;
        llr[i] = 2.0 * amplitude * (x + noise(rng)) / (sigma * sigma);
    }
    return llr;
}

double llr_unequal(double y, double mu0, double sigma0, double mu1, double sigma1) {
    double t0 = (y - mu0) / sigma0, t1 = (y - mu1) / sigma1;
    return std::log(sigma0 / sigma1) + 0.5 * t0 * t0 - 0.5 * t1 * t1;
}

void DecoderConfig::validate() const {
    if (factor <= 0 || factor > 1) throw std::invalid_argument("factor must be in (0,1]");
    if (offset < 0) throw std::invalid_argument("offset must be nonnegative");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
}

namespace {

constexpr double kLlrClamp = 30.0;

double clamp_llr(double x) { return std::clamp(x, -kLlrClamp, kLlrClamp); }

// Check-node outputs for one row, inputs in `in`, results in `out`.
void check_update(const DecoderConfig& cfg, const std::vector<double>& in,
                  std::vector<double>& out) {
    size_t w = in.size();
    out.resize(w);
    if (w == 1) { // degree-1 check pins its only variable
        out[0] = kLlrClamp;
        return;
    }
    if (cfg.algorithm == DecoderAlgorithm::sum_product) {
        // prefix/suffix products of tanh(m/2)
        static thread_local std::vector<double> pre, suf;
        pre.assign(w + 1, 1.0);
        suf.assign(w + 1, 1.0);
        for (size_t i = 0; i < w; ++i) pre[i + 1] = pre[i] * std::tanh(clamp_llr(in[i]) / 2);
        for (size_t i = w; i-- > 0;) suf[i] = suf[i + 1] * std::tanh(clamp_llr(in[i]) / 2);
        for (size_t i = 0; i < w; ++i) {
            double p = std::clamp(pre[i] * suf[i + 1], -1.0 + 1e-15, 1.0 - 1e-15);
            out[i] = clamp_llr(2.0 * std::atanh(p));
        }
        return;
    }
    // min-sum family: sign parity plus the two smallest magnitudes
    int sign = 1;
    double m1 = HUGE_VAL, m2 = HUGE_VAL;
    size_t arg = 0;
    for (size_t i = 0; i < w; ++i) {
        if (in[i] < 0) sign = -sign;
        double a = std::abs(in[i]);
        if (a < m1) {
            m2 = m1;
            m1 = a;
            arg = i;
        } else if (a < m2) {
            m2 = a;
        }
    }
    for (size_t i = 0; i < w; ++i) {
        double mag = i == arg ? m2 : m1;
        if (cfg.algorithm == DecoderAlgorithm::normalized_min_sum) mag *= cfg.factor;
        if (cfg.algorithm == DecoderAlgorithm::offset_min_sum) mag = std::max(0.0, mag - cfg.offset);
        int s = sign * (in[i] < 0 ? -1 : 1);
        out[i] = s * mag;
    }
}

bool syndrome_ok(const SparseBinaryMatrix& h, const std::vector<uint8_t>& bits) {
    for (const auto& row : h.rows) {
        int s = 0;
        for (int v : row) s ^= bits[v];
        if (s) return false;
    }
    return true;
}

} // namespace

DecodeResult decode(const SparseBinaryMatrix& h, const std::vector<double>& llr,
                    const DecoderConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(llr.size()) != h.n_cols)
        throw std::invalid_argument("llr length mismatch");
    const int m = h.n_rows, n = h.n_cols;
    // c2v[r][t]: message from check r to its t-th variable
    std::vector<std::vector<double>> c2v(m);
    for (int r = 0; r < m; ++r) c2v[r].assign(h.rows[r].size(), 0.0);

    std::vector<double> post(llr);
    std::vector<uint8_t> bits(n);
    std::vector<double> in, out;
    DecodeResult res;

    auto harden = [&] {
        for (int v = 0; v < n; ++v) bits[v] = post[v] < 0;
    };
    harden();
    if (cfg.early_stop && syndrome_ok(h, bits)) {
        res.bits = bits;
        res.iterations = 0;
        res.syndrome_ok = true;
        return res;
    }

    for (int it = 1; it <= cfg.max_iters; ++it) {
        if (cfg.schedule == Schedule::layered) {
            for (int r = 0; r < m; ++r) {
                const auto& row = h.rows[r];
                in.resize(row.size());
                for (size_t t = 0; t < row.size(); ++t) in[t] = post[row[t]] - c2v[r][t];
                check_update(cfg, in, out);
                for (size_t t = 0; t < row.size(); ++t) {
                    post[row[t]] = in[t] + out[t];
                    c2v[r][t] = out[t];
                }
            }
        } else {
            // flooding: variable pass from the previous posteriors
            for (int r = 0; r < m; ++r) {
                const auto& row = h.rows[r];
                in.resize(row.size());
                for (size_t t = 0; t < row.size(); ++t) in[t] = post[row[t]] - c2v[r][t];
                check_update(cfg, in, c2v[r]);
            }
            post = llr;
            for (int r = 0; r < m; ++r)
                for (size_t t = 0; t < h.rows[r].size(); ++t) post[h.rows[r][t]] += c2v[r][t];
        }
        harden();
        res.iterations = it;
        if (syndrome_ok(h, bits)) {
            res.syndrome_ok = true;
            if (cfg.early_stop) break;
        } else {
            res.syndrome_ok = false;
        }
    }
    res.bits = bits;
    return res;
}

namespace {

void agresti_coull(long long errs, long long n, double& lo, double& hi) {
    constexpr double z = 1.959963984540054;
    double nt = n + z * z;
    double pt = (errs + z * z / 2) / nt;
    double half = z * std::sqrt(pt * (1 - pt) / nt);
    lo = std::max(0.0, pt - half);
    hi = std::min(1.0, pt + half);
}

} // namespace

std::vector<SnrPoint> monte_carlo(const SparseBinaryMatrix& h, const DecoderConfig& dec,
                                  const MonteCarloConfig& mc) {
    dec.validate();
    const int n = h.n_cols;
    const std::vector<uint8_t> zero(n, 0);
    int threads = std::max(1, mc.threads);
    std::vector<SnrPoint> out;
    for (size_t si = 0; si < mc.snr_db.size(); ++si) {
        double sigma = std::pow(10.0, -mc.snr_db[si] / 20.0);
        SnrPoint pt;
        pt.snr_db = mc.snr_db[si];
        const long long block = 256;
        while (pt.frames < mc.max_frames &&
               (mc.min_errors == 0 || pt.frame_errs < mc.min_errors)) {
            long long todo = std::min(block, mc.max_frames - pt.frames);
            std::vector<long long> be(threads, 0), fe(threads, 0);
            std::atomic<long long> next{0};
            auto worker = [&](int w) {
                for (long long f; (f = next.fetch_add(1)) < todo;) {
                    auto llr = channel_llr(zero, sigma,
                                           frame_seed(mc.seed, si, pt.frames + f));
                    auto res = decode(h, llr, dec);
                    int errs = 0;
                    for (uint8_t b : res.bits) errs += b;
                    be[w] += errs;
                    fe[w] += errs > 0;
                }
            };
            std::vector<std::thread> pool;
            for (int w = 1; w < threads; ++w) pool.emplace_back(worker, w);
            worker(0);
            for (auto& t : pool) t.join();
            for (int w = 0; w < threads; ++w) {
                pt.bit_errs += be[w];
                pt.frame_errs += fe[w];
            }
            pt.frames += todo;
        }
        pt.ber = pt.frames ? double(pt.bit_errs) / (double(pt.frames) * n) : 0;
        pt.fer = pt.frames ? double(pt.frame_errs) / double(pt.frames) : 0;
        agresti_coull(pt.bit_errs, pt.frames * n, pt.ber_lo, pt.ber_hi);
        agresti_coull(pt.frame_errs, pt.frames, pt.fer_lo, pt.fer_hi);
        out.push_back(pt);
    }
    return out;
}

std::string to_csv(const std::vector<SnrPoint>& points) {
    std::ostringstream os;
    os << "snr_db,frames,bit_errs,frame_errs,ber,fer,ber_lo,ber_hi,fer_lo,fer_hi\n";
    for (const auto& p : points)
        os << p.snr_db << ',' << p.frames << ',' << p.bit_errs << ',' << p.frame_errs
           << ',' << p.ber << ',' << p.fer << ',' << p.ber_lo << ',' << p.ber_hi << ','
           << p.fer_lo << ',' << p.fer_hi << '\n';
    return os.str();
}

} // namespace forge
