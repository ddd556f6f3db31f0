#include "forge/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace forge {

namespace {

constexpr double kPhiCap = 3000.0; // beyond this phi underflows to 0 anyway

double phi_raw(double x) {
    if (x < 10.0) return std::exp(-0.4527 * std::pow(x, 0.86) + 0.0218);
    return std::sqrt(M_PI / x) * std::exp(-0.25 * x) * (1.0 - 10.0 / (7.0 * x));
}

} // namespace

double phi(double x) {
    if (x < 0) throw std::invalid_argument("phi needs x >= 0");
    return phi_raw(x);
}

double phi_inv(double y) {
    if (y >= phi_raw(0)) return 0.0;
    if (y <= 0) return kPhiCap;
    double lo = 0.0, hi = 1.0;
    while (phi_raw(hi) > y) {
        lo = hi;
        hi *= 2;
        if (hi >= kPhiCap) return kPhiCap;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        (phi_raw(mid) > y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

DegreeDistribution DegreeDistribution::regular(int dv, int dc) {
    DegreeDistribution dd;
    dd.lambda.assign(dv + 1, 0.0);
    dd.lambda[dv] = 1.0;
    dd.rho.assign(dc + 1, 0.0);
    dd.rho[dc] = 1.0;
    return dd;
}

double DegreeDistribution::l_avg() const {
    double s = 0;
    for (size_t d = 1; d < lambda.size(); ++d) s += lambda[d] / d;
    return 1.0 / s;
}

double DegreeDistribution::r_avg() const {
    double s = 0;
    for (size_t d = 1; d < rho.size(); ++d) s += rho[d] / d;
    return 1.0 / s;
}

double DegreeDistribution::design_rate() const { return 1.0 - l_avg() / r_avg(); }

void DegreeDistribution::validate() const {
    double sl = 0, sr = 0;
    for (double v : lambda) {
        if (v < 0) throw std::invalid_argument("negative coefficient");
        sl += v;
    }
    for (double v : rho) {
        if (v < 0) throw std::invalid_argument("negative coefficient");
        sr += v;
    }
    if (std::abs(sl - 1) > 1e-9 || std::abs(sr - 1) > 1e-9)
        throw std::invalid_argument("coefficients must sum to 1");
}

DeResult ga_density_evolution(const DegreeDistribution& dd, double sigma, int max_iter,
                              double target_pe) {
    if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
    dd.validate();
    const double m_ch = 2.0 / (sigma * sigma);
    const double dv_node = dd.l_avg();
    DeResult res;
    double m = 0;
    for (int it = 1; it <= max_iter; ++it) {
        double u = 0;
        for (size_t d = 1; d < dd.lambda.size(); ++d)
            if (dd.lambda[d] > 0)
                u += dd.lambda[d] * phi_raw(std::min(m_ch + (d - 1) * m, kPhiCap));
        double next = 0;
        for (size_t c = 2; c < dd.rho.size(); ++c)
            if (dd.rho[c] > 0) next += dd.rho[c] * phi_inv(1.0 - std::pow(1.0 - u, c - 1.0));
        m = next;
        double m_app = m_ch + dv_node * m;
        double pe = q_func(std::sqrt(m_app / 2.0));
        res.pe.push_back(pe);
        res.iterations = it;
        if (pe < target_pe) {
            res.converged = true;
            break;
        }
    }
    return res;
}

namespace {

// Adaptive Simpson for the mutual-information integrand.
double mi_integrand(double l, double s2) {
    double d = l - s2 / 2;
    return std::exp(-d * d / (2 * s2)) / std::sqrt(2 * M_PI * s2) * std::log2(1.0 + std::exp(-l));
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adapt(double a, double b, double fa, double fm, double fb, double whole, double s2,
             double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = mi_integrand(lm, s2), frm = mi_integrand(rm, s2);
    double left = simpson(a, m, fa, flm, fm), right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(a, m, fa, flm, fm, left, s2, tol / 2, depth - 1) +
           adapt(m, b, fm, frm, fb, right, s2, tol / 2, depth - 1);
}

double mi_quadrature(double sigma) {
    if (sigma <= 0) return 0.0;
    double s2 = sigma * sigma;
    double mu = s2 / 2;
    double a = mu - 10 * sigma, b = mu + 10 * sigma;
    double m = 0.5 * (a + b);
    double fa = mi_integrand(a, s2), fm = mi_integrand(m, s2), fb = mi_integrand(b, s2);
    double whole = simpson(a, b, fa, fm, fb);
    double val = adapt(a, b, fa, fm, fb, whole, s2, 1e-9, 48);
    return std::min(1.0, std::max(0.0, 1.0 - val));
}

// Dense table of the quadrature curve for the hot paths (inverse, EXIT loop).
constexpr double kMiMax = 14.0;
constexpr int kMiSteps = 1 << 16;
std::vector<double>& mi_table() {
    static std::vector<double> tab;
    static std::once_flag once;
    std::call_once(once, [] {
        tab.resize(kMiSteps + 1);
        for (int i = 0; i <= kMiSteps; ++i) tab[i] = mi_quadrature(kMiMax * i / kMiSteps);
    });
    return tab;
}

double mi_fast(double sigma) {
    if (sigma <= 0) return 0.0;
    if (sigma >= kMiMax) return 1.0;
    const auto& tab = mi_table();
    double t = sigma / kMiMax * kMiSteps;
    int i = std::min(kMiSteps - 1, static_cast<int>(t));
    return tab[i] + (t - i) * (tab[i + 1] - tab[i]);
}

double mi_fast_inv(double info) {
    if (info <= 0) return 0.0;
    const auto& tab = mi_table();
    if (info >= tab.back()) return kMiMax;
    int lo = 0, hi = kMiSteps;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (tab[mid] <= info ? lo : hi) = mid;
    }
    double f = (info - tab[lo]) / std::max(tab[hi] - tab[lo], 1e-300);
    return kMiMax * (lo + f) / kMiSteps;
}

double mi_poly(double sigma) {
    if (sigma <= 0) return 0.0;
    if (sigma < 1.6363)
        return -0.0421061 * sigma * sigma * sigma + 0.209252 * sigma * sigma -
               0.00640081 * sigma;
    if (sigma < 10.0)
        return 1.0 - std::exp(0.00181491 * sigma * sigma * sigma -
                              0.142675 * sigma * sigma - 0.0822054 * sigma + 0.0549608);
    return 1.0;
}

double mi_poly_inv(double info) {
    info = std::min(std::max(info, 0.0), 1.0 - 1e-12);
    if (info <= 0.3646)
        return 1.09542 * info * info + 0.214217 * info + 2.33727 * std::sqrt(info);
    return -0.706692 * std::log(0.386013 * (1.0 - info)) + 1.75017 * info;
}

} // namespace

double mutual_info(double sigma, MutualInfoMethod method) {
    if (sigma < 0) throw std::invalid_argument("sigma must be nonnegative");
    return method == MutualInfoMethod::quadrature ? mi_quadrature(sigma) : mi_poly(sigma);
}

double mutual_info_inv(double info, MutualInfoMethod method) {
    if (info < 0 || info >= 1) throw std::invalid_argument("info must lie in [0, 1)");
    if (method == MutualInfoMethod::polynomial) return mi_poly_inv(info);
    if (info == 0) return 0.0;
    // Bisection against the same quadrature curve keeps the inverse consistent
    // with the forward map even where the curve is nearly flat.
    double lo = 0.0, hi = 14.0;
    while (mi_quadrature(hi) < info) {
        lo = hi;
        hi *= 1.5;
        if (hi > 200.0) return hi;
    }
    for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
        double mid = 0.5 * (lo + hi);
        (mi_quadrature(mid) < info ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double protograph_rate(const BaseMatrix& base) {
    int pn = static_cast<int>(base.punctured_cols.size());
    if (base.L - pn <= 0) throw std::invalid_argument("every column punctured");
    return static_cast<double>(base.L - base.J) / (base.L - pn);
}

namespace {

struct ExitState {
    const BaseMatrix& b;
    std::vector<double> sigma_ch2; // per column
    MutualInfoMethod method;

    double mi(double s) const {
        return method == MutualInfoMethod::quadrature ? mi_fast(s) : mi_poly(s);
    }
    double mi_inv(double i) const {
        return method == MutualInfoMethod::quadrature ? mi_fast_inv(i) : mi_poly_inv(i);
    }

    // Runs the per-edge recursion; fills trajectory and the converge iteration.
    bool run(int max_iter, std::vector<double>* traj, int* iters) {
        const int J = b.J, L = b.L;
        std::vector<double> iav(static_cast<size_t>(J) * L, 0.0), iev(iav);
        for (int it = 1; it <= max_iter; ++it) {
            for (int j = 0; j < J; ++j)
                for (int l = 0; l < L; ++l) {
                    if (!b.at(j, l)) continue;
                    double s = sigma_ch2[l];
                    for (int jj = 0; jj < J; ++jj)
                        if (jj != j && b.at(jj, l)) {
                            double v = mi_inv(iav[static_cast<size_t>(jj) * L + l]);
                            s += v * v;
                        }
                    iev[static_cast<size_t>(j) * L + l] = mi(std::sqrt(s));
                }
            for (int j = 0; j < J; ++j)
                for (int l = 0; l < L; ++l) {
                    if (!b.at(j, l)) continue;
                    double s = 0;
                    for (int ll = 0; ll < L; ++ll)
                        if (ll != l && b.at(j, ll)) {
                            double v =
                                mi_inv(std::min(1.0 - 1e-12,
                                                1.0 - iev[static_cast<size_t>(j) * L + ll]));
                            s += v * v;
                        }
                    iav[static_cast<size_t>(j) * L + l] = 1.0 - mi(std::sqrt(s));
                }
            bool done = true;
            double app_sum = 0;
            for (int l = 0; l < L; ++l) {
                double s = sigma_ch2[l];
                for (int j = 0; j < J; ++j)
                    if (b.at(j, l)) {
                        double v = mi_inv(iav[static_cast<size_t>(j) * L + l]);
                        s += v * v;
                    }
                double app = mi(std::sqrt(s));
                app_sum += app;
                done = done && app >= 0.9999;
            }
            if (traj) traj->push_back(app_sum / L);
            if (done) {
                if (iters) *iters = it;
                return true;
            }
        }
        return false;
    }
};

} // namespace

ThresholdResult pexit_threshold(const BaseMatrix& base, int max_iter, double rate,
                                MutualInfoMethod method) {
    base.validate();
    ThresholdResult res;
    res.rate = rate > 0 ? rate : protograph_rate(base);

    std::vector<char> punct(base.L, 0);
    for (int c : base.punctured_cols) punct[c] = 1;
    auto converges = [&](double ebno_db, std::vector<double>* traj, int* iters) {
        double sigma_n = std::pow(10.0, -ebno_db / 20.0) / std::sqrt(4.0 * res.rate);
        ExitState st{base, {}, method};
        st.sigma_ch2.assign(base.L, 0.0);
        for (int l = 0; l < base.L; ++l)
            if (!punct[l]) {
                double s = 2.0 / sigma_n;
                st.sigma_ch2[l] = s * s;
            }
        return st.run(max_iter, traj, iters);
    };

    double lo = -4.0, hi = 12.0;
    if (!converges(hi, nullptr, nullptr)) return res; // no threshold in range
    if (converges(lo, nullptr, nullptr))
        hi = lo; // converges everywhere probed; report the range floor
    while (hi - lo > 0.005) {
        double mid = 0.5 * (lo + hi);
        (converges(mid, nullptr, nullptr) ? hi : lo) = mid;
    }
    res.found = true;
    res.ebno_db = hi;
    res.sigma = std::pow(10.0, -hi / 20.0) / std::sqrt(4.0 * res.rate);
    converges(hi, &res.trajectory, &res.iterations);
    return res;
}

double union_bound(const std::vector<std::pair<long long, double>>& spectrum, long long K,
                   long long N, double ebno_db) {
    if (spectrum.empty()) throw std::invalid_argument("empty weight spectrum");
    double ebno = std::pow(10.0, ebno_db / 10.0);
    double sum = 0;
    for (const auto& [w, mult] : spectrum)
        sum += mult / K * q_func(std::sqrt(2.0 * w * K / N * ebno));
    return sum;
}

double union_bound_single(long long d_min, double omega, long long K, long long N,
                          double ebno_db) {
    double ebno = std::pow(10.0, ebno_db / 10.0);
    return omega / N * q_func(std::sqrt(2.0 * d_min * K / N * ebno));
}

double biawgn_capacity(double sigma) {
    if (sigma <= 0) return 1.0;
    return mi_quadrature(2.0 / sigma);
}

double waterfall_penalty(long long n, double sigma, double sigma_star, double alpha,
                         double beta, const std::function<double(double)>& capacity) {
    if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
    double arg = std::sqrt(static_cast<double>(n)) *
                 (capacity(sigma) - capacity(sigma_star) - beta * std::pow(n, -2.0 / 3.0)) /
                 alpha;
    return q_func(arg);
}

} // namespace forge
