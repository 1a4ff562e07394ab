#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "shadowlab/complex_matrix.hpp"

namespace shadowlab {

/// Beta(a, b) on [0, 1]. b == 0 encodes the degenerate point mass at 1
/// (the N = 1 limits of the closed-form shadow laws).
struct BetaLaw {
    double a = 1.0;
    double b = 1.0;
    double mean() const { return b == 0.0 ? 1.0 : a / (a + b); }
};

/// Law of a diagonal element of a density matrix drawn from the induced
/// measure mu_{N,K}; equivalently the shadow of such a random state against
/// a rank-one projector.
inline BetaLaw density_diag_law(int n, int k) {
    if (n < 1 || k < 1) throw DimensionError("density_diag_law: N, K must be positive");
    if (n < 2) return {static_cast<double>(k), 0.0};  // point mass at 1
    return {static_cast<double>(k), static_cast<double>(k) * static_cast<double>(n - 1)};
}

/// Law of |<x|U|x>|^2 for Haar-random U; the phase of <x|U|x> is uniform.
inline BetaLaw unitary_overlap_law(int n) {
    if (n < 1) throw DimensionError("unitary_overlap_law: N must be positive");
    if (n < 2) return {1.0, 0.0};  // point mass at 1
    return {1.0, static_cast<double>(n - 1)};
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 3e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

/// Regularized incomplete beta I_r(a, b); absolute accuracy ~1e-14 for the
/// moderate parameters used here.
inline double beta_cdf(const BetaLaw& law, double r) {
    if (r < 0.0 || r > 1.0) throw DomainError("beta_cdf: argument outside [0, 1]");
    if (law.b == 0.0) return r >= 1.0 ? 1.0 : 0.0;  // point mass at 1
    if (r == 0.0) return 0.0;
    if (r == 1.0) return 1.0;
    const double a = law.a, b = law.b;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(r) + b * std::log1p(-r) - lbeta);
    if (r < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, r) / a;
    return 1.0 - front * detail::betacf(b, a, 1.0 - r) / b;
}

struct KsResult {
    double statistic = 0.0;
    std::uint64_t n = 0;
};

/// One-sample Kolmogorov-Smirnov statistic: exact sup-deviation between the
/// empirical CDF and `cdf`, both one-sided gaps at each order statistic.
inline KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 1) throw DomainError("ks_test: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return {d, samples.size()};
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double nx = static_cast<double>(xs.size());
    const double ny = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] <= v) ++i;
        while (j < ys.size() && ys[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    const double n_eff = nx * ny / (nx + ny);
    return {d, static_cast<std::uint64_t>(n_eff)};
}

/// Asymptotic KS survival function Q(lambda) at
/// lambda = D * (sqrt(ne) + 0.12 + 0.11/sqrt(ne)). Uses the alternating
/// series for large lambda and the dual theta series for small lambda,
/// where the alternating form converges too slowly.
inline double ks_pvalue(double statistic, double n_effective) {
    const double rn = std::sqrt(n_effective);
    const double lam = statistic * (rn + 0.12 + 0.11 / rn);
    if (lam < 1e-8) return 1.0;
    constexpr double pi = 3.14159265358979323846;
    if (lam < 1.18) {
        double sum = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double e = (2.0 * k - 1.0) * pi / lam;
            const double term = std::exp(-e * e / 8.0);
            sum += term;
            if (term < 1e-16 * sum) break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lam * sum, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * lam * lam * k * k);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace shadowlab
