#pragma once

#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "shadowlab/complex_matrix.hpp"
#include "shadowlab/histogram.hpp"
#include "shadowlab/randshadow.hpp"
#include "shadowlab/range.hpp"
#include "shadowlab/rng.hpp"
#include "shadowlab/sampling.hpp"

namespace shadowlab {

struct EmptySectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic seed derivation for independent sampling phases
/// (splitmix64 finalizer over seed ^ salt).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Embarrassingly parallel Monte Carlo: worker k owns RngStream(seed, k) and
/// a private accumulator; results are merged in stream order, so the output
/// depends only on (seed, streams), never on scheduling.
template <class Accum, class Gen>
Accum parallel_sample(std::uint64_t total, unsigned streams, std::uint64_t seed,
                      const Gen& gen_proto, Accum proto) {
    if (streams == 0) streams = 1;
    std::vector<Accum> accs(streams, proto);
    if (streams == 1) {
        Gen gen = gen_proto;
        RngStream rng(seed, 0);
        for (std::uint64_t i = 0; i < total; ++i) accs[0].add(gen(rng));
        return std::move(accs[0]);
    }
    std::vector<std::thread> workers;
    workers.reserve(streams);
    for (unsigned k = 0; k < streams; ++k) {
        workers.emplace_back([&accs, &gen_proto, total, streams, seed, k] {
            Gen gen = gen_proto;
            RngStream rng(seed, k);
            std::uint64_t cnt = total / streams + (k < total % streams ? 1 : 0);
            for (std::uint64_t i = 0; i < cnt; ++i) accs[k].add(gen(rng));
        });
    }
    for (auto& w : workers) w.join();
    for (unsigned k = 1; k < streams; ++k) accs[0].merge(accs[k]);
    return std::move(accs[0]);
}

/// z = <psi|A|psi> over Fubini-Study states; normalization folded into the
/// quadratic form so no per-sample allocation beyond the workspace.
class PureShadowSampler {
  public:
    explicit PureShadowSampler(ComplexMatrix a) : a_(std::move(a)) {}

    cplx operator()(RngStream& rng) {
        const std::size_t n = a_.order();
        psi_.resize(n);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            psi_[i] = rng.gauss_complex();
            norm2 += std::norm(psi_[i]);
        }
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += a_(i, j) * psi_[j];
            acc += std::conj(psi_[i]) * row;
        }
        return acc / norm2;
    }

  private:
    ComplexMatrix a_;
    std::vector<cplx> psi_;
};

/// z = Tr(rho A) with rho = XX*/Tr(XX*) from the induced measure mu_K,
/// computed as a sum of K quadratic forms over the Ginibre columns.
class MixedShadowSampler {
  public:
    MixedShadowSampler(ComplexMatrix a, std::size_t ancilla)
        : a_(std::move(a)), k_(ancilla) {}

    cplx operator()(RngStream& rng) {
        const std::size_t n = a_.order();
        col_.resize(n);
        cplx acc = 0.0;
        double norm2 = 0.0;
        for (std::size_t c = 0; c < k_; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                col_[i] = rng.gauss_complex();
                norm2 += std::norm(col_[i]);
            }
            for (std::size_t i = 0; i < n; ++i) {
                cplx row = 0.0;
                for (std::size_t j = 0; j < n; ++j) row += a_(i, j) * col_[j];
                acc += std::conj(col_[i]) * row;
            }
        }
        return acc / norm2;
    }

  private:
    ComplexMatrix a_;
    std::size_t k_;
    std::vector<cplx> col_;
};

/// z = sum t_i lambda_i with t uniform on the probability simplex.
class NormalShadowSampler {
  public:
    explicit NormalShadowSampler(std::vector<cplx> eigenvalues)
        : lam_(std::move(eigenvalues)) {}

    cplx operator()(RngStream& rng) {
        cplx acc = 0.0;
        double norm2 = 0.0;
        for (const cplx& l : lam_) {
            const double w = std::norm(rng.gauss_complex());
            norm2 += w;
            acc += w * l;
        }
        return acc / norm2;
    }

  private:
    std::vector<cplx> lam_;
};

/// Sampling window: the padded bounding box of W(A), or its segment
/// parameterization when the range degenerates.
struct ShadowBox {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
    bool segment = false;
    cplx origin;
    cplx dir;  // unit
};

inline ShadowBox shadow_box(const ComplexMatrix& a, double pad_fraction = 0.01,
                            std::size_t resolution = 720) {
    ShadowBox box;
    if (auto seg = segment_support(a)) {
        box.segment = true;
        box.origin = seg->first;
        const double len = std::abs(seg->second - seg->first);
        box.dir = len > 0.0 ? (seg->second - seg->first) / len : cplx(1.0, 0.0);
        const double pad = len > 0.0 ? pad_fraction * len : 0.5;
        box.re_min = -pad;
        box.re_max = len + pad;
        return box;
    }
    const RangeBoundary rb = boundary(a, resolution);
    double re_lo = rb.points[0].real(), re_hi = re_lo;
    double im_lo = rb.points[0].imag(), im_hi = im_lo;
    for (const cplx& p : rb.points) {
        re_lo = std::min(re_lo, p.real());
        re_hi = std::max(re_hi, p.real());
        im_lo = std::min(im_lo, p.imag());
        im_hi = std::max(im_hi, p.imag());
    }
    const double pad_re = pad_fraction * (re_hi - re_lo);
    const double pad_im = pad_fraction * (im_hi - im_lo);
    box.re_min = re_lo - pad_re;
    box.re_max = re_hi + pad_re;
    box.im_min = im_lo - pad_im;
    box.im_max = im_hi + pad_im;
    return box;
}

template <class Sampler>
ShadowHistogram sampled_shadow(const Sampler& sampler, const ShadowBox& box,
                               std::uint64_t samples, std::size_t bins_re, std::size_t bins_im,
                               std::uint64_t seed, unsigned streams) {
    if (samples == 0) throw DomainError("shadow: sample count must be positive");
    if (box.segment) {
        SegmentHistogramAccum acc(box.origin, box.dir, box.re_min, box.re_max, bins_re);
        return parallel_sample(samples, streams, seed, sampler, acc).take();
    }
    Histogram2DAccum acc(box.re_min, box.re_max, box.im_min, box.im_max, bins_re, bins_im);
    return parallel_sample(samples, streams, seed, sampler, acc).take();
}

inline ShadowHistogram pure_shadow(const ComplexMatrix& a, std::uint64_t samples,
                                   std::size_t bins_re, std::size_t bins_im, std::uint64_t seed,
                                   unsigned streams = 1) {
    return sampled_shadow(PureShadowSampler(a), shadow_box(a), samples, bins_re, bins_im, seed,
                          streams);
}

inline ShadowHistogram normal_shadow(const std::vector<cplx>& eigenvalues,
                                     std::uint64_t samples, std::size_t bins_re,
                                     std::size_t bins_im, std::uint64_t seed,
                                     unsigned streams = 1) {
    if (eigenvalues.size() < 1) throw DimensionError("normal_shadow: need eigenvalues");
    const ComplexMatrix diag = ComplexMatrix::diagonal(eigenvalues);
    return sampled_shadow(NormalShadowSampler(eigenvalues), shadow_box(diag), samples, bins_re,
                          bins_im, seed, streams);
}

inline ShadowHistogram mixed_shadow(const ComplexMatrix& a, std::size_t ancilla,
                                    std::uint64_t samples, std::size_t bins_re,
                                    std::size_t bins_im, std::uint64_t seed,
                                    unsigned streams = 1) {
    if (ancilla == 0) throw DimensionError("mixed_shadow: ancilla dimension must be positive");
    return sampled_shadow(MixedShadowSampler(a, ancilla), shadow_box(a), samples, bins_re,
                          bins_im, seed, streams);
}

/// Raw shadow samples (for KS-style comparisons at moderate counts).
template <class Sampler>
std::vector<cplx> raw_samples(const Sampler& sampler, std::uint64_t samples, std::uint64_t seed,
                              unsigned streams = 1) {
    return parallel_sample(samples, streams, seed, sampler, CollectAccum{}).values;
}

inline std::vector<double> component(const std::vector<cplx>& zs, bool imag_part) {
    std::vector<double> out(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i)
        out[i] = imag_part ? zs[i].imag() : zs[i].real();
    return out;
}

/// Agreement of the shadows of A (x) B and B (x) A: two-sample KS statistics
/// of the real and imaginary marginals on independent sample sets.
struct SwapCheck {
    double ks_re = 0.0;
    double ks_im = 0.0;
};

inline SwapCheck tensor_shadow_swap_check(const ComplexMatrix& a, const ComplexMatrix& b,
                                          std::uint64_t samples, std::uint64_t seed,
                                          unsigned streams = 1) {
    const ComplexMatrix ab = kron(a, b);
    const ComplexMatrix ba = kron(b, a);
    const std::vector<cplx> z1 =
        raw_samples(PureShadowSampler(ab), samples, derive_seed(seed, 1), streams);
    const std::vector<cplx> z2 =
        raw_samples(PureShadowSampler(ba), samples, derive_seed(seed, 2), streams);
    SwapCheck out;
    out.ks_re = ks_two_sample(component(z1, false), component(z2, false)).statistic;
    out.ks_im = ks_two_sample(component(z1, true), component(z2, true)).statistic;
    return out;
}

/// 1D histogram of the samples falling within half_width of a line,
/// parameterized by arclength from `point` along `dir`. Densities are
/// normalized against the total sample count, so the section integrates to
/// the probability mass of the strip.
struct CrossSection {
    cplx point;
    cplx dir;  // unit
    double half_width = 0.0;
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<double> density;
    std::uint64_t strip_samples = 0;
    std::uint64_t total_samples = 0;
};

inline CrossSection cross_section_from_arclengths(std::vector<double> s, cplx point, cplx dir,
                                                  double half_width, std::size_t bins,
                                                  std::uint64_t total_samples) {
    if (s.empty()) throw EmptySectionError("cross_section: no samples in the strip");
    double lo = s[0], hi = s[0];
    for (double v : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) hi = lo + 1.0;
    CrossSection cs;
    cs.point = point;
    cs.dir = dir / std::abs(dir);
    cs.half_width = half_width;
    cs.strip_samples = s.size();
    cs.total_samples = total_samples;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::uint64_t> counts(bins, 0);
    for (double v : s) ++counts[bin_index(v, lo, width, bins)];
    cs.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        cs.bin_edges[i] = lo + static_cast<double>(i) * width;
    cs.density.resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
        cs.density[i] =
            static_cast<double>(counts[i]) / (static_cast<double>(total_samples) * width);
    return cs;
}

template <class Sampler>
CrossSection cross_section(const Sampler& sampler, cplx point, cplx dir, double half_width,
                           std::size_t bins, std::uint64_t samples, std::uint64_t seed,
                           unsigned streams = 1) {
    if (half_width <= 0.0) throw DomainError("cross_section: half_width must be positive");
    StripAccum acc(point, dir, half_width);
    StripAccum res = parallel_sample(samples, streams, seed, sampler, acc);
    return cross_section_from_arclengths(std::move(res.arclengths), point, dir, half_width,
                                         bins, res.total());
}

/// Mean and second central moments of a shadow sample stream; the mean
/// estimates Tr A / N.
struct ShadowMoments {
    cplx mean;
    double var_re = 0.0;
    double var_im = 0.0;
    double cov_reim = 0.0;
    std::uint64_t n = 0;
};

inline ShadowMoments moments_from(const MomentsAccum& acc) {
    ShadowMoments m;
    m.mean = acc.mean();
    m.var_re = acc.var_re();
    m.var_im = acc.var_im();
    m.cov_reim = acc.cov_reim();
    m.n = acc.count();
    return m;
}

inline ShadowMoments shadow_moments(const std::vector<cplx>& zs) {
    if (zs.size() < 2) throw DomainError("shadow_moments: need at least 2 samples");
    MomentsAccum acc;
    for (const cplx& z : zs) acc.add(z);
    return moments_from(acc);
}

}  // namespace shadowlab
