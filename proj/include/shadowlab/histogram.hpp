#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "shadowlab/complex_matrix.hpp"

namespace shadowlab {

/// Bin index with half-open bins; a value exactly on an interior edge goes
/// to the lower-index bin, and out-of-range values clamp to the end bins.
inline std::size_t bin_index(double x, double lo, double width, std::size_t nbins) {
    const double t = (x - lo) / width;
    double idx = std::ceil(t) - 1.0;
    if (idx < 0.0) return 0;
    if (idx >= static_cast<double>(nbins)) return nbins - 1;
    return static_cast<std::size_t>(idx);
}

/// 2D binned density over a rectangle in the complex plane. For operators
/// whose range degenerates to a segment the histogram is taken along the
/// segment instead: `segment` is set, the re axis carries the arclength
/// parameter, bins_im == 1, and bin "area" means bin length.
struct ShadowHistogram {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
    std::size_t bins_re = 0, bins_im = 0;
    std::vector<std::uint64_t> counts;  // [iy * bins_re + ix]
    std::uint64_t samples = 0;

    bool segment = false;
    cplx seg_origin;  // segment parameterization: origin + s * dir
    cplx seg_dir;

    double bin_width_re() const { return (re_max - re_min) / static_cast<double>(bins_re); }
    double bin_width_im() const {
        return segment ? 1.0 : (im_max - im_min) / static_cast<double>(bins_im);
    }
    double bin_area() const { return bin_width_re() * bin_width_im(); }

    double density(std::size_t ix, std::size_t iy) const {
        return static_cast<double>(counts[iy * bins_re + ix]) /
               (static_cast<double>(samples) * bin_area());
    }

    /// Center of bin (ix, iy) in the complex plane.
    cplx bin_center(std::size_t ix, std::size_t iy) const {
        const double s = re_min + (static_cast<double>(ix) + 0.5) * bin_width_re();
        if (segment) return seg_origin + s * seg_dir;
        const double y = im_min + (static_cast<double>(iy) + 0.5) * bin_width_im();
        return {s, y};
    }
};

/// Accumulators all share: add(z), merge(other). Merging is commutative
/// integer addition for counts, so parallel results depend only on the
/// stream split, not on scheduling.
class Histogram2DAccum {
  public:
    Histogram2DAccum(double re_min, double re_max, double im_min, double im_max,
                     std::size_t bins_re, std::size_t bins_im)
        : h_{} {
        h_.re_min = re_min;
        h_.re_max = re_max;
        h_.im_min = im_min;
        h_.im_max = im_max;
        h_.bins_re = bins_re;
        h_.bins_im = bins_im;
        h_.counts.assign(bins_re * bins_im, 0);
    }

    void add(cplx z) {
        const std::size_t ix = bin_index(z.real(), h_.re_min, h_.bin_width_re(), h_.bins_re);
        const std::size_t iy = bin_index(z.imag(), h_.im_min, h_.bin_width_im(), h_.bins_im);
        ++h_.counts[iy * h_.bins_re + ix];
        ++h_.samples;
    }

    void merge(const Histogram2DAccum& o) {
        for (std::size_t k = 0; k < h_.counts.size(); ++k) h_.counts[k] += o.h_.counts[k];
        h_.samples += o.h_.samples;
    }

    ShadowHistogram take() { return std::move(h_); }

  private:
    ShadowHistogram h_;
};

class SegmentHistogramAccum {
  public:
    SegmentHistogramAccum(cplx origin, cplx dir, double s_min, double s_max, std::size_t bins)
        : h_{} {
        h_.re_min = s_min;
        h_.re_max = s_max;
        h_.im_min = 0.0;
        h_.im_max = 0.0;
        h_.bins_re = bins;
        h_.bins_im = 1;
        h_.counts.assign(bins, 0);
        h_.segment = true;
        h_.seg_origin = origin;
        h_.seg_dir = dir;
    }

    void add(cplx z) {
        const double s = ((z - h_.seg_origin) * std::conj(h_.seg_dir)).real();
        ++h_.counts[bin_index(s, h_.re_min, h_.bin_width_re(), h_.bins_re)];
        ++h_.samples;
    }

    void merge(const SegmentHistogramAccum& o) {
        for (std::size_t k = 0; k < h_.counts.size(); ++k) h_.counts[k] += o.h_.counts[k];
        h_.samples += o.h_.samples;
    }

    ShadowHistogram take() { return std::move(h_); }

  private:
    ShadowHistogram h_;
};

/// Streaming mean and second central moments of complex samples
/// (Welford update, Chan merge in fixed stream order).
class MomentsAccum {
  public:
    void add(cplx z) {
        n_ += 1.0;
        const double dx = z.real() - mean_re_;
        const double dy = z.imag() - mean_im_;
        mean_re_ += dx / n_;
        mean_im_ += dy / n_;
        m2_rr_ += dx * (z.real() - mean_re_);
        m2_ii_ += dy * (z.imag() - mean_im_);
        m2_ri_ += dx * (z.imag() - mean_im_);
    }

    void merge(const MomentsAccum& o) {
        if (o.n_ == 0.0) return;
        if (n_ == 0.0) {
            *this = o;
            return;
        }
        const double n = n_ + o.n_;
        const double dx = o.mean_re_ - mean_re_;
        const double dy = o.mean_im_ - mean_im_;
        m2_rr_ += o.m2_rr_ + dx * dx * n_ * o.n_ / n;
        m2_ii_ += o.m2_ii_ + dy * dy * n_ * o.n_ / n;
        m2_ri_ += o.m2_ri_ + dx * dy * n_ * o.n_ / n;
        mean_re_ += dx * o.n_ / n;
        mean_im_ += dy * o.n_ / n;
        n_ = n;
    }

    std::uint64_t count() const { return static_cast<std::uint64_t>(n_); }
    cplx mean() const { return {mean_re_, mean_im_}; }
    double var_re() const { return n_ < 2.0 ? 0.0 : m2_rr_ / n_; }
    double var_im() const { return n_ < 2.0 ? 0.0 : m2_ii_ / n_; }
    double cov_reim() const { return n_ < 2.0 ? 0.0 : m2_ri_ / n_; }

  private:
    double n_ = 0.0;
    double mean_re_ = 0.0, mean_im_ = 0.0;
    double m2_rr_ = 0.0, m2_ii_ = 0.0, m2_ri_ = 0.0;
};

/// Collects every sample; for KS-style tests at moderate sample counts.
class CollectAccum {
  public:
    void add(cplx z) { values.push_back(z); }
    void merge(const CollectAccum& o) {
        values.insert(values.end(), o.values.begin(), o.values.end());
    }
    std::vector<cplx> values;
};

/// Keeps only samples within half_width of a line, recording the arclength
/// coordinate along the line; tracks the total count for mass normalization.
class StripAccum {
  public:
    StripAccum(cplx point, cplx dir, double half_width)
        : p0_(point), dir_(dir / std::abs(dir)), hw_(half_width) {}

    void add(cplx z) {
        ++total_;
        const cplx rel = (z - p0_) * std::conj(dir_);
        if (std::abs(rel.imag()) <= hw_) arclengths.push_back(rel.real());
    }

    void merge(const StripAccum& o) {
        total_ += o.total_;
        arclengths.insert(arclengths.end(), o.arclengths.begin(), o.arclengths.end());
    }

    std::uint64_t total() const { return total_; }
    std::vector<double> arclengths;

  private:
    cplx p0_, dir_;
    double hw_;
    std::uint64_t total_ = 0;
};

/// Run two accumulators over the same sample stream.
template <class A, class B>
class PairAccum {
  public:
    PairAccum(A a, B b) : first(std::move(a)), second(std::move(b)) {}
    void add(cplx z) {
        first.add(z);
        second.add(z);
    }
    void merge(const PairAccum& o) {
        first.merge(o.first);
        second.merge(o.second);
    }
    A first;
    B second;
};

}  // namespace shadowlab
