#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "shadowlab/complex_matrix.hpp"
#include "shadowlab/hermitian_eig.hpp"

namespace shadowlab {

/// Sampled boundary of the numerical range W(A): support values
/// h(theta) = lambda_max(cos(theta) A1 + sin(theta) A2) and the boundary
/// points realized by the corresponding top eigenvectors.
struct RangeBoundary {
    std::vector<double> angles;          // ascending in [0, 2 pi)
    std::vector<cplx> points;            // p(theta_k), in W(A) by construction
    std::vector<double> support_values;  // h(theta_k)
};

/// One maximal flat segment of the sampled boundary.
struct FlatPart {
    cplx start;
    cplx end;
    double angle_lo;  // support angles spanning the flat
    double angle_hi;
};

inline std::pair<double, cplx> support_point(const ComplexMatrix& a, double theta) {
    auto parts = hermitian_parts(a);
    const double c = std::cos(theta), s = std::sin(theta);
    ComplexMatrix ath = cplx(c, 0.0) * parts.herm + cplx(s, 0.0) * parts.antiherm;
    const EigenSystem es = eigh(ath, 1e-9);
    const std::size_t top = a.order() - 1;
    const std::vector<cplx> v = eigencolumn(es, top);
    return {es.eigenvalues[top], expectation(a, v)};
}

inline RangeBoundary boundary(const ComplexMatrix& a, std::size_t resolution = 720) {
    if (resolution < 8) throw DimensionError("boundary: resolution must be at least 8");
    auto parts = hermitian_parts(a);
    RangeBoundary rb;
    rb.angles.resize(resolution);
    rb.points.resize(resolution);
    rb.support_values.resize(resolution);
    const double step = 2.0 * 3.14159265358979323846 / static_cast<double>(resolution);
    const std::size_t top = a.order() - 1;
    for (std::size_t k = 0; k < resolution; ++k) {
        const double theta = step * static_cast<double>(k);
        const double c = std::cos(theta), s = std::sin(theta);
        ComplexMatrix ath = cplx(c, 0.0) * parts.herm + cplx(s, 0.0) * parts.antiherm;
        const EigenSystem es = eigh(ath, 1e-9);
        const std::vector<cplx> v = eigencolumn(es, top);
        rb.angles[k] = theta;
        rb.support_values[k] = es.eigenvalues[top];
        rb.points[k] = expectation(a, v);
    }
    return rb;
}

/// Outer-approximation membership test: z is accepted iff it satisfies every
/// sampled support inequality Re(e^{-i theta_k} z) <= h(theta_k) + tol.
inline bool contains(const RangeBoundary& rb, cplx z, double tol) {
    for (std::size_t k = 0; k < rb.angles.size(); ++k) {
        const double proj = z.real() * std::cos(rb.angles[k]) + z.imag() * std::sin(rb.angles[k]);
        if (proj > rb.support_values[k] + tol) return false;
    }
    return true;
}

/// Flat parts of the sampled boundary. A flat shows up as an anomalously
/// long chord between consecutive boundary points (the support eigenvector
/// jumps across the segment); consecutive long chords with the same
/// direction within angle_tol are merged into one flat. Chords shorter than
/// len_factor times the mean chord length are never flagged: at resolution m
/// a smooth strictly convex arc produces chords near perimeter/m, and its
/// consecutive chord directions rotate by about 2 pi / m per step.
inline std::vector<FlatPart> flat_parts(const RangeBoundary& rb, double angle_tol = 1e-8,
                                        double len_factor = 12.0) {
    const std::size_t m = rb.points.size();
    std::vector<double> len(m);
    std::vector<double> dir(m);
    double perimeter = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const cplx q = rb.points[(k + 1) % m] - rb.points[k];
        len[k] = std::abs(q);
        dir[k] = std::atan2(q.imag(), q.real());
        perimeter += len[k];
    }
    if (perimeter <= 0.0) return {};
    const double threshold = len_factor * perimeter / static_cast<double>(m);

    auto angdiff = [](double a, double b) {
        double d = a - b;
        while (d > 3.14159265358979323846) d -= 2.0 * 3.14159265358979323846;
        while (d < -3.14159265358979323846) d += 2.0 * 3.14159265358979323846;
        return std::abs(d);
    };

    std::vector<int> group(m, -1);
    int ngroups = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (len[k] <= threshold) continue;
        const std::size_t prev = (k + m - 1) % m;
        if (group[prev] >= 0 && len[prev] > threshold && angdiff(dir[k], dir[prev]) <= angle_tol)
            group[k] = group[prev];
        else
            group[k] = ngroups++;
    }
    // cyclic closure: merge the run through index 0 with the run ending at m-1
    if (m > 1 && group[0] >= 0 && group[m - 1] >= 0 && group[0] != group[m - 1] &&
        angdiff(dir[0], dir[m - 1]) <= angle_tol) {
        const int from = group[m - 1], to = group[0];
        for (std::size_t k = 0; k < m; ++k)
            if (group[k] == from) group[k] = to;
        --ngroups;
    }

    std::vector<FlatPart> flats;
    std::vector<int> seen;
    for (std::size_t k = 0; k < m; ++k) {
        const int g = group[k];
        if (g < 0) continue;
        bool is_new = true;
        for (int s : seen)
            if (s == g) is_new = false;
        if (!is_new) continue;
        seen.push_back(g);
        // chord run [start..end] (cyclic) covers points[start] .. points[end+1]
        std::size_t start = k;
        while (group[(start + m - 1) % m] == g && (start + m - 1) % m != k)
            start = (start + m - 1) % m;
        std::size_t end = start;
        while (group[(end + 1) % m] == g && (end + 1) % m != start) end = (end + 1) % m;
        FlatPart fp;
        fp.start = rb.points[start];
        fp.end = rb.points[(end + 1) % m];
        fp.angle_lo = rb.angles[start];
        fp.angle_hi = rb.angles[(end + 1) % m];
        flats.push_back(fp);
    }
    return flats;
}

/// Containment tester with precomputed support directions, for checking
/// many points against the same boundary.
class SupportChecker {
  public:
    explicit SupportChecker(const RangeBoundary& rb)
        : cos_(rb.angles.size()), sin_(rb.angles.size()), h_(rb.support_values) {
        for (std::size_t k = 0; k < rb.angles.size(); ++k) {
            cos_[k] = std::cos(rb.angles[k]);
            sin_[k] = std::sin(rb.angles[k]);
        }
    }

    bool contains(cplx z, double tol) const {
        const double x = z.real(), y = z.imag();
        for (std::size_t k = 0; k < h_.size(); ++k)
            if (x * cos_[k] + y * sin_[k] > h_[k] + tol) return false;
        return true;
    }

  private:
    std::vector<double> cos_, sin_, h_;
};

/// Eigenvalues of an arbitrary 2x2 matrix, closed form.
inline std::pair<cplx, cplx> eigenvalues_2x2(const ComplexMatrix& a) {
    if (a.order() != 2) throw DimensionError("eigenvalues_2x2: order must be 2");
    const cplx tr = a.trace();
    const cplx disc = std::sqrt((a(0, 0) - a(1, 1)) * (a(0, 0) - a(1, 1)) +
                                4.0 * a(0, 1) * a(1, 0));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

/// W(A) for order 2: the Murnaghan ellipse with the eigenvalues as foci and
/// minor axis d = sqrt(Tr AA* - |l1|^2 - |l2|^2). Axis lengths are full
/// lengths, so major^2 = minor^2 + |f1 - f2|^2; d = 0 degenerates to the
/// segment between the eigenvalues.
struct EllipseParams {
    cplx focus1;
    cplx focus2;
    double minor_axis = 0.0;
    double major_axis = 0.0;
};

inline EllipseParams ellipse_2x2(const ComplexMatrix& a) {
    if (a.order() != 2) throw DimensionError("ellipse_2x2: order must be 2");
    const auto [l1, l2] = eigenvalues_2x2(a);
    const double tr_aas = hs_inner(a, a);
    const double d2 = tr_aas - std::norm(l1) - std::norm(l2);
    EllipseParams e;
    e.focus1 = l1;
    e.focus2 = l2;
    e.minor_axis = std::sqrt(std::max(0.0, d2));
    e.major_axis = std::sqrt(std::max(0.0, d2) + std::norm(l1 - l2));
    return e;
}

/// Support point of the ellipse in direction theta (the boundary point with
/// outward normal e^{i theta}); used to compare sampled boundaries against
/// the closed form at matched angles.
inline cplx ellipse_support_point(const EllipseParams& e, double theta) {
    const cplx cen = 0.5 * (e.focus1 + e.focus2);
    const cplx foc = e.focus2 - e.focus1;
    const double sa = 0.5 * e.major_axis;
    const double sb = 0.5 * e.minor_axis;
    if (std::abs(foc) == 0.0) return cen + std::polar(sa, theta);  // circle
    const double psi = std::atan2(foc.imag(), foc.real());
    const double phi = theta - psi;
    const double ca = sa * std::cos(phi), cb = sb * std::sin(phi);
    const double h0 = std::sqrt(sa * sa * std::cos(phi) * std::cos(phi) +
                                sb * sb * std::sin(phi) * std::sin(phi));
    if (h0 == 0.0) return cen;  // degenerate segment, normal direction
    const cplx local(sa * ca / h0, sb * cb / h0);
    return cen + std::polar(1.0, psi) * local;
}

/// Radius of the out-sphere of the state set: after natural rescaling,
/// W(A) fits in the disk of this radius around the centered origin.
inline double out_sphere_radius(std::size_t n) {
    return std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
}

/// Segment support of a normal matrix with collinear spectrum, or a point
/// for scalar matrices; empty for everything else. Shadows of such matrices
/// are one-dimensional and get binned along the segment.
inline std::optional<std::pair<cplx, cplx>> segment_support(const ComplexMatrix& a) {
    if (!is_normal(a)) return std::nullopt;
    const std::vector<cplx> lam = normal_eigenvalues(a);
    const double scale = std::max(hs_norm(a), 1e-300);
    // extremal pair
    std::size_t i0 = 0, i1 = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t j = i; j < lam.size(); ++j)
            if (std::abs(lam[i] - lam[j]) > best) {
                best = std::abs(lam[i] - lam[j]);
                i0 = i;
                i1 = j;
            }
    if (best <= 1e-12 * scale) return std::make_pair(lam[i0], lam[i0]);  // point
    const cplx u = (lam[i1] - lam[i0]) / best;
    for (const cplx& l : lam) {
        const double off = std::abs(((l - lam[i0]) * std::conj(u)).imag());
        if (off > 1e-10 * scale) return std::nullopt;
    }
    return std::make_pair(lam[i0], lam[i1]);
}

}  // namespace shadowlab
