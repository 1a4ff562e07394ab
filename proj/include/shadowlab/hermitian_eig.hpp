#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "shadowlab/complex_matrix.hpp"

namespace shadowlab {

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns match eigenvalues
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix& a) {
    const std::size_t n = a.order();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations; adequate and accurate for the small orders used here.
/// The input is symmetrized as (H + H*)/2 before solving; inputs further
/// than `herm_tol` (relative) from Hermitian are rejected.
inline EigenSystem eigh(const ComplexMatrix& h_in, double herm_tol = 1e-12) {
    const std::size_t n = h_in.order();
    if (n == 0) throw DimensionError("eigh: empty matrix");

    const double scale = std::max(hs_norm(h_in), 1e-300);
    if (0.5 * hs_norm(h_in - h_in.adjoint()) > herm_tol * scale)
        throw DomainError("eigh: input is not Hermitian within tolerance");

    ComplexMatrix a = 0.5 * cplx(1.0, 0.0) * (h_in + h_in.adjoint());
    ComplexMatrix v = ComplexMatrix::identity(n);

    // Pivot rotation J = [[c, sigma], [-conj(sigma), c]] with sigma = s e^{i phi},
    // phi the phase of a(p,q); absorbing the phase reduces the 2x2 subproblem
    // to the classic real symmetric Jacobi rotation.
    const double stop = 1e-15 * scale;
    const int max_sweeps = 80;
    for (int sweep = 0; sweep < max_sweeps && detail::offdiag_norm(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;

                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sigma = s * phase;
                const cplx sigmac = std::conj(sigma);

                // A <- A J
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - sigmac * akq;
                    a(k, q) = sigma * akp + c * akq;
                }
                // A <- J* A
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - sigma * aqk;
                    a(q, k) = sigmac * apk + c * aqk;
                }
                // V <- V J
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - sigmac * vkq;
                    v(k, q) = sigma * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = a(i, i).real();

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return lam[i] < lam[j]; });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        out.eigenvalues[col] = lam[idx[col]];
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, col) = v(r, idx[col]);
    }
    return out;
}

inline std::vector<cplx> eigencolumn(const EigenSystem& es, std::size_t c) {
    const std::size_t n = es.eigenvectors.order();
    std::vector<cplx> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = es.eigenvectors(r, c);
    return col;
}

/// Eigenvalues of a normal matrix: diagonalize the Hermitian part, then
/// diagonalize the anti-Hermitian part inside each degenerate cluster.
/// Meaningless for non-normal input; callers check is_normal first.
inline std::vector<cplx> normal_eigenvalues(const ComplexMatrix& a) {
    const std::size_t n = a.order();
    auto parts = hermitian_parts(a);
    const EigenSystem es1 = eigh(parts.herm);
    const ComplexMatrix m = es1.eigenvectors.adjoint() * parts.antiherm * es1.eigenvectors;

    const double scale = std::max(hs_norm(a), 1e-300);
    const double gap = 1e-10 * scale;

    std::vector<cplx> out;
    out.reserve(n);
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && es1.eigenvalues[hi] - es1.eigenvalues[hi - 1] <= gap) ++hi;
        if (hi - lo == 1) {
            out.emplace_back(es1.eigenvalues[lo], m(lo, lo).real());
        } else {
            ComplexMatrix sub(hi - lo);
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = lo; j < hi; ++j) sub(i - lo, j - lo) = m(i, j);
            const EigenSystem es2 = eigh(sub, 1e-8);
            for (std::size_t k = 0; k < hi - lo; ++k)
                out.emplace_back(es1.eigenvalues[lo], es2.eigenvalues[k]);
        }
        lo = hi;
    }
    return out;
}

/// U(t) = exp(-i H t) through the spectral decomposition of Hermitian H.
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
    const EigenSystem es = eigh(h);
    const std::size_t n = h.order();
    ComplexMatrix u(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx ph = std::polar(1.0, -es.eigenvalues[k] * t);
                acc += es.eigenvectors(i, k) * ph * std::conj(es.eigenvectors(j, k));
            }
            u(i, j) = acc;
        }
    return u;
}

}  // namespace shadowlab
