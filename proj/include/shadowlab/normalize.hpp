#pragma once

#include <cmath>

#include "shadowlab/complex_matrix.hpp"

namespace shadowlab {

struct DegenerateProjectionError : std::domain_error {
    using std::domain_error::domain_error;
};

struct FrameError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Traceless centering of A together with the constants of the affine map
/// that carries the state-set projection onto the numerical range: the plane
/// frame (V1, V2) is orthonormal in the HS inner product and
/// alpha <rho,V_i> - gamma_i recovers Tr(rho B_i).
struct CenteredForm {
    ComplexMatrix b;   // A - (Tr A / N) I
    ComplexMatrix b1;  // Hermitian part of B
    ComplexMatrix b2;  // anti-Hermitian part of B, as a Hermitian matrix
    double d = 0.0;    // |Tr B^2|^2
    double alpha = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    ComplexMatrix v1;  // (B1 + gamma1 I) / alpha
    ComplexMatrix v2;  // (B2 + gamma2 I) / alpha
};

inline ComplexMatrix center(const ComplexMatrix& a) {
    const std::size_t n = a.order();
    const cplx shift = a.trace() / static_cast<double>(n);
    ComplexMatrix b = a;
    for (std::size_t i = 0; i < n; ++i) b(i, i) -= shift;
    return b;
}

inline bool is_scalar_multiple_of_identity(const ComplexMatrix& a) {
    return hs_norm(center(a)) < 1e-12 * std::max(1.0, hs_norm(a));
}

inline CenteredForm normalization_constants(const ComplexMatrix& a) {
    if (is_scalar_multiple_of_identity(a))
        throw DegenerateProjectionError(
            "normalization_constants: A is a scalar multiple of the identity, "
            "the projection is constant");

    const std::size_t n = a.order();
    CenteredForm f;
    f.b = center(a);
    auto parts = hermitian_parts(f.b);
    f.b1 = std::move(parts.herm);
    f.b2 = std::move(parts.antiherm);

    // Tr B^2 = Tr B1^2 - Tr B2^2 + 2i Tr(B1 B2), and Tr BB* = Tr B1^2 + Tr B2^2.
    const cplx trb2 = (f.b * f.b).trace();
    const double tr_bbs = hs_inner(f.b, f.b);
    const double abs_trb2 = std::abs(trb2);

    f.d = abs_trb2 * abs_trb2;
    f.alpha = std::sqrt(0.5 * tr_bbs + 0.5 * abs_trb2);

    const double c1_sq = std::max(0.0, -0.5 * trb2.real() + 0.5 * abs_trb2);
    const double c2_sq = std::max(0.0, 0.5 * trb2.real() + 0.5 * abs_trb2);

    // c2 >= 0 fixes the branch; sign(c1 c2) = -sign(Im Tr B^2). When the
    // imaginary part vanishes one of the two c's is already zero.
    f.c2 = std::sqrt(c2_sq);
    f.c1 = (trb2.imag() > 0.0 ? -1.0 : 1.0) * std::sqrt(c1_sq);

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    f.gamma1 = f.c1 / sqrt_n;
    f.gamma2 = f.c2 / sqrt_n;

    const double inv_alpha = 1.0 / f.alpha;
    f.v1 = f.b1;
    f.v2 = f.b2;
    for (std::size_t i = 0; i < n; ++i) {
        f.v1(i, i) += f.gamma1;
        f.v2(i, i) += f.gamma2;
    }
    f.v1 *= cplx(inv_alpha, 0.0);
    f.v2 *= cplx(inv_alpha, 0.0);
    return f;
}

/// Centered copy of A rescaled so its normalization constant is one
/// ("natural size"); alpha is degree-one homogeneous in B.
inline ComplexMatrix natural_rescale(const ComplexMatrix& a) {
    const CenteredForm f = normalization_constants(a);
    ComplexMatrix out = f.b;
    out *= cplx(1.0 / f.alpha, 0.0);
    return out;
}

/// A = V1 + i V2 from an orthonormal Hermitian frame; the inverse direction
/// of the projection construction.
inline ComplexMatrix frame_to_matrix(const ComplexMatrix& v1, const ComplexMatrix& v2,
                                     double tol = 1e-10) {
    v1.check_same_order(v2);
    if (!is_hermitian(v1, tol) || !is_hermitian(v2, tol))
        throw FrameError("frame_to_matrix: frame matrices must be Hermitian");
    if (std::abs(hs_norm(v1) - 1.0) > tol || std::abs(hs_norm(v2) - 1.0) > tol)
        throw FrameError("frame_to_matrix: frame matrices must have unit HS norm");
    if (std::abs(hs_inner(v1, v2)) > tol)
        throw FrameError("frame_to_matrix: frame matrices must be HS-orthogonal");
    return v1 + cplx(0.0, 1.0) * v2;
}

}  // namespace shadowlab
