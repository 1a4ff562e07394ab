#pragma once

#include <cmath>
#include <vector>

#include "shadowlab/complex_matrix.hpp"
#include "shadowlab/rng.hpp"

namespace shadowlab {

struct PureState {
    std::size_t dim;
    std::vector<cplx> amplitudes;  // unit 2-norm
};

struct DensityMatrix {
    ComplexMatrix matrix;  // Hermitian, trace one, positive semidefinite
};

/// Fubini-Study random pure state: N independent complex Gaussians,
/// renormalized.
inline PureState random_pure_state(std::size_t dim, RngStream& rng) {
    if (dim == 0) throw DimensionError("random_pure_state: dim must be positive");
    std::vector<cplx> z(dim);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        z[i] = rng.gauss_complex();
        norm2 += std::norm(z[i]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& c : z) c *= inv;
    return {dim, std::move(z)};
}

/// Haar-random unitary: modified Gram-Schmidt QR of a complex Ginibre
/// matrix. Columns are normalized by their real positive norms, i.e. the
/// unique factorization with a positive diagonal R, which makes the result
/// exactly Haar (plain QR with arbitrary R-diagonal phases is not).
inline ComplexMatrix random_haar_unitary(std::size_t dim, RngStream& rng) {
    if (dim == 0) throw DimensionError("random_haar_unitary: dim must be positive");
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.gauss_complex();

    // Two orthogonalization passes keep the residual at working precision.
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < dim; ++i) g(i, j) -= proj * g(i, k);
            }
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) norm2 += std::norm(g(i, j));
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < dim; ++i) g(i, j) *= inv;
    }
    return g;
}

/// Random density matrix from the induced measure mu_K: rho = XX*/Tr(XX*)
/// with X an N x K complex Ginibre matrix. K = N gives the Hilbert-Schmidt
/// (flat) measure; K = 1 the pure-state (Fubini-Study) measure.
inline DensityMatrix random_induced_density(std::size_t dim, std::size_t ancilla,
                                            RngStream& rng) {
    if (dim == 0 || ancilla == 0)
        throw DimensionError("random_induced_density: dims must be positive");
    std::vector<cplx> x(dim * ancilla);
    for (cplx& v : x) v = rng.gauss_complex();

    ComplexMatrix rho(dim);
    double tr = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < ancilla; ++k)
                acc += x[i * ancilla + k] * std::conj(x[j * ancilla + k]);
            rho(i, j) = acc;
            rho(j, i) = std::conj(acc);
        }
        tr += rho(i, i).real();
    }
    const double inv = 1.0 / tr;
    for (cplx& v : rho.data()) v *= inv;
    return {std::move(rho)};
}

/// Uniform point on the probability simplex: squared moduli of a
/// Fubini-Study random state.
inline std::vector<double> random_simplex_point(std::size_t dim, RngStream& rng) {
    const PureState psi = random_pure_state(dim, rng);
    std::vector<double> t(dim);
    for (std::size_t i = 0; i < dim; ++i) t[i] = std::norm(psi.amplitudes[i]);
    return t;
}

inline ComplexMatrix projector(const PureState& psi) {
    ComplexMatrix p(psi.dim);
    for (std::size_t i = 0; i < psi.dim; ++i)
        for (std::size_t j = 0; j < psi.dim; ++j)
            p(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
    return p;
}

}  // namespace shadowlab
