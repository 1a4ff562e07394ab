#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "shadowlab/complex_matrix.hpp"
#include "shadowlab/hermitian_eig.hpp"
#include "shadowlab/normalize.hpp"
#include "shadowlab/sampling.hpp"

namespace shadowlab {

/// Cached spectral decomposition of a Hamiltonian; evaluates U(t) = e^{-iHt}
/// and its action for many times without re-solving.
class HamiltonianEvolution {
  public:
    explicit HamiltonianEvolution(const ComplexMatrix& h) : es_(eigh(h)) {}

    std::size_t dim() const { return es_.eigenvectors.order(); }
    const std::vector<double>& eigenvalues() const { return es_.eigenvalues; }

    ComplexMatrix unitary(double t) const {
        const std::size_t n = dim();
        ComplexMatrix u(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    acc += es_.eigenvectors(i, k) * std::polar(1.0, -es_.eigenvalues[k] * t) *
                           std::conj(es_.eigenvectors(j, k));
                u(i, j) = acc;
            }
        return u;
    }

    std::vector<cplx> apply(const std::vector<cplx>& psi, double t) const {
        const std::size_t n = dim();
        if (psi.size() != n) throw DimensionError("evolution: state dimension mismatch");
        std::vector<cplx> coeff(n, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                coeff[k] += std::conj(es_.eigenvectors(i, k)) * psi[i];
        std::vector<cplx> out(n, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n; ++k) {
            const cplx ph = std::polar(1.0, -es_.eigenvalues[k] * t) * coeff[k];
            for (std::size_t i = 0; i < n; ++i) out[i] += es_.eigenvectors(i, k) * ph;
        }
        return out;
    }

  private:
    EigenSystem es_;
};

inline PureState evolve_pure(const ComplexMatrix& h, const PureState& psi0, double t) {
    HamiltonianEvolution ev(h);
    return {psi0.dim, ev.apply(psi0.amplitudes, t)};
}

/// z(t) curve of an observable along a unitary evolution. With
/// reverse_time = false, z(t) = <psi(t)|A|psi(t)> for psi(t) = e^{-iHt} psi0,
/// equivalently Tr(rho0 e^{iHt} A e^{-iHt}); reverse_time flips t -> -t,
/// matching the Tr(rho e^{-iHt} A e^{iHt}) convention used for mixed states.
struct Trajectory {
    std::vector<double> times;
    std::vector<cplx> points;
};

inline Trajectory trajectory(const ComplexMatrix& a, const ComplexMatrix& h,
                             const PureState& psi0, const std::vector<double>& times,
                             bool reverse_time = false) {
    a.check_same_order(h);
    if (psi0.dim != a.order()) throw DimensionError("trajectory: state dimension mismatch");
    HamiltonianEvolution ev(h);
    Trajectory tr;
    tr.times = times;
    tr.points.reserve(times.size());
    for (double t : times) {
        const std::vector<cplx> psi = ev.apply(psi0.amplitudes, reverse_time ? -t : t);
        tr.points.push_back(expectation(a, psi));
    }
    return tr;
}

/// Same curve computed in the Heisenberg picture, z(t) = <psi0|A'(t)|psi0>
/// with A'(t) = U(t)* A U(t); used to cross-check the state-evolution path.
inline Trajectory trajectory_heisenberg(const ComplexMatrix& a, const ComplexMatrix& h,
                                        const PureState& psi0, const std::vector<double>& times,
                                        bool reverse_time = false) {
    a.check_same_order(h);
    HamiltonianEvolution ev(h);
    Trajectory tr;
    tr.times = times;
    tr.points.reserve(times.size());
    for (double t : times) {
        const ComplexMatrix u = ev.unitary(reverse_time ? -t : t);
        const ComplexMatrix at = u.adjoint() * a * u;
        tr.points.push_back(expectation(at, psi0.amplitudes));
    }
    return tr;
}

inline Trajectory mixed_trajectory(const ComplexMatrix& a, const ComplexMatrix& h,
                                   const DensityMatrix& rho0, const std::vector<double>& times,
                                   bool reverse_time = true) {
    a.check_same_order(h);
    a.check_same_order(rho0.matrix);
    HamiltonianEvolution ev(h);
    Trajectory tr;
    tr.times = times;
    tr.points.reserve(times.size());
    for (double t : times) {
        const ComplexMatrix u = ev.unitary(reverse_time ? -t : t);
        const ComplexMatrix at = u.adjoint() * a * u;
        tr.points.push_back((rho0.matrix * at).trace());
    }
    return tr;
}

namespace detail {

/// Continued-fraction reconstruction p/q of a ratio >= 1. The expansion
/// terminates only when a fractional part drops below frac_tol, so ratios
/// that are not close to a small-denominator rational (e.g. sqrt(2)) walk
/// the denominator past q_max and fail.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> to_fraction(
    double x, double frac_tol = 1e-4, std::uint64_t q_max = 1000000) {
    double a0 = std::floor(x);
    std::uint64_t p_prev = 1, q_prev = 0;
    std::uint64_t p_cur = static_cast<std::uint64_t>(a0), q_cur = 1;
    double frac = x - a0;
    for (int iter = 0; iter < 64; ++iter) {
        if (frac <= frac_tol) return std::make_pair(p_cur, q_cur);
        const double inv = 1.0 / frac;
        const double a = std::floor(inv);
        frac = inv - a;
        const std::uint64_t ai = static_cast<std::uint64_t>(a);
        const std::uint64_t p_next = ai * p_cur + p_prev;
        const std::uint64_t q_next = ai * q_cur + q_prev;
        if (q_next > q_max) return std::nullopt;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return std::nullopt;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace detail

/// Least period of the phase pattern e^{i (l_j - l_k) t} over the spectrum
/// of H. The trajectory depends only on eigenvalue differences, so
/// commensurability of the differences is the operative condition (a global
/// spectral shift never changes z(t)). Returns 0 when the spectrum is a
/// single point (constant trajectories, every T is a period) and nullopt
/// when the differences are incommensurable at the given tolerance.
inline std::optional<double> period(const ComplexMatrix& h, double tol = 1e-9) {
    const EigenSystem es = eigh(h);
    const double scale = std::max(hs_norm(h), 1e-300);
    const double zero_tol = tol * scale;

    std::vector<double> diffs;
    for (std::size_t i = 0; i < es.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < es.eigenvalues.size(); ++j) {
            const double d = std::abs(es.eigenvalues[j] - es.eigenvalues[i]);
            if (d > zero_tol) diffs.push_back(d);
        }
    if (diffs.empty()) return 0.0;

    double dmin = diffs[0];
    for (double d : diffs) dmin = std::min(dmin, d);

    constexpr std::uint64_t q_max = 1000000;
    std::uint64_t lcm = 1;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> fracs;
    for (double d : diffs) {
        auto f = detail::to_fraction(d / dmin);
        if (!f) return std::nullopt;
        fracs.push_back(*f);
        const std::uint64_t g = detail::gcd_u64(lcm, f->second);
        if (f->second / g > q_max / lcm) return std::nullopt;  // lcm overflow guard
        lcm = lcm / g * f->second;
        if (lcm > q_max) return std::nullopt;
    }

    double g = dmin / static_cast<double>(lcm);
    // largest common divisor: pull out the gcd of the implied integers
    std::uint64_t common = lcm;  // dmin / g itself
    for (const auto& f : fracs) common = detail::gcd_u64(common, f.first * (lcm / f.second));
    g *= static_cast<double>(common);

    for (double d : diffs) {
        const double k = std::round(d / g);
        if (std::abs(d - k * g) > zero_tol) return std::nullopt;
    }
    return 2.0 * 3.14159265358979323846 / g;
}

/// Orthonormal traceless Hermitian basis (generalized Gell-Mann convention,
/// normalized to Tr G^2 = 1): the N-1 diagonal generators first, then for
/// each pair j < k in row-major order the symmetric and antisymmetric
/// generators.
inline std::vector<ComplexMatrix> gell_mann_basis(std::size_t n) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(n * n - 1);
    for (std::size_t l = 1; l < n; ++l) {
        ComplexMatrix d(n);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
        for (std::size_t m = 0; m < l; ++m) d(m, m) = norm;
        d(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(std::move(d));
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            ComplexMatrix s(n), t(n);
            s(j, k) = r;
            s(k, j) = r;
            t(j, k) = cplx(0.0, -r);
            t(k, j) = cplx(0.0, r);
            basis.push_back(std::move(s));
            basis.push_back(std::move(t));
        }
    return basis;
}

namespace detail {

/// Pivoted modified Gram-Schmidt over Hermitian matrices with the HS inner
/// product; returns an orthonormal basis of the span, dropping directions
/// whose residual norm falls below tol relative to the largest input norm.
inline std::vector<ComplexMatrix> orthonormalize(std::vector<ComplexMatrix> vs, double tol) {
    double m0 = 0.0;
    for (const ComplexMatrix& v : vs) m0 = std::max(m0, hs_norm(v));
    if (m0 == 0.0) return {};
    const double threshold = tol * m0;
    std::vector<ComplexMatrix> basis;
    while (true) {
        double best = threshold;
        std::size_t pick = vs.size();
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const double nrm = hs_norm(vs[i]);
            if (nrm > best) {
                best = nrm;
                pick = i;
            }
        }
        if (pick == vs.size()) break;
        ComplexMatrix u = vs[pick];
        u *= cplx(1.0 / best, 0.0);
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const double proj = hs_inner(vs[i], u);
            vs[i] -= cplx(proj, 0.0) * u;
        }
        basis.push_back(std::move(u));
    }
    return basis;
}

}  // namespace detail

/// The two real subspaces controlling trajectory identity: X_A, the traceless
/// Hermitian matrices HS-orthogonal to both Hermitian components of A, and
/// H_A, the Hamiltonians whose conjugation flow preserves X_A, computed as
/// the orthogonal complement of { i[Re A, X], i[Im A, X] : X in X_A } within
/// all Hermitian matrices.
struct TrajectorySpaces {
    std::vector<ComplexMatrix> xa_basis;
    std::vector<ComplexMatrix> ha_basis;
    std::size_t dim_xa = 0;
    std::size_t dim_ha = 0;
    std::size_t d_a = 0;  // dim span of the traceless components of Re A, Im A
};

inline TrajectorySpaces trajectory_spaces(const ComplexMatrix& a) {
    const std::size_t n = a.order();
    const ComplexMatrix b = center(a);
    auto parts = hermitian_parts(b);

    const std::vector<ComplexMatrix> constraints =
        detail::orthonormalize({parts.herm, parts.antiherm}, 1e-10);

    TrajectorySpaces sp;
    sp.d_a = constraints.size();

    std::vector<ComplexMatrix> candidates = gell_mann_basis(n);
    for (ComplexMatrix& g : candidates)
        for (const ComplexMatrix& u : constraints) {
            const double proj = hs_inner(g, u);
            g -= cplx(proj, 0.0) * u;
        }
    sp.xa_basis = detail::orthonormalize(std::move(candidates), 1e-8);
    sp.dim_xa = sp.xa_basis.size();

    const cplx i_unit(0.0, 1.0);
    std::vector<ComplexMatrix> images;
    images.reserve(2 * sp.dim_xa);
    for (const ComplexMatrix& x : sp.xa_basis) {
        images.push_back(i_unit * commutator(parts.herm, x));
        images.push_back(i_unit * commutator(parts.antiherm, x));
    }
    const std::vector<ComplexMatrix> s_basis = detail::orthonormalize(std::move(images), 1e-10);

    std::vector<ComplexMatrix> full = gell_mann_basis(n);
    {
        ComplexMatrix id = ComplexMatrix::identity(n);
        id *= cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0);
        full.insert(full.begin(), std::move(id));
    }
    for (ComplexMatrix& g : full)
        for (const ComplexMatrix& s : s_basis) {
            const double proj = hs_inner(g, s);
            g -= cplx(proj, 0.0) * s;
        }
    sp.ha_basis = detail::orthonormalize(std::move(full), 1e-8);
    sp.dim_ha = sp.ha_basis.size();
    return sp;
}

/// Analytic-and-numeric check that two starting states trace the same curve.
/// The analytic verdict tests rho0 - rho1 against X_A (orthogonality to the
/// identity and to both Hermitian components of A) and H against H_A via the
/// commutator condition Tr(H i[Re A, X]) = Tr(H i[Im A, X]) = 0 over the
/// X_A basis; the numeric deviation scans the sampled times.
struct IdenticalTrajectoriesResult {
    bool analytic = false;
    bool delta_in_xa = false;
    bool h_in_ha = false;
    double max_deviation = 0.0;
};

inline IdenticalTrajectoriesResult trajectories_identical(
    const ComplexMatrix& a, const ComplexMatrix& h, const DensityMatrix& rho0,
    const DensityMatrix& rho1, const std::vector<double>& check_times, double tol = 1e-10) {
    IdenticalTrajectoriesResult res;

    ComplexMatrix delta = rho0.matrix - rho1.matrix;
    auto parts = hermitian_parts(a);
    const double dn = hs_norm(delta);
    const double scale1 = std::max(dn * hs_norm(parts.herm), 1e-300);
    const double scale2 = std::max(dn * hs_norm(parts.antiherm), 1e-300);
    const double tr_dev = std::abs(delta.trace());
    res.delta_in_xa = dn == 0.0 || (tr_dev <= tol * std::max(dn, 1.0) &&
                                    std::abs(hs_inner(delta, parts.herm)) <= tol * scale1 &&
                                    std::abs(hs_inner(delta, parts.antiherm)) <= tol * scale2);

    const TrajectorySpaces sp = trajectory_spaces(a);
    const cplx i_unit(0.0, 1.0);
    const double hn = std::max(hs_norm(h), 1e-300);
    res.h_in_ha = true;
    for (const ComplexMatrix& x : sp.xa_basis) {
        const ComplexMatrix w1 = i_unit * commutator(parts.herm, x);
        const ComplexMatrix w2 = i_unit * commutator(parts.antiherm, x);
        if (std::abs(hs_inner(h, w1)) > tol * hn * std::max(hs_norm(w1), 1e-300) ||
            std::abs(hs_inner(h, w2)) > tol * hn * std::max(hs_norm(w2), 1e-300)) {
            res.h_in_ha = false;
            break;
        }
    }
    // A vanishing difference is trivially identical whatever H does.
    const bool trivial_pair = dn <= tol * std::max(1.0, hs_norm(rho0.matrix));
    res.analytic = trivial_pair || (res.delta_in_xa && res.h_in_ha);

    const Trajectory t0 = mixed_trajectory(a, h, rho0, check_times);
    const Trajectory t1 = mixed_trajectory(a, h, rho1, check_times);
    for (std::size_t k = 0; k < check_times.size(); ++k)
        res.max_deviation = std::max(res.max_deviation, std::abs(t0.points[k] - t1.points[k]));
    return res;
}

}  // namespace shadowlab
