#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowlab {

using cplx = std::complex<double>;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense square complex matrix, row-major, value semantics.
/// Sized for the small operators this library works with (order <= ~64).
class ComplexMatrix {
  public:
    ComplexMatrix() : n_(0) {}
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, cplx(0.0, 0.0)) {}
    ComplexMatrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
        if (a_.size() != n * n)
            throw DimensionError("ComplexMatrix: entry count does not match order");
    }

    static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<cplx>& d) {
        ComplexMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t order() const { return n_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    bool all_finite() const {
        for (const cplx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_order(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_order(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (cplx& z : a_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.check_same_order(b);
        const std::size_t n = a.n_;
        ComplexMatrix c(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    void check_same_order(const ComplexMatrix& o) const {
        if (n_ != o.n_) throw DimensionError("matrix order mismatch");
    }

  private:
    std::size_t n_;
    std::vector<cplx> a_;
};

struct HermitianDecomposition {
    ComplexMatrix herm;      // (A + A*)/2
    ComplexMatrix antiherm;  // (A - A*)/(2i), also Hermitian
};

/// Split A = A1 + i A2 into its two Hermitian components.
inline HermitianDecomposition hermitian_parts(const ComplexMatrix& a) {
    const std::size_t n = a.order();
    ComplexMatrix h(n), s(n);
    const cplx half_over_i(0.0, -0.5);  // 1/(2i)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx x = a(i, j);
            const cplx y = std::conj(a(j, i));
            h(i, j) = 0.5 * (x + y);
            s(i, j) = half_over_i * (x - y);
        }
    return {std::move(h), std::move(s)};
}

/// Real inner product (1/2) Tr(A*B + B*A); equals Re Tr(A*B).
inline double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same_order(b);
    double acc = 0.0;
    const std::vector<cplx>& x = a.data();
    const std::vector<cplx>& y = b.data();
    for (std::size_t k = 0; k < x.size(); ++k)
        acc += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    return acc;
}

inline double hs_norm(const ComplexMatrix& a) { return std::sqrt(hs_inner(a, a)); }

/// Hilbert-Schmidt distance sqrt(Tr (A-B)(A-B)*).
inline double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same_order(b);
    double acc = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) acc += std::norm(a.data()[k] - b.data()[k]);
    return std::sqrt(acc);
}

/// True iff |AA* - A*A|_HS <= tol. Negative tol selects the default
/// relative threshold 1e-10 * |A|^2_HS.
inline bool is_normal(const ComplexMatrix& a, double tol = -1.0) {
    const double n2 = hs_inner(a, a);
    if (tol < 0.0) tol = 1e-10 * n2;
    ComplexMatrix c = a * a.adjoint() - a.adjoint() * a;
    return hs_norm(c) <= tol;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.order(), nb = b.order();
    ComplexMatrix c(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    c(i * nb + j, k * nb + l) = a(i, k) * b(j, l);
    return c;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
    const std::size_t n = a.order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
    return true;
}

/// <u|A|v> for vectors of matching length.
inline cplx sandwich(const std::vector<cplx>& u, const ComplexMatrix& a,
                     const std::vector<cplx>& v) {
    const std::size_t n = a.order();
    if (u.size() != n || v.size() != n) throw DimensionError("vector length mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += a(i, j) * v[j];
        acc += std::conj(u[i]) * row;
    }
    return acc;
}

inline cplx expectation(const ComplexMatrix& a, const std::vector<cplx>& v) {
    return sandwich(v, a, v);
}

}  // namespace shadowlab
