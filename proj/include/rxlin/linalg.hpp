// SPDX-License-Identifier: Apache-2.0
//
// rxlin: DSP linearization library for fully digital receiver arrays
// Copyright (C) 2026 the rxlin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Small dense complex linear algebra kernel. The matrices in this library
// are tiny (at most a few hundred rows), so everything here is written as
// plain loops with a fixed evaluation order. That keeps results bit-identical
// regardless of build parallelism or the execution schedule of callers.

#ifndef RXLIN_LINALG_HPP
#define RXLIN_LINALG_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rxlin/errors.hpp"

namespace rxlin {

using cxd = std::complex<double>;

/// Dense row-major complex matrix.
class CxMat {
  public:
    CxMat() = default;
    CxMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cxd(0.0, 0.0)) {}

    static CxMat identity(std::size_t n) {
        CxMat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cxd &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cxd &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cxd *row(std::size_t r) { return data_.data() + r * cols_; }
    const cxd *row(std::size_t r) const { return data_.data() + r * cols_; }

    std::span<cxd> row_span(std::size_t r) { return {row(r), cols_}; }
    std::span<const cxd> row_span(std::size_t r) const { return {row(r), cols_}; }

    std::vector<cxd> &data() { return data_; }
    const std::vector<cxd> &data() const { return data_; }

    bool operator==(const CxMat &other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cxd> data_;
};

/// Conjugate transpose.
inline CxMat adjoint(const CxMat &a) {
    CxMat out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = std::conj(a(i, j));
    return out;
}

/// C = A * B.
inline CxMat mul(const CxMat &a, const CxMat &b) {
    if (a.cols() != b.rows())
        throw config_error("mul: dimension mismatch");
    CxMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cxd *ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cxd aik = a(i, k);
            const cxd *bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                ci[j] += aik * bk[j];
        }
    }
    return c;
}

/// y = A * x.
inline std::vector<cxd> mul_vec(const CxMat &a, std::span<const cxd> x) {
    if (a.cols() != x.size())
        throw config_error("mul_vec: dimension mismatch");
    std::vector<cxd> y(a.rows(), cxd(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const cxd *ai = a.row(i);
        cxd acc(0.0, 0.0);
        for (std::size_t j = 0; j < x.size(); ++j)
            acc += ai[j] * x[j];
        y[i] = acc;
    }
    return y;
}

inline double frobenius_norm(const CxMat &a) {
    double s = 0.0;
    for (const cxd &v : a.data())
        s += std::norm(v);
    return std::sqrt(s);
}

inline double max_abs(const CxMat &a) {
    double m = 0.0;
    for (const cxd &v : a.data())
        m = std::max(m, std::abs(v));
    return m;
}

inline double norm2(std::span<const cxd> v) {
    double s = 0.0;
    for (const cxd &x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

/// A^H * A (Hermitian by construction; both halves filled).
inline CxMat gram(const CxMat &a) {
    CxMat g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            cxd acc(0.0, 0.0);
            for (std::size_t k = 0; k < a.rows(); ++k)
                acc += std::conj(a(k, i)) * a(k, j);
            g(i, j) = acc;
            g(j, i) = std::conj(acc);
        }
    }
    return g;
}

/// In-place lower Cholesky factor of a Hermitian positive definite matrix.
/// Throws conditioning_error when a pivot is not strictly positive.
inline CxMat cholesky(const CxMat &g) {
    if (g.rows() != g.cols())
        throw config_error("cholesky: matrix must be square");
    const std::size_t n = g.rows();
    CxMat l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = g(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > 0.0))
            throw conditioning_error("cholesky: matrix not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cxd acc = g(i, j);
            for (std::size_t k = 0; k < j; ++k)
                acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

/// Solves L L^H x = b given the lower Cholesky factor L.
inline std::vector<cxd> cholesky_solve(const CxMat &l, std::span<const cxd> b) {
    const std::size_t n = l.rows();
    if (b.size() != n)
        throw config_error("cholesky_solve: dimension mismatch");
    std::vector<cxd> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        cxd acc = b[i];
        for (std::size_t k = 0; k < i; ++k)
            acc -= l(i, k) * y[k];
        y[i] = acc / l(i, i);
    }
    std::vector<cxd> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        cxd acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k)
            acc -= std::conj(l(k, ii)) * x[k];
        x[ii] = acc / l(ii, ii);
    }
    return x;
}

/// Solves G X = B for Hermitian positive definite G with multiple right-hand
/// sides (columns of B).
inline CxMat solve_hpd(const CxMat &g, const CxMat &b) {
    if (g.rows() != b.rows())
        throw config_error("solve_hpd: dimension mismatch");
    const CxMat l = cholesky(g);
    CxMat x(b.rows(), b.cols());
    std::vector<cxd> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            col[i] = b(i, j);
        const std::vector<cxd> sol = cholesky_solve(l, col);
        for (std::size_t i = 0; i < b.rows(); ++i)
            x(i, j) = sol[i];
    }
    return x;
}

namespace detail {

/// Full Householder QR of a (m x n), m >= n. On return, reflectors[j] holds
/// the normalized Householder vector of step j (length m - j) and rdiag[j]
/// the magnitude of the j-th diagonal of R.
struct HouseholderQr {
    std::vector<std::vector<cxd>> reflectors;
    std::vector<double> rdiag;
};

inline HouseholderQr householder_qr(CxMat a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n)
        throw config_error("householder_qr: requires rows >= cols");
    HouseholderQr qr;
    qr.reflectors.resize(n);
    qr.rdiag.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        // Column j below the diagonal.
        double xnorm2 = 0.0;
        for (std::size_t i = j; i < m; ++i)
            xnorm2 += std::norm(a(i, j));
        const double xnorm = std::sqrt(xnorm2);
        qr.rdiag[j] = xnorm;
        std::vector<cxd> v(m - j, cxd(0.0, 0.0));
        if (xnorm > 0.0) {
            // alpha = -exp(i*arg(x0)) * ||x|| avoids cancellation.
            const cxd x0 = a(j, j);
            const cxd phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cxd(1.0, 0.0);
            const cxd alpha = -phase * xnorm;
            for (std::size_t i = j; i < m; ++i)
                v[i - j] = a(i, j);
            v[0] -= alpha;
            const double vnorm = norm2(v);
            if (vnorm > 0.0) {
                for (cxd &e : v)
                    e /= vnorm;
                // Apply (I - 2 v v^H) to the trailing block.
                for (std::size_t c = j; c < n; ++c) {
                    cxd dot(0.0, 0.0);
                    for (std::size_t i = j; i < m; ++i)
                        dot += std::conj(v[i - j]) * a(i, c);
                    dot *= 2.0;
                    for (std::size_t i = j; i < m; ++i)
                        a(i, c) -= dot * v[i - j];
                }
            }
        }
        qr.reflectors[j] = std::move(v);
    }
    return qr;
}

} // namespace detail

/// Orthonormal basis of the left null space of a (m x n, m > n), returned as
/// a (m - n) x m matrix with orthonormal rows N satisfying N * a = 0.
/// Throws conditioning_error when a is (numerically) rank deficient.
inline CxMat left_null_basis(const CxMat &a, double rcond_threshold = 1e-10) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m <= n)
        throw config_error("left_null_basis: requires rows > cols");
    const detail::HouseholderQr qr = detail::householder_qr(a);
    double rmax = 0.0;
    double rmin = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        rmax = std::max(rmax, qr.rdiag[j]);
        rmin = (j == 0) ? qr.rdiag[j] : std::min(rmin, qr.rdiag[j]);
    }
    if (!(rmin > rcond_threshold * rmax))
        throw conditioning_error("left_null_basis: matrix is rank deficient");

    // Build the trailing m-n columns of Q by applying the reflectors in
    // reverse order to the corresponding columns of the identity.
    CxMat q(m, m - n);
    for (std::size_t c = 0; c < m - n; ++c)
        q(n + c, c) = 1.0;
    for (std::size_t jj = n; jj-- > 0;) {
        const std::vector<cxd> &v = qr.reflectors[jj];
        if (v.empty())
            continue;
        for (std::size_t c = 0; c < m - n; ++c) {
            cxd dot(0.0, 0.0);
            for (std::size_t i = jj; i < m; ++i)
                dot += std::conj(v[i - jj]) * q(i, c);
            dot *= 2.0;
            for (std::size_t i = jj; i < m; ++i)
                q(i, c) -= dot * v[i - jj];
        }
    }
    return adjoint(q);
}

} // namespace rxlin

#endif // RXLIN_LINALG_HPP
