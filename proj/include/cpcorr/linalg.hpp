/*
 * Copyright 2026 The cpcorr authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CPCORR_LINALG_HPP
#define CPCORR_LINALG_HPP

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "cpcorr/logdomain.hpp"
#include "cpcorr/matrix.hpp"

namespace cpcorr {

/// Determinant via LU with partial pivoting, pivots accumulated in the log
/// domain so factorial-scale values never overflow.
inline LogComplex determinant(ComplexMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    const int n = m.rows();
    LogComplex det = LogComplex::one();
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(m(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return LogComplex::zero();
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            det *= LogComplex::from_complex(-1.0);
        }
        det *= LogComplex::from_complex(m(k, k));
        complex_t inv = 1.0 / m(k, k);
        for (int i = k + 1; i < n; ++i) {
            complex_t f = m(i, k) * inv;
            if (f == complex_t{}) continue;
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

/// Real-matrix determinant (row-major buffer, modified in place).
inline LogReal determinant_real_inplace(std::vector<double>& a, int n) {
    LogReal det = LogReal::one();
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a[std::size_t(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(a[std::size_t(i) * n + k]);
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return LogReal::zero();
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[std::size_t(k) * n + j], a[std::size_t(piv) * n + j]);
            det.sign = -det.sign;
        }
        double p = a[std::size_t(k) * n + k];
        det *= LogReal::from_double(p);
        double inv = 1.0 / p;
        for (int i = k + 1; i < n; ++i) {
            double f = a[std::size_t(i) * n + k] * inv;
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a[std::size_t(i) * n + j] -= f * a[std::size_t(k) * n + j];
        }
    }
    return det;
}

/// Pfaffian of an anti-symmetric matrix by Parlett-Reid tridiagonalization
/// with greedy column pivoting.  Pf(A)^2 = det(A).
inline LogComplex pfaffian(ComplexMatrix a, double antisym_tol = 1e-10) {
    if (a.rows() != a.cols()) throw std::invalid_argument("pfaffian: matrix not square");
    const int n = a.rows();
    if (n % 2 != 0) throw std::invalid_argument("pfaffian: odd dimension");
    if (n == 0) return LogComplex::one();

    double scale = a.max_abs();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) worst = std::max(worst, std::abs(a(i, j) + a(j, i)));
    if (worst > antisym_tol * std::max(scale, 1e-300))
        throw std::invalid_argument("pfaffian: matrix not anti-symmetric within tolerance");

    LogComplex pf = LogComplex::one();
    for (int k = 0; k + 1 < n; k += 2) {
        int piv = k + 1;
        double best = std::abs(a(piv, k));
        for (int i = k + 2; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return LogComplex::zero();
        if (piv != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(a(k + 1, j), a(piv, j));
            for (int i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, piv));
            pf *= LogComplex::from_complex(-1.0);
        }
        complex_t elem = a(k, k + 1);
        pf *= LogComplex::from_complex(elem);
        if (k + 2 >= n) break;
        std::vector<complex_t> tau(n - (k + 2));
        for (int i = k + 2; i < n; ++i) tau[i - (k + 2)] = a(k, i) / elem;
        for (int i = k + 2; i < n; ++i)
            for (int j = k + 2; j < n; ++j)
                a(i, j) += tau[i - (k + 2)] * a(j, k + 1) - tau[j - (k + 2)] * a(i, k + 1);
    }
    return pf;
}

/// prod_{i<j} (x_j - x_i).
inline LogComplex vandermonde(const std::vector<complex_t>& x) {
    LogComplex v = LogComplex::one();
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (x[j] == x[i]) return LogComplex::zero();
            v *= LogComplex::from_complex(x[j] - x[i]);
        }
    return v;
}

/// Coefficients c_0..c_n of det(tI - M) = sum c_j t^j (c_n = 1), by the
/// Faddeev-LeVerrier recursion.  Adequate for the small matrices used here.
inline std::vector<complex_t> char_poly(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("char_poly: matrix not square");
    const int n = m.rows();
    std::vector<complex_t> c(n + 1);
    c[n] = 1.0;
    ComplexMatrix mk = ComplexMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        mk = m * mk;
        complex_t ck = -mk.trace() / double(k);
        c[n - k] = ck;
        for (int i = 0; i < n; ++i) mk(i, i) += ck;
    }
    return c;
}

/// Largest singular value by power iteration on M^dagger M.
inline double operator_norm(const ComplexMatrix& m, int iters = 60) {
    ComplexMatrix g = m.adjoint() * m;
    const int n = g.rows();
    if (n == 0) return 0.0;
    std::vector<complex_t> v(n, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<complex_t> w(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[i] += g(i, j) * v[j];
        double norm = 0.0;
        for (auto& x : w) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (auto& x : w) x /= norm;
        lambda = norm;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

}  // namespace cpcorr

#endif
