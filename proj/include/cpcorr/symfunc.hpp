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

#ifndef CPCORR_SYMFUNC_HPP
#define CPCORR_SYMFUNC_HPP

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "cpcorr/linalg.hpp"
#include "cpcorr/logdomain.hpp"
#include "cpcorr/matrix.hpp"
#include "cpcorr/partition.hpp"

namespace cpcorr {

namespace detail {

inline complex_t pow_int(complex_t x, int e) {
    complex_t r = 1.0;
    while (e > 0) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

// Semistandard-tableau sum: rows weakly increase, columns strictly increase,
// entries in 1..n.  Exact but exponential; reserved for small shapes and
// coincident evaluation points.
inline complex_t schur_ssyt(const Partition& p, const std::vector<complex_t>& x) {
    const int n = static_cast<int>(x.size());
    const int rows = p.length();
    if (rows == 0) return 1.0;
    std::vector<std::vector<int>> t(rows);
    for (int i = 0; i < rows; ++i) t[i].assign(p.part(i + 1), 0);
    complex_t total = 0.0;

    std::function<void(int, int, complex_t)> fill = [&](int i, int j, complex_t acc) {
        if (i == rows) {
            total += acc;
            return;
        }
        int ni = i, nj = j + 1;
        if (nj >= p.part(i + 1)) { ni = i + 1; nj = 0; }
        int lo = 1;
        if (j > 0) lo = std::max(lo, t[i][j - 1]);
        if (i > 0 && j < p.part(i)) lo = std::max(lo, t[i - 1][j] + 1);
        for (int v = lo; v <= n; ++v) {
            t[i][j] = v;
            fill(ni, nj, acc * x[v - 1]);
        }
    };
    fill(0, 0, complex_t{1.0, 0.0});
    return total;
}

inline LogComplex schur_bialternant(const Partition& p, const std::vector<complex_t>& x) {
    const int n = static_cast<int>(x.size());
    // numerator and denominator share the descending-exponent column layout,
    // so the alternating sign of the reversed Vandermonde cancels
    auto build = [&](const Partition& q) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = pow_int(x[i], q.part(j + 1) + n - (j + 1));
        return m;
    };
    return determinant(build(p)) / determinant(build(Partition{}));
}

}  // namespace detail

/// Schur polynomial s_p(x).  Uses the bialternant determinant for separated
/// points and falls back to the exact tableau sum when points nearly coincide.
inline complex_t schur(const Partition& p, const std::vector<complex_t>& x) {
    const int n = static_cast<int>(x.size());
    if (p.length() > n) throw std::invalid_argument("schur: partition longer than variable list");
    if (n == 0) return 1.0;
    double max_abs = 0.0;
    for (auto v : x) max_abs = std::max(max_abs, std::abs(v));
    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) min_sep = std::min(min_sep, std::abs(x[i] - x[j]));
    if (n > 1 && min_sep < 1e-6 * std::max(max_abs, 1e-300))
        return detail::schur_ssyt(p, x);
    return detail::schur_bialternant(p, x).to_complex();
}

/// An evaluation point carrying a confluence multiplicity.
struct RepeatedPoint {
    complex_t value;
    int multiplicity;
};

/// Schur polynomial at points with multiplicities, by the confluent
/// bialternant: one derivative row per repetition, both determinants built
/// from the same row family so no closed-form Vandermonde is needed.
inline LogComplex schur_confluent(const Partition& p, const std::vector<RepeatedPoint>& pts) {
    int n = 0;
    for (const auto& g : pts) n += g.multiplicity;
    if (p.length() > n) throw std::invalid_argument("schur_confluent: partition longer than point count");

    auto entry = [](complex_t x, int r, int a) -> complex_t {
        // binomial(a, r) * x^{a-r}
        if (a < r) return 0.0;
        double c = 1.0;
        for (int i = 0; i < r; ++i) c *= double(a - i) / double(i + 1);
        return c * detail::pow_int(x, a - r);
    };
    auto build = [&](const Partition& q) {
        ComplexMatrix m(n, n);
        int row = 0;
        for (const auto& g : pts)
            for (int r = 0; r < g.multiplicity; ++r, ++row)
                for (int j = 0; j < n; ++j) m(row, j) = entry(g.value, r, q.part(j + 1) + n - (j + 1));
        return m;
    };
    LogComplex num = determinant(build(p));
    LogComplex den = determinant(build(Partition{}));
    if (den.is_zero()) throw std::runtime_error("schur_confluent: degenerate point configuration");
    return num / den;
}

/// Relative residual of the dual Cauchy identity
/// prod_{i,j} (1 + y_j x_i) = sum_{eta in box} s_eta(x) s_eta'(y).
inline double dual_cauchy_check(const std::vector<complex_t>& x, const std::vector<complex_t>& y) {
    const int k = static_cast<int>(x.size());
    const int n = static_cast<int>(y.size());
    complex_t lhs = 1.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) lhs *= complex_t{1.0, 0.0} + y[j] * x[i];
    complex_t rhs = 0.0;
    enumerate_box(BoxShape(k, n), [&](const Partition& eta) {
        rhs += schur(eta, x) * schur(conjugate(eta), y);
    });
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
}

/// Jack polynomial at the identity: P^(alpha)_p(I_N) = alpha^|p| [N/alpha]_p / h_p(alpha).
inline double jack_at_identity(const Rational& alpha, const Partition& p, int n_vars) {
    if (p.length() > n_vars) return 0.0;
    double a = alpha.to_double();
    LogReal v = pochhammer(double(n_vars) / a, alpha, p);
    v *= LogReal{double(p.weight()) * std::log(a), +1};
    DeformedHooks dh = deformed_hooks(p, alpha);
    v /= LogReal::from_double(dh.h.to_double());
    return v.to_double();
}

/// Schur polynomial of a matrix argument, from power traces through the
/// complete homogeneous basis.
inline complex_t schur_of_matrix(const ComplexMatrix& m, const Partition& p) {
    const int ell = p.length();
    if (ell == 0) return 1.0;
    const int deg = p.part(1) + ell;  // largest h-index needed
    std::vector<complex_t> powers(deg + 1);
    powers[0] = double(m.rows());
    ComplexMatrix mk = ComplexMatrix::identity(m.rows());
    for (int j = 1; j <= deg; ++j) {
        mk = mk * m;
        powers[j] = mk.trace();
    }
    std::vector<complex_t> h(deg + 1);
    h[0] = 1.0;
    for (int r = 1; r <= deg; ++r) {
        complex_t s = 0.0;
        for (int i = 1; i <= r; ++i) s += powers[i] * h[r - i];
        h[r] = s / double(r);
    }
    ComplexMatrix jt(ell, ell);
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= ell; ++j) {
            int idx = p.part(i) - i + j;
            jt(i - 1, j - 1) = (idx < 0) ? complex_t{0.0, 0.0} : h[idx];
        }
    return determinant(jt).to_complex();
}

}  // namespace cpcorr

#endif
