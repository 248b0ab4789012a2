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

#ifndef CPCORR_SPECIAL_HPP
#define CPCORR_SPECIAL_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cpcorr/logdomain.hpp"

namespace cpcorr {

inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    return std::lgamma(double(n) + 1.0);
}

/// Incomplete-exponential kernel B_N(z,w) = sum_{l<N} (zw)^l / l!.
///
/// For |zw| below N the partial sum is evaluated as exp(zw) minus the series
/// tail; the direct sum loses all digits to cancellation once zw carries a
/// phase and |zw| is large.
inline complex_t kernel_incexp(int n, complex_t z, complex_t w) {
    if (n < 1) throw std::invalid_argument("kernel_incexp: N >= 1 required");
    const complex_t x = z * w;
    const double ax = std::abs(x);

    if (ax < 0.95 * n) {
        complex_t full = std::exp(x);
        // first tail term x^n/n! through logs; phase by repeated squaring-free arg
        double lt = n * std::log(ax > 0 ? ax : 1.0) - std::lgamma(double(n) + 1.0);
        if (ax == 0.0) return 1.0;
        double ph = std::arg(x) * n;
        complex_t term = std::exp(lt) * complex_t{std::cos(ph), std::sin(ph)};
        complex_t tail = 0.0;
        double ref = std::abs(full);
        for (int l = n; l < n + 4000; ++l) {
            tail += term;
            if (std::abs(term) < 1e-18 * (ref + std::abs(tail))) break;
            term *= x / double(l + 1);
        }
        return full - tail;
    }
    complex_t sum = 0.0, term = 1.0;
    for (int l = 0; l < n; ++l) {
        sum += term;
        term *= x / double(l + 1);
    }
    return sum;
}

/// kernel_incexp carried as (log magnitude, phase): usable at matrix sizes
/// where the partial exponential sum overflows linear doubles.
inline LogComplex kernel_incexp_log(int n, complex_t z, complex_t w) {
    if (n < 1) throw std::invalid_argument("kernel_incexp_log: N >= 1 required");
    const complex_t x = z * w;
    const double ax = std::abs(x);
    if (ax == 0.0) return LogComplex::one();

    const double tail_log = n * std::log(ax) - std::lgamma(double(n) + 1.0) - x.real();
    if (ax < 0.95 * n && tail_log < 600.0) {
        // B = e^x (1 - T), T the series tail relative to e^x
        LogComplex expx{x.real(), {std::cos(x.imag()), std::sin(x.imag())}};
        if (tail_log < -700.0) return expx;
        double ph = std::arg(x) * n - x.imag();
        complex_t term = std::exp(tail_log) * complex_t{std::cos(ph), std::sin(ph)};
        complex_t tail = 0.0;
        for (int l = n; l < n + 4000; ++l) {
            tail += term;
            if (std::abs(term) < 1e-18 * (1.0 + std::abs(tail))) break;
            term *= x / double(l + 1);
        }
        return LogComplex::from_complex(1.0 - tail) * expx;
    }
    // direct sum with running rescaling of the forward recurrence
    complex_t acc = 0.0, t = 1.0;
    double log_off = 0.0;
    for (int l = 0; l < n; ++l) {
        acc += t;
        t *= x / double(l + 1);
        double m = std::max(std::abs(t), std::abs(acc));
        if (m > 1e250) {
            double s = std::log(m);
            t *= std::exp(-s);
            acc *= std::exp(-s);
            log_off += s;
        }
    }
    double m = std::abs(acc);
    if (m == 0.0) return LogComplex::zero();
    return LogComplex{log_off + std::log(m), acc / m};
}

/// Truncation weight f(l) = (N-M+l)! / l! in the log domain.
inline LogReal kernel_trunc_weight(int n, int m, int l) {
    if (m < 0 || m > n || l < 0) throw std::invalid_argument("kernel_trunc_weight: need 0 <= M <= N, l >= 0");
    return {std::lgamma(double(n - m + l) + 1.0) - std::lgamma(double(l) + 1.0), +1};
}

namespace detail {

// Antisymmetrized even/odd power sum  sum_{0<=l<=p<N} a_l(z) c_p(w) - (z<->w)
// with a_l(z) = z^{2l} * wa(l), c_p(w) = w^{2p+1} * wc(p), via prefix sums.
template <typename FA, typename FC>
complex_t even_odd_kernel(int n, complex_t z, complex_t w, FA wa, FC wc) {
    complex_t prefix_z = 0.0, prefix_w = 0.0;
    complex_t zp = 1.0, wp = 1.0;  // z^{2l}, w^{2l}
    complex_t acc = 0.0;
    for (int p = 0; p < n; ++p) {
        prefix_z += zp * wa(p);
        prefix_w += wp * wa(p);
        complex_t codd_w = wp * w * wc(p);
        complex_t codd_z = zp * z * wc(p);
        acc += prefix_z * codd_w - prefix_w * codd_z;
        zp *= z * z;
        wp *= w * w;
    }
    return acc;
}

}  // namespace detail

/// GinSE correlation kernel: sum over even power 2l <= odd power 2p+1 of
/// (z^{2l} w^{2p+1} - w^{2l} z^{2p+1}) / (l! Gamma(p+3/2)).  Antisymmetric.
inline complex_t kernel_ginse(int n, complex_t z, complex_t w) {
    if (n < 1) throw std::invalid_argument("kernel_ginse: N >= 1 required");
    std::vector<double> inv_fact(n), inv_gamma(n);
    double f = 1.0;
    for (int l = 0; l < n; ++l) {
        inv_fact[l] = 1.0 / f;
        f *= double(l + 1);
        inv_gamma[l] = std::exp(-std::lgamma(double(l) + 1.5));
    }
    return detail::even_odd_kernel(n, z, w,
                                   [&](int l) { return inv_fact[l]; },
                                   [&](int p) { return inv_gamma[p]; });
}

/// TSE correlation kernel of order M with truncation depth N-M: same skeleton
/// as kernel_ginse with weights (N-M+l)!/l! on even powers and
/// Gamma(N-M+p+3/2)/Gamma(p+3/2) on odd powers.  Reduces to the GinSE shape
/// at N = M.
inline complex_t kernel_tse(int n, int m, complex_t z, complex_t w) {
    if (m < 1 || m > n) throw std::invalid_argument("kernel_tse: need 1 <= M <= N");
    const int d = n - m;
    std::vector<double> weven(m), wodd(m);
    for (int l = 0; l < m; ++l) {
        weven[l] = std::exp(std::lgamma(double(d + l) + 1.0) - std::lgamma(double(l) + 1.0));
        wodd[l] = std::exp(std::lgamma(double(d + l) + 1.5) - std::lgamma(double(l) + 1.5));
    }
    return detail::even_odd_kernel(m, z, w,
                                   [&](int l) { return weven[l]; },
                                   [&](int p) { return wodd[p]; });
}

/// Edge kernel (1/2) e^{xi zeta} erfc((xi+zeta)/sqrt(2)).
inline double kernel_edge(double xi, double zeta) {
    return 0.5 * std::exp(xi * zeta) * std::erfc((xi + zeta) / std::sqrt(2.0));
}

namespace detail {

// log G(z+1) for large z from the asymptotic expansion, with the two z-free
// constants dropped; only differences of this function are ever used.
inline double log_barnes_asympt_diff_part(double z) {
    double lz = std::log(z);
    double s = 0.25 * z * z + z * std::lgamma(z + 1.0) - (0.5 * z * (z + 1.0) + 1.0 / 12.0) * lz;
    double z2 = z * z;
    s += -1.0 / (720.0 * z2) + 1.0 / (5040.0 * z2 * z2) - 1.0 / (10080.0 * z2 * z2 * z2);
    return s;
}

// log G(a+1) anchored at G(1) = 1 through the recursion
// log G(a+1) = [log G(P+a+1) - log G(P+1)] - sum_{j<P} [lgamma(a+1+j) - lgamma(1+j)]
// with the bracket taken from the asymptotic series.  The anchor stays small:
// the series terms grow like P^2 log P and their rounding would otherwise
// swamp the O(1) result.
inline double log_barnes_from_series(double a) {
    const int big = 40;
    double r = log_barnes_asympt_diff_part(double(big) + a) - log_barnes_asympt_diff_part(double(big));
    for (int j = 0; j < big; ++j) r -= std::lgamma(a + 1.0 + j) - std::lgamma(1.0 + j);
    return r;
}

inline double log_barnes_half() {
    static const double v = log_barnes_from_series(-0.5);
    return v;
}

}  // namespace detail

/// log G(z) for z > 0.  Integer and half-integer arguments go through the
/// functional relation G(z+1) = Gamma(z) G(z) anchored at G(1) = 1 and at the
/// cached G(1/2); other arguments use the asymptotic series route.
inline double log_barnes_g(double z) {
    if (!(z > 0.0)) throw std::domain_error("log_barnes_g: z > 0 required");
    double r = std::round(z);
    if (std::abs(z - r) < 1e-12) {
        int m = int(r);
        double s = 0.0;
        for (int j = 1; j <= m - 2; ++j) s += std::lgamma(double(j) + 1.0);
        return s;
    }
    double r2 = std::round(z - 0.5);
    if (std::abs(z - 0.5 - r2) < 1e-12) {
        int m = int(r2);  // z = m + 1/2
        double s = detail::log_barnes_half();
        for (int j = 0; j < m; ++j) s += std::lgamma(0.5 + j);
        return s;
    }
    return detail::log_barnes_from_series(z - 1.0);
}

/// Selberg's integral over [0,1]^k in the log domain.
inline LogReal selberg(int k, double a, double b, double gamma) {
    if (k < 1 || !(a > 0.0) || !(b > 0.0))
        throw std::domain_error("selberg: need k >= 1 and a, b > 0");
    double bound = 1.0 / k;
    if (k > 1) {
        bound = std::min(bound, a / (k - 1));
        bound = std::min(bound, b / (k - 1));
    }
    if (!(gamma > -bound)) throw std::domain_error("selberg: convergence condition violated");
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
        s += std::lgamma(a + j * gamma) + std::lgamma(b + j * gamma) + std::lgamma(1.0 + (j + 1) * gamma);
        s -= std::lgamma(a + b + (k + j - 1) * gamma) + std::lgamma(1.0 + gamma);
    }
    return {s, +1};
}

/// Regularized lower incomplete gamma P(a, x) by series / continued fraction.
inline double reg_lower_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("reg_lower_gamma: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

}  // namespace cpcorr

#endif
