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

#ifndef CPCORR_LOGDOMAIN_HPP
#define CPCORR_LOGDOMAIN_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace cpcorr {

using complex_t = std::complex<double>;

/// Signed real number carried as (sign, log|x|).  Products of factorial-scale
/// factors never leave the log domain.
struct LogReal {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;  // -1, 0 or +1

    LogReal() = default;
    LogReal(double log_abs_, int sign_) : log_abs(log_abs_), sign(sign_) {}

    static LogReal one() { return {0.0, +1}; }
    static LogReal zero() { return {}; }

    static LogReal from_double(double x) {
        if (x == 0.0) return zero();
        return {std::log(std::abs(x)), x > 0 ? +1 : -1};
    }

    double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    bool is_zero() const { return sign == 0; }

    LogReal& operator*=(const LogReal& o) {
        if (sign == 0 || o.sign == 0) { *this = zero(); return *this; }
        log_abs += o.log_abs;
        sign *= o.sign;
        return *this;
    }
    friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }

    LogReal& operator/=(const LogReal& o) {
        if (o.sign == 0) throw std::domain_error("LogReal: division by zero");
        if (sign == 0) return *this;
        log_abs -= o.log_abs;
        sign *= o.sign;
        return *this;
    }
    friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }

    friend LogReal operator+(const LogReal& a, const LogReal& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        const LogReal& big = a.log_abs >= b.log_abs ? a : b;
        const LogReal& small = a.log_abs >= b.log_abs ? b : a;
        double r = small.sign * big.sign * std::exp(small.log_abs - big.log_abs);
        double v = 1.0 + r;
        if (v == 0.0) return zero();
        return {big.log_abs + std::log(std::abs(v)), v > 0 ? big.sign : -big.sign};
    }
    LogReal& operator+=(const LogReal& o) { *this = *this + o; return *this; }

    LogReal pow(double e) const {
        if (sign == 0) return zero();
        if (sign < 0) throw std::domain_error("LogReal: pow of negative base");
        return {log_abs * e, +1};
    }
};

/// Complex number carried as phase * exp(log_magnitude) with |phase| = 1.
/// Zero is encoded by log_magnitude = -inf.
struct LogComplex {
    double log_mag = -std::numeric_limits<double>::infinity();
    complex_t phase = {0.0, 0.0};

    LogComplex() = default;
    LogComplex(double log_mag_, complex_t phase_) : log_mag(log_mag_), phase(phase_) {}

    static LogComplex one() { return {0.0, {1.0, 0.0}}; }
    static LogComplex zero() { return {}; }

    static LogComplex from_complex(complex_t z) {
        double m = std::abs(z);
        if (m == 0.0) return zero();
        return {std::log(m), z / m};
    }
    static LogComplex from_log_real(const LogReal& x) {
        if (x.sign == 0) return zero();
        return {x.log_abs, {double(x.sign), 0.0}};
    }

    bool is_zero() const { return !(log_mag > -std::numeric_limits<double>::infinity()); }

    complex_t to_complex() const { return is_zero() ? complex_t{0, 0} : phase * std::exp(log_mag); }

    LogComplex& operator*=(const LogComplex& o) {
        if (is_zero() || o.is_zero()) { *this = zero(); return *this; }
        log_mag += o.log_mag;
        phase *= o.phase;
        return *this;
    }
    friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }

    LogComplex& operator*=(complex_t z) { return *this *= from_complex(z); }

    LogComplex& operator/=(const LogComplex& o) {
        if (o.is_zero()) throw std::domain_error("LogComplex: division by zero");
        if (is_zero()) return *this;
        log_mag -= o.log_mag;
        phase /= o.phase;
        return *this;
    }
    friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

    friend LogComplex operator+(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const LogComplex& big = a.log_mag >= b.log_mag ? a : b;
        const LogComplex& small = a.log_mag >= b.log_mag ? b : a;
        complex_t v = big.phase + small.phase * std::exp(small.log_mag - big.log_mag);
        double m = std::abs(v);
        if (m == 0.0) return zero();
        return {big.log_mag + std::log(m), v / m};
    }
    LogComplex& operator+=(const LogComplex& o) { *this = *this + o; return *this; }

    LogComplex pow(double e) const {
        if (is_zero()) {
            if (e <= 0.0) throw std::domain_error("LogComplex: zero to non-positive power");
            return zero();
        }
        double arg = std::arg(phase) * e;
        return {log_mag * e, {std::cos(arg), std::sin(arg)}};
    }

    /// |this/other - 1|, safe at any magnitude.  Infinity if other is zero.
    double rel_diff(const LogComplex& other) const {
        if (other.is_zero()) return is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
        LogComplex r = *this / other;
        return std::abs(r.to_complex() - complex_t{1.0, 0.0});
    }
};

/// Running sum of LogComplex terms.  Keeps a linear accumulator rescaled to the
/// largest magnitude seen, so sums of factorial-scale terms stay finite.
class LogComplexSum {
  public:
    void add(const LogComplex& t) {
        if (t.is_zero()) return;
        if (empty_) {
            scale_ = t.log_mag;
            acc_ = t.phase;
            empty_ = false;
            return;
        }
        if (t.log_mag > scale_ + 60.0) {
            acc_ *= std::exp(scale_ - t.log_mag);
            scale_ = t.log_mag;
        }
        acc_ += t.phase * std::exp(t.log_mag - scale_);
    }

    LogComplex value() const {
        if (empty_) return LogComplex::zero();
        double m = std::abs(acc_);
        if (m == 0.0) return LogComplex::zero();
        return {scale_ + std::log(m), acc_ / m};
    }

  private:
    bool empty_ = true;
    double scale_ = 0.0;
    complex_t acc_ = {0.0, 0.0};
};

}  // namespace cpcorr

#endif
