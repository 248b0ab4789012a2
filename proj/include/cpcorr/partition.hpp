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

#ifndef CPCORR_PARTITION_HPP
#define CPCORR_PARTITION_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpcorr/logdomain.hpp"

namespace cpcorr {

/// Exact rational with reduced int64 numerator/denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        reduce();
    }

    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rational operator*(const Rational& a, const Rational& b) {
        // cross-reduce before multiplying so desk-scale hook products stay in range
        std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
        std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
        Rational r;
        r.num = (a.num / g1) * (b.num / g2);
        r.den = (a.den / g2) * (b.den / g1);
        r.reduce();
        return r;
    }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    double to_double() const { return double(num) / double(den); }
};

/// A partition: weakly decreasing positive parts, trailing zeros stripped.
class Partition {
  public:
    Partition() = default;
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 0 || (i > 0 && parts_[i] > parts_[i - 1]))
                throw std::invalid_argument("Partition: parts must be weakly decreasing and nonnegative");
        }
    }
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    /// Part j (1-based); zero beyond the length.
    int part(int j) const { return (j >= 1 && j <= length()) ? parts_[j - 1] : 0; }
    bool empty() const { return parts_.empty(); }

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < length(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

  private:
    std::vector<int> parts_;
};

/// k x N rectangle of Young-diagram boxes.
struct BoxShape {
    int rows;  // k
    int cols;  // N

    BoxShape(int k, int n) : rows(k), cols(n) {
        if (rows <= 0 || cols < 0) throw std::invalid_argument("BoxShape: rows > 0, cols >= 0 required");
    }
    bool contains(const Partition& p) const {
        return p.length() <= rows && p.part(1) <= cols;
    }
};

inline Partition conjugate(const Partition& p) {
    std::vector<int> out;
    for (int j = 1; j <= p.part(1); ++j) {
        int count = 0;
        for (int i = 1; i <= p.length(); ++i)
            if (p.part(i) >= j) ++count;
        out.push_back(count);
    }
    return Partition(out);
}

/// Parts of the reversed complement inside `box`: part j = N - p_{k-j+1}.
inline Partition complement(const Partition& p, const BoxShape& box) {
    if (!box.contains(p)) throw std::invalid_argument("complement: partition does not fit the box");
    std::vector<int> out(box.rows);
    for (int j = 1; j <= box.rows; ++j) out[j - 1] = box.cols - p.part(box.rows - j + 1);
    return Partition(out);
}

inline Partition double_parts(const Partition& p) {
    std::vector<int> out(p.parts());
    for (int& x : out) x *= 2;
    return Partition(out);
}

inline Partition repeat_parts(const Partition& p) {
    std::vector<int> out;
    out.reserve(2 * p.length());
    for (int x : p.parts()) { out.push_back(x); out.push_back(x); }
    return Partition(out);
}

inline bool is_even(const Partition& p) {
    for (int x : p.parts())
        if (x % 2 != 0) return false;
    return true;
}

inline bool is_repeated(const Partition& p) {
    if (p.length() % 2 != 0) return false;
    for (int i = 1; i <= p.length(); i += 2)
        if (p.part(i) != p.part(i + 1)) return false;
    return true;
}

/// Product of all hook lengths d'_p, exact.
inline std::int64_t hook_product(const Partition& p) {
    Partition q = conjugate(p);
    std::int64_t prod = 1;
    for (int i = 1; i <= p.length(); ++i) {
        for (int j = 1; j <= p.part(i); ++j) {
            std::int64_t hook = (p.part(i) - j) + (q.part(j) - i) + 1;
            if (prod > std::numeric_limits<std::int64_t>::max() / hook)
                throw std::overflow_error("hook_product: exceeds int64");
            prod *= hook;
        }
    }
    return prod;
}

struct DeformedHooks {
    Rational d_prime;  // prod(alpha*arm + leg + alpha)
    Rational h;        // prod(alpha*arm + leg + 1)
};

inline DeformedHooks deformed_hooks(const Partition& p, const Rational& alpha) {
    Partition q = conjugate(p);
    DeformedHooks out{Rational(1), Rational(1)};
    for (int i = 1; i <= p.length(); ++i) {
        for (int j = 1; j <= p.part(i); ++j) {
            Rational a(p.part(i) - j);
            Rational l(q.part(j) - i);
            out.d_prime *= alpha * a + l + alpha;
            out.h *= alpha * a + l + Rational(1);
        }
    }
    return out;
}

/// Generalized hypergeometric coefficient [u]^(alpha)_p, computed as the exact
/// finite product prod_j prod_{i=0}^{p_j-1} (u - (j-1)/alpha + i).  This is the
/// continuation of the Gamma-ratio definition and is total: a vanishing factor
/// (the denominator Gamma sitting on a pole) gives an exact signed zero.
inline LogReal pochhammer(double u, const Rational& alpha, const Partition& p) {
    if (alpha.num <= 0) throw std::domain_error("pochhammer: alpha must be positive");
    double inv_alpha = double(alpha.den) / double(alpha.num);
    LogReal result = LogReal::one();
    for (int j = 1; j <= p.length(); ++j) {
        double base = u - (j - 1) * inv_alpha;
        for (int i = 0; i < p.part(j); ++i) {
            double f = base + i;
            if (f == 0.0) return LogReal::zero();
            result *= LogReal::from_double(f);
        }
    }
    return result;
}

/// Number of partitions inside a k x N box: binomial(N + k, k).
inline double box_partition_count(const BoxShape& box) {
    double c = 1.0;
    for (int i = 1; i <= box.rows; ++i) c *= double(box.cols + i) / double(i);
    return c;
}

/// Enumerates every partition in the box exactly once, in a fixed colex-style
/// order: starts at the empty partition, deepest row varies fastest.
inline void enumerate_box(const BoxShape& box,
                          const std::function<void(const Partition&)>& visit) {
    std::vector<int> parts(box.rows, 0);
    while (true) {
        std::vector<int> trimmed(parts);
        visit(Partition(trimmed));
        int j = box.rows - 1;
        while (j >= 0) {
            int cap = (j == 0) ? box.cols : parts[j - 1];
            if (parts[j] < cap) break;
            --j;
        }
        if (j < 0) return;
        ++parts[j];
        for (int i = j + 1; i < box.rows; ++i) parts[i] = 0;
    }
}

inline std::vector<Partition> list_box(const BoxShape& box) {
    std::vector<Partition> out;
    enumerate_box(box, [&](const Partition& p) { out.push_back(p); });
    return out;
}

}  // namespace cpcorr

#endif
