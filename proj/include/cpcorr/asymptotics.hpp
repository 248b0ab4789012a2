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

#ifndef CPCORR_ASYMPTOTICS_HPP
#define CPCORR_ASYMPTOTICS_HPP

#include <cmath>
#include <vector>

#include "cpcorr/correlators.hpp"
#include "cpcorr/special.hpp"

namespace cpcorr {

enum class Regime {
    RealBulk,
    RealEdge,
    ComplexBulk,
    ComplexEdge,
    IntegerMoment,
    NonIntegerMoment,
    TwoPoint,
};

/// Scaling data for a large-N prediction of the normalized GinOE correlator
/// E prod det(G/sqrt(N) - z_j).
struct AsymptoticRegime {
    Regime regime = Regime::RealBulk;
    double x = 0.0;                // real base point, |x| < 1 (bulk) or 1 (edge)
    complex_t z = {0.0, 0.0};      // complex base point for the complex regimes
    std::vector<complex_t> zeta;   // microscopic offsets: 2k (real) or k (complex)
    std::vector<complex_t> xi;     // second offset group, complex regimes
    int k = 1;                     // moment power for IntegerMoment
    double gamma = 0.0;            // exponent for NonIntegerMoment
};

namespace detail {

constexpr double kTwoPi = 6.283185307179586476925287;

inline LogComplex pf_ratio(const std::vector<complex_t>& zeta,
                           const std::function<complex_t(int, int)>& entry) {
    return pfaffian_over_vandermonde(zeta, entry);
}

inline void require_distinct_offsets(const std::vector<complex_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (std::abs(v[i] - v[j]) < 1e-10)
                throw CoincidentPointsError("asymptotics: coincident microscopic offsets");
}

}  // namespace detail

/// Right-hand-side asymptotic value for the normalized correlator at size N.
inline LogComplex predict(const AsymptoticRegime& r, int n) {
    switch (r.regime) {
        case Regime::RealBulk: {
            if (!(std::abs(r.x) < 1.0)) throw std::invalid_argument("predict: real bulk needs |x| < 1");
            detail::require_distinct_offsets(r.zeta);
            const int k = static_cast<int>(r.zeta.size()) / 2;
            complex_t off_sum = 0.0;
            for (auto zj : r.zeta) off_sum += zj;
            LogComplex pref{-double(n) * k * (1.0 - r.x * r.x), {1.0, 0.0}};
            pref *= LogComplex::from_complex(std::exp(std::sqrt(double(n)) * r.x * off_sum));
            pref *= LogComplex{(double(k) * k - 0.5 * k) * std::log(double(n)) +
                                   0.5 * k * std::log(detail::kTwoPi),
                               {1.0, 0.0}};
            LogComplex ratio = detail::pf_ratio(r.zeta, [&](int i, int j) {
                return (r.zeta[j] - r.zeta[i]) * std::exp(r.zeta[i] * r.zeta[j]);
            });
            return pref * ratio;
        }
        case Regime::RealEdge: {
            detail::require_distinct_offsets(r.zeta);
            const int k = static_cast<int>(r.zeta.size()) / 2;
            for (auto zj : r.zeta)
                if (zj.imag() != 0.0)
                    throw std::invalid_argument("predict: real-edge offsets must be real");
            complex_t off_sum = 0.0;
            for (auto zj : r.zeta) off_sum += zj;
            LogComplex pref = LogComplex::from_complex(std::exp(std::sqrt(double(n)) * off_sum));
            pref *= LogComplex{(double(k) * k - 0.5 * k) * std::log(double(n)) +
                                   0.5 * k * std::log(detail::kTwoPi),
                               {1.0, 0.0}};
            LogComplex ratio = detail::pf_ratio(r.zeta, [&](int i, int j) {
                return (r.zeta[j] - r.zeta[i]) *
                       kernel_edge(r.zeta[i].real(), r.zeta[j].real());
            });
            return pref * ratio;
        }
        case Regime::ComplexBulk: {
            if (!(std::abs(r.z) < 1.0) || r.z.imag() == 0.0)
                throw std::invalid_argument("predict: complex bulk needs nonreal z, |z| < 1");
            detail::require_distinct_offsets(r.zeta);
            detail::require_distinct_offsets(r.xi);
            const int k = static_cast<int>(r.zeta.size());
            complex_t cross = 0.0;
            for (int j = 0; j < k; ++j) cross += std::conj(r.z) * r.zeta[j] + r.z * r.xi[j];
            LogComplex pref{-double(n) * k * (1.0 - std::norm(r.z)), {1.0, 0.0}};
            pref *= LogComplex::from_complex(std::exp(std::sqrt(double(n)) * cross));
            pref *= LogComplex{0.5 * double(k) * k * std::log(double(n)) +
                                   0.5 * k * std::log(detail::kTwoPi) -
                                   double(k) * (k - 1) * std::log(2.0 * r.z.imag()),
                               {1.0, 0.0}};
            ComplexMatrix mat(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) mat(i, j) = std::exp(r.zeta[i] * r.xi[j]);
            return pref * determinant(mat) / (vandermonde(r.zeta) * vandermonde(r.xi));
        }
        case Regime::ComplexEdge: {
            if (std::abs(std::abs(r.z) - 1.0) > 1e-12 || r.z.imag() == 0.0)
                throw std::invalid_argument("predict: complex edge needs nonreal z with |z| = 1");
            detail::require_distinct_offsets(r.zeta);
            detail::require_distinct_offsets(r.xi);
            const int k = static_cast<int>(r.zeta.size());
            complex_t off_sum = 0.0;
            for (int j = 0; j < k; ++j) off_sum += r.zeta[j] + r.xi[j];
            LogComplex pref = LogComplex::from_complex(std::exp(std::sqrt(double(n)) * off_sum));
            pref *= LogComplex{0.5 * double(k) * k * std::log(double(n)) +
                                   0.5 * k * std::log(detail::kTwoPi) -
                                   double(k) * (k - 1) * std::log(2.0 * r.z.imag()),
                               {1.0, 0.0}};
            ComplexMatrix mat(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    mat(i, j) = kernel_edge(r.xi[i].real(), r.zeta[j].real());
            return pref * determinant(mat) / (vandermonde(r.zeta) * vandermonde(r.xi));
        }
        case Regime::IntegerMoment: {
            if (!(std::abs(r.x) < 1.0))
                throw std::invalid_argument("predict: integer moment needs |x| < 1");
            const int k = r.k;
            double lp = -double(n) * k * (1.0 - r.x * r.x) +
                        (double(k) * k - 0.5 * k) * std::log(double(n)) +
                        0.5 * k * std::log(detail::kTwoPi);
            for (int j = 0; j < k; ++j) lp -= log_factorial(2 * j);
            return LogComplex{lp, {1.0, 0.0}};
        }
        case Regime::NonIntegerMoment: {
            if (!(r.gamma > -0.5))
                throw std::invalid_argument("predict: non-integer moment needs gamma > -1/2");
            double g = r.gamma;
            double lp = -double(n) * g + (g * g - 0.5 * g) * std::log(0.5 * double(n)) +
                        g * std::log(detail::kTwoPi) + log_barnes_g(0.5) -
                        log_barnes_g(g + 1.0) - log_barnes_g(g + 0.5);
            return LogComplex{lp, {1.0, 0.0}};
        }
        default:
            throw std::invalid_argument("predict: TwoPoint is handled by two_point_check");
    }
}

/// Exact E|det(G/sqrt(N))|^{2 gamma} for the real Ginibre ensemble via the
/// Wishart Gamma-product.
inline LogReal exact_moment_noninteger(double gamma, int n) {
    if (!(gamma > -0.5)) throw std::invalid_argument("exact_moment_noninteger: gamma > -1/2 required");
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("exact_moment_noninteger: even N >= 2 required");
    double lp = -gamma * n * std::log(double(n)) + gamma * n * std::log(2.0);
    for (int j = 0; j < n; ++j)
        lp += std::lgamma(gamma + 0.5 + 0.5 * j) - std::lgamma(0.5 + 0.5 * j);
    return {lp, +1};
}

/// Exact normalized finite-N correlator for the regime's scaled points, from
/// the closed form (separated offsets) or the merged character sum (moments).
inline LogComplex exact_normalized(const AsymptoticRegime& r, int n) {
    const double root_n = std::sqrt(double(n));
    switch (r.regime) {
        case Regime::RealBulk:
        case Regime::RealEdge:
        case Regime::ComplexBulk:
        case Regime::ComplexEdge: {
            std::vector<complex_t> pts;
            if (r.regime == Regime::RealBulk) {
                for (auto zj : r.zeta) pts.push_back(root_n * r.x + zj);
            } else if (r.regime == Regime::RealEdge) {
                for (auto zj : r.zeta) pts.push_back(root_n + zj);
            } else if (r.regime == Regime::ComplexBulk) {
                for (auto zj : r.zeta) pts.push_back(root_n * r.z + zj);
                for (auto xj : r.xi) pts.push_back(root_n * std::conj(r.z) + xj);
            } else {
                for (auto zj : r.zeta) pts.push_back(root_n * r.z + zj / std::conj(r.z));
                for (auto xj : r.xi) pts.push_back(root_n * std::conj(r.z) + xj / r.z);
            }
            const int k = static_cast<int>(pts.size()) / 2;
            CorrelatorSpec s;
            s.ensemble = EnsembleTag::GinOE;
            s.n = n;
            s.k = k;
            s.z = pts;
            return closed_form(s) * LogComplex{-double(n) * k * std::log(double(n)), {1.0, 0.0}};
        }
        case Regime::IntegerMoment: {
            LogComplex merged =
                ginoe_merged_correlator(n, {{complex_t{root_n * r.x, 0.0}, 2 * r.k}});
            return merged * LogComplex{-double(n) * r.k * std::log(double(n)), {1.0, 0.0}};
        }
        case Regime::NonIntegerMoment:
            return LogComplex::from_log_real(exact_moment_noninteger(r.gamma, n));
        default:
            throw std::invalid_argument("exact_normalized: TwoPoint has no single exact value");
    }
}

struct ConvergenceRow {
    int n;
    LogComplex exact;
    LogComplex predicted;
    double ratio_deviation;  // |exact/predicted - 1|
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool deviations_decreasing = true;

    double final_deviation() const { return rows.empty() ? 0.0 : rows.back().ratio_deviation; }
};

/// Tabulates exact/predicted over an N grid; a non-monotone deviation tail is
/// flagged rather than failed, since the limit statements carry no rates.
inline ConvergenceReport convergence_report(const AsymptoticRegime& r, const std::vector<int>& ns) {
    ConvergenceReport report;
    for (int n : ns) {
        ConvergenceRow row;
        row.n = n;
        row.exact = exact_normalized(r, n);
        row.predicted = predict(r, n);
        row.ratio_deviation = row.exact.rel_diff(row.predicted);
        report.rows.push_back(row);
    }
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        if (report.rows[i].ratio_deviation > report.rows[i - 1].ratio_deviation + 1e-12)
            report.deviations_decreasing = false;
    return report;
}

/// P(largest eigenvalue <= x) for the Laguerre Symplectic Ensemble of
/// dimension k2 with k1 degrees of freedom: density prop. to
/// prod lambda^{2(k1-k2)+1} e^{-lambda} |Delta|^4 on [0, x]^{k2}.
inline double lse_top_cdf(int k1, int k2, double x) {
    if (k1 < 1 || k2 < 1) throw std::invalid_argument("lse_top_cdf: k1, k2 >= 1 required");
    if (x <= 0.0) return 0.0;
    const int a = 2 * (k1 - k2) + 1;
    if (a < 0) throw std::invalid_argument("lse_top_cdf: needs k1 >= k2");
    if (k2 == 1) {
        return reg_lower_gamma(double(a) + 1.0, x);
    }
    if (k2 == 2) {
        // expand (l1 - l2)^4 into incomplete-gamma moment products
        auto g = [&](int b, double upper) {
            return reg_lower_gamma(double(b) + 1.0, upper) * std::exp(std::lgamma(double(b) + 1.0));
        };
        auto f = [&](double upper) {
            double sum = 0.0;
            for (int i = 0; i <= 4; ++i) {
                double c = 1.0;
                for (int l = 0; l < i; ++l) c *= double(4 - l) / double(l + 1);
                double term = c * g(a + 4 - i, upper) * g(a + i, upper);
                sum += (i % 2 == 0) ? term : -term;
            }
            return sum;
        };
        return f(x) / f(1e308);
    }
    throw std::invalid_argument("lse_top_cdf: k2 <= 2 only");
}

/// Right-hand side of the two-point law at x = x0 + zeta/sqrt(N),
/// y = x0 + xi/sqrt(N): |x-y|^{-4 k1 k2} F^{(4)}_{k1,k2}(N (x-y)^2).
inline LogComplex two_point_prediction(int k1, int k2, double /*x0*/, double zeta, double xi,
                                       int n) {
    double xy = (zeta - xi) / std::sqrt(double(n));
    double pred = std::exp(-4.0 * double(k1) * k2 * std::log(std::abs(xy))) *
                  lse_top_cdf(k1, k2, double(n) * xy * xy);
    return LogComplex::from_complex(pred);
}

/// Exact finite-N moment ratio through the merged character sums; the
/// normalizations N^{-Nk} cancel.
inline LogComplex two_point_exact_ratio(int k1, int k2, double x0, double zeta, double xi, int n) {
    const double root_n = std::sqrt(double(n));
    const double a = root_n * x0 + zeta, b = root_n * x0 + xi;
    LogComplex num = ginoe_merged_correlator(
        n, {{complex_t{a, 0.0}, 2 * k1}, {complex_t{b, 0.0}, 2 * k2}});
    LogComplex da = ginoe_merged_correlator(n, {{complex_t{a, 0.0}, 2 * k1}});
    LogComplex db = ginoe_merged_correlator(n, {{complex_t{b, 0.0}, 2 * k2}});
    return num / (da * db);
}

/// The two-point moment-ratio law: MC of the merged-point correlator ratio at
/// x = x0 + zeta/sqrt(N), y = x0 + xi/sqrt(N) against
/// |x-y|^{-4 k1 k2} F^{(4)}_{k1,k2}(N (x-y)^2).
inline CheckResult two_point_check(int k1, int k2, double x0, double zeta, double xi, int n,
                                   long long n_samples, std::uint64_t seed, int workers = 0) {
    if (n % 2 != 0) throw std::invalid_argument("two_point_check: even N required");
    const double root_n = std::sqrt(double(n));
    const double a = root_n * x0 + zeta;  // sqrt(N) x
    const double b = root_n * x0 + xi;    // sqrt(N) y
    // exact one-point denominators (normalization N^{-Nk} cancels in the ratio)
    LogComplex da = ginoe_merged_correlator(n, {{complex_t{a, 0.0}, 2 * k1}});
    LogComplex db = ginoe_merged_correlator(n, {{complex_t{b, 0.0}, 2 * k2}});
    LogComplex denom = da * db;

    auto sample_ratio = [&](long long i) {
        RandomStream rng(seed, detail::kStreamGinOE, std::uint64_t(i));
        std::vector<double> g(std::size_t(n) * n);
        for (auto& v : g) v = rng.next_gaussian();
        std::vector<double> shifted(g.size());
        LogReal val = LogReal::one();
        auto det_shift = [&](double shift) {
            shifted = g;
            for (int r = 0; r < n; ++r) shifted[std::size_t(r) * n + r] -= shift;
            return determinant_real_inplace(shifted, n);
        };
        LogReal det_a = det_shift(a), det_b = det_shift(b);
        for (int p = 0; p < 2 * k1; ++p) val *= det_a;
        for (int p = 0; p < 2 * k2; ++p) val *= det_b;
        return (LogComplex::from_log_real(val) / denom).to_complex();
    };

    CheckResult out;
    out.estimate = mc_mean(n_samples, seed, 0.0, workers, sample_ratio);
    out.prediction = two_point_prediction(k1, k2, x0, zeta, xi, n);
    return out;
}

}  // namespace cpcorr

#endif
