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

#ifndef CPCORR_MEASURES_HPP
#define CPCORR_MEASURES_HPP

#include <cmath>
#include <vector>

#include "cpcorr/correlators.hpp"
#include "cpcorr/ensembles.hpp"
#include "cpcorr/errors.hpp"
#include "cpcorr/linalg.hpp"
#include "cpcorr/montecarlo.hpp"
#include "cpcorr/partition.hpp"
#include "cpcorr/rng.hpp"
#include "cpcorr/special.hpp"
#include "cpcorr/symfunc.hpp"

namespace cpcorr {

/// Probability measure on partitions induced by a correlator's character
/// expansion.  Complex families weight s_eta(z) s_eta(w) over all partitions
/// of length <= k; real families weight s_eta(z) over partitions with even
/// conjugate (carried by their half-partition rho, eta = rho repeated).
struct PartitionMeasure {
    EnsembleTag family = EnsembleTag::GinUE;  // GinUE, TUE, GinOE or TOE
    int k = 1;
    int n = 0, m = 0;  // truncations only
    std::vector<double> z;
    std::vector<double> w;  // complex families only
};

inline void validate(const PartitionMeasure& pm) {
    if (pm.k < 1) throw std::invalid_argument("measure: k >= 1 required");
    bool trunc = (pm.family == EnsembleTag::TUE || pm.family == EnsembleTag::TOE);
    bool complex_family = (pm.family == EnsembleTag::GinUE || pm.family == EnsembleTag::TUE);
    if (!complex_family && pm.family != EnsembleTag::GinOE && pm.family != EnsembleTag::TOE)
        throw std::invalid_argument("measure: family must be GinUE, TUE, GinOE or TOE");
    if (trunc && (pm.m < 1 || pm.m > pm.n))
        throw std::invalid_argument("measure: truncation needs 1 <= M <= N");
    std::size_t zcount = complex_family ? std::size_t(pm.k) : std::size_t(2 * pm.k);
    if (pm.z.size() != zcount)
        throw std::invalid_argument("measure: wrong number of z parameters");
    if (complex_family && pm.w.size() != std::size_t(pm.k))
        throw std::invalid_argument("measure: wrong number of w parameters");
    if (!complex_family && !pm.w.empty())
        throw std::invalid_argument("measure: w parameters apply to complex families only");
    auto in_domain = [&](double v) { return trunc ? (v > 0.0 && v < 1.0) : v > 0.0; };
    for (double v : pm.z)
        if (!in_domain(v)) throw std::invalid_argument("measure: parameters outside positivity domain");
    for (double v : pm.w)
        if (!in_domain(v)) throw std::invalid_argument("measure: parameters outside positivity domain");
}

namespace detail {

inline std::vector<complex_t> to_complex_points(const std::vector<double>& xs) {
    std::vector<complex_t> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i];
    return out;
}

// Unnormalized weight of the support element indexed by eta (complex
// families) or by the half-partition rho (real families).
inline LogReal measure_log_weight(const PartitionMeasure& pm, const Partition& idx) {
    const int k = pm.k, d = pm.n - pm.m;
    auto zpts = to_complex_points(pm.z);
    switch (pm.family) {
        case EnsembleTag::GinUE: {
            double lw = 0.0;
            for (int j = 1; j <= k; ++j) lw -= log_factorial(idx.part(j) + k - j);
            double sz = schur(idx, zpts).real();
            double sw = schur(idx, to_complex_points(pm.w)).real();
            return LogReal::from_double(sz) * LogReal::from_double(sw) * LogReal{lw, +1};
        }
        case EnsembleTag::TUE: {
            double lw = 0.0;
            for (int j = 1; j <= k; ++j)
                lw += log_factorial(idx.part(j) + d + k - j) - log_factorial(idx.part(j) + k - j);
            double sz = schur(idx, zpts).real();
            double sw = schur(idx, to_complex_points(pm.w)).real();
            return LogReal::from_double(sz) * LogReal::from_double(sw) * LogReal{lw, +1};
        }
        case EnsembleTag::GinOE: {
            double lw = 0.0;
            for (int j = 1; j <= k; ++j) lw -= log_factorial(idx.part(j) + 2 * (k - j));
            return LogReal::from_double(schur(repeat_parts(idx), zpts).real()) * LogReal{lw, +1};
        }
        case EnsembleTag::TOE: {
            double lw = 0.0;
            for (int j = 1; j <= k; ++j)
                lw += log_factorial(d + idx.part(j) + 2 * (k - j)) -
                      log_factorial(idx.part(j) + 2 * (k - j));
            return LogReal::from_double(schur(repeat_parts(idx), zpts).real()) * LogReal{lw, +1};
        }
        default:
            throw std::invalid_argument("measure_log_weight: unsupported family");
    }
}

inline void require_distinct(const std::vector<double>& xs, const char* where) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (std::abs(xs[i] - xs[j]) < 1e-10)
                throw CoincidentPointsError(std::string(where) + ": coincident measure parameters");
}

}  // namespace detail

/// Closed-form normalization constant Z_k.
inline LogReal normalization(const PartitionMeasure& pm) {
    validate(pm);
    detail::require_distinct(pm.z, "normalization");
    if (!pm.w.empty()) detail::require_distinct(pm.w, "normalization");
    const int k = pm.k, d = pm.n - pm.m;
    auto z = detail::to_complex_points(pm.z);
    auto w = detail::to_complex_points(pm.w);
    LogComplex value;
    switch (pm.family) {
        case EnsembleTag::GinUE: {
            ComplexMatrix mat(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) mat(i, j) = std::exp(pm.z[i] * pm.w[j]);
            value = determinant(mat) / (vandermonde(z) * vandermonde(w));
            break;
        }
        case EnsembleTag::TUE: {
            ComplexMatrix mat(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    mat(i, j) = std::pow(1.0 - pm.z[i] * pm.w[j], -double(d + 1));
            value = determinant(mat) / (vandermonde(z) * vandermonde(w));
            value *= LogComplex{double(k) * log_factorial(d), {1, 0}};
            break;
        }
        case EnsembleTag::GinOE: {
            value = detail::pfaffian_over_vandermonde(z, [&](int i, int j) {
                return complex_t{(pm.z[j] - pm.z[i]) * std::exp(pm.z[i] * pm.z[j]), 0.0};
            });
            break;
        }
        case EnsembleTag::TOE: {
            value = detail::pfaffian_over_vandermonde(z, [&](int i, int j) {
                return complex_t{(pm.z[j] - pm.z[i]) * std::pow(1.0 - pm.z[i] * pm.z[j], -double(d + 1)),
                                 0.0};
            });
            value *= LogComplex{double(k) * log_factorial(d), {1, 0}};
            break;
        }
        default:
            throw std::invalid_argument("normalization: unsupported family");
    }
    // positive by Schur positivity of the defining sum
    return LogReal{value.log_mag, value.phase.real() >= 0 ? +1 : -1};
}

/// Direct summation of the weights with an adaptive column cutoff: the box
/// column bound grows until the last column carries less than 1e-12 of the
/// accumulated mass.  Oracle for the closed form and backing for sampling.
struct MeasureTable {
    std::vector<Partition> support;  // index partitions (rho for real families)
    std::vector<double> cumulative;  // cumulative weights scaled by exp(log_scale)
    double log_scale = 0.0;
    LogReal total;
    int column_bound = 0;
};

inline MeasureTable enumerate_measure(const PartitionMeasure& pm, double tail_tol = 1e-12,
                                      double max_support = 1e7) {
    validate(pm);
    MeasureTable table;
    LogReal total = LogReal::zero();
    double log_scale = 0.0;
    bool have_scale = false;

    auto column_partitions = [&](int first_part) {
        // index partitions with largest part exactly first_part
        std::vector<Partition> out;
        if (pm.k == 1) {
            out.push_back(first_part == 0 ? Partition{} : Partition{first_part});
            return out;
        }
        enumerate_box(BoxShape(pm.k - 1, first_part), [&](const Partition& rest) {
            if (first_part == 0 && !rest.empty()) return;
            std::vector<int> parts;
            if (first_part > 0) parts.push_back(first_part);
            for (int x : rest.parts()) parts.push_back(x);
            if (first_part == 0 || rest.part(1) <= first_part) out.push_back(Partition(parts));
        });
        return out;
    };

    for (int col = 0;; ++col) {
        LogReal column_mass = LogReal::zero();
        std::vector<std::pair<Partition, LogReal>> column;
        for (const Partition& idx : column_partitions(col)) {
            LogReal lw = detail::measure_log_weight(pm, idx);
            if (lw.sign < 0) throw NumericalError("enumerate_measure: negative weight encountered");
            column.emplace_back(idx, lw);
            column_mass += lw;
        }
        if (!have_scale && !column_mass.is_zero()) {
            log_scale = column_mass.log_abs;
            have_scale = true;
        }
        total += column_mass;
        for (auto& [idx, lw] : column) {
            table.support.push_back(idx);
            double prev = table.cumulative.empty() ? 0.0 : table.cumulative.back();
            table.cumulative.push_back(prev + std::exp(lw.log_abs - log_scale) * lw.sign);
        }
        if (double(table.support.size()) > max_support)
            throw NumericalError("enumerate_measure: support cutoff exceeded");
        bool tail_small = !column_mass.is_zero() && !total.is_zero() &&
                          column_mass.log_abs - total.log_abs < std::log(tail_tol);
        if (column_mass.is_zero() && col > 0) tail_small = true;
        if (col >= 2 && tail_small) {
            table.column_bound = col;
            break;
        }
    }
    table.log_scale = log_scale;
    table.total = total;
    return table;
}

/// P(eta_1 <= threshold) under the measure, via partial box sums against the
/// closed-form normalization.
inline double top_row_cdf(const PartitionMeasure& pm, int threshold) {
    validate(pm);
    if (threshold < 0) return 0.0;
    LogReal z_k = normalization(pm);
    LogReal partial = LogReal::zero();
    enumerate_box(BoxShape(pm.k, threshold),
                  [&](const Partition& idx) { partial += detail::measure_log_weight(pm, idx); });
    LogReal ratio = partial / z_k;
    return ratio.to_double();
}

/// Inverse-CDF draw over the enumerated support.
inline Partition sample_partition(const PartitionMeasure& pm, const MeasureTable& table,
                                  RandomStream& rng) {
    validate(pm);
    if (table.support.empty()) throw std::invalid_argument("sample_partition: empty table");
    double u = rng.next_uniform() * table.cumulative.back();
    auto it = std::lower_bound(table.cumulative.begin(), table.cumulative.end(), u);
    std::size_t pos = std::size_t(it - table.cumulative.begin());
    if (pos >= table.support.size()) pos = table.support.size() - 1;
    Partition idx = table.support[pos];
    bool real_family = (pm.family == EnsembleTag::GinOE || pm.family == EnsembleTag::TOE);
    return real_family ? repeat_parts(idx) : idx;
}

/// Convenience draw that enumerates the support on the fly; callers drawing
/// repeatedly should build the table once.
inline Partition sample_partition(const PartitionMeasure& pm, RandomStream& rng) {
    MeasureTable table = enumerate_measure(pm);
    return sample_partition(pm, table, rng);
}

enum class GroupIntegralKind { HCIZ, Orlov, CSEExp, CSEDet };

/// Monte Carlo group integrals against their determinant / Pfaffian closed
/// forms: HCIZ and Orlov over Haar U(k), the exponential and determinantal
/// integrals over CSE(k).
inline CheckResult group_integral_check(GroupIntegralKind kind, const PartitionMeasure& pm,
                                        long long n_samples, std::uint64_t seed, int workers = 0) {
    validate(pm);
    if (pm.k > 3) throw std::invalid_argument("group_integral_check: k <= 3 only");
    const int k = pm.k, d = pm.n - pm.m;
    CheckResult out;
    switch (kind) {
        case GroupIntegralKind::HCIZ: {
            ComplexMatrix zd = ComplexMatrix::diagonal(detail::to_complex_points(pm.z));
            ComplexMatrix wd = ComplexMatrix::diagonal(detail::to_complex_points(pm.w));
            double lp = 0.0;
            for (int l = 0; l < k; ++l) lp -= log_factorial(l);
            out.estimate = mc_mean(n_samples, seed, lp, workers, [&](long long i) {
                Sample u = sample(EnsembleTag::HaarU, {k, 0, 0}, seed, std::uint64_t(i));
                return std::exp((u.matrix * zd * u.matrix.adjoint() * wd).trace());
            });
            break;
        }
        case GroupIntegralKind::Orlov: {
            ComplexMatrix zd = ComplexMatrix::diagonal(detail::to_complex_points(pm.z));
            ComplexMatrix wd = ComplexMatrix::diagonal(detail::to_complex_points(pm.w));
            double lp = 0.0;
            for (int l = 0; l < k; ++l) lp += log_factorial(d + l) - log_factorial(l);
            out.estimate = mc_mean(n_samples, seed, lp, workers, [&](long long i) {
                Sample u = sample(EnsembleTag::HaarU, {k, 0, 0}, seed, std::uint64_t(i));
                ComplexMatrix m =
                    ComplexMatrix::identity(k) - u.matrix * zd * u.matrix.adjoint() * wd;
                return determinant(m).pow(-double(d + k)).to_complex();
            });
            break;
        }
        case GroupIntegralKind::CSEExp: {
            std::vector<complex_t> z = detail::to_complex_points(pm.z);
            ComplexMatrix zd = ComplexMatrix::diagonal(z);
            std::vector<complex_t> dual(2 * std::size_t(k));
            for (int i = 0; i < k; ++i) {
                dual[i] = z[k + i];
                dual[k + i] = z[i];
            }
            ComplexMatrix zdual = ComplexMatrix::diagonal(dual);
            double lp = 0.0;
            for (int j = 0; j < k; ++j) lp -= log_factorial(2 * j);
            out.estimate = mc_mean(n_samples, seed, lp, workers, [&](long long i) {
                Sample u = sample(EnsembleTag::CSE, {0, 0, k}, seed, std::uint64_t(i));
                return std::exp(0.5 * (u.matrix * zd * u.matrix.adjoint() * zdual).trace());
            });
            break;
        }
        case GroupIntegralKind::CSEDet: {
            if ((d + 2 * k - 1) % 2 != 0)
                throw std::invalid_argument(
                    "group_integral_check: CSE determinant power needs odd N-M");
            const int power = (d + 2 * k - 1) / 2;
            std::vector<complex_t> z = detail::to_complex_points(pm.z);
            ComplexMatrix zd = ComplexMatrix::diagonal(z);
            std::vector<complex_t> dual(2 * std::size_t(k));
            for (int i = 0; i < k; ++i) {
                dual[i] = z[k + i];
                dual[k + i] = z[i];
            }
            ComplexMatrix zdual = ComplexMatrix::diagonal(dual);
            double lp = 0.0;
            for (int j = 0; j < k; ++j) lp += log_factorial(d + 2 * j) - log_factorial(2 * j);
            out.estimate = mc_mean(n_samples, seed, lp, workers, [&](long long i) {
                Sample u = sample(EnsembleTag::CSE, {0, 0, k}, seed, std::uint64_t(i));
                ComplexMatrix m = ComplexMatrix::identity(2 * k) -
                                  u.matrix * zd * u.matrix.adjoint() * zdual;
                return determinant(m).pow(-double(power)).to_complex();
            });
            break;
        }
    }
    // target: the closed-form normalization of the corresponding measure
    PartitionMeasure target = pm;
    if (kind == GroupIntegralKind::HCIZ) target.family = EnsembleTag::GinUE;
    if (kind == GroupIntegralKind::Orlov) target.family = EnsembleTag::TUE;
    if (kind == GroupIntegralKind::CSEExp) target.family = EnsembleTag::GinOE;
    if (kind == GroupIntegralKind::CSEDet) target.family = EnsembleTag::TOE;
    out.prediction = LogComplex::from_log_real(normalization(target));
    return out;
}

/// The probabilistic-interpretation identity: correlator = Z_k * C * P(eta_1 <= box).
/// Returns both sides for the caller to compare; threshold is N for Ginibre
/// families and M for truncations.
struct TopRowIdentity {
    LogComplex correlator;
    LogComplex measure_side;
};

inline TopRowIdentity top_row_identity(const PartitionMeasure& pm) {
    validate(pm);
    const int k = pm.k;
    CorrelatorSpec spec;
    spec.ensemble = pm.family;
    spec.n = pm.n;
    spec.m = pm.m;
    spec.k = k;
    spec.z = detail::to_complex_points(pm.z);
    spec.w = detail::to_complex_points(pm.w);

    double lc = 0.0;
    int threshold = 0;
    switch (pm.family) {
        case EnsembleTag::GinUE:
            for (int j = 1; j <= k; ++j) lc += log_factorial(pm.n + j - 1);
            threshold = pm.n;
            break;
        case EnsembleTag::TUE:
            for (int j = 1; j <= k; ++j) lc += log_factorial(pm.m + j - 1) - log_factorial(pm.n + j - 1);
            threshold = pm.m;
            break;
        case EnsembleTag::GinOE:
            for (int j = 1; j <= k; ++j) lc += log_factorial(pm.n + 2 * j - 2);
            threshold = pm.n;
            break;
        case EnsembleTag::TOE:
            for (int j = 1; j <= k; ++j)
                lc += log_factorial(pm.m + 2 * j - 2) - log_factorial(pm.n + 2 * j - 2);
            threshold = pm.m;
            break;
        default:
            throw std::invalid_argument("top_row_identity: unsupported family");
    }
    TopRowIdentity out;
    out.correlator = closed_form(spec);
    LogReal z_k = normalization(pm);
    double cdf = top_row_cdf(pm, threshold);
    out.measure_side = LogComplex::from_log_real(z_k) * LogComplex{lc, {1, 0}} *
                       LogComplex::from_complex(cdf);
    return out;
}

}  // namespace cpcorr

#endif
