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

#ifndef CPCORR_CORRELATORS_HPP
#define CPCORR_CORRELATORS_HPP

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "cpcorr/ensembles.hpp"
#include "cpcorr/errors.hpp"
#include "cpcorr/linalg.hpp"
#include "cpcorr/montecarlo.hpp"
#include "cpcorr/special.hpp"
#include "cpcorr/symfunc.hpp"

namespace cpcorr {

inline bool is_complex_family(EnsembleTag t) { return t == EnsembleTag::GinUE || t == EnsembleTag::TUE; }
inline bool is_real_family(EnsembleTag t) { return t == EnsembleTag::GinOE || t == EnsembleTag::TOE; }
inline bool is_quaternion_family(EnsembleTag t) { return t == EnsembleTag::GinSE || t == EnsembleTag::TSE; }
inline bool is_truncated_family(EnsembleTag t) {
    return t == EnsembleTag::TUE || t == EnsembleTag::TOE || t == EnsembleTag::TSE;
}

/// One k-point correlator evaluation request.  Complex ensembles take k pairs
/// (z_j, w_j); real and quaternion ensembles take 2k z-points and no w.
struct CorrelatorSpec {
    EnsembleTag ensemble = EnsembleTag::GinUE;
    int n = 1;
    int m = 0;  // truncations only
    int k = 1;
    std::vector<complex_t> z;
    std::vector<complex_t> w;
    std::optional<ComplexMatrix> omega;
    std::optional<ComplexMatrix> sigma;
};

/// Edge size of the random matrix entering the determinants.
inline int correlator_matrix_size(const CorrelatorSpec& s) {
    switch (s.ensemble) {
        case EnsembleTag::GinUE: return s.n;
        case EnsembleTag::GinOE: return s.n;
        case EnsembleTag::GinSE: return 2 * s.n;
        case EnsembleTag::TUE: return s.m;
        case EnsembleTag::TOE: return s.m;
        case EnsembleTag::TSE: return 2 * s.m;
        default: throw std::invalid_argument("correlator_matrix_size: not a correlator ensemble");
    }
}

inline void validate(const CorrelatorSpec& s) {
    if (s.n < 1) throw std::invalid_argument("spec: N >= 1 required");
    if (s.k < 1) throw std::invalid_argument("spec: k >= 1 required");
    if (is_truncated_family(s.ensemble)) {
        if (s.m < 1 || s.m > s.n) throw std::invalid_argument("spec: truncation needs 1 <= M <= N");
    }
    if (is_real_family(s.ensemble) && s.n % 2 != 0)
        throw std::invalid_argument("spec: real ensembles require even N");
    const std::size_t zpts = is_complex_family(s.ensemble) ? s.k : 2 * s.k;
    if (s.z.size() != zpts) throw std::invalid_argument("spec: wrong number of z points");
    if (is_complex_family(s.ensemble)) {
        if (s.w.size() != std::size_t(s.k)) throw std::invalid_argument("spec: wrong number of w points");
    } else if (!s.w.empty()) {
        throw std::invalid_argument("spec: w points only apply to complex ensembles");
    }
    const int dim = correlator_matrix_size(s);
    for (const auto& src : {s.omega, s.sigma}) {
        if (src && (src->rows() != dim || src->cols() != dim))
            throw std::invalid_argument("spec: source matrix size must match the ensemble matrix");
    }
    if (s.sigma && !is_complex_family(s.ensemble))
        throw std::invalid_argument("spec: sigma applies to complex ensembles only");
}

namespace detail {

inline bool matrix_is_identity(const ComplexMatrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            complex_t want = (i == j) ? complex_t{1.0, 0.0} : complex_t{0.0, 0.0};
            if (std::abs(m(i, j) - want) > 1e-14) return false;
        }
    return true;
}

inline bool identity_sources(const CorrelatorSpec& s) {
    if (s.omega && !matrix_is_identity(*s.omega)) return false;
    if (s.sigma && !matrix_is_identity(*s.sigma)) return false;
    return true;
}

inline void require_separated(const std::vector<complex_t>& pts, const char* where) {
    double scale = 1.0;
    for (auto p : pts) scale = std::max(scale, std::abs(p));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) < 1e-8 * scale)
                throw CoincidentPointsError(std::string(where) +
                                            ": coincident evaluation points; use the confluent evaluator");
}

// sum_{l=0}^{L-1} binomial(d+l, l) x^l  -- the truncation kernel with (N-M)!
// factored out, so entries stay in linear range at any N.
inline complex_t trunc_kernel_scaled(int d, int terms, complex_t x) {
    complex_t sum = 0.0, term = 1.0;
    for (int l = 0; l < terms; ++l) {
        sum += term;
        term *= x * (double(d + l + 1) / double(l + 1));
    }
    return sum;
}

inline LogComplex pfaffian_over_vandermonde(const std::vector<complex_t>& z,
                                            const std::function<complex_t(int, int)>& entry) {
    const int dim = static_cast<int>(z.size());
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            a(i, j) = entry(i, j);
            a(j, i) = -a(i, j);
        }
    return pfaffian(a) / vandermonde(z);
}

// same ratio with log-domain entries, rescaled so the linear Pfaffian stays
// in range at any N
inline LogComplex pfaffian_over_vandermonde_log(const std::vector<complex_t>& z,
                                                const std::function<LogComplex(int, int)>& entry) {
    const int dim = static_cast<int>(z.size());
    std::vector<LogComplex> entries(std::size_t(dim) * dim);
    double scale = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            LogComplex e = entry(i, j);
            entries[std::size_t(i) * dim + j] = e;
            if (!e.is_zero()) scale = std::max(scale, e.log_mag);
        }
    if (!(scale > -std::numeric_limits<double>::infinity())) return LogComplex::zero();
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const LogComplex& e = entries[std::size_t(i) * dim + j];
            a(i, j) = e.is_zero() ? complex_t{0.0, 0.0} : e.phase * std::exp(e.log_mag - scale);
            a(j, i) = -a(i, j);
        }
    return pfaffian(a) * LogComplex{0.5 * dim * scale, {1.0, 0.0}} / vandermonde(z);
}

// determinant of a matrix given in log-domain entries, same rescaling idea
inline LogComplex determinant_log_entries(int dim, const std::function<LogComplex(int, int)>& entry) {
    std::vector<LogComplex> entries(std::size_t(dim) * dim);
    double scale = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            LogComplex e = entry(i, j);
            entries[std::size_t(i) * dim + j] = e;
            if (!e.is_zero()) scale = std::max(scale, e.log_mag);
        }
    if (!(scale > -std::numeric_limits<double>::infinity())) return LogComplex::zero();
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const LogComplex& e = entries[std::size_t(i) * dim + j];
            a(i, j) = e.is_zero() ? complex_t{0.0, 0.0} : e.phase * std::exp(e.log_mag - scale);
        }
    return determinant(a) * LogComplex{double(dim) * scale, {1.0, 0.0}};
}

}  // namespace detail

/// Closed-form route: the k x k determinant (complex ensembles) or 2k x 2k
/// Pfaffian (real/quaternion) divided by Vandermonde factors, with the
/// factorial prefactor carried in the log domain.  Identity sources only.
inline LogComplex closed_form(const CorrelatorSpec& s) {
    validate(s);
    if (!detail::identity_sources(s))
        throw std::invalid_argument("closed_form: closed forms hold for identity sources only");
    detail::require_separated(s.z, "closed_form");
    if (is_complex_family(s.ensemble)) detail::require_separated(s.w, "closed_form");

    const int n = s.n, m = s.m, k = s.k;
    switch (s.ensemble) {
        case EnsembleTag::GinUE: {
            LogComplex det = detail::determinant_log_entries(k, [&](int i, int j) {
                return kernel_incexp_log(n + k, s.z[i], s.w[j]);
            });
            LogComplex pref = LogComplex::one();
            for (int j = 1; j <= k; ++j) pref *= LogComplex{log_factorial(n + j - 1), {1, 0}};
            return pref * det / (vandermonde(s.z) * vandermonde(s.w));
        }
        case EnsembleTag::TUE: {
            const int d = n - m;
            ComplexMatrix ker(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    ker(i, j) = detail::trunc_kernel_scaled(d, m + k, s.z[i] * s.w[j]);
            double lp = double(k) * log_factorial(d);
            for (int j = 1; j <= k; ++j) lp += log_factorial(m + j - 1) - log_factorial(n + j - 1);
            return LogComplex{lp, {1, 0}} * determinant(ker) / (vandermonde(s.z) * vandermonde(s.w));
        }
        case EnsembleTag::GinOE: {
            LogComplex ratio = detail::pfaffian_over_vandermonde_log(s.z, [&](int i, int j) {
                return LogComplex::from_complex(s.z[j] - s.z[i]) *
                       kernel_incexp_log(n + 2 * k - 1, s.z[i], s.z[j]);
            });
            double lp = 0.0;
            for (int j = 1; j <= k; ++j) lp += log_factorial(n + 2 * j - 2);
            return LogComplex{lp, {1, 0}} * ratio;
        }
        case EnsembleTag::TOE: {
            const int d = n - m;
            LogComplex ratio = detail::pfaffian_over_vandermonde(s.z, [&](int i, int j) {
                return (s.z[j] - s.z[i]) *
                       detail::trunc_kernel_scaled(d, m + 2 * k - 1, s.z[i] * s.z[j]);
            });
            double lp = double(k) * log_factorial(d);
            for (int j = 1; j <= k; ++j) lp += log_factorial(m + 2 * j - 2) - log_factorial(n + 2 * j - 2);
            return LogComplex{lp, {1, 0}} * ratio;
        }
        case EnsembleTag::GinSE: {
            LogComplex ratio = detail::pfaffian_over_vandermonde(s.z, [&](int i, int j) {
                return kernel_ginse(n + k, s.z[i], s.z[j]);
            });
            double lp = 0.0;
            for (int j = 1; j <= 2 * k; ++j) lp += std::lgamma(n + 0.5 * j + 0.5);
            return LogComplex{lp, {1, 0}} * ratio;
        }
        case EnsembleTag::TSE: {
            LogComplex ratio = detail::pfaffian_over_vandermonde(s.z, [&](int i, int j) {
                return kernel_tse(n + k, m + k, s.z[i], s.z[j]);
            });
            double lp = 0.0;
            for (int j = 1; j <= 2 * k; ++j)
                lp += std::lgamma(m + 0.5 * j + 0.5) - std::lgamma(n + 0.5 * j + 0.5);
            return LogComplex{lp, {1, 0}} * ratio;
        }
        default:
            throw std::invalid_argument("closed_form: not a correlator ensemble");
    }
}

/// Character-sum route: exact finite sum of Schur polynomials against
/// hypergeometric weights over a partition box, with the even/repeated
/// support filters of the real and quaternion ensembles.
inline LogComplex charsum(const CorrelatorSpec& s) {
    validate(s);
    if (!detail::identity_sources(s))
        throw std::invalid_argument("charsum: identity sources only");
    const int n = s.n, m = s.m, k = s.k;

    BoxShape box = [&]() {
        switch (s.ensemble) {
            case EnsembleTag::GinUE: return BoxShape(k, n);
            case EnsembleTag::TUE: return BoxShape(k, m);
            case EnsembleTag::GinOE: return BoxShape(k, n);   // repeated partitions via k rows
            case EnsembleTag::TOE: return BoxShape(k, m);
            case EnsembleTag::GinSE: return BoxShape(2 * k, n);  // even partitions via doubling
            case EnsembleTag::TSE: return BoxShape(2 * k, m);
            default: throw std::invalid_argument("charsum: not a correlator ensemble");
        }
    }();
    if (box_partition_count(box) > 1e7)
        throw std::invalid_argument("charsum: partition box too large to enumerate");

    LogComplexSum acc;
    double log_pref = 0.0;
    switch (s.ensemble) {
        case EnsembleTag::GinUE: {
            for (int j = 1; j <= k; ++j) log_pref += log_factorial(n + j - 1);
            enumerate_box(box, [&](const Partition& eta) {
                double lw = 0.0;
                for (int j = 1; j <= k; ++j) lw -= log_factorial(eta.part(j) + k - j);
                LogComplex term = LogComplex::from_complex(schur(eta, s.z)) *
                                  LogComplex::from_complex(schur(eta, s.w));
                acc.add(term * LogComplex{lw, {1, 0}});
            });
            break;
        }
        case EnsembleTag::TUE: {
            const int d = n - m;
            for (int j = 1; j <= k; ++j) log_pref += log_factorial(m + j - 1) - log_factorial(n + j - 1);
            enumerate_box(box, [&](const Partition& eta) {
                double lw = 0.0;
                for (int j = 1; j <= k; ++j)
                    lw += log_factorial(eta.part(j) + d + k - j) - log_factorial(eta.part(j) + k - j);
                LogComplex term = LogComplex::from_complex(schur(eta, s.z)) *
                                  LogComplex::from_complex(schur(eta, s.w));
                acc.add(term * LogComplex{lw, {1, 0}});
            });
            break;
        }
        case EnsembleTag::GinOE: {
            for (int j = 1; j <= k; ++j) log_pref += log_factorial(n + 2 * j - 2);
            enumerate_box(box, [&](const Partition& rho) {
                double lw = 0.0;
                for (int j = 1; j <= k; ++j) lw -= log_factorial(rho.part(j) + 2 * (k - j));
                acc.add(LogComplex::from_complex(schur(repeat_parts(rho), s.z)) *
                        LogComplex{lw, {1, 0}});
            });
            break;
        }
        case EnsembleTag::TOE: {
            const int d = n - m;
            for (int j = 1; j <= k; ++j)
                log_pref += log_factorial(m + 2 * j - 2) - log_factorial(n + 2 * j - 2);
            enumerate_box(box, [&](const Partition& rho) {
                double lw = 0.0;
                for (int j = 1; j <= k; ++j)
                    lw += log_factorial(d + rho.part(j) + 2 * (k - j)) -
                          log_factorial(rho.part(j) + 2 * (k - j));
                acc.add(LogComplex::from_complex(schur(repeat_parts(rho), s.z)) *
                        LogComplex{lw, {1, 0}});
            });
            break;
        }
        case EnsembleTag::GinSE: {
            enumerate_box(box, [&](const Partition& nu) {
                double lw = 0.0;
                for (int j = 1; j <= 2 * k; ++j)
                    lw += std::lgamma(n + 0.5 * j + 0.5) -
                          std::lgamma(nu.part(j) + 0.5 * (2 * k - j) + 1.0);
                acc.add(LogComplex::from_complex(schur(double_parts(nu), s.z)) *
                        LogComplex{lw, {1, 0}});
            });
            break;
        }
        case EnsembleTag::TSE: {
            const int d = n - m;
            for (int j = 1; j <= 2 * k; ++j)
                log_pref += std::lgamma(m + 0.5 * j + 0.5) - std::lgamma(n + 0.5 * j + 0.5);
            enumerate_box(box, [&](const Partition& nu) {
                double lw = 0.0;
                for (int j = 1; j <= 2 * k; ++j) {
                    double half_index = nu.part(j) + 0.5 * (2 * k - j) + 1.0;
                    lw += std::lgamma(d + half_index) - std::lgamma(half_index);
                }
                acc.add(LogComplex::from_complex(schur(double_parts(nu), s.z)) *
                        LogComplex{lw, {1, 0}});
            });
            break;
        }
        default:
            throw std::invalid_argument("charsum: not a correlator ensemble");
    }
    return acc.value() * LogComplex{log_pref, {1, 0}};
}

namespace detail {

// log of prod_j det(source * g - z_j) over the requested points (and the
// adjoint factors for complex ensembles)
inline LogComplex correlator_sample_value(const CorrelatorSpec& s, const ComplexMatrix& g) {
    const int dim = g.rows();
    LogComplex val = LogComplex::one();
    ComplexMatrix left = s.omega ? (*s.omega) * g : g;
    if (is_complex_family(s.ensemble)) {
        ComplexMatrix right = s.sigma ? (*s.sigma) * g.adjoint() : g.adjoint();
        for (int j = 0; j < s.k; ++j) {
            ComplexMatrix a = left, b = right;
            for (int i = 0; i < dim; ++i) {
                a(i, i) -= s.z[j];
                b(i, i) -= s.w[j];
            }
            val *= determinant(a) * determinant(b);
        }
    } else {
        for (std::size_t j = 0; j < s.z.size(); ++j) {
            ComplexMatrix a = left;
            for (int i = 0; i < dim; ++i) a(i, i) -= s.z[j];
            val *= determinant(a);
        }
    }
    return val;
}

// real fast path for GinOE with identity source and real points
inline bool ginoe_real_path(const CorrelatorSpec& s) {
    if (s.ensemble != EnsembleTag::GinOE || !identity_sources(s)) return false;
    for (auto z : s.z)
        if (z.imag() != 0.0) return false;
    return true;
}

}  // namespace detail

/// Definition-level Monte Carlo: the sample mean of the characteristic
/// polynomial product.  The only route supporting non-identity sources.
inline MCEstimate mc_correlator(const CorrelatorSpec& s, long long n_samples, std::uint64_t seed,
                                int workers = 0) {
    validate(s);
    EnsembleDims dims{s.n, s.m, s.k};

    if (detail::ginoe_real_path(s)) {
        std::vector<double> zs(s.z.size());
        for (std::size_t j = 0; j < s.z.size(); ++j) zs[j] = s.z[j].real();
        const int dim = s.n;
        auto sample_log = [&](long long i) {
            RandomStream rng(seed, detail::kStreamGinOE, std::uint64_t(i));
            std::vector<double> g(std::size_t(dim) * dim);
            for (auto& v : g) v = rng.next_gaussian();
            LogReal val = LogReal::one();
            std::vector<double> shifted(std::size_t(dim) * dim);
            for (double z : zs) {
                shifted = g;
                for (int r = 0; r < dim; ++r) shifted[std::size_t(r) * dim + r] -= z;
                val *= determinant_real_inplace(shifted, dim);
            }
            return LogComplex::from_log_real(val);
        };
        const double scale = sample_log(0).log_mag;
        return mc_mean(n_samples, seed, scale, workers, [&, scale](long long i) {
            LogComplex v = sample_log(i);
            return (v * LogComplex{-scale, {1, 0}}).to_complex();
        });
    }

    auto sample_log = [&](long long i) {
        Sample smp = sample(s.ensemble, dims, seed, std::uint64_t(i));
        return detail::correlator_sample_value(s, smp.matrix);
    };
    const double scale = sample_log(0).log_mag;
    return mc_mean(n_samples, seed, scale, workers, [&, scale](long long i) {
        LogComplex v = sample_log(i);
        return (v * LogComplex{-scale, {1, 0}}).to_complex();
    });
}

namespace detail {

// dual-side integrand per ensemble; identity sources reduce Kronecker
// determinants to small-matrix powers and Pfaffian powers
inline LogComplex dual_integrand(const CorrelatorSpec& s, const ComplexMatrix& x) {
    const int k = s.k;
    switch (s.ensemble) {
        case EnsembleTag::GinUE:
        case EnsembleTag::TUE: {
            const int power = (s.ensemble == EnsembleTag::GinUE) ? s.n : s.m;
            ComplexMatrix zinv(k, k), winv(k, k);
            for (int j = 0; j < k; ++j) {
                zinv(j, j) = 1.0 / s.z[j];
                winv(j, j) = 1.0 / s.w[j];
            }
            ComplexMatrix core = zinv * x * winv * x.adjoint();
            LogComplex zw = LogComplex::one();
            for (int j = 0; j < k; ++j) zw *= LogComplex::from_complex(s.z[j] * s.w[j]);
            if (identity_sources(s))
                return zw.pow(power) *
                       determinant(ComplexMatrix::identity(k) + core).pow(double(power));
            ComplexMatrix src = ComplexMatrix::identity(correlator_matrix_size(s));
            if (s.omega) src = *s.omega;
            if (s.sigma) src = src * (*s.sigma);
            ComplexMatrix big = kron(src, core);
            big = big + ComplexMatrix::identity(big.rows());
            return zw.pow(power) * determinant(big);
        }
        case EnsembleTag::GinOE:
        case EnsembleTag::TOE: {
            const int power = (s.ensemble == EnsembleTag::GinOE) ? s.n : s.m;
            ComplexMatrix zd = ComplexMatrix::diagonal(s.z);
            ComplexMatrix blk = block2x2(x, zd, complex_t{-1.0, 0.0} * zd, x.adjoint());
            return pfaffian(blk).pow(double(power));
        }
        case EnsembleTag::GinSE:
        case EnsembleTag::TSE: {
            const int power = (s.ensemble == EnsembleTag::GinSE) ? s.n : s.m;
            ComplexMatrix zd = ComplexMatrix::diagonal(s.z);
            ComplexMatrix blk = block2x2(x, zd, complex_t{-1.0, 0.0} * zd, x.adjoint());
            return determinant(blk).pow(double(power));
        }
        default:
            throw std::invalid_argument("duality_rhs: not a correlator ensemble");
    }
}

}  // namespace detail

/// Dual-integral route: the k x k (or 2k x 2k structured) matrix average that
/// trades matrix size N for the point count k.  Gaussian duals are sampled
/// directly; truncation duals are importance-weighted.
inline MCEstimate duality_rhs(const CorrelatorSpec& s, long long n_samples, std::uint64_t seed,
                              int workers = 0) {
    validate(s);
    for (auto z : s.z)
        if (z == complex_t{0.0, 0.0})
            throw std::invalid_argument("duality_rhs: evaluation points must be nonzero");
    for (auto w : s.w)
        if (w == complex_t{0.0, 0.0})
            throw std::invalid_argument("duality_rhs: evaluation points must be nonzero");
    if (!detail::identity_sources(s) && !is_complex_family(s.ensemble))
        throw std::invalid_argument("duality_rhs: non-identity sources supported for GinUE/TUE only");

    EnsembleDims dims{s.n, s.m, s.k};
    switch (s.ensemble) {
        case EnsembleTag::GinUE:
        case EnsembleTag::GinOE:
        case EnsembleTag::GinSE: {
            EnsembleTag dual = s.ensemble == EnsembleTag::GinUE   ? EnsembleTag::DualGaussComplex
                               : s.ensemble == EnsembleTag::GinOE ? EnsembleTag::DualGaussAntisym
                                                                  : EnsembleTag::DualGaussSym;
            auto value_log = [&](long long i) {
                Sample smp = sample(dual, dims, seed, std::uint64_t(i));
                return detail::dual_integrand(s, smp.matrix);
            };
            const double scale = value_log(0).log_mag;
            return mc_mean(n_samples, seed, scale, workers, [&, scale](long long i) {
                return (value_log(i) * LogComplex{-scale, {1, 0}}).to_complex();
            });
        }
        case EnsembleTag::TUE:
        case EnsembleTag::TOE:
        case EnsembleTag::TSE: {
            EnsembleTag dual = s.ensemble == EnsembleTag::TUE   ? EnsembleTag::DualHeavyTUE
                               : s.ensemble == EnsembleTag::TOE ? EnsembleTag::DualHeavyTOE
                                                                : EnsembleTag::DualHeavyTSE;
            // reference magnitude from the zero-matrix integrand keeps the
            // weighted values O(1)
            ComplexMatrix zero(2 * s.k, 2 * s.k);
            if (s.ensemble == EnsembleTag::TUE) zero = ComplexMatrix(s.k, s.k);
            const double scale = detail::dual_integrand(s, zero).log_mag;
            WeightedEstimate west = dual_heavy_expectation(
                dual, dims,
                [&](const ComplexMatrix& x) {
                    return (detail::dual_integrand(s, x) * LogComplex{-scale, {1, 0}}).to_complex();
                },
                n_samples, seed, workers);
            MCEstimate est = west.estimate;
            est.log_scale = scale;
            return est;
        }
        default:
            throw std::invalid_argument("duality_rhs: not a correlator ensemble");
    }
}

/// MC estimate together with the closed-form prediction it must match.
struct CheckResult {
    MCEstimate estimate;
    LogComplex prediction;
    double sigmas() const { return estimate.sigmas_from(prediction); }
};

/// Schur-average orthogonality: complex families average s_mu(G) s_lambda(G^dag)
/// against delta_{mu lambda} times an explicit coefficient; GinOE averages
/// s_lambda(G) against the even-partition selection rule.
inline CheckResult orthogonality_check(EnsembleTag tag, const Partition& mu, const Partition& lambda,
                                       int n, int m, long long n_samples, std::uint64_t seed,
                                       int workers = 0) {
    CheckResult out;
    EnsembleDims dims{n, m, 0};
    switch (tag) {
        case EnsembleTag::GinUE:
        case EnsembleTag::TUE: {
            const int size = (tag == EnsembleTag::GinUE) ? n : m;
            if (mu.length() > size || lambda.length() > size)
                throw std::invalid_argument("orthogonality_check: partition longer than matrix size");
            out.estimate = mc_mean(n_samples, seed, 0.0, workers, [&](long long i) {
                Sample smp = sample(tag, dims, seed, std::uint64_t(i));
                return schur_of_matrix(smp.matrix, mu) *
                       schur_of_matrix(smp.matrix.adjoint(), lambda);
            });
            if (mu == lambda) {
                LogReal pred = pochhammer(double(n), Rational(1), lambda);
                if (tag == EnsembleTag::TUE)
                    pred = pochhammer(double(m), Rational(1), lambda) / pred;
                out.prediction = LogComplex::from_log_real(pred);
            } else {
                out.prediction = LogComplex::zero();
            }
            return out;
        }
        case EnsembleTag::GinOE: {
            out.estimate = mc_mean(n_samples, seed, 0.0, workers, [&](long long i) {
                Sample smp = sample(tag, dims, seed, std::uint64_t(i));
                return schur_of_matrix(smp.matrix, lambda);
            });
            if (is_even(lambda)) {
                std::vector<int> halves(lambda.parts());
                for (int& p : halves) p /= 2;
                Partition eta(halves);
                LogReal pred = pochhammer(0.5 * n, Rational(2), eta);
                pred *= LogReal{eta.weight() * std::log(2.0), +1};
                out.prediction = LogComplex::from_log_real(pred);
            } else {
                out.prediction = LogComplex::zero();
            }
            return out;
        }
        default:
            throw std::invalid_argument("orthogonality_check: GinUE, TUE or GinOE only");
    }
}

enum class SplitCase { GinUEGauss, TUEHeavy };

/// The splitting relations behind the dual integrals: Gaussian case
/// E_X s_eta(A X^dag B X) = s_eta(A) s_eta(B) d'_eta, truncation case with the
/// extra [-N]_eta denominator.
inline CheckResult splitting_check(SplitCase which, const Partition& eta, const ComplexMatrix& a,
                                   const ComplexMatrix& b, int n_param, long long n_samples,
                                   std::uint64_t seed, int workers = 0) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("splitting_check: A and B must be square of equal size");
    const int k = a.rows();
    EnsembleDims dims{n_param, 0, k};
    CheckResult out;
    LogComplex prediction = LogComplex::from_complex(schur_of_matrix(a, eta)) *
                            LogComplex::from_complex(schur_of_matrix(b, eta)) *
                            LogComplex::from_log_real(LogReal::from_double(double(hook_product(eta))));
    if (which == SplitCase::GinUEGauss) {
        out.estimate = mc_mean(n_samples, seed, 0.0, workers, [&](long long i) {
            Sample smp = sample(EnsembleTag::DualGaussComplex, dims, seed, std::uint64_t(i));
            return schur_of_matrix(a * smp.matrix.adjoint() * b * smp.matrix, eta);
        });
        out.prediction = prediction;
        return out;
    }
    WeightedEstimate west = dual_heavy_expectation(
        EnsembleTag::DualHeavyTUE, dims,
        [&](const ComplexMatrix& x) { return schur_of_matrix(a * x * b * x.adjoint(), eta); },
        n_samples, seed, workers);
    out.estimate = west.estimate;
    LogReal denom = pochhammer(-double(n_param), Rational(1), eta);
    if (eta.weight() % 2 == 1) denom *= LogReal::from_double(-1.0);
    out.prediction = prediction / LogComplex::from_log_real(denom);
    return out;
}

/// Evaluation request with coincident points and multiplicities.
struct ConfluentSpec {
    EnsembleTag ensemble = EnsembleTag::GinUE;
    int n = 1;
    int m = 0;
    int k = 1;
    std::vector<RepeatedPoint> z;
    std::vector<RepeatedPoint> w;
};

struct ConfluentResult {
    LogComplex value;
    double error_estimate = 0.0;
};

/// Closed-form value at merged points by an epsilon stencil: each repeated
/// point is split into roots-of-unity offsets, the closed form is evaluated at
/// eps, eps/2, eps/4 and Richardson-extrapolated.
inline ConfluentResult evaluate_confluent(const ConfluentSpec& cs) {
    double scale = 1.0;
    for (const auto& g : cs.z) scale = std::max(scale, std::abs(g.value));
    for (const auto& g : cs.w) scale = std::max(scale, std::abs(g.value));

    auto expand = [&](const std::vector<RepeatedPoint>& groups, double eps) {
        std::vector<complex_t> pts;
        for (const auto& g : groups) {
            if (g.multiplicity == 1) {
                pts.push_back(g.value);
                continue;
            }
            for (int r = 0; r < g.multiplicity; ++r) {
                double ang = 6.283185307179586 * r / g.multiplicity + 0.35;
                pts.push_back(g.value + eps * scale * complex_t{std::cos(ang), std::sin(ang)});
            }
        }
        return pts;
    };
    auto eval = [&](double eps) {
        CorrelatorSpec s;
        s.ensemble = cs.ensemble;
        s.n = cs.n;
        s.m = cs.m;
        s.k = cs.k;
        s.z = expand(cs.z, eps);
        if (is_complex_family(cs.ensemble)) s.w = expand(cs.w, eps);
        return closed_form(s);
    };

    // rotating all offsets by a primitive q-th root of unity permutes the
    // points, q = gcd of the multiplicities, so the error carries only powers
    // eps^q, eps^{2q}, ...
    int q = 0;
    for (const auto& g : cs.z)
        if (g.multiplicity > 1) q = q == 0 ? g.multiplicity : std::gcd(q, g.multiplicity);
    for (const auto& g : cs.w)
        if (g.multiplicity > 1) q = q == 0 ? g.multiplicity : std::gcd(q, g.multiplicity);
    if (q == 0) return {eval(0.0), 0.0};

    // deeper confluences cancel more digits inside the Pfaffian, so the
    // stencil grows with q to stay above the double-precision noise floor
    const double eps0 = (q <= 2) ? 1e-2 : 1e-2 * (0.5 * q);
    LogComplex f0 = eval(eps0), f1 = eval(0.5 * eps0), f2 = eval(0.25 * eps0);
    if (f2.is_zero()) return {f2, 0.0};
    const double sq = std::pow(2.0, q), s2q = std::pow(2.0, 2 * q);
    complex_t a0 = (f0 / f2).to_complex();
    complex_t a1 = (f1 / f2).to_complex();
    complex_t a2 = 1.0;
    complex_t b1 = (sq * a1 - a0) / (sq - 1.0);
    complex_t b2 = (sq * a2 - a1) / (sq - 1.0);
    complex_t c2 = (s2q * b2 - b1) / (s2q - 1.0);
    double err = std::abs(c2 - b2) / std::max(std::abs(c2), 1e-300);
    if (err > 1e-5)
        throw NumericalError("evaluate_confluent: extrapolation error " + std::to_string(err) +
                             " exceeds 1e-5");
    return {LogComplex::from_complex(c2) * f2, err};
}

/// Exact GinOE correlator at points with multiplicities, by the character sum
/// with confluent Schur evaluation.  No Vandermonde division, so merged-point
/// moments are available at full precision for any N.
inline LogComplex ginoe_merged_correlator(int n, const std::vector<RepeatedPoint>& pts) {
    if (n % 2 != 0) throw std::invalid_argument("ginoe_merged_correlator: even N required");
    int total = 0;
    for (const auto& g : pts) total += g.multiplicity;
    if (total % 2 != 0) throw std::invalid_argument("ginoe_merged_correlator: need 2k points");
    const int k = total / 2;
    if (box_partition_count(BoxShape(k, n)) > 1e7)
        throw std::invalid_argument("ginoe_merged_correlator: box too large");
    LogComplexSum acc;
    enumerate_box(BoxShape(k, n), [&](const Partition& rho) {
        double lw = 0.0;
        for (int j = 1; j <= k; ++j) lw -= log_factorial(rho.part(j) + 2 * (k - j));
        acc.add(schur_confluent(repeat_parts(rho), pts) * LogComplex{lw, {1, 0}});
    });
    double lp = 0.0;
    for (int j = 1; j <= k; ++j) lp += log_factorial(n + 2 * j - 2);
    return acc.value() * LogComplex{lp, {1, 0}};
}

}  // namespace cpcorr

#endif
