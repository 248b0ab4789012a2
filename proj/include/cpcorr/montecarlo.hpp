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

#ifndef CPCORR_MONTECARLO_HPP
#define CPCORR_MONTECARLO_HPP

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cpcorr/logdomain.hpp"

namespace cpcorr {

/// Statistical return type of every Monte Carlo route.  The estimated value
/// is mean * exp(log_scale); the scale is split off so factorial-sized
/// correlators survive in linear fields.
struct MCEstimate {
    complex_t mean = 0.0;
    double stderr_ = 0.0;
    long long n = 0;
    std::uint64_t seed = 0;
    double log_scale = 0.0;
    double ess = 0.0;  // effective sample size for weighted estimates, n otherwise

    LogComplex value() const { return LogComplex::from_complex(mean) * LogComplex{log_scale, {1.0, 0.0}}; }
    double rel_stderr() const { return std::abs(mean) > 0 ? stderr_ / std::abs(mean) : INFINITY; }

    /// |this - reference| in units of this estimate's standard error.
    double sigmas_from(const LogComplex& reference) const {
        LogComplex diff = value() + reference * LogComplex::from_complex(-1.0);
        if (diff.is_zero()) return 0.0;
        double sigma_log = std::log(stderr_) + log_scale;
        return std::exp(diff.log_mag - sigma_log);
    }
};

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CPCORR_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

namespace detail {

constexpr long long kMcBlock = 4096;

/// Runs per-index work in fixed-size blocks.  Blocks may be computed by any
/// number of workers, but each block is summed sequentially and the blocks are
/// combined in index order, so the result is independent of the worker count.
template <typename Acc, typename PerIndex>
Acc blocked_reduce(long long n, int workers, PerIndex per_index) {
    const long long nblocks = (n + kMcBlock - 1) / kMcBlock;
    std::vector<Acc> partial(static_cast<std::size_t>(nblocks));
    workers = std::min<long long>(std::max(workers, 1), std::max<long long>(nblocks, 1));

    auto run_block = [&](long long b) {
        Acc acc{};
        const long long lo = b * kMcBlock, hi = std::min(n, (b + 1) * kMcBlock);
        for (long long i = lo; i < hi; ++i) per_index(i, acc);
        partial[static_cast<std::size_t>(b)] = acc;
    };

    if (workers <= 1) {
        for (long long b = 0; b < nblocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (long long b = w; b < nblocks; b += workers) run_block(b);
            });
        for (auto& t : pool) t.join();
    }
    Acc total{};
    for (const auto& acc : partial) total += acc;
    return total;
}

struct PlainAcc {
    complex_t sum = 0.0;
    double sum_sq = 0.0;
    PlainAcc& operator+=(const PlainAcc& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        return *this;
    }
};

struct WeightedAcc {
    double wsum = 0.0, wsq = 0.0;
    complex_t wfsum = 0.0;
    double wf_sq = 0.0;  // sum of w^2 |f|^2, for the ratio-estimator variance
    complex_t w2fsum = 0.0;
    WeightedAcc& operator+=(const WeightedAcc& o) {
        wsum += o.wsum;
        wsq += o.wsq;
        wfsum += o.wfsum;
        wf_sq += o.wf_sq;
        w2fsum += o.w2fsum;
        return *this;
    }
};

}  // namespace detail

/// Plain Monte Carlo mean of f(index), already scaled by exp(-log_scale).
inline MCEstimate mc_mean(long long n, std::uint64_t seed, double log_scale, int workers,
                          const std::function<complex_t(long long)>& f) {
    if (n < 2) throw std::invalid_argument("mc_mean: n >= 2 required");
    auto acc = detail::blocked_reduce<detail::PlainAcc>(
        n, resolve_workers(workers), [&](long long i, detail::PlainAcc& a) {
            complex_t v = f(i);
            a.sum += v;
            a.sum_sq += std::norm(v);
        });
    MCEstimate est;
    est.n = n;
    est.seed = seed;
    est.log_scale = log_scale;
    est.mean = acc.sum / double(n);
    double var = std::max(0.0, acc.sum_sq / double(n) - std::norm(est.mean));
    est.stderr_ = std::sqrt(var / double(n - 1));
    est.ess = double(n);
    return est;
}

/// Self-normalized importance-sampling estimate of E_target[f] from pairs
/// (w_i, f_i) with unnormalized weights.  Also reports sum(w)/n through
/// `weight_mean`, used to estimate normalization constants.
struct WeightedEstimate {
    MCEstimate estimate;
    double weight_mean = 0.0;     // (1/n) sum w_i, scaled by exp(weight_log_scale)
    double weight_mean_se = 0.0;  // standard error of the above, same scale
    double weight_log_scale = 0.0;
};

inline WeightedEstimate mc_weighted(long long n, std::uint64_t seed, double weight_log_scale,
                                    int workers,
                                    const std::function<void(long long, double&, complex_t&)>& wf) {
    if (n < 2) throw std::invalid_argument("mc_weighted: n >= 2 required");
    auto acc = detail::blocked_reduce<detail::WeightedAcc>(
        n, resolve_workers(workers), [&](long long i, detail::WeightedAcc& a) {
            double w = 0.0;
            complex_t v = 0.0;
            wf(i, w, v);
            a.wsum += w;
            a.wsq += w * w;
            a.wfsum += w * v;
            a.wf_sq += w * w * std::norm(v);
            a.w2fsum += w * w * v;
        });
    WeightedEstimate out;
    out.weight_log_scale = weight_log_scale;
    out.weight_mean = acc.wsum / double(n);
    double wvar = std::max(0.0, acc.wsq / double(n) - out.weight_mean * out.weight_mean);
    out.weight_mean_se = std::sqrt(wvar / double(n - 1));

    MCEstimate& est = out.estimate;
    est.n = n;
    est.seed = seed;
    est.log_scale = 0.0;
    if (acc.wsum <= 0.0) throw std::runtime_error("mc_weighted: non-positive weight sum");
    est.mean = acc.wfsum / acc.wsum;
    // delta-method variance of the ratio estimator
    double num = acc.wf_sq - 2.0 * std::real(std::conj(est.mean) * acc.w2fsum) +
                 std::norm(est.mean) * acc.wsq;
    est.stderr_ = std::sqrt(std::max(0.0, num)) / acc.wsum;
    est.ess = acc.wsum * acc.wsum / std::max(acc.wsq, 1e-300);
    return out;
}

}  // namespace cpcorr

#endif
