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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cpcorr/montecarlo.hpp"
#include "cpcorr/rng.hpp"

namespace cpcorr {
namespace {

TEST(Philox, KnownVectorDiffersAcrossInputs) {
    auto a = philox4x32({1, 2}, {0, 0, 0, 0});
    auto b = philox4x32({1, 2}, {1, 0, 0, 0});
    auto c = philox4x32({1, 3}, {0, 0, 0, 0});
    EXPECT_NE(a, b);
    EXPECT_NE(a, c);
    // reproducible
    EXPECT_EQ(a, philox4x32({1, 2}, {0, 0, 0, 0}));
}

TEST(RandomStream, DeterministicPerAddress) {
    RandomStream s1(42, 7, 13), s2(42, 7, 13);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(s1.next_u32(), s2.next_u32());
    RandomStream s3(42, 7, 14);
    bool differs = false;
    RandomStream s4(42, 7, 13);
    for (int i = 0; i < 10; ++i) differs |= (s3.next_u32() != s4.next_u32());
    EXPECT_TRUE(differs);
}

TEST(RandomStream, UniformRangeAndMoments) {
    RandomStream s(9, 1, 0);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = s.next_uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        sum += u;
        sum_sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 / std::sqrt(12.0 * n));
    EXPECT_NEAR(sum_sq / n, 1.0 / 3.0, 5.0 / std::sqrt(double(n)));
}

TEST(RandomStream, GaussianMoments) {
    RandomStream s(10, 1, 0);
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double g = s.next_gaussian();
        m1 += g;
        m2 += g * g;
        m4 += g * g * g * g;
    }
    EXPECT_NEAR(m1 / n, 0.0, 4.0 / std::sqrt(double(n)));
    EXPECT_NEAR(m2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(McMean, DeterministicAcrossWorkerCounts) {
    auto f = [](long long i) {
        RandomStream s(77, 3, std::uint64_t(i));
        return complex_t{s.next_gaussian(), s.next_gaussian()};
    };
    MCEstimate a = mc_mean(20000, 77, 0.0, 1, f);
    MCEstimate b = mc_mean(20000, 77, 0.0, 3, f);
    MCEstimate c = mc_mean(20000, 77, 0.0, 8, f);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_EQ(a.stderr_, c.stderr_);
    EXPECT_NEAR(std::abs(a.mean), 0.0, 4.0 * a.stderr_ + 0.02);
}

TEST(McWeighted, SelfNormalizationIsExactForConstantF) {
    auto wf = [](long long i, double& w, complex_t& v) {
        RandomStream s(5, 4, std::uint64_t(i));
        w = s.next_uniform();
        v = 1.0;
    };
    WeightedEstimate est = mc_weighted(5000, 5, 0.0, 2, wf);
    EXPECT_DOUBLE_EQ(est.estimate.mean.real(), 1.0);
    EXPECT_NEAR(est.estimate.stderr_, 0.0, 1e-12);
    EXPECT_GT(est.estimate.ess, 2000.0);
}

}  // namespace
}  // namespace cpcorr
