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
#include <map>

#include "cpcorr/measures.hpp"
#include "test_util.hpp"

namespace cpcorr {
namespace {

using test::expect_log_real_eq;
using test::expect_rel_close;

PartitionMeasure ginue_measure(int k, std::vector<double> z, std::vector<double> w) {
    PartitionMeasure pm;
    pm.family = EnsembleTag::GinUE;
    pm.k = k;
    pm.z = std::move(z);
    pm.w = std::move(w);
    return pm;
}

TEST(Normalization, ClosedFormsAtKOne) {
    PartitionMeasure g = ginue_measure(1, {0.8}, {0.9});
    expect_log_real_eq(normalization(g), LogReal{0.8 * 0.9, +1}, 1e-12);

    PartitionMeasure t;
    t.family = EnsembleTag::TUE;
    t.k = 1;
    t.n = 5;
    t.m = 3;
    t.z = {0.6};
    t.w = {0.7};
    double expected = log_factorial(2) - 3.0 * std::log(1.0 - 0.42);
    expect_log_real_eq(normalization(t), LogReal{expected, +1}, 1e-12);
}

TEST(Normalization, DirectSumMatchesClosedForm) {
    // all four families, k <= 2
    std::vector<PartitionMeasure> cases;
    cases.push_back(ginue_measure(1, {0.9}, {0.7}));
    cases.push_back(ginue_measure(2, {0.9, 0.4}, {0.7, 1.2}));
    {
        PartitionMeasure t;
        t.family = EnsembleTag::TUE;
        t.k = 2;
        t.n = 5;
        t.m = 3;
        t.z = {0.6, 0.3};
        t.w = {0.7, 0.45};
        cases.push_back(t);
    }
    {
        PartitionMeasure r;
        r.family = EnsembleTag::GinOE;
        r.k = 1;
        r.z = {0.9, 0.5};
        cases.push_back(r);
        r.k = 2;
        r.z = {0.9, 0.5, 0.35, 0.7};
        cases.push_back(r);
    }
    {
        PartitionMeasure o;
        o.family = EnsembleTag::TOE;
        o.k = 2;
        o.n = 6;
        o.m = 3;
        o.z = {0.55, 0.3, 0.75, 0.15};
        cases.push_back(o);
    }
    for (const auto& pm : cases) {
        MeasureTable table = enumerate_measure(pm);
        expect_log_real_eq(table.total, normalization(pm), 1e-9);
    }
}

TEST(TopRowCdf, PoissonReductionAndLimits) {
    // GinUE k=1: eta_1 ~ Poisson(zw)
    PartitionMeasure g = ginue_measure(1, {0.9}, {0.8});
    double lambda = 0.72;
    double acc = 0.0, term = std::exp(-lambda);
    for (int n = 0; n <= 6; ++n) {
        acc += term;
        EXPECT_NEAR(top_row_cdf(g, n), acc, 1e-12);
        term *= lambda / (n + 1);
    }
    EXPECT_LT(1.0 - top_row_cdf(g, 60), 1e-12);
    // monotonicity
    double prev = 0.0;
    for (int n = 0; n <= 10; ++n) {
        double c = top_row_cdf(g, n);
        EXPECT_GE(c, prev - 1e-14);
        prev = c;
    }
    // threshold 0 keeps only the empty partition's mass
    PartitionMeasure g2 = ginue_measure(2, {0.9, 0.4}, {0.8, 0.3});
    LogReal empty_mass = LogReal{0.0, +1};
    for (int j = 1; j <= 2; ++j) empty_mass *= LogReal{-log_factorial(2 - j), +1};
    expect_log_real_eq(LogReal::from_double(top_row_cdf(g2, 0)),
                       empty_mass / normalization(g2), 1e-10);
}

TEST(TopRowIdentityCheck, MatchesClosedFormAllFamilies) {
    RandomStream rng(73, 6, 0);
    auto rand_in = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_uniform(); };
    for (int k : {1, 2}) {
        PartitionMeasure g = ginue_measure(k, {}, {});
        g.n = 4;
        for (int i = 0; i < k; ++i) {
            g.z.push_back(rand_in(0.3, 1.4));
            g.w.push_back(rand_in(0.3, 1.4));
        }
        TopRowIdentity id = top_row_identity(g);
        expect_rel_close(id.measure_side, id.correlator, 1e-9);

        PartitionMeasure t;
        t.family = EnsembleTag::TUE;
        t.k = k;
        t.n = 5;
        t.m = 3;
        for (int i = 0; i < k; ++i) {
            t.z.push_back(rand_in(0.1, 0.85));
            t.w.push_back(rand_in(0.1, 0.85));
        }
        TopRowIdentity idt = top_row_identity(t);
        expect_rel_close(idt.measure_side, idt.correlator, 1e-9);

        PartitionMeasure r;
        r.family = EnsembleTag::GinOE;
        r.k = k;
        r.n = 4;
        for (int i = 0; i < 2 * k; ++i) r.z.push_back(rand_in(0.3, 1.3));
        TopRowIdentity idr = top_row_identity(r);
        expect_rel_close(idr.measure_side, idr.correlator, 1e-9);

        PartitionMeasure o;
        o.family = EnsembleTag::TOE;
        o.k = k;
        o.n = 6;
        o.m = 4;
        for (int i = 0; i < 2 * k; ++i) o.z.push_back(rand_in(0.1, 0.8));
        TopRowIdentity ido = top_row_identity(o);
        expect_rel_close(ido.measure_side, ido.correlator, 1e-9);
    }
}

TEST(SamplePartition, PoissonChiSquare) {
    PartitionMeasure g = ginue_measure(1, {0.9}, {0.9});
    double lambda = 0.81;
    MeasureTable table = enumerate_measure(g);
    RandomStream rng(79, 7, 0);
    const int n_draws = 10000;
    std::map<int, int> counts;
    for (int i = 0; i < n_draws; ++i) counts[sample_partition(g, table, rng).part(1)]++;
    // bins {0,1,2,3,>=4}; chi-square at the 1% level, df = 4 -> 13.28
    double stat = 0.0;
    double tail_expected = n_draws, tail_observed = n_draws;
    double term = std::exp(-lambda);
    for (int b = 0; b <= 3; ++b) {
        double expected = n_draws * term;
        double observed = counts.count(b) ? counts[b] : 0;
        stat += (observed - expected) * (observed - expected) / expected;
        tail_expected -= expected;
        tail_observed -= observed;
        term *= lambda / (b + 1);
    }
    stat += (tail_observed - tail_expected) * (tail_observed - tail_expected) /
            std::max(tail_expected, 1e-9);
    EXPECT_LT(stat, 13.28);
}

TEST(SamplePartition, RealFamilySupportAndCdfConsistency) {
    PartitionMeasure r;
    r.family = EnsembleTag::GinOE;
    r.k = 2;
    r.z = {0.8, 0.5, 0.3, 0.65};
    MeasureTable table = enumerate_measure(r);
    RandomStream rng(83, 7, 0);
    const int n_draws = 10000;
    int within = 0;
    const int threshold = 2;
    for (int i = 0; i < n_draws; ++i) {
        Partition eta = sample_partition(r, table, rng);
        EXPECT_TRUE(is_even(conjugate(eta)));
        if (eta.part(1) <= threshold) ++within;
    }
    double p = top_row_cdf(r, threshold);
    double se = std::sqrt(p * (1.0 - p) / n_draws);
    EXPECT_NEAR(double(within) / n_draws, p, 4.0 * se);
}

TEST(GroupIntegrals, AllFourKinds) {
    // HCIZ k=1 is deterministic: E e^{zw} = e^{zw}
    PartitionMeasure g1 = ginue_measure(1, {0.7}, {0.5});
    CheckResult h1 = group_integral_check(GroupIntegralKind::HCIZ, g1, 4000, 11);
    EXPECT_LT(h1.estimate.rel_stderr(), 1e-12);
    EXPECT_LT(h1.estimate.value().rel_diff(h1.prediction), 1e-10);

    PartitionMeasure g2 = ginue_measure(2, {0.7, 0.4}, {0.5, 0.9});
    CheckResult h2 = group_integral_check(GroupIntegralKind::HCIZ, g2, 100000, 12);
    EXPECT_LT(h2.sigmas(), 4.0);

    PartitionMeasure t;
    t.family = EnsembleTag::TUE;
    t.k = 2;
    t.n = 5;
    t.m = 3;
    t.z = {0.5, 0.3};
    t.w = {0.45, 0.2};
    CheckResult ov = group_integral_check(GroupIntegralKind::Orlov, t, 100000, 13);
    EXPECT_LT(ov.sigmas(), 4.0);

    PartitionMeasure r;
    r.family = EnsembleTag::GinOE;
    r.k = 2;
    r.z = {0.45, 0.8, 0.25, 0.6};
    CheckResult ce = group_integral_check(GroupIntegralKind::CSEExp, r, 100000, 14);
    EXPECT_LT(ce.sigmas(), 4.0);

    PartitionMeasure o;
    o.family = EnsembleTag::TOE;
    o.k = 2;
    o.n = 4;
    o.m = 3;  // N - M odd so the determinant power is an integer
    o.z = {0.45, 0.7, 0.25, 0.55};
    CheckResult cd = group_integral_check(GroupIntegralKind::CSEDet, o, 100000, 15);
    EXPECT_LT(cd.sigmas(), 4.0);
}

TEST(MeasureValidation, RejectsBadParameters) {
    PartitionMeasure bad = ginue_measure(1, {-0.5}, {0.5});
    EXPECT_THROW(validate(bad), std::invalid_argument);
    PartitionMeasure t;
    t.family = EnsembleTag::TUE;
    t.k = 1;
    t.n = 4;
    t.m = 2;
    t.z = {1.4};  // outside (0,1)
    t.w = {0.5};
    EXPECT_THROW(validate(t), std::invalid_argument);
    PartitionMeasure coincident = ginue_measure(2, {0.5, 0.5}, {0.3, 0.6});
    EXPECT_THROW(normalization(coincident), CoincidentPointsError);
}

}  // namespace
}  // namespace cpcorr
