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

#include "cpcorr/correlators.hpp"
#include "test_util.hpp"

namespace cpcorr {
namespace {

using test::expect_rel_close;
using test::random_points;

CorrelatorSpec make_spec(EnsembleTag tag, int n, int m, int k, RandomStream& rng) {
    CorrelatorSpec s;
    s.ensemble = tag;
    s.n = n;
    s.m = m;
    s.k = k;
    int zcount = is_complex_family(tag) ? k : 2 * k;
    s.z = random_points(zcount, rng);
    if (is_complex_family(tag)) s.w = random_points(k, rng);
    return s;
}

TEST(ClosedForm, HandValues) {
    // GinUE N=1, k=1: R = 1 + z w
    {
        CorrelatorSpec s{EnsembleTag::GinUE, 1, 0, 1, {{0.6, 0.3}}, {{-0.4, 0.8}}};
        complex_t zw = s.z[0] * s.w[0];
        expect_rel_close(closed_form(s), LogComplex::from_complex(1.0 + zw), 1e-12);
    }
    // GinUE N=2, k=1: R = 2 + 2 z w + (z w)^2
    {
        CorrelatorSpec s{EnsembleTag::GinUE, 2, 0, 1, {{0.6, 0.3}}, {{-0.4, 0.8}}};
        complex_t zw = s.z[0] * s.w[0];
        expect_rel_close(closed_form(s), LogComplex::from_complex(2.0 + 2.0 * zw + zw * zw), 1e-12);
    }
    // GinOE N=2, k=1 (two points): 2 + 2 z1 z2 + (z1 z2)^2
    {
        CorrelatorSpec s{EnsembleTag::GinOE, 2, 0, 1, {{0.5, 0.0}, {-0.3, 0.4}}, {}};
        complex_t p = s.z[0] * s.z[1];
        expect_rel_close(closed_form(s), LogComplex::from_complex(2.0 + 2.0 * p + p * p), 1e-12);
    }
    // TOE N=2, M=1, k=1: 1/2 + z1 z2
    {
        CorrelatorSpec s{EnsembleTag::TOE, 2, 1, 1, {{0.5, 0.1}, {-0.3, 0.4}}, {}};
        complex_t p = s.z[0] * s.z[1];
        expect_rel_close(closed_form(s), LogComplex::from_complex(0.5 + p), 1e-12);
    }
    // TUE N=2, M=1, k=1: 1/2 + z w
    {
        CorrelatorSpec s{EnsembleTag::TUE, 2, 1, 1, {{0.5, 0.1}}, {{-0.3, 0.4}}};
        complex_t p = s.z[0] * s.w[0];
        expect_rel_close(closed_form(s), LogComplex::from_complex(0.5 + p), 1e-12);
    }
    // GinSE N=1, k=1: 3/2 + (z1^2 + z1 z2 + z2^2) + (z1 z2)^2, from the
    // quaternionic Wick computation
    {
        CorrelatorSpec s{EnsembleTag::GinSE, 1, 0, 1, {{0.5, 0.1}, {-0.3, 0.4}}, {}};
        complex_t z1 = s.z[0], z2 = s.z[1];
        complex_t expected = 1.5 + (z1 * z1 + z1 * z2 + z2 * z2) + z1 * z1 * z2 * z2;
        expect_rel_close(closed_form(s), LogComplex::from_complex(expected), 1e-12);
    }
}

TEST(ClosedForm, ErrorsOnCoincidentPointsAndSources) {
    CorrelatorSpec s{EnsembleTag::GinUE, 2, 0, 2, {{0.5, 0.1}, {0.5, 0.1}}, {{0.3, 0.0}, {-0.2, 0.1}}};
    EXPECT_THROW(closed_form(s), CoincidentPointsError);
    CorrelatorSpec t{EnsembleTag::GinUE, 2, 0, 1, {{0.5, 0.1}}, {{0.3, 0.0}}};
    t.omega = 2.0 * ComplexMatrix::identity(2);
    EXPECT_THROW(closed_form(t), std::invalid_argument);
    t.omega = ComplexMatrix::identity(2);
    EXPECT_NO_THROW(closed_form(t));
}

TEST(ClosedForm, SymmetricUnderPointPermutation) {
    RandomStream rng(51, 5, 0);
    CorrelatorSpec s = make_spec(EnsembleTag::GinOE, 4, 0, 2, rng);
    LogComplex base = closed_form(s);
    std::swap(s.z[0], s.z[3]);
    std::swap(s.z[1], s.z[2]);
    expect_rel_close(closed_form(s), base, 1e-10);

    CorrelatorSpec c = make_spec(EnsembleTag::GinUE, 3, 0, 2, rng);
    LogComplex cbase = closed_form(c);
    std::swap(c.z[0], c.z[1]);
    std::swap(c.w[0], c.w[1]);
    expect_rel_close(closed_form(c), cbase, 1e-10);
}

TEST(Charsum, GinUEHandSum) {
    // N=2, k=1: 2! (1 + zw + (zw)^2/2)
    CorrelatorSpec s{EnsembleTag::GinUE, 2, 0, 1, {{0.7, -0.2}}, {{0.4, 0.5}}};
    complex_t zw = s.z[0] * s.w[0];
    expect_rel_close(charsum(s), LogComplex::from_complex(2.0 + 2.0 * zw + zw * zw), 1e-12);
}

TEST(Charsum, MatchesClosedFormAllEnsembles) {
    RandomStream rng(53, 5, 0);
    for (EnsembleTag tag : {EnsembleTag::GinUE, EnsembleTag::GinOE, EnsembleTag::GinSE,
                            EnsembleTag::TUE, EnsembleTag::TOE, EnsembleTag::TSE}) {
        for (int n : {2, 4}) {
            for (int k : {1, 2}) {
                int m = is_truncated_family(tag) ? std::max(1, n - 1) : 0;
                CorrelatorSpec s = make_spec(tag, n, m, k, rng);
                expect_rel_close(charsum(s), closed_form(s), 1e-9);
            }
        }
    }
}

TEST(Charsum, RejectsInfeasibleBox) {
    CorrelatorSpec s{EnsembleTag::GinSE, 3000, 0, 2, {}, {}};
    s.z = {{0.5, 0.0}, {-0.4, 0.1}, {0.3, 0.2}, {0.1, -0.6}};
    EXPECT_THROW(charsum(s), std::invalid_argument);
}

TEST(Validation, RealEnsemblesNeedEvenSize) {
    CorrelatorSpec s{EnsembleTag::GinOE, 3, 0, 1, {{0.5, 0.0}, {-0.4, 0.1}}, {}};
    EXPECT_THROW(validate(s), std::invalid_argument);
    CorrelatorSpec t{EnsembleTag::TOE, 5, 2, 1, {{0.5, 0.0}, {-0.4, 0.1}}, {}};
    EXPECT_THROW(validate(t), std::invalid_argument);
    CorrelatorSpec ok{EnsembleTag::TOE, 4, 2, 1, {{0.5, 0.0}, {-0.4, 0.1}}, {}};
    EXPECT_NO_THROW(validate(ok));
    // source dimension mismatch
    CorrelatorSpec bad{EnsembleTag::GinUE, 3, 0, 1, {{0.5, 0.0}}, {{0.2, 0.0}}};
    bad.omega = ComplexMatrix::identity(2);
    EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(Charsum, TruncationAtFullSizeIsGroupAverage) {
    // N = M: TUE reduces to the CUE average (checked against Haar MC below in
    // McCorrelator); here check the closed form agrees with charsum
    RandomStream rng(59, 5, 0);
    CorrelatorSpec s = make_spec(EnsembleTag::TUE, 3, 3, 2, rng);
    expect_rel_close(charsum(s), closed_form(s), 1e-9);
}

TEST(McCorrelator, GinUEDeterminantMoment) {
    // N=4, k=1, z=w=0: E|det G|^2 = 4! = 24
    CorrelatorSpec s{EnsembleTag::GinUE, 4, 0, 1, {{0.0, 0.0}}, {{0.0, 0.0}}};
    MCEstimate est = mc_correlator(s, 100000, 2024);
    EXPECT_LT(est.sigmas_from(LogComplex::from_complex(24.0)), 4.0);
}

TEST(McCorrelator, GinOEMatchesClosedForm) {
    CorrelatorSpec s{EnsembleTag::GinOE, 2, 0, 1, {{0.3, 0.0}, {-0.2, 0.0}}, {}};
    MCEstimate est = mc_correlator(s, 100000, 11);
    EXPECT_LT(est.sigmas_from(closed_form(s)), 4.0);
}

TEST(McCorrelator, GinSECalibration) {
    // the N=1, k=1 correlator pins the quaternion variance convention
    CorrelatorSpec s{EnsembleTag::GinSE, 1, 0, 1, {{0.5, 0.2}, {-0.4, 0.1}}, {}};
    MCEstimate est = mc_correlator(s, 100000, 12);
    EXPECT_LT(est.sigmas_from(charsum(s)), 4.0);
}

TEST(McCorrelator, KTwoRealAndQuaternionFamilies) {
    // four-point correlators: the even/repeated-partition combinatorics at
    // k = 2 checked against the definition
    RandomStream rng(99, 5, 0);
    for (EnsembleTag tag : {EnsembleTag::GinOE, EnsembleTag::GinSE, EnsembleTag::TSE}) {
        const int n = 2;
        const int m = (tag == EnsembleTag::TSE) ? 1 : 0;
        CorrelatorSpec s = make_spec(tag, n, m, 2, rng);
        MCEstimate est = mc_correlator(s, 150000, 314);
        EXPECT_LT(est.sigmas_from(closed_form(s)), 5.0) << to_string(tag);
    }
}

TEST(McCorrelator, TUEAtFullSizeIsHaarAverage) {
    CorrelatorSpec s{EnsembleTag::TUE, 3, 3, 1, {{0.6, 0.1}}, {{0.2, -0.5}}};
    MCEstimate est = mc_correlator(s, 60000, 13);
    EXPECT_LT(est.sigmas_from(closed_form(s)), 4.0);
}

TEST(McCorrelator, DeterministicUnderWorkerCount) {
    CorrelatorSpec s{EnsembleTag::GinUE, 3, 0, 1, {{0.4, 0.2}}, {{0.1, -0.3}}};
    MCEstimate a = mc_correlator(s, 20000, 99, 1);
    MCEstimate b = mc_correlator(s, 20000, 99, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_EQ(a.log_scale, b.log_scale);
}

TEST(DualityRhs, GinUEScalarExample) {
    // N=1, k=1, z=w=1: RHS = E[1 + |X|^2] = 2
    CorrelatorSpec s{EnsembleTag::GinUE, 1, 0, 1, {{1.0, 0.0}}, {{1.0, 0.0}}};
    MCEstimate est = duality_rhs(s, 100000, 5);
    EXPECT_LT(est.sigmas_from(LogComplex::from_complex(2.0)), 4.0);
    expect_rel_close(closed_form(s), LogComplex::from_complex(2.0), 1e-12);
}

TEST(DualityRhs, MatchesClosedFormEachEnsemble) {
    RandomStream rng(61, 5, 0);
    struct Case {
        EnsembleTag tag;
        int n, m, k;
    };
    for (const Case& c : {Case{EnsembleTag::GinUE, 3, 0, 1}, Case{EnsembleTag::GinOE, 2, 0, 1},
                          Case{EnsembleTag::GinSE, 2, 0, 1}, Case{EnsembleTag::TUE, 4, 2, 1},
                          Case{EnsembleTag::TOE, 4, 2, 1}, Case{EnsembleTag::TSE, 2, 1, 1}}) {
        CorrelatorSpec s = make_spec(c.tag, c.n, c.m, c.k, rng);
        MCEstimate est = duality_rhs(s, 100000, 77);
        EXPECT_LT(est.sigmas_from(closed_form(s)), 5.0) << to_string(c.tag);
    }
}

TEST(DualityRhs, NonIdentityOmegaAgainstMc) {
    // GinUE N=3, k=1, Omega = diag(1,1,0.5): dual RHS vs definition MC
    CorrelatorSpec s{EnsembleTag::GinUE, 3, 0, 1, {{0.8, 0.1}}, {{0.7, -0.2}}};
    ComplexMatrix omega = ComplexMatrix::identity(3);
    omega(2, 2) = 0.5;
    s.omega = omega;
    MCEstimate dual = duality_rhs(s, 100000, 31);
    MCEstimate direct = mc_correlator(s, 100000, 37);
    double combined = std::hypot(dual.stderr_ * std::exp(dual.log_scale),
                                 direct.stderr_ * std::exp(direct.log_scale));
    double diff = std::abs((dual.value() + direct.value() * LogComplex::from_complex(-1.0))
                               .to_complex());
    EXPECT_LT(diff, 5.0 * combined);
}

TEST(DualityRhs, RejectsZeroPoints) {
    CorrelatorSpec s{EnsembleTag::GinUE, 2, 0, 1, {{0.0, 0.0}}, {{1.0, 0.0}}};
    EXPECT_THROW(duality_rhs(s, 1000, 1), std::invalid_argument);
}

TEST(Orthogonality, GinUEExamples) {
    // mu = lambda = (1), N = 3: E[Tr G Tr G^dag] = 3
    CheckResult r = orthogonality_check(EnsembleTag::GinUE, Partition{1}, Partition{1}, 3, 0,
                                        100000, 21);
    expect_rel_close(r.prediction, LogComplex::from_complex(3.0), 1e-12);
    EXPECT_LT(r.sigmas(), 4.0);
    // off-diagonal vanishes
    CheckResult z = orthogonality_check(EnsembleTag::GinUE, Partition{1}, Partition{2}, 3, 0,
                                        100000, 22);
    EXPECT_TRUE(z.prediction.is_zero());
    EXPECT_LT(std::abs(z.estimate.mean), 4.0 * z.estimate.stderr_);
}

TEST(Orthogonality, GinOESchurAverage) {
    // lambda = (2), N = 3 (odd N is fine here: no closed form involved):
    // E[s_(2)(G)] = 2 [3/2]^{(2)}_{(1)} = 3
    CheckResult r = orthogonality_check(EnsembleTag::GinOE, Partition{}, Partition{2}, 3, 0,
                                        200000, 23);
    expect_rel_close(r.prediction, LogComplex::from_complex(3.0), 1e-12);
    EXPECT_LT(r.sigmas(), 4.0);
    // odd partitions average to zero
    CheckResult z = orthogonality_check(EnsembleTag::GinOE, Partition{}, Partition{2, 1}, 3, 0,
                                        200000, 24);
    EXPECT_TRUE(z.prediction.is_zero());
    EXPECT_LT(std::abs(z.estimate.mean), 4.0 * z.estimate.stderr_);
}

TEST(Orthogonality, TUEExample) {
    CheckResult r = orthogonality_check(EnsembleTag::TUE, Partition{1}, Partition{1}, 4, 2,
                                        100000, 25);
    // prediction [M]_(1) / [N]_(1) = 2/4
    expect_rel_close(r.prediction, LogComplex::from_complex(0.5), 1e-12);
    EXPECT_LT(r.sigmas(), 4.0);
}

TEST(Splitting, GaussianAndHeavyCases) {
    RandomStream rng(67, 5, 0);
    ComplexMatrix a = test::random_complex_matrix(2, 2, rng);
    ComplexMatrix b = test::random_complex_matrix(2, 2, rng);
    // eta = (1): E Tr(A X^dag B X) = Tr A Tr B
    CheckResult t1 = splitting_check(SplitCase::GinUEGauss, Partition{1}, a, b, 0, 100000, 41);
    expect_rel_close(t1.prediction,
                     LogComplex::from_complex(a.trace() * b.trace()), 1e-12);
    EXPECT_LT(t1.sigmas(), 5.0);
    // eta = (2)
    CheckResult t2 = splitting_check(SplitCase::GinUEGauss, Partition{2}, a, b, 0, 100000, 42);
    EXPECT_LT(t2.sigmas(), 5.0);
    // TUE heavy splitting at N = 5
    CheckResult t3 = splitting_check(SplitCase::TUEHeavy, Partition{2}, a, b, 5, 200000, 43);
    EXPECT_LT(t3.sigmas(), 5.0);
}

TEST(Confluent, SimplePointsEqualClosedForm) {
    CorrelatorSpec s{EnsembleTag::GinUE, 3, 0, 2, {{0.5, 0.1}, {-0.4, 0.3}}, {{0.2, -0.6}, {0.8, 0.0}}};
    ConfluentSpec cs{EnsembleTag::GinUE, 3, 0, 2,
                     {{s.z[0], 1}, {s.z[1], 1}},
                     {{s.w[0], 1}, {s.w[1], 1}}};
    ConfluentResult r = evaluate_confluent(cs);
    expect_rel_close(r.value, closed_form(s), 1e-14);
}

TEST(Confluent, GinOEMergedSecondMoment) {
    // both points at 0: E det(G)^2 = 2 for N = 2
    ConfluentSpec cs{EnsembleTag::GinOE, 2, 0, 1, {{complex_t{0.0, 0.0}, 2}}, {}};
    ConfluentResult r = evaluate_confluent(cs);
    expect_rel_close(r.value, LogComplex::from_complex(2.0), 1e-6);
    // and the exact merged character sum agrees
    LogComplex exact = ginoe_merged_correlator(2, {{complex_t{0.0, 0.0}, 2}});
    expect_rel_close(exact, LogComplex::from_complex(2.0), 1e-12);
}

TEST(Confluent, GinUEFourthMomentAgainstMc) {
    // N=4, k=2, all points at 0: E |det G|^4
    ConfluentSpec cs{EnsembleTag::GinUE, 4, 0, 2,
                     {{complex_t{0.0, 0.0}, 2}},
                     {{complex_t{0.0, 0.0}, 2}}};
    ConfluentResult r = evaluate_confluent(cs);
    CorrelatorSpec s{EnsembleTag::GinUE, 4, 0, 2,
                     {{0.0, 0.0}, {0.0, 0.0}},
                     {{0.0, 0.0}, {0.0, 0.0}}};
    MCEstimate est = mc_correlator(s, 200000, 71);
    EXPECT_LT(est.sigmas_from(r.value), 5.0);
}

TEST(Confluent, MergedCharsumMatchesStencil) {
    // two double points away from zero, exact vs extrapolated
    std::vector<RepeatedPoint> pts{{complex_t{0.9, 0.0}, 2}, {complex_t{-0.6, 0.0}, 2}};
    LogComplex exact = ginoe_merged_correlator(4, pts);
    ConfluentSpec cs{EnsembleTag::GinOE, 4, 0, 2, pts, {}};
    ConfluentResult r = evaluate_confluent(cs);
    expect_rel_close(r.value, exact, 1e-5);
}

TEST(GinibreLimit, TruncationDegeneratesToGinUE) {
    // N -> inf with M fixed: N^{kM} R^TUE(z/sqrt N, w/sqrt N) -> R^GinUE_M(z, w)
    const int big_n = 200, m = 3, k = 1;
    complex_t z{0.8, 0.2}, w{0.5, -0.4};
    double root_n = std::sqrt(double(big_n));
    CorrelatorSpec tue{EnsembleTag::TUE, big_n, m, k, {z / root_n}, {w / root_n}};
    LogComplex lhs = closed_form(tue) * LogComplex{double(k) * m * std::log(double(big_n)), {1, 0}};
    CorrelatorSpec gin{EnsembleTag::GinUE, m, 0, k, {z}, {w}};
    LogComplex rhs = closed_form(gin);
    EXPECT_LT(lhs.rel_diff(rhs), 0.02);
}

}  // namespace
}  // namespace cpcorr
