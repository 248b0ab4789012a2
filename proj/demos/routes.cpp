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

// Evaluates one correlator per ensemble by all applicable routes and prints
// them side by side.

#include <cstdio>

#include "cpcorr/cpcorr.hpp"

int main() {
    using namespace cpcorr;
    const std::uint64_t seed = 7;

    struct Row {
        EnsembleTag tag;
        int n, m, k;
    };
    const Row rows[] = {
        {EnsembleTag::GinUE, 4, 0, 2}, {EnsembleTag::TUE, 4, 2, 1},
        {EnsembleTag::GinOE, 4, 0, 1}, {EnsembleTag::TOE, 4, 2, 1},
        {EnsembleTag::GinSE, 2, 0, 1}, {EnsembleTag::TSE, 2, 1, 1},
    };

    std::printf("%-6s %-28s %-14s %-14s %-22s %-22s\n", "ens", "points", "closed", "charsum",
                "mc (n=1e5)", "dual (n=1e5)");
    for (const Row& r : rows) {
        CorrelatorSpec s;
        s.ensemble = r.tag;
        s.n = r.n;
        s.m = r.m;
        s.k = r.k;
        RandomStream rng(seed, 0x1234, std::uint64_t(&r - rows));
        int zc = is_complex_family(r.tag) ? r.k : 2 * r.k;
        for (int i = 0; i < zc; ++i)
            s.z.push_back({0.3 + 0.5 * rng.next_uniform(), 0.6 * rng.next_uniform() - 0.3});
        if (is_complex_family(r.tag))
            for (int i = 0; i < r.k; ++i)
                s.w.push_back({0.3 + 0.5 * rng.next_uniform(), 0.6 * rng.next_uniform() - 0.3});

        LogComplex closed = closed_form(s);
        LogComplex sum = charsum(s);
        MCEstimate mc = mc_correlator(s, 100000, seed);
        MCEstimate dual = duality_rhs(s, 100000, seed);

        std::string pts;
        for (auto z : s.z) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.2f%+.2fi ", z.real(), z.imag());
            pts += buf;
        }
        std::printf("%-6s %-28s %-14.8f %-14.8f %-9.6f+-%-10.6f %-9.6f+-%-10.6f\n",
                    to_string(r.tag).c_str(), pts.c_str(), closed.to_complex().real(),
                    sum.to_complex().real(), mc.value().to_complex().real(),
                    mc.stderr_ * std::exp(mc.log_scale), dual.value().to_complex().real(),
                    dual.stderr_ * std::exp(dual.log_scale));
    }
    return 0;
}
