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

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

namespace {

using json = nlohmann::json;

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("CPCORR_CLI_BIN");
    if (!bin) throw std::runtime_error("CPCORR_CLI_BIN not set");
    std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

TEST(Cli, EvalClosedFormScalarExample) {
    CliResult r = run_cli("eval --ensemble ginue --N 1 --k 1 --z 1+0j --w 1+0j --route closed");
    ASSERT_EQ(r.exit_code, 0) << r.out;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["value"]["log_magnitude"].get<double>(), std::log(2.0), 1e-12);
    EXPECT_NEAR(j["value"]["phase_re"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, CharsumRouteAgrees) {
    CliResult a = run_cli("eval --ensemble toe --N 4 --M 2 --k 1 --z 0.5+0.1j --z -0.4+0.3j --route closed");
    CliResult b = run_cli("eval --ensemble toe --N 4 --M 2 --k 1 --z 0.5+0.1j --z -0.4+0.3j --route charsum");
    ASSERT_EQ(a.exit_code, 0);
    ASSERT_EQ(b.exit_code, 0);
    json ja = json::parse(a.out), jb = json::parse(b.out);
    EXPECT_NEAR(ja["value"]["log_magnitude"].get<double>(),
                jb["value"]["log_magnitude"].get<double>(), 1e-9);
}

TEST(Cli, McRouteDeterministic) {
    std::string cmd = "eval --ensemble ginue --N 3 --k 1 --z 0.4+0.2j --w 0.1-0.3j "
                      "--route mc --n 20000 --seed 7";
    CliResult a = run_cli(cmd);
    CliResult b = run_cli(cmd + " --workers 3");
    ASSERT_EQ(a.exit_code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);  // bit-identical including worker-count changes
}

TEST(Cli, ExitCodes) {
    // usage error: bad dimension
    EXPECT_EQ(run_cli("eval --ensemble ginue --N 0 --k 1 --z 1 --w 1 --route closed").exit_code, 2);
    // usage error: missing seed on stochastic route
    EXPECT_EQ(run_cli("eval --ensemble ginue --N 2 --k 1 --z 1 --w 1 --route mc --n 100").exit_code,
              2);
    // usage error: unknown flag
    EXPECT_EQ(run_cli("eval --bogus").exit_code, 2);
    // numerical failure: coincident points
    EXPECT_EQ(
        run_cli("eval --ensemble ginue --N 2 --k 2 --z 0.5 --z 0.5 --w 0.3 --w 0.7 --route closed")
            .exit_code,
        3);
}

TEST(Cli, VerifyIdentitiesSuite) {
    CliResult r = run_cli("verify --suite identities --format json");
    EXPECT_EQ(r.exit_code, 0) << r.out;
    // every line is a JSON object with pass=true
    std::size_t start = 0, lines = 0;
    while (start < r.out.size()) {
        std::size_t end = r.out.find('\n', start);
        if (end == std::string::npos) break;
        std::string line = r.out.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        json j = json::parse(line);
        EXPECT_TRUE(j["pass"].get<bool>()) << line;
        ++lines;
    }
    EXPECT_GE(lines, 8u);
}

TEST(Cli, SweepEmitsCsv) {
    CliResult r = run_cli(
        "sweep --regime noninteger-moment --gamma 0.7 --N 20 --N 50 --format csv");
    ASSERT_EQ(r.exit_code, 0) << r.out;
    EXPECT_NE(r.out.find("N,exact_log_magnitude,predicted_log_magnitude,ratio_deviation"),
              std::string::npos);
    EXPECT_NE(r.out.find("\n20,"), std::string::npos);
    EXPECT_NE(r.out.find("\n50,"), std::string::npos);
}

}  // namespace
