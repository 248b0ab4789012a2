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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpcorr/asymptotics.hpp"
#include "cpcorr/correlators.hpp"
#include "cpcorr/verify.hpp"

namespace {

using cpcorr::complex_t;
using json = nlohmann::json;

// "re+imj" strings: 0.5, -0.25+0.3j, 1j, -2.5j
complex_t parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    bool has_j = s.back() == 'j' || s.back() == 'J';
    if (!has_j) return {std::stod(s), 0.0};
    s.pop_back();
    // split at the last +/- that is not part of an exponent and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        if (s.empty() || s == "+" || s == "-") s += "1";
        return {0.0, std::stod(s)};
    }
    double re = std::stod(s.substr(0, split));
    std::string im = s.substr(split);
    if (im == "+" || im == "-") im += "1";
    return {re, std::stod(im)};
}

cpcorr::EnsembleTag parse_ensemble(const std::string& name) {
    using cpcorr::EnsembleTag;
    if (name == "ginue") return EnsembleTag::GinUE;
    if (name == "ginoe") return EnsembleTag::GinOE;
    if (name == "ginse") return EnsembleTag::GinSE;
    if (name == "tue") return EnsembleTag::TUE;
    if (name == "toe") return EnsembleTag::TOE;
    if (name == "tse") return EnsembleTag::TSE;
    throw std::invalid_argument("unknown ensemble: " + name);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json value_json(const cpcorr::LogComplex& v) {
    return json{{"log_magnitude", v.log_mag},
                {"phase_re", v.phase.real()},
                {"phase_im", v.phase.imag()}};
}

struct EvalOutput {
    json payload;
    std::string format;

    void emit() const {
        if (format == "json") {
            std::cout << payload.dump() << "\n";
            return;
        }
        if (format == "csv") {
            std::cout << "ensemble,route,N,M,k,log_magnitude,phase_re,phase_im,rel_stderr,ess,n,seed\n";
            const json& v = payload.at("value");
            std::cout << payload.at("ensemble").get<std::string>() << ','
                      << payload.at("route").get<std::string>() << ','
                      << payload.at("params").at("N") << ',' << payload.at("params").at("M") << ','
                      << payload.at("params").at("k") << ','
                      << fmt_double(v.at("log_magnitude").get<double>()) << ','
                      << fmt_double(v.at("phase_re").get<double>()) << ','
                      << fmt_double(v.at("phase_im").get<double>()) << ',';
            if (payload.contains("rel_stderr"))
                std::cout << fmt_double(payload.at("rel_stderr").get<double>()) << ','
                          << fmt_double(payload.at("ess").get<double>()) << ','
                          << payload.at("n") << ',' << payload.at("seed");
            else
                std::cout << ",,,";
            std::cout << "\n";
            return;
        }
        const json& v = payload.at("value");
        std::cout << payload.at("ensemble").get<std::string>() << " "
                  << payload.at("route").get<std::string>()
                  << ": value = exp(" << fmt_double(v.at("log_magnitude").get<double>()) << ") * ("
                  << fmt_double(v.at("phase_re").get<double>()) << " + "
                  << fmt_double(v.at("phase_im").get<double>()) << "i)";
        if (payload.contains("rel_stderr"))
            std::cout << "  rel_stderr = " << fmt_double(payload.at("rel_stderr").get<double>())
                      << "  n = " << payload.at("n") << "  seed = " << payload.at("seed");
        std::cout << "\n";
    }
};

int run_eval(const std::string& ensemble, int n_dim, int m_dim, int k,
             const std::vector<std::string>& z_raw, const std::vector<std::string>& w_raw,
             const std::vector<double>& omega_diag, const std::vector<double>& sigma_diag,
             const std::string& route, long long n_samples, std::uint64_t seed, int workers,
             const std::string& format) {
    cpcorr::CorrelatorSpec spec;
    spec.ensemble = parse_ensemble(ensemble);
    spec.n = n_dim;
    spec.m = m_dim;
    spec.k = k;
    for (const auto& s : z_raw) spec.z.push_back(parse_complex(s));
    for (const auto& s : w_raw) spec.w.push_back(parse_complex(s));
    auto diag_source = [&](const std::vector<double>& d) {
        cpcorr::ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
        return m;
    };
    if (!omega_diag.empty()) spec.omega = diag_source(omega_diag);
    if (!sigma_diag.empty()) spec.sigma = diag_source(sigma_diag);
    cpcorr::validate(spec);

    json out;
    out["ensemble"] = ensemble;
    out["route"] = route;
    out["params"] = {{"N", spec.n}, {"M", spec.m}, {"k", spec.k}};
    json zs = json::array(), ws = json::array();
    for (auto z : spec.z) zs.push_back({z.real(), z.imag()});
    for (auto w : spec.w) ws.push_back({w.real(), w.imag()});
    out["params"]["z"] = zs;
    out["params"]["w"] = ws;

    if (route == "closed") {
        out["value"] = value_json(cpcorr::closed_form(spec));
    } else if (route == "charsum") {
        out["value"] = value_json(cpcorr::charsum(spec));
    } else if (route == "mc" || route == "dual") {
        if (n_samples < 2) throw std::invalid_argument("stochastic routes need --n >= 2");
        cpcorr::MCEstimate est = (route == "mc") ? cpcorr::mc_correlator(spec, n_samples, seed, workers)
                                                 : cpcorr::duality_rhs(spec, n_samples, seed, workers);
        out["value"] = value_json(est.value());
        out["rel_stderr"] = est.rel_stderr();
        out["ess"] = est.ess;
        out["n"] = est.n;
        out["seed"] = est.seed;
    } else {
        throw std::invalid_argument("unknown route: " + route);
    }
    EvalOutput{out, format}.emit();
    return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, int workers,
               const std::string& format) {
    cpcorr::VerifyReport rep;
    if (suite == "identities") {
        rep = cpcorr::verify_identities(seed);
    } else if (suite == "routes") {
        rep = cpcorr::verify_routes(seed, workers);
    } else if (suite == "measures") {
        rep = cpcorr::verify_measures(seed, workers);
        rep.append(cpcorr::verify_mass_constants(seed, workers));
    } else if (suite == "asymptotics") {
        rep = cpcorr::verify_asymptotics(seed, workers);
    } else if (suite == "all") {
        rep = cpcorr::verify_all(seed, workers);
    } else {
        throw std::invalid_argument("unknown suite: " + suite);
    }

    if (format == "json") {
        for (const auto& c : rep.checks) {
            json row{{"check", c.name},
                     {"pass", c.pass},
                     {"observed", c.observed},
                     {"threshold", c.threshold}};
            if (!c.note.empty()) row["note"] = c.note;
            std::cout << row.dump() << "\n";
        }
    } else if (format == "csv") {
        std::cout << "check,pass,observed,threshold,note\n";
        for (const auto& c : rep.checks)
            std::cout << c.name << ',' << (c.pass ? 1 : 0) << ',' << fmt_double(c.observed) << ','
                      << fmt_double(c.threshold) << ',' << c.note << "\n";
    } else {
        for (const auto& c : rep.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  observed="
                      << fmt_double(c.observed) << " threshold=" << fmt_double(c.threshold)
                      << (c.note.empty() ? "" : ("  (" + c.note + ")")) << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

int run_sweep(const std::string& regime_name, std::vector<int> grid, double x,
              const std::string& z_raw, std::vector<std::string> zeta_raw,
              std::vector<std::string> xi_raw, int k, double gamma, const std::string& format) {
    cpcorr::AsymptoticRegime r;
    if (regime_name == "real-bulk") r.regime = cpcorr::Regime::RealBulk;
    else if (regime_name == "real-edge") r.regime = cpcorr::Regime::RealEdge;
    else if (regime_name == "complex-bulk") r.regime = cpcorr::Regime::ComplexBulk;
    else if (regime_name == "complex-edge") r.regime = cpcorr::Regime::ComplexEdge;
    else if (regime_name == "integer-moment") r.regime = cpcorr::Regime::IntegerMoment;
    else if (regime_name == "noninteger-moment") r.regime = cpcorr::Regime::NonIntegerMoment;
    else throw std::invalid_argument("unknown regime: " + regime_name);
    r.x = x;
    r.k = k;
    r.gamma = gamma;
    if (!z_raw.empty()) r.z = parse_complex(z_raw);
    for (const auto& s : zeta_raw) r.zeta.push_back(parse_complex(s));
    for (const auto& s : xi_raw) r.xi.push_back(parse_complex(s));

    cpcorr::ConvergenceReport rep = cpcorr::convergence_report(r, grid);
    if (format == "csv") {
        std::cout << "N,exact_log_magnitude,predicted_log_magnitude,ratio_deviation\n";
        for (const auto& row : rep.rows)
            std::cout << row.n << ',' << fmt_double(row.exact.log_mag) << ','
                      << fmt_double(row.predicted.log_mag) << ','
                      << fmt_double(row.ratio_deviation) << "\n";
    } else {
        for (const auto& row : rep.rows) {
            json j{{"N", row.n},
                   {"exact", value_json(row.exact)},
                   {"predicted", value_json(row.predicted)},
                   {"ratio_deviation", row.ratio_deviation}};
            std::cout << j.dump() << "\n";
        }
    }
    if (!rep.deviations_decreasing)
        std::cerr << "note: deviation sequence is not monotone decreasing\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-point correlators of characteristic polynomials for non-Hermitian ensembles"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a correlator by one of the four routes");
    std::string ensemble, route = "closed", format = "json";
    int n_dim = 1, m_dim = 0, k = 1, workers = 0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> z_raw, w_raw;
    std::vector<double> omega_diag, sigma_diag;
    eval->add_option("--ensemble", ensemble, "ginue|ginoe|ginse|tue|toe|tse")->required();
    eval->add_option("--N", n_dim, "matrix size parameter N")->required();
    eval->add_option("--M", m_dim, "truncation size M (truncated ensembles)");
    eval->add_option("--k", k, "number of characteristic-polynomial pairs")->required();
    eval->add_option("--z", z_raw, "evaluation points, re+imj (k or 2k of them)")->required();
    eval->add_option("--w", w_raw, "second point set (complex ensembles)");
    eval->add_option("--omega-diag", omega_diag, "diagonal source Omega (mc/dual routes)");
    eval->add_option("--sigma-diag", sigma_diag, "diagonal source Sigma (mc/dual routes)");
    eval->add_option("--route", route, "closed|charsum|mc|dual");
    eval->add_option("--n", n_samples, "sample count for stochastic routes");
    auto* seed_opt = eval->add_option("--seed", seed, "RNG seed (required for mc/dual)");
    eval->add_option("--workers", workers, "worker threads (default: CPCORR_WORKERS or 1)");
    eval->add_option("--format", format, "json|csv|text");

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all", vformat = "text";
    std::uint64_t vseed = 20260809;
    int vworkers = 0;
    verify->add_option("--suite", suite, "identities|routes|measures|asymptotics|all");
    verify->add_option("--seed", vseed, "RNG seed for stochastic checks");
    verify->add_option("--workers", vworkers, "worker threads");
    verify->add_option("--format", vformat, "json|csv|text");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "exact-vs-predicted tables over an N grid");
    std::string regime, z_base, sformat = "csv";
    std::vector<int> grid{50, 100, 200};
    double x = 0.0, gamma = 1.0;
    int sk = 1;
    std::vector<std::string> zeta_raw, xi_raw;
    sweep->add_option("--regime", regime,
                      "real-bulk|real-edge|complex-bulk|complex-edge|integer-moment|noninteger-moment")
        ->required();
    sweep->add_option("--N", grid, "N grid");
    sweep->add_option("--x", x, "real base point");
    sweep->add_option("--z", z_base, "complex base point, re+imj");
    sweep->add_option("--zeta", zeta_raw, "microscopic offsets");
    sweep->add_option("--xi", xi_raw, "second offset group (complex regimes)");
    sweep->add_option("--k", sk, "moment power");
    sweep->add_option("--gamma", gamma, "non-integer moment exponent");
    sweep->add_option("--format", sformat, "csv|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) {
            if ((route == "mc" || route == "dual") && !*seed_opt)
                throw std::invalid_argument("stochastic routes require --seed");
            return run_eval(ensemble, n_dim, m_dim, k, z_raw, w_raw, omega_diag, sigma_diag, route,
                            n_samples, seed, workers, format);
        }
        if (verify->parsed()) return run_verify(suite, vseed, vworkers, vformat);
        if (sweep->parsed())
            return run_sweep(regime, grid, x, z_base, zeta_raw, xi_raw, sk, gamma, sformat);
    } catch (const cpcorr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
