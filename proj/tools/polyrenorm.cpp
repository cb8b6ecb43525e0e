// Copyright 2026 The Polyrenorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyrenorm/polyrenorm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

polyrenorm::ExperimentConfig load_config(const std::string& path,
                                         std::optional<std::uint64_t> seed_override,
                                         const std::string& out_override) {
    std::ifstream in(path);
    if (!in) throw polyrenorm::ConfigError("config file not found: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw polyrenorm::ConfigError(std::string("config parse error: ") + e.what());
    }
    auto cfg = polyrenorm::ExperimentConfig::from_json(j);
    if (seed_override) cfg.seed = *seed_override;
    if (!out_override.empty()) cfg.output = out_override;
    return cfg;
}

int finish(const polyrenorm::ReportFile& report) {
    for (const auto& c : report.checks)
        std::printf("[%s] %s (margin=%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    polyrenorm::detail::format_double(c.margin).c_str());
    for (const auto& note : report.notes) std::printf("note: %s\n", note.c_str());
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

int run_eval_norm(const polyrenorm::ExperimentConfig& cfg, const std::string& vector_text) {
    using namespace polyrenorm;
    if (vector_text.empty()) throw ConfigError("eval-norm requires --vector");
    Space space = cfg.build_space();
    SparseVector x = SparseVector::parse(vector_text);
    double norm = space.norm(x);
    std::printf("norm=%s\n", detail::format_double(norm).c_str());
    if (!x.empty()) {
        auto f = space.norming_functional(x);
        std::printf("norming_functional=%s\n", f.to_text().c_str());
        if (space.has_modular())
            std::printf("modular=%s\n", detail::format_double(space.modular(x)).c_str());
    }
    return kExitOk;
}

int run_build_boundary(const polyrenorm::ExperimentConfig& cfg) {
    using namespace polyrenorm;
    Space space = cfg.build_space();
    if (space.kind() != SpaceKind::kHk)
        throw ConfigError("build-boundary requires a hereditary-family space");
    ReportFile report;
    report.seed = cfg.seed;
    report.params_echo = OrderedJson{{"mode", "build-boundary"},
                                     {"epsilon", cfg.epsilon},
                                     {"space", OrderedJson::parse(cfg.space_json.dump())}};
    auto decomp = hk_strata_decomposition(space.family());
    auto nets = build_nets(decomp, cfg.epsilon);
    for (int n = 0; n < decomp.piece_count(); ++n)
        report.star_pieces.push_back(StarPieceRow{n, static_cast<int>(decomp.pieces()[n].size()),
                                                  static_cast<int>(nets.nets[n].size()),
                                                  nets.eps_n[n]});
    auto samples = sphere_samples(space, cfg.sample_count, cfg.seed);
    double lo = 1e300, hi = 1e300;
    for (const auto& x : samples) {
        double v = star_norm(nets, x).value;
        lo = std::min(lo, v - 1.0);
        hi = std::min(hi, (1.0 + cfg.epsilon) - v);
    }
    report.add_check("star_claim1_lower", lo > 0.0, lo);
    report.add_check("star_claim1_upper", hi >= -1e-8, hi);
    if (!cfg.output.empty()) report.emit(cfg.output);
    return finish(report);
}

int run_certify(const polyrenorm::ExperimentConfig& cfg) {
    using namespace polyrenorm;
    Space space = cfg.build_space();
    if (space.kind() != SpaceKind::kHk)
        throw ConfigError("certify requires a finite boundary (hereditary-family space)");
    ReportFile report;
    report.seed = cfg.seed;
    report.params_echo = OrderedJson{{"mode", "certify"},
                                     {"space", OrderedJson::parse(cfg.space_json.dump())}};

    auto decomp = hk_strata_decomposition(space.family());
    std::vector<Functional> boundary;
    for (const auto& piece : decomp.pieces())
        boundary.insert(boundary.end(), piece.begin(), piece.end());

    SectionSpec section = cfg.section_or_default();
    section.validate();
    auto dirs = section_directions(section.dim(), 64, cfg.seed);
    auto norm = [&space](const SparseVector& v) { return space.norm(v); };

    Polytope poly;
    auto cert = certify_polyhedral_section(boundary, section, norm, dirs, 1e-8, &poly);
    for (const auto& c : cert.checks) report.add_check(c.name, c.pass, c.margin);

    auto dual = [&poly](const Coeffs& c) {
        double best = 0.0;
        for (const auto& v : poly.vertices) best = std::max(best, detail::dot(c, v));
        return best;
    };
    auto sandwich = certify_sandwich(section, poly, 0.0, norm, dual);
    for (const auto& c : sandwich.checks) report.add_check("sandwich_" + c.name, c.pass, c.margin);

    PolytopeSummary summary;
    summary.name = "base_ball_section";
    summary.dim = section.dim();
    summary.facets = cert.facet_count;
    summary.vertices = cert.vertex_count;
    summary.eta = 0.0;
    summary.sandwich_pass = sandwich.pass;
    summary.vertex_list = poly.vertices;
    report.polytopes.push_back(std::move(summary));

    if (!cfg.output.empty()) report.emit(cfg.output);
    return finish(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyhedral renorming toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string vector_text;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_option("--seed", seed, "override the sampling seed");
        cmd->add_option("--out", out_dir, "output directory for reports");
    };

    auto* eval = app.add_subcommand("eval-norm", "evaluate the norm of a vector");
    add_common(eval);
    eval->add_option("--vector", vector_text, "sparse vector as idx:value,idx:value");

    auto* build_renorm =
        app.add_subcommand("build-renorm", "derive piece bounds and verify the renorm claims");
    add_common(build_renorm);
    auto* build_boundary =
        app.add_subcommand("build-boundary", "run the perturbation construction on the space boundary");
    add_common(build_boundary);
    auto* certify = app.add_subcommand("certify", "certify a polytope section of the unit ball");
    add_common(certify);
    auto* verify = app.add_subcommand("verify", "run the module invariant battery");
    add_common(verify);
    auto* pipeline = app.add_subcommand("pipeline", "full renorm + perturbation + certification");
    add_common(pipeline);

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = load_config(config_path, seed, out_dir);
        if (eval->parsed()) return run_eval_norm(cfg, vector_text);
        if (build_boundary->parsed()) return run_build_boundary(cfg);
        if (certify->parsed()) return run_certify(cfg);
        if (verify->parsed()) {
            cfg.mode = "verify";
            auto report = polyrenorm::verify_suite(cfg);
            if (!cfg.output.empty()) report.emit(cfg.output);
            return finish(report);
        }
        // build-renorm and pipeline share the driver; the pipeline simply
        // carries the composition further when the pieces are enumerable.
        polyrenorm::ExperimentConfig run_cfg = cfg;
        run_cfg.mode = pipeline->parsed() ? "pipeline" : "build-renorm";
        auto report = polyrenorm::run_pipeline(run_cfg);
        if (!cfg.output.empty()) report.emit(cfg.output);
        return finish(report);
    } catch (const polyrenorm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const polyrenorm::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailure;
    }
}
