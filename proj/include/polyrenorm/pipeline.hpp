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

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyrenorm/partition.hpp"
#include "polyrenorm/renorm.hpp"
#include "polyrenorm/report.hpp"
#include "polyrenorm/sampling.hpp"
#include "polyrenorm/star.hpp"

namespace polyrenorm {

/// Configuration problems (malformed JSON, out-of-range parameters) map to
/// exit code 2; stage and check failures map to exit code 1.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct ExperimentConfig {
    nlohmann::json space_json;
    std::string mode = "pipeline";
    double q = 0.5;
    double epsilon = 0.1;
    int sample_count = 200;
    std::uint64_t seed = 42;
    std::optional<std::vector<SparseVector>> section_basis;
    std::string output;
    std::vector<double> b_override;
    double b_tail_limit = 1.0;
    std::string pieces = "auto";  // auto | support_card | schauder | coordinate

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig cfg;
        try {
            if (!j.contains("space")) throw ConfigError("config: missing \"space\"");
            cfg.space_json = j.at("space");
            if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
            if (j.contains("q")) cfg.q = j.at("q").get<double>();
            if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
            if (j.contains("samples")) {
                const auto& s = j.at("samples");
                if (s.contains("count")) cfg.sample_count = s.at("count").get<int>();
                if (s.contains("seed")) cfg.seed = s.at("seed").get<std::uint64_t>();
            }
            if (j.contains("section")) {
                std::vector<SparseVector> basis;
                for (const auto& vec : j.at("section")) {
                    SparseVector v;
                    for (auto it = vec.begin(); it != vec.end(); ++it)
                        v.set(std::stoi(it.key()), it.value().get<double>());
                    basis.push_back(std::move(v));
                }
                cfg.section_basis = std::move(basis);
            }
            if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
            if (j.contains("b_override"))
                cfg.b_override = j.at("b_override").get<std::vector<double>>();
            if (j.contains("b_tail_limit")) cfg.b_tail_limit = j.at("b_tail_limit").get<double>();
            if (j.contains("pieces")) cfg.pieces = j.at("pieces").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw ConfigError("config: q must lie in (0,1)");
        if (!(cfg.epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
        if (cfg.sample_count < 1) throw ConfigError("config: sample count must be >= 1");
        return cfg;
    }

    /// Builds and validates the space.  Descriptor violations are config
    /// errors; verify mode reports them as failed checks instead.
    Space build_space() const {
        try {
            return build_space_impl();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }

  private:
    Space build_space_impl() const {
        ToleranceConfig tol;
        tol.bisect_tol = 1e-12;
        nlohmann::json j = space_json;
        std::string kind;
        try {
            kind = j.at("kind").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: space.kind: ") + e.what());
        }
        try {
            if (kind == "nakano") {
                NakanoDescriptor d;
                for (const auto& fam : j.at("families")) {
                    std::set<int> s;
                    for (int k : fam) s.insert(k);
                    d.families.push_back(std::move(s));
                }
                d.exponents = j.at("exponents").get<std::vector<double>>();
                int dim = j.at("truncation_dim").get<int>();
                return Space(std::move(d), dim, tol);
            }
            if (kind == "orlicz") {
                OrliczDescriptor d;
                std::string m = j.value("M", "power");
                if (m == "power")
                    d.kind = OrliczKind::kPower;
                else if (m == "exp_patched")
                    d.kind = OrliczKind::kExpPatched;
                else
                    throw ConfigError("config: unknown Orlicz function " + m);
                d.p = j.value("p", 2.0);
                d.K = j.value("K", 2.0);
                int dim = j.at("truncation_dim").get<int>();
                return Space(std::move(d), dim, tol);
            }
            if (kind == "hk") {
                if (j.value("family", "") == "schreier")
                    return Space(HereditaryFamily::schreier(j.at("window").get<int>()), tol);
                int window = j.at("window").get<int>();
                std::set<Member> members;
                for (const auto& mem : j.at("members")) {
                    Member A;
                    for (int g : mem) A.insert(g);
                    members.insert(std::move(A));
                }
                return Space(HereditaryFamily(window, std::move(members)), tol);
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: space: ") + e.what());
        }
        throw ConfigError("config: unknown space kind");
    }

  public:
    SectionSpec section_or_default(int fallback_first = 1) const {
        if (section_basis) return SectionSpec{*section_basis};
        return SectionSpec{
            {SparseVector::unit(fallback_first), SparseVector::unit(fallback_first + 1)}};
    }
};

namespace detail {

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw Error("stage " + name + ": " + e.what());
    }
}

}  // namespace detail

struct PipelineArtifacts {
    std::optional<PartitionAssignment> partition;
    std::optional<RenormParams> params;
    std::optional<NetFamily> nets;
};

/*!
 * The full composition: sample the sphere, partition it, derive the piece
 * bounds, build the piecewise renorming and verify its claims, enumerate the
 * boundary, run the perturbation construction on top of it, and certify a
 * low-dimensional polytope section of the final ball.  Modular-space piece
 * systems are supremum-backed and not enumerable; for those the composition
 * stops after the renorm stage and the report notes the skip.
 */
inline ReportFile run_pipeline(const ExperimentConfig& cfg, PipelineArtifacts* artifacts = nullptr) {
    ReportFile report;
    report.seed = cfg.seed;
    report.params_echo = OrderedJson{{"mode", cfg.mode},
                                     {"q", cfg.q},
                                     {"epsilon", cfg.epsilon},
                                     {"samples", cfg.sample_count},
                                     {"space", OrderedJson::parse(cfg.space_json.dump())}};

    Space space = detail::stage("config", [&] { return cfg.build_space(); });
    // The block families must reach past every sampled support so the tail
    // exponents beta(m) stay defined; keep one coordinate of headroom.
    int window = space.truncation_dim();
    if (space.kind() == SpaceKind::kNakano)
        window = std::min(window, space.nakano().max_coordinate() - 1);
    auto samples = detail::stage(
        "sampling", [&] { return sphere_samples(space, cfg.sample_count, cfg.seed, window); });

    // Partition of the sphere samples and empirical piece bounds.
    PartitionOptions popt;
    popt.q = cfg.q;
    std::vector<double> orlicz_b;
    if (space.kind() == SpaceKind::kOrlicz) {
        popt.rule = PartitionRule::kOrliczHead;
        popt.piece_mode = PieceMode::kSupportCard;
        for (int n = 1; n <= space.truncation_dim(); ++n)
            orlicz_b.push_back(orlicz_dn(space.orlicz(), n, 2000).b_n);
        popt.b = orlicz_b;
    } else {
        popt.rule = PartitionRule::kNakanoTail;
        popt.piece_mode = space.kind() == SpaceKind::kNakano ? PieceMode::kSchauder
                                                             : PieceMode::kSupportCard;
    }
    auto part = detail::stage("partition", [&] { return assign_partition(space, samples, popt); });
    report.add_check("partition_exhaustive", true, 0.0);
    report.add_check("b_hat_positive", part.b_hat_positive, part.b_hat_positive ? 1.0 : -1.0);

    // Piece bounds: explicit override wins (the negative fixtures use it).
    std::vector<double> b = cfg.b_override.empty() ? part.b_hat : cfg.b_override;
    auto params = detail::stage("renorm-params",
                                [&] { return compute_params(b, cfg.b_tail_limit); });
    for (std::size_t i = 0; i < params.b.size(); ++i)
        report.renorm_table.push_back(RenormRow{static_cast<int>(i) + 1, params.b[i],
                                                params.c[i], params.a[i]});
    for (std::size_t i = 0; i < part.b_hat.size(); ++i) {
        if (part.counts[i] == 0) continue;
        report.partition_table.push_back(
            PartitionRow{static_cast<int>(i) + 1, part.counts[i], part.b_hat[i],
                         part.analytic_bound[i],
                         part.b_hat[i] >= part.analytic_bound[i] - 1e-8});
    }

    BoundarySystem sys = detail::stage("boundary-system", [&]() -> BoundarySystem {
        if (cfg.pieces == "coordinate")
            return BoundarySystem::coordinate_singletons(space.truncation_dim());
        if (cfg.pieces == "schauder")
            return BoundarySystem::schauder(space, space.truncation_dim());
        if (cfg.pieces == "support_card")
            return BoundarySystem::support_card(space, space.truncation_dim());
        if (space.kind() == SpaceKind::kHk) return BoundarySystem::hk_extreme(space);
        if (space.kind() == SpaceKind::kNakano)
            return BoundarySystem::schauder(space, space.truncation_dim());
        return BoundarySystem::support_card(space, space.truncation_dim());
    });

    // Renormed-norm claims on every sample.
    double min_lower = 1e300, min_upper = 1e300, min_quant = 1e300, min_gap = 1e300;
    double max_witness_err = 0.0;
    detail::stage("renorm-claims", [&] {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& x = samples[i];
            auto res = triple_norm(sys, params, x, space);
            double margin_lo =
                (res.value - 1.0) -
                (std::ldexp(1.0, -res.term_index) / params.a_at(res.term_index));
            double margin_hi = params.a_at(1) - res.value;
            double quant = res.value - (1.0 + std::ldexp(1.0, -part.labels[i]));
            min_lower = std::min(min_lower, margin_lo);
            min_upper = std::min(min_upper, margin_hi);
            min_quant = std::min(min_quant, quant);
            max_witness_err =
                std::max(max_witness_err, std::fabs(evaluate(res.witness, x) - res.value));
            auto gap = star_gap_check(sys, params, x, space, part.labels[i]);
            min_gap = std::min(min_gap, gap.margin - gap.bound);
        }
        return 0;
    });
    report.add_check("claim_i_lower_margin", min_lower >= -1e-8, min_lower);
    report.add_check("claim_i_upper", min_upper >= -1e-9, min_upper);
    report.add_check("claim_ii_iii_witness", max_witness_err <= 1e-9, 1e-9 - max_witness_err);
    report.add_check("quantitative_lower_bound", min_quant >= -1e-8, min_quant);
    report.add_check("gap_margin", min_gap >= -1e-8, min_gap);
    report.claims["i"] = min_lower >= -1e-8 && min_upper >= -1e-9;
    report.claims["ii"] = max_witness_err <= 1e-9;
    report.claims["iii"] = max_witness_err <= 1e-9;
    report.margins["claim_i_lower"] = min_lower;
    report.margins["claim_i_upper"] = min_upper;
    report.margins["witness_error"] = max_witness_err;
    report.margins["quantitative_lower"] = min_quant;
    report.margins["gap"] = min_gap;

    if (!sys.enumerable()) {
        report.notes.push_back(
            "composition stages skipped: supremum-backed pieces are not enumerable");
        return report;
    }
    if (cfg.mode == "build-renorm") return report;

    // Perturbation construction over the enumerated renormed boundary.
    auto boundary =
        detail::stage("boundary-enumerate", [&] { return boundary_enumerate(sys, params, sys.piece_count()); });

    // Claim (iii) over the enumerated set: the scaled pieces attain the
    // renormed value at every sample.
    double max_attain_err = 0.0;
    detail::stage("boundary-attainment", [&] {
        for (const auto& x : samples) {
            double value = triple_norm(sys, params, x, space).value;
            double best = 0.0;
            for (const auto& f : boundary) best = std::max(best, evaluate(f, x));
            max_attain_err = std::max(max_attain_err, std::fabs(best - value));
        }
        return 0;
    });
    report.add_check("claim_iii_boundary_attains", max_attain_err <= 1e-9,
                     1e-9 - max_attain_err);
    report.claims["iii"] = max_attain_err <= 1e-9;
    report.margins["boundary_attainment_error"] = max_attain_err;

    std::map<int, std::vector<Functional>> by_tag;
    for (const auto& f : boundary) by_tag[*f.piece_tag].push_back(f);
    std::vector<std::vector<Functional>> e_list;
    for (auto& [tag, fs] : by_tag) e_list.push_back(std::move(fs));

    auto decomp = detail::stage("disjointify", [&] { return disjointify(e_list); });
    auto nets = detail::stage("build-nets", [&] { return build_nets(decomp, cfg.epsilon); });
    for (int n = 0; n < decomp.piece_count(); ++n)
        report.star_pieces.push_back(StarPieceRow{n, static_cast<int>(decomp.pieces()[n].size()),
                                                  static_cast<int>(nets.nets[n].size()),
                                                  nets.eps_n[n]});

    double star_lo = 1e300, star_hi = 1e300;
    detail::stage("star-claims", [&] {
        for (const auto& x : samples) {
            double base_tri = triple_norm(sys, params, x, space).value;
            double star = star_norm(nets, x).value;
            star_lo = std::min(star_lo, star - base_tri);
            star_hi = std::min(star_hi, (1.0 + cfg.epsilon) * base_tri - star);
        }
        return 0;
    });
    report.add_check("star_claim1_lower", star_lo > 0.0, star_lo);
    report.add_check("star_claim1_upper", star_hi >= -1e-8, star_hi);

    // Polytope certification of the final ball on a low-dimensional section.
    detail::stage("polytope-cert", [&] {
        SectionSpec section = cfg.section_or_default();
        section.validate();
        auto dirs = section_directions(section.dim(), 64, cfg.seed + 1);
        auto star_boundary_fns = scaled_boundary(nets);
        auto star_norm_fn = [&](const SparseVector& v) { return star_norm(nets, v).value; };

        Polytope poly;
        auto cert = certify_polyhedral_section(star_boundary_fns, section, star_norm_fn, dirs,
                                               1e-8, &poly);
        for (const auto& c : cert.checks) report.add_check("section_" + c.name, c.pass, c.margin);

        // Two-sided approximation of the original ball: the final ball P
        // satisfies P subset B subset a_1 (1+eps) P, so the inflated copy is
        // the approximating polytope.
        double eta = params.a_at(1) * (1.0 + cfg.epsilon) - 1.0;
        Polytope inflated = poly;
        double scale = 1.0 + eta;
        for (auto& v : inflated.vertices)
            for (double& coord : v) coord *= scale;
        for (auto& c : inflated.halfspaces)
            for (double& coord : c) coord /= scale;
        auto base_norm_fn = [&](const SparseVector& v) { return space.norm(v); };
        // Facet duals: exact via the base ball's own section vertices when
        // the boundary is finite, sample-maximized otherwise.
        std::vector<Coeffs> base_vertices;
        if (space.kind() == SpaceKind::kHk) {
            auto base_decomp = hk_strata_decomposition(space.family());
            std::vector<Functional> base_fns;
            for (const auto& piece : base_decomp.pieces())
                base_fns.insert(base_fns.end(), piece.begin(), piece.end());
            base_vertices =
                vertex_enumeration(restrict_functionals(base_fns, section), section.dim())
                    .vertices;
        }
        auto dual_fn = [&](const Coeffs& c) {
            double best = 0.0;
            if (!base_vertices.empty()) {
                for (const auto& v : base_vertices) best = std::max(best, detail::dot(c, v));
                return best;
            }
            for (const auto& dir : dirs) {
                SparseVector v = section.to_ambient(dir);
                double nv = space.norm(v);
                if (!(nv > 0.0)) continue;
                best = std::max(best, detail::dot(c, dir) / nv);
            }
            return best;
        };
        auto sandwich = certify_sandwich(section, inflated, eta, base_norm_fn, dual_fn);
        for (const auto& c : sandwich.checks)
            report.add_check("sandwich_" + c.name, c.pass, c.margin);

        PolytopeSummary summary;
        summary.name = "final_ball_section";
        summary.dim = section.dim();
        summary.facets = cert.facet_count;
        summary.vertices = cert.vertex_count;
        summary.eta = eta;
        summary.sandwich_pass = sandwich.pass;
        summary.vertex_list = poly.vertices;
        report.polytopes.push_back(std::move(summary));
        return 0;
    });

    if (artifacts) {
        artifacts->partition = part;
        artifacts->params = params;
        artifacts->nets = nets;
    }
    return report;
}

/*!
 * The cross-module invariant battery: every module contributes a handful of
 * seeded checks.  Used by the verify CLI mode; writes one CSV row per check.
 * Descriptor validation failures (for instance a non-hereditary family in
 * the config) become failed checks rather than config errors.
 */
inline ReportFile verify_suite(const ExperimentConfig& cfg) {
    ReportFile report;
    report.seed = cfg.seed;
    report.params_echo = OrderedJson{{"mode", "verify"},
                                     {"space", OrderedJson::parse(cfg.space_json.dump())}};
    Rng rng(cfg.seed);

    // Space construction doubles as the descriptor validation check.
    std::optional<Space> maybe_space;
    try {
        maybe_space = cfg.build_space();
        report.add_check("space_construction", true, 0.0);
    } catch (const Error& e) {
        report.add_check(std::string("space_construction: ") + e.what(), false, -1.0);
        return report;
    }
    const Space& space = *maybe_space;

    // Pairing bilinearity.
    double worst_bilinear = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Functional f, g;
        SparseVector x;
        for (int k = 1; k <= 6; ++k) {
            if (rng.unit() < 0.6) f.set(k, rng.uniform(-2.0, 2.0));
            if (rng.unit() < 0.6) g.set(k, rng.uniform(-2.0, 2.0));
            if (rng.unit() < 0.6) x.set(k, rng.uniform(-2.0, 2.0));
        }
        double alpha = rng.uniform(-2.0, 2.0), beta = rng.uniform(-2.0, 2.0);
        worst_bilinear = std::max(
            worst_bilinear, std::fabs(evaluate(alpha * f + beta * g, x) - alpha * evaluate(f, x) -
                                      beta * evaluate(g, x)));
    }
    report.add_check("evaluate_bilinear", worst_bilinear <= 1e-12, 1e-12 - worst_bilinear);

    // Norm axioms on samples.
    auto samples = sphere_samples(space, std::min(cfg.sample_count, 100), cfg.seed + 1);
    double worst_norm = 0.0;
    for (const auto& x : samples) worst_norm = std::max(worst_norm, std::fabs(space.norm(x) - 1.0));
    report.add_check("samples_normalized", worst_norm <= 1e-8, 1e-8 - worst_norm);

    double worst_tri = 0.0, worst_hom = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
        const auto& x = samples[i];
        const auto& y = samples[i + 1];
        if ((x + y).empty()) continue;
        worst_tri = std::max(worst_tri, space.norm(x + y) - 2.0);
        double alpha = rng.uniform(0.1, 3.0);
        worst_hom = std::max(worst_hom, std::fabs(space.norm(alpha * x) - alpha));
    }
    report.add_check("norm_triangle", worst_tri <= 1e-9, 1e-9 - worst_tri);
    report.add_check("norm_homogeneous", worst_hom <= 1e-9, 1e-9 - worst_hom);

    // Sign flips never change the norm: all three models are built from
    // coordinate magnitudes.
    double worst_uncond = 0.0;
    for (const auto& x : samples) {
        SparseVector flipped;
        bool flip = true;
        for (const auto& [k, v] : x.entries()) {
            flipped.set(k, flip ? -v : v);
            flip = !flip;
        }
        worst_uncond = std::max(worst_uncond, std::fabs(space.norm(flipped) - 1.0));
    }
    report.add_check("norm_unconditional", worst_uncond <= 1e-9, 1e-9 - worst_uncond);

    // Norming functionals attain within the dual ball.
    double worst_attain = 0.0, worst_dual = 0.0;
    for (const auto& x : samples) {
        auto f = space.norming_functional(x);
        worst_attain = std::max(worst_attain, std::fabs(evaluate(f, x) - 1.0));
        worst_dual = std::max(worst_dual, measured_dual_norm(f, samples) - 1.0);
    }
    report.add_check("norming_attains", worst_attain <= 1e-8, 1e-8 - worst_attain);
    report.add_check("norming_dual_ball", worst_dual <= 1e-6, 1e-6 - worst_dual);

    // The relative-boundary contract of the default piece system.
    try {
        BoundarySystem sys = space.kind() == SpaceKind::kHk
                                 ? BoundarySystem::hk_extreme(space)
                                 : BoundarySystem::schauder(space, space.truncation_dim());
        auto few = std::vector<SparseVector>(samples.begin(),
                                             samples.begin() + std::min<std::size_t>(
                                                                   samples.size(), 40));
        for (const auto& c : validate_boundary_system(sys, few, space.tol()))
            report.checks.push_back(c);
    } catch (const Error& e) {
        report.add_check(std::string("boundary_system: ") + e.what(), false, -1.0);
    }

    // Renorm claims through the pipeline path.
    try {
        ExperimentConfig sub = cfg;
        sub.mode = "pipeline";
        sub.sample_count = std::min(cfg.sample_count, 100);
        auto pipeline_report = run_pipeline(sub);
        for (const auto& c : pipeline_report.checks) report.checks.push_back(c);
        report.partition_table = pipeline_report.partition_table;
        report.renorm_table = pipeline_report.renorm_table;
        report.star_pieces = pipeline_report.star_pieces;
        report.polytopes = pipeline_report.polytopes;
        report.notes = pipeline_report.notes;
    } catch (const Error& e) {
        report.add_check(std::string("pipeline: ") + e.what(), false, -1.0);
    }

    return report;
}

}  // namespace polyrenorm
