#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrdlab/json_io.hpp"

namespace mrdlab {

struct RunConfig {
    std::string command;
    FieldParams params;
    std::string family = "NSZ";
    long long s = 1;
    std::optional<std::size_t> h_index;
    std::optional<std::vector<std::uint32_t>> h_coords;
    std::optional<std::size_t> k_index;
    std::string variant = "SEC4";
    std::string det_case = "A";
    std::string spec_a, spec_b;
    std::string witness_path;
    std::uint64_t budget = 0;  // 0: per-operation default
    unsigned workers = 1;
    std::string out_path, csv_path, cache_dir;
    bool project = false;
    bool with_stabilizer = false;
    bool with_linear_set = false;

    json echo() const {
        json j{{"command", command}, {"p", params.p}, {"r", params.r}, {"t", params.t},
               {"s", s},            {"family", family}, {"variant", variant},
               {"budget", budget},  {"workers", workers}};
        if (h_index) j["h_index"] = *h_index;
        if (h_coords) j["h_coords"] = *h_coords;
        if (k_index) j["k_index"] = *k_index;
        if (!out_path.empty()) j["out"] = out_path;
        if (!csv_path.empty()) j["csv_out"] = csv_path;
        if (!cache_dir.empty()) j["cache_dir"] = cache_dir;
        return j;
    }
};

namespace cli_detail {

inline std::string cache_file_path(const std::string& dir, const FieldParams& p) {
    std::ostringstream os;
    os << dir << "/modulus_p" << p.p << "_r" << p.r << "_t" << p.t << "_v" << kArtifactVersion
       << ".json";
    return os.str();
}

/// Context construction with the (p, r, D) -> modulus cache. Cached data is
/// re-certified on load; any failure falls back to a fresh search.
inline FieldContext build_context(const RunConfig& cfg) {
    std::string dir = cfg.cache_dir;
    if (dir.empty())
        if (const char* env = std::getenv("MRDLAB_CACHE_DIR")) dir = env;
    if (!dir.empty()) {
        const std::string path = cache_file_path(dir, cfg.params);
        std::ifstream in(path);
        if (in) {
            try {
                json j;
                in >> j;
                FieldContext ctx = context_from_descriptor(j);
                if (ctx.params() == cfg.params) return ctx;
            } catch (const std::exception&) {
                // stale or corrupt cache entry: recompute below
            }
        }
        FieldContext ctx(cfg.params);
        std::ofstream out(path);
        if (out) out << context_descriptor(ctx).dump(2) << "\n";
        return ctx;
    }
    return FieldContext(cfg.params);
}

inline fe resolve_element(const FieldContext& ctx, const RunConfig& cfg) {
    if (cfg.h_coords) return ctx.from_coords(*cfg.h_coords);
    if (cfg.h_index) {
        const auto fiber = ctx.norm_fiber(ctx.minus_one(), ctx.t());
        if (*cfg.h_index >= fiber.size()) throw ParamError("--h-index out of range");
        return fiber[*cfg.h_index];
    }
    throw ParamError("this family needs --h-index or --h-coords");
}

inline FamilySpec spec_from_flags(const FieldContext& ctx, const RunConfig& cfg) {
    FamilySpec spec;
    spec.family = family_from_name(cfg.family);
    spec.t = ctx.t();
    spec.s = cfg.s;
    spec.variant = cfg.variant == "EQ5" ? NszVariant::EQ5 : NszVariant::SEC4;
    switch (spec.family) {
        case Family::G:
        case Family::LZ:
            break;  // no element parameter
        case Family::Z6:
            if (cfg.h_coords) spec.element = ctx.from_coords(*cfg.h_coords);
            break;  // default: smallest root
        default:
            spec.element = resolve_element(ctx, cfg);
    }
    return spec;
}

inline json run_field(const FieldContext& ctx, const RunConfig&) {
    json sizes;
    for (std::uint32_t d = 1; d <= ctx.n(); ++d) {
        if (ctx.n() % d) continue;
        sizes[std::to_string(d)] = ctx.norm_fiber(ctx.minus_one(), d).size();
    }
    return json{{"norm_fiber_sizes_of_minus_one", sizes},
                {"automorphism_count", ctx.degree()},
                {"cardinality", ctx.card()}};
}

inline json run_check(const FieldContext& ctx, const RunConfig& cfg) {
    const FamilySpec spec = spec_from_flags(ctx, cfg);
    const RankCode code = build_family(ctx, spec);
    json j{{"family_spec", family_spec_to_json(ctx, spec)},
           {"generator_polynomial", qpoly_to_json(ctx, code.f)}};
    j["min_distance"] = min_distance(ctx, code, cfg.workers);
    j["mrd"] = is_mrd(ctx, code, cfg.workers);
    j["scattered"] = is_scattered(ctx, code.f);
    const std::uint32_t m = standard_form_gcd(ctx, code.f);
    j["standard_form_gcd"] = m;
    if (m > 1) j["standard_form_offset"] = standard_form_offset(ctx, code.f);
    j["right_idealizer"] = idealizer_report_to_json(ctx, right_idealizer(ctx, code));
    j["left_idealizer"] = idealizer_report_to_json(ctx, left_idealizer(ctx, code));
    if (cfg.with_stabilizer) {
        const std::uint64_t budget = cfg.budget ? cfg.budget : (1ull << 30);
        j["stabilizer"] = stabilizer_report_to_json(ctx, stabilizer(ctx, code.f, budget, cfg.workers));
    }
    if (cfg.with_linear_set)
        j["linear_set"] = linear_set_to_json(ctx, linear_set(ctx, code.f, cfg.workers));
    return j;
}

inline json run_equiv(const FieldContext& ctx, const RunConfig& cfg, bool& verified) {
    if (cfg.spec_a.empty() || cfg.spec_b.empty())
        throw ParamError("equiv needs two family specs (positional JSON strings)");
    const FamilySpec sa = family_spec_from_json(ctx, json::parse(cfg.spec_a));
    const FamilySpec sb = family_spec_from_json(ctx, json::parse(cfg.spec_b));
    const RankCode ca = build_family(ctx, sa);
    const RankCode cb = build_family(ctx, sb);
    const auto w = code_equiv(ctx, ca, cb);
    json j{{"spec_a", family_spec_to_json(ctx, sa)}, {"spec_b", family_spec_to_json(ctx, sb)}};
    j["equivalent"] = w.has_value();
    verified = true;
    if (w) {
        verified = verify_code_witness(ctx, ca.f, cb.f, *w);
        j["witness_file"] = witness_file(ctx, ca.f, cb.f, witness_to_json(ctx, *w));
    }
    return j;
}

inline json run_census(const FieldContext& ctx, const RunConfig& cfg, bool& verified) {
    const auto variant = cfg.variant == "EQ5" ? NszVariant::EQ5 : NszVariant::SEC4;
    const std::uint64_t budget = cfg.budget ? cfg.budget : (1ull << 30);
    const CensusRecord rec = census(ctx, variant, budget, cfg.workers);
    verified = rec.agreement;
    json j = census_to_json(ctx, rec);
    if (!rec.agreement && rec.mismatch) {
        const auto [i, jdx] = *rec.mismatch;
        json repro{{"schema_version", kSchemaVersion},
                   {"context", context_descriptor(ctx)},
                   {"pair_i", {{"h_index", rec.pairs[i].first}, {"s", rec.pairs[i].second}}},
                   {"pair_j", {{"h_index", rec.pairs[jdx].first}, {"s", rec.pairs[jdx].second}}},
                   {"detail", "predicted and computational partitions disagree on this pair"}};
        const std::string path = "mrdlab_census_reproducer.json";
        std::ofstream out(path);
        out << repro.dump(2) << "\n";
        j["reproducer_file"] = path;
    }
    return j;
}

inline json run_geometry(const FieldContext& ctx, const RunConfig& cfg) {
    if (ctx.t() != 4) throw ParamError("geometry sweep requires t = 4");
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    std::vector<std::size_t> hs;
    if (cfg.h_index)
        hs.push_back(*cfg.h_index);
    else
        for (std::size_t i = 0; i < fiber.size(); ++i) hs.push_back(i);
    std::vector<long long> svals;
    if (cfg.s)
        svals.push_back(cfg.s);
    else
        for (long long s : {1, 3, 5, 7}) svals.push_back(s);

    json rows = json::array();
    std::ostringstream csv;
    csv << "h_index,s,u,pairwise_dim,triple_dim,gamma\n";
    bool all_ok = true;
    for (std::size_t hi : hs) {
        if (hi >= fiber.size()) throw ParamError("--h-index out of range");
        for (long long s : svals) {
            const auto rep = intersect_dims(ctx, fiber[hi], s);
            for (std::size_t k = 0; k < rep.pairwise.size(); ++k) {
                const auto [u, pd] = rep.pairwise[k];
                const auto td = rep.triple[k].second;
                rows.push_back(json{{"h_index", hi}, {"s", s}, {"u", u}, {"pairwise_dim", pd},
                                    {"triple_dim", td}, {"gamma", rep.gamma_exponent}});
                csv << hi << "," << s << "," << u << "," << pd << "," << td << ","
                    << rep.gamma_exponent << "\n";
                all_ok = all_ok && pd == 3 && td == 1;
            }
            if (cfg.project) {
                const auto proj = project_from_gamma(ctx, fiber[hi], s);
                const auto ls = linear_set(ctx, nsz_poly(ctx, 4, fiber[hi], s), cfg.workers);
                rows.back()["projection_matches_linear_set"] =
                    projection_matches_linear_set(ctx, proj, ls);
            }
        }
    }
    if (!cfg.csv_path.empty()) {
        std::ofstream out(cfg.csv_path);
        if (!out) throw ParamError("cannot open --csv-out path");
        out << csv.str();
    }
    return json{{"rows", rows}, {"all_dims_as_expected", all_ok}};
}

inline json run_det(const FieldContext& ctx, const RunConfig& cfg) {
    if (!cfg.k_index) throw ParamError("det needs --k-index");
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), ctx.t());
    const fe h = resolve_element(ctx, cfg);
    if (*cfg.k_index >= fiber.size()) throw ParamError("--k-index out of range");
    const fe k = fiber[*cfg.k_index];
    DetIdentityResult r;
    if (ctx.t() == 3) {
        if (cfg.det_case != "A" && cfg.det_case != "Aprime")
            throw ParamError("t = 3 det case must be A or Aprime");
        r = det_identity_t3(ctx, h, k, cfg.s, cfg.det_case == "Aprime");
    } else if (ctx.t() == 4) {
        DetCaseT4 kase;
        if (cfg.det_case == "s" || cfg.det_case == "A")
            kase = DetCaseT4::S;
        else if (cfg.det_case == "minus_s")
            kase = DetCaseT4::MinusS;
        else if (cfg.det_case == "3s")
            kase = DetCaseT4::ThreeS;
        else if (cfg.det_case == "5s")
            kase = DetCaseT4::FiveS;
        else
            throw ParamError("t = 4 det case must be s, minus_s, 3s or 5s");
        r = det_identity_t4(ctx, h, k, cfg.s, kase);
    } else {
        throw ParamError("det identities exist for t in {3, 4}");
    }
    return json{{"case", cfg.det_case},
                {"computed", element_to_json(ctx, r.computed)},
                {"closed_form", element_to_json(ctx, r.closed_form)},
                {"equal", r.equal},
                {"equal_up_to_sign", r.equal_up_to_sign},
                {"nonzero", r.computed != 0}};
}

inline json run_verify(const RunConfig& cfg, bool& verified) {
    if (cfg.witness_path.empty()) throw ParamError("verify needs a witness file path");
    std::ifstream in(cfg.witness_path);
    if (!in) throw ParamError("cannot open witness file: " + cfg.witness_path);
    json doc;
    in >> doc;
    const json& wf = doc.contains("payload") && doc["payload"].contains("witness_file")
                         ? doc["payload"]["witness_file"]
                         : (doc.contains("witness_file") ? doc["witness_file"] : doc);
    const FieldContext ctx = context_from_descriptor(wf.at("context"));
    const QPoly f1 = qpoly_from_json(ctx, wf.at("f1"));
    const QPoly f2 = qpoly_from_json(ctx, wf.at("f2"));
    const json& w = wf.at("witness");
    const auto kind = w.at("kind").get<std::string>();
    if (kind == "standard_form")
        verified = verify_witness(ctx, f1, f2, standard_witness_from_json(ctx, w));
    else if (kind == "code")
        verified = verify_code_witness(ctx, f1, f2, code_witness_from_json(ctx, w));
    else
        throw ParamError("unknown witness kind: " + kind);
    return json{{"witness_kind", kind}, {"verified", verified}, {"context", wf.at("context")}};
}

}  // namespace cli_detail

/// Runs one CLI invocation; returns the process exit code
/// (0 ok, 2 parameter error, 3 verification failure, 4 budget exceeded).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    RunConfig cfg;
    CLI::App app{"verification laboratory for scattered q-polynomials and their MRD codes"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.params.p, "characteristic (prime)");
        sub->add_option("--r", cfg.params.r, "q = p^r");
        sub->add_option("--t", cfg.params.t, "half of n = 2t");
        sub->add_option("--budget", cfg.budget, "enumeration budget (0 = default)");
        sub->add_option("--workers", cfg.workers, "worker threads for data-parallel sweeps");
        sub->add_option("--out", cfg.out_path, "write the JSON envelope to this path");
        sub->add_option("--cache-dir", cfg.cache_dir,
                        "modulus cache directory (or MRDLAB_CACHE_DIR)");
    };
    auto add_family = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "G|H2|Z6|K|LZ|LMTZ|NSZ|H_std|BZZ");
        sub->add_option("--s", cfg.s, "Frobenius shift parameter");
        sub->add_option("--h-index", cfg.h_index, "index into the canonical norm fiber of -1");
        sub->add_option("--h-coords", cfg.h_coords, "explicit element coordinates over F_p")
            ->delimiter(',');
        sub->add_option("--variant", cfg.variant, "NSZ coefficient variant: SEC4|EQ5");
    };

    auto* cmd_field = app.add_subcommand("field", "context descriptor and fiber sizes");
    add_common(cmd_field);
    auto* cmd_check = app.add_subcommand("check", "MRD/scatteredness/idealizer report for a family instance");
    add_common(cmd_check);
    add_family(cmd_check);
    cmd_check->add_flag("--stabilizer", cfg.with_stabilizer,
                        "also enumerate the stabilizer (budget-gated)");
    cmd_check->add_flag("--linear-set", cfg.with_linear_set, "also dump the linear set");
    auto* cmd_equiv = app.add_subcommand("equiv", "decide equivalence of two family instances");
    add_common(cmd_equiv);
    cmd_equiv->add_option("spec_a", cfg.spec_a, "family spec JSON");
    cmd_equiv->add_option("spec_b", cfg.spec_b, "family spec JSON");
    auto* cmd_census = app.add_subcommand("census", "classification census over all (h, s)");
    add_common(cmd_census);
    cmd_census->add_option("--variant", cfg.variant, "SEC4|EQ5");
    auto* cmd_geometry = app.add_subcommand("geometry", "Gamma_s intersection-dimension sweep (t = 4)");
    add_common(cmd_geometry);
    cmd_geometry->add_option("--h-index", cfg.h_index, "restrict to one fiber index");
    auto* geometry_s = cmd_geometry->add_option("--s", cfg.s, "restrict to one s (default: all)");
    cmd_geometry->add_flag("--project", cfg.project, "also check projection against the linear set");
    cmd_geometry->add_option("--csv-out", cfg.csv_path, "write the dimension sweep as CSV");
    auto* cmd_det = app.add_subcommand("det", "determinant identity check for one (h, k, s)");
    add_common(cmd_det);
    cmd_det->add_option("--s", cfg.s, "Frobenius shift parameter");
    cmd_det->add_option("--h-index", cfg.h_index, "fiber index of h");
    cmd_det->add_option("--h-coords", cfg.h_coords, "explicit coordinates of h")->delimiter(',');
    cmd_det->add_option("--k-index", cfg.k_index, "fiber index of k");
    cmd_det->add_option("--case", cfg.det_case, "A|Aprime (t=3), s|minus_s|3s|5s (t=4)");
    auto* cmd_verify = app.add_subcommand("verify", "re-check a stored witness file");
    add_common(cmd_verify);
    cmd_verify->add_option("witness", cfg.witness_path, "witness file path");

    std::vector<const char*> argv;
    argv.push_back("mrdlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "parameter error: " << e.what() << "\n";
        return 2;
    }

    for (const CLI::App* sub :
         {cmd_field, cmd_check, cmd_equiv, cmd_census, cmd_geometry, cmd_det, cmd_verify})
        if (sub->parsed()) cfg.command = sub->get_name();

    const auto t0 = std::chrono::steady_clock::now();
    int exit_code = 0;
    json payload;
    bool verified = true;
    std::string verify_detail = "";
    try {
        if (cmd_verify->parsed()) {
            payload = cli_detail::run_verify(cfg, verified);
            if (!verified) {
                verify_detail = "witness failed re-verification";
                exit_code = 3;
            }
            json envelope{{"schema_version", kSchemaVersion},
                          {"artifact_version", kArtifactVersion},
                          {"command", cfg.command},
                          {"config", cfg.echo()},
                          {"timing_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                            std::chrono::steady_clock::now() - t0)
                                            .count()},
                          {"payload", payload},
                          {"verification",
                           {{"status", verified ? "ok" : "failed"}, {"detail", verify_detail}}}};
            const std::string text = envelope.dump(2) + "\n";
            out << text;
            if (!cfg.out_path.empty()) {
                std::ofstream f(cfg.out_path);
                f << text;
            }
            return exit_code;
        }

        const FieldContext ctx = cli_detail::build_context(cfg);
        if (cmd_field->parsed()) {
            payload = cli_detail::run_field(ctx, cfg);
        } else if (cmd_check->parsed()) {
            payload = cli_detail::run_check(ctx, cfg);
        } else if (cmd_equiv->parsed()) {
            payload = cli_detail::run_equiv(ctx, cfg, verified);
            if (!verified) {
                verify_detail = "equivalence witness failed re-verification";
                exit_code = 3;
            }
        } else if (cmd_census->parsed()) {
            payload = cli_detail::run_census(ctx, cfg, verified);
            if (!verified) {
                verify_detail = "predicate/search partition disagreement";
                exit_code = 3;
            }
        } else if (cmd_geometry->parsed()) {
            if (geometry_s->count() == 0) cfg.s = 0;  // 0 = sweep all coprime s
            payload = cli_detail::run_geometry(ctx, cfg);
        } else if (cmd_det->parsed()) {
            payload = cli_detail::run_det(ctx, cfg);
        }

        json envelope{{"schema_version", kSchemaVersion},
                      {"artifact_version", kArtifactVersion},
                      {"command", cfg.command},
                      {"config", cfg.echo()},
                      {"context", context_descriptor(ctx)},
                      {"timing_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - t0)
                                        .count()},
                      {"payload", payload},
                      {"verification",
                       {{"status", verified ? "ok" : "failed"}, {"detail", verify_detail}}}};
        const std::string text = envelope.dump(2) + "\n";
        out << text;
        if (!cfg.out_path.empty()) {
            std::ofstream f(cfg.out_path);
            if (!f) throw ParamError("cannot open --out path");
            f << text;
        }
        return exit_code;
    } catch (const std::exception& e) {
        int code = 2;
        std::string type = "parameter_error";
        if (dynamic_cast<const BudgetError*>(&e)) {
            code = 4;
            type = "budget_exceeded";
        } else if (dynamic_cast<const VerifyError*>(&e)) {
            code = 3;
            type = "verification_failure";
        }
        json envelope{{"schema_version", kSchemaVersion},
                      {"artifact_version", kArtifactVersion},
                      {"command", cfg.command},
                      {"config", cfg.echo()},
                      {"error", {{"type", type}, {"message", e.what()}}},
                      {"verification", {{"status", "error"}, {"detail", e.what()}}}};
        const std::string text = envelope.dump(2) + "\n";
        out << text;
        if (!cfg.out_path.empty()) {
            std::ofstream f(cfg.out_path);
            if (f) f << text;
        }
        err << type << ": " << e.what() << "\n";
        return code;
    }
}

}  // namespace mrdlab
