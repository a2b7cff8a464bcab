#pragma once

#include <json.hpp>

#include "mrdlab/equivalence.hpp"
#include "mrdlab/geometry.hpp"

namespace mrdlab {

using nlohmann::json;

/// Canonical field descriptor embedded in every output for reproducibility.
inline json context_descriptor(const FieldContext& ctx) {
    return json{{"p", ctx.p()},
                {"r", ctx.r()},
                {"t", ctx.t()},
                {"modulus", ctx.modulus()},
                {"generator", ctx.coords(ctx.generator())}};
}

inline FieldParams params_from_json(const json& j) {
    FieldParams p;
    p.p = j.at("p").get<std::uint32_t>();
    p.r = j.at("r").get<std::uint32_t>();
    p.t = j.at("t").get<std::uint32_t>();
    return p;
}

/// Rebuilds a context from a descriptor; the modulus and generator are
/// re-certified on load, guarding against files produced under different
/// element encodings.
inline FieldContext context_from_descriptor(const json& j) {
    const FieldParams params = params_from_json(j);
    const auto gc = j.at("generator").get<std::vector<std::uint32_t>>();
    if (gc.size() != params.degree()) throw ParamError("generator coordinates have wrong length");
    fe gen = 0;
    for (std::size_t i = gc.size(); i-- > 0;) {
        if (gc[i] >= params.p) throw ParamError("generator coordinate out of range");
        gen = gen * params.p + gc[i];
    }
    return FieldContext(params, j.at("modulus").get<std::vector<std::uint32_t>>(), gen);
}

inline json element_to_json(const FieldContext& ctx, fe e) { return json(ctx.coords(e)); }

inline fe element_from_json(const FieldContext& ctx, const json& j) {
    return ctx.from_coords(j.get<std::vector<std::uint32_t>>());
}

/// Canonical textual form: list of (exponent, coordinates) pairs, sorted by
/// exponent.
inline json qpoly_to_json(const FieldContext& ctx, const QPoly& f) {
    json terms = json::array();
    for (std::uint32_t i = 0; i < ctx.n(); ++i)
        if (f.c[i]) terms.push_back(json{{"i", i}, {"c", ctx.coords(f.c[i])}});
    return terms;
}

inline QPoly qpoly_from_json(const FieldContext& ctx, const json& j) {
    QPoly f = QPoly::zero(ctx);
    for (const auto& term : j) {
        const auto i = term.at("i").get<std::uint32_t>();
        if (i >= ctx.n()) throw ParamError("q-polynomial exponent out of range");
        f.c[i] = ctx.from_coords(term.at("c").get<std::vector<std::uint32_t>>());
    }
    return f;
}

inline json family_spec_to_json(const FieldContext& ctx, const FamilySpec& spec) {
    json j{{"family", family_name(spec.family)},
           {"t", spec.t},
           {"s", spec.s},
           {"variant", spec.variant == NszVariant::SEC4 ? "SEC4" : "EQ5"}};
    if (spec.element) j["element"] = ctx.coords(*spec.element);
    return j;
}

inline FamilySpec family_spec_from_json(const FieldContext& ctx, const json& j) {
    FamilySpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("t")) spec.t = j.at("t").get<std::uint32_t>();
    if (j.contains("s")) spec.s = j.at("s").get<long long>();
    if (j.contains("variant")) {
        const auto v = j.at("variant").get<std::string>();
        if (v == "SEC4")
            spec.variant = NszVariant::SEC4;
        else if (v == "EQ5")
            spec.variant = NszVariant::EQ5;
        else
            throw ParamError("unknown variant: " + v);
    }
    if (j.contains("element"))
        spec.element = ctx.from_coords(j.at("element").get<std::vector<std::uint32_t>>());
    if (j.contains("h_index")) {
        const auto idx = j.at("h_index").get<std::size_t>();
        const auto fiber = ctx.norm_fiber(ctx.minus_one(), ctx.t());
        if (idx >= fiber.size()) throw ParamError("h_index out of range");
        spec.element = fiber[idx];
    }
    return spec;
}

inline json mat2_to_json(const FieldContext& ctx, const Mat2& m) {
    return json{{"a", ctx.coords(m.a)}, {"b", ctx.coords(m.b)}, {"c", ctx.coords(m.c)},
                {"d", ctx.coords(m.d)}};
}

inline Mat2 mat2_from_json(const FieldContext& ctx, const json& j) {
    return Mat2{element_from_json(ctx, j.at("a")), element_from_json(ctx, j.at("b")),
                element_from_json(ctx, j.at("c")), element_from_json(ctx, j.at("d"))};
}

inline json witness_to_json(const FieldContext& ctx, const EquivalenceWitness& w) {
    return json{{"kind", "standard_form"},
                {"shape", w.shape == EquivalenceWitness::Shape::Diagonal ? "diagonal" : "antidiagonal"},
                {"rho", w.rho},
                {"x", ctx.coords(w.x)},
                {"y", ctx.coords(w.y)}};
}

inline EquivalenceWitness standard_witness_from_json(const FieldContext& ctx, const json& j) {
    EquivalenceWitness w;
    const auto shape = j.at("shape").get<std::string>();
    if (shape == "diagonal")
        w.shape = EquivalenceWitness::Shape::Diagonal;
    else if (shape == "antidiagonal")
        w.shape = EquivalenceWitness::Shape::Antidiagonal;
    else
        throw ParamError("unknown witness shape: " + shape);
    w.rho = j.at("rho").get<std::uint32_t>();
    w.x = element_from_json(ctx, j.at("x"));
    w.y = element_from_json(ctx, j.at("y"));
    return w;
}

inline json witness_to_json(const FieldContext& ctx, const CodeWitness& w) {
    return json{{"kind", "code"}, {"rho", w.rho}, {"matrix", mat2_to_json(ctx, w.A)}};
}

inline CodeWitness code_witness_from_json(const FieldContext& ctx, const json& j) {
    return CodeWitness{j.at("rho").get<std::uint32_t>(), mat2_from_json(ctx, j.at("matrix"))};
}

/// Self-contained witness file: context, both polynomials and the witness,
/// checkable without re-running any search.
inline json witness_file(const FieldContext& ctx, const QPoly& f1, const QPoly& f2, const json& witness) {
    return json{{"schema_version", kSchemaVersion},
                {"context", context_descriptor(ctx)},
                {"f1", qpoly_to_json(ctx, f1)},
                {"f2", qpoly_to_json(ctx, f2)},
                {"witness", witness}};
}

inline json idealizer_report_to_json(const FieldContext& ctx, const IdealizerReport& rep) {
    json basis = json::array();
    for (const auto& phi : rep.basis) basis.push_back(qpoly_to_json(ctx, phi));
    return json{{"side", rep.side == IdealizerSide::Right ? "right" : "left"},
                {"dimension", rep.dimension},
                {"is_scalar_field", rep.is_scalar_field},
                {"basis", basis}};
}

inline json stabilizer_report_to_json(const FieldContext& ctx, const StabilizerReport& rep) {
    json elems = json::array();
    for (const auto& m : rep.elements) elems.push_back(mat2_to_json(ctx, m));
    json j{{"order", rep.order}, {"all_diagonal", rep.all_diagonal}, {"elements", elems}};
    if (rep.field_exponent) j["field_exponent"] = *rep.field_exponent;
    return j;
}

inline json linear_set_to_json(const FieldContext& ctx, const LinearSetRecord& rec) {
    json pts = json::array();
    for (const auto& [pt, w] : rec.points)
        pts.push_back(json{{"x", ctx.coords(pt.x0)}, {"y", ctx.coords(pt.x1)}, {"weight", w}});
    return json{{"point_count", rec.point_count}, {"scattered", rec.scattered}, {"points", pts}};
}

inline json census_to_json(const FieldContext& ctx, const CensusRecord& rec) {
    json pairs = json::array();
    for (const auto& [hi, s] : rec.pairs) pairs.push_back(json{{"h_index", hi}, {"s", s}});
    json classes = json::array();
    for (const auto& cls : rec.classes) {
        json edges = json::array();
        for (const auto& e : cls.edges)
            edges.push_back(json{{"from", e.from}, {"to", e.to}, {"witness", witness_to_json(ctx, e.witness)}});
        classes.push_back(json{{"representative", cls.representative},
                               {"members", cls.members},
                               {"edges", edges}});
    }
    json fiber = json::array();
    for (fe h : rec.fiber) fiber.push_back(ctx.coords(h));
    return json{{"schema_version", kSchemaVersion},
                {"variant", rec.variant == NszVariant::SEC4 ? "SEC4" : "EQ5"},
                {"fiber", fiber},
                {"pairs", pairs},
                {"classes", classes},
                {"predicted_partition", rec.predicted},
                {"agreement", rec.agreement},
                {"all_mrd", rec.all_mrd},
                {"class_count", rec.class_count},
                {"lower_bound", rec.lower_bound}};
}

}  // namespace mrdlab
