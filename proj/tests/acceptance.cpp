// Acceptance suite: one line per criterion, PASS/FAIL, exit code = number of
// failed criteria. All checks are exact field identities or integer
// equalities; there are no tolerances anywhere.

#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "mrdlab/equivalence.hpp"
#include "mrdlab/geometry.hpp"

using namespace mrdlab;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("C%d %s — %s%s%s\n", idx, ok ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
}

const FieldContext& ctx6() {
    static const FieldContext ctx(FieldParams{3, 1, 3});
    return ctx;
}
const FieldContext& ctx8() {
    static const FieldContext ctx(FieldParams{3, 1, 4});
    return ctx;
}
const FieldContext& ctx56() {
    static const FieldContext ctx(FieldParams{5, 1, 3});
    return ctx;
}

constexpr unsigned kWorkers = 4;

// C1: every C_{h,3,s} at q = 3 is MRD with distance 5 and F_{q^2} right idealizer
void criterion1() {
    const auto& ctx = ctx6();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 3);
    std::size_t checked = 0;
    bool ok = fiber.size() == 28;
    for (fe h : fiber)
        for (long long s : {1, 5}) {
            const RankCode code = nsz_code(ctx, 3, h, s);
            ok = ok && min_distance(ctx, code, kWorkers) == 5 && is_mrd(ctx, code);
            ok = ok && right_idealizer(ctx, code).dimension == 2;
            ++checked;
        }
    report(1, ok && checked == 56, "MRD sweep t=3 (28 h x s in {1,5}: d = 5, I_R = F_{q^2})",
           std::to_string(checked) + " instances");
}

// C2: every C_{h,4,s} at q = 3 is MRD with distance 7, I_R = F_{q^2}, m_F = 2
void criterion2() {
    const auto& ctx = ctx8();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    std::size_t checked = 0;
    bool ok = fiber.size() == 82;
    for (fe h : fiber)
        for (long long s : {1, 3, 5, 7}) {
            const RankCode code = nsz_code(ctx, 4, h, s, NszVariant::SEC4);
            // the MRD filter certifies both coefficient readings (they coincide)
            ok = ok && nsz_poly(ctx, 4, h, s, NszVariant::EQ5) == code.f;
            ok = ok && min_distance(ctx, code, kWorkers) == 7 && is_mrd(ctx, code);
            ok = ok && right_idealizer(ctx, code).dimension == 2;
            ok = ok && standard_form_gcd(ctx, code.f) == 2;
            ++checked;
        }
    report(2, ok && checked == 328,
           "MRD sweep t=4 (82 h x s in {1,3,5,7}: d = 7, I_R = F_{q^2}, m_F = 2)",
           std::to_string(checked) + " instances");
}

// C3: code_equiv links psi_{h,3,s} with H_{h,s}; H is in standard form
void criterion3() {
    const auto& ctx = ctx6();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 3);
    bool ok = true;
    std::size_t witnesses = 0;
    for (fe h : fiber)
        for (long long s : {1, 5}) {
            const RankCode psi = nsz_code(ctx, 3, h, s);
            const RankCode hs = h_standard_form(ctx, h, s);
            ok = ok && standard_form_gcd(ctx, hs.f) == 2;
            const auto w = code_equiv(ctx, psi, hs);
            if (w && verify_code_witness(ctx, psi.f, hs.f, *w))
                ++witnesses;
            else
                ok = false;
        }
    report(3, ok && witnesses == 56, "standardization psi_{h,3,s} ~ H_{h,s} with verified witnesses",
           std::to_string(witnesses) + "/56 witnesses");
}

// C4: stabilizer-by-enumeration of H_{h,s} realizes the diagonal theorem
void criterion4() {
    const auto& ctx = ctx6();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 3);
    bool ok = true;
    for (std::size_t i : {0u, 6u, 13u, 20u, 27u}) {
        for (long long s : {1, 5}) {
            const RankCode hs = h_standard_form(ctx, fiber[i], s);
            const std::uint32_t m = standard_form_gcd(ctx, hs.f);
            const auto rep = stabilizer(ctx, hs.f, 1ull << 30, kWorkers);
            ok = ok && rep.order == 8 && rep.order == ipow(ctx.q(), m) - 1;
            ok = ok && rep.all_diagonal && rep.field_exponent.has_value();
            for (const auto& mat : rep.elements)
                ok = ok && mat.d == ctx.frobenius(mat.a, *rep.field_exponent) &&
                     ctx.in_subfield(mat.a, m);
        }
    }
    report(4, ok, "stabilizer oracle on H_{h,s} (order 8 = q^{m_F} - 1, diagonal (a, a^{q^s}))",
           "5 sampled h, both s");
}

// C5: determinant identities against their closed forms
void criterion5() {
    std::mt19937_64 rng(20240817);
    bool direct_ok = true, nonzero_ok = true;
    bool relational_claims = true;      // the det(A') = det(A) style companion claims
    bool relational_sign_flip = true;   // what actually holds: computed = -claimed
    std::size_t direct_n = 0, relational_n = 0;

    for (const FieldContext* ctxp : {&ctx6(), &ctx56()}) {
        const auto& ctx = *ctxp;
        const auto fiber = ctx.norm_fiber(ctx.minus_one(), 3);
        std::uniform_int_distribution<std::size_t> pick(0, fiber.size() - 1);
        for (int i = 0; i < 200; ++i) {
            const fe h = fiber[pick(rng)], k = fiber[pick(rng)];
            const long long s = (i % 2) ? 5 : 1;
            const auto a = det_identity_t3(ctx, h, k, s, false);
            direct_ok = direct_ok && a.equal;
            nonzero_ok = nonzero_ok && a.computed != 0;
            ++direct_n;
            const auto ap = det_identity_t3(ctx, h, k, s, true);
            relational_claims = relational_claims && ap.equal;
            relational_sign_flip =
                relational_sign_flip && !ap.equal && ap.equal_up_to_sign && ap.computed != 0;
            nonzero_ok = nonzero_ok && ap.computed != 0;
            ++relational_n;
        }
    }
    {
        const auto& ctx = ctx8();
        const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
        std::uniform_int_distribution<std::size_t> pick(0, fiber.size() - 1);
        for (int i = 0; i < 200; ++i) {
            const fe h = fiber[pick(rng)], k = fiber[pick(rng)];
            const long long s = std::array<long long, 4>{1, 3, 5, 7}[i % 4];
            for (auto kase : {DetCaseT4::S, DetCaseT4::ThreeS, DetCaseT4::FiveS}) {
                const auto r = det_identity_t4(ctx, h, k, s, kase);
                direct_ok = direct_ok && r.equal;
                nonzero_ok = nonzero_ok && r.computed != 0;
                ++direct_n;
            }
            const auto rm = det_identity_t4(ctx, h, k, s, DetCaseT4::MinusS);
            relational_claims = relational_claims && rm.equal;
            relational_sign_flip =
                relational_sign_flip && !rm.equal && rm.equal_up_to_sign && rm.computed != 0;
            nonzero_ok = nonzero_ok && rm.computed != 0;
            ++relational_n;
        }
    }
    const bool ok = direct_ok && nonzero_ok && relational_claims;
    std::string detail = std::to_string(direct_n) + " direct-closed-form samples exact" +
                         (direct_ok ? "" : " (FAILED)") + "; all " +
                         std::to_string(direct_n + relational_n) + " determinants nonzero" +
                         (nonzero_ok ? "" : " (FAILED)");
    if (!relational_claims)
        detail += "; the companion claims det(A') = det(A) and det(A_{h,k,-s}) = det(A_{h,k,s}) "
                  "fail for every sample — with these row orderings each determinant equals "
                  "MINUS the claimed value (verified " +
                  std::to_string(relational_n) + "/" + std::to_string(relational_n) +
                  (relational_sign_flip ? ", all nonzero)" : ", sign pattern inconsistent)");
    report(5, ok, "determinant identities (t=3 A/A' at q in {3,5}; t=4 four cases at q=3)", detail);
}

// C6: census agreement between the closed-form predicate and the search
void criterion6() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(424242);
    for (const FieldContext* ctxp : {&ctx6(), &ctx8()}) {
        const auto& ctx = *ctxp;
        const std::uint32_t t = ctx.t();
        const CensusRecord rec = census(ctx, NszVariant::SEC4, 1ull << 30, kWorkers);
        const std::size_t expected_pairs = t == 3 ? 56 : 328;
        const std::uint64_t bound = t == 3 ? 2 : 5;
        const std::size_t exact_count = t == 3 ? 3 : 6;  // frozen from the orbit computation
        ok = ok && rec.pairs.size() == expected_pairs && rec.agreement && rec.all_mrd;
        ok = ok && rec.lower_bound == bound && rec.class_count >= bound;
        ok = ok && rec.class_count == exact_count;

        // every intra-class edge re-verifies
        std::size_t edges = 0;
        for (const auto& cls : rec.classes)
            for (const auto& e : cls.edges) {
                const QPoly f = nsz_poly(ctx, t, rec.fiber[rec.pairs[e.from].first],
                                         rec.pairs[e.from].second);
                const QPoly g =
                    nsz_poly(ctx, t, rec.fiber[rec.pairs[e.to].first], rec.pairs[e.to].second);
                ok = ok && verify_code_witness(ctx, f, g, e.witness);
                ++edges;
            }
        ok = ok && edges + rec.class_count == rec.pairs.size();

        // 50 random cross-class pairs confirmed inequivalent by the
        // exhaustive standard-form search
        std::vector<std::size_t> cls_of(rec.pairs.size());
        for (std::size_t c = 0; c < rec.classes.size(); ++c)
            for (auto m : rec.classes[c].members) cls_of[m] = c;
        std::uniform_int_distribution<std::size_t> pick(0, rec.pairs.size() - 1);
        std::size_t confirmed = 0;
        while (confirmed < 50) {
            const std::size_t i = pick(rng), j = pick(rng);
            if (cls_of[i] == cls_of[j]) continue;
            const RankCode ci = nsz_code(ctx, t, rec.fiber[rec.pairs[i].first], rec.pairs[i].second);
            const RankCode cj = nsz_code(ctx, t, rec.fiber[rec.pairs[j].first], rec.pairs[j].second);
            const auto si = standardize(ctx, ci);
            const auto sj = standardize(ctx, cj);
            if (standard_form_equiv(ctx, si.F, sj.F).has_value()) {
                ok = false;
                break;
            }
            ++confirmed;
        }
        detail += (t == 3 ? "t=3: " : "; t=4: ") + std::to_string(rec.class_count) + " classes (bound " +
                  std::to_string(rec.lower_bound) + "), agreement=" +
                  (rec.agreement ? "yes" : "NO") + ", " + std::to_string(confirmed) +
                  " cross-class pairs confirmed";
    }
    report(6, ok, "classification census agreement (closed-form predicate vs search)", detail);
}

// C7: separations from the known families
void criterion7() {
    bool ok = true;
    std::string detail;

    // idealizer separations at q = 3
    {
        const auto& ctx = ctx6();
        const auto fiber = ctx.norm_fiber(ctx.minus_one(), 3);
        for (long long s : {1, 5}) {
            const auto v = inequivalence_screen(ctx, nsz_code(ctx, 3, fiber[0], s), gabidulin(ctx, s));
            ok = ok && v.kind == ScreenKind::InequivalentByIdealizer && v.right_dim_a == 2 &&
                 v.right_dim_b == 6;
        }
        const auto& c8 = ctx8();
        const auto fiber8 = c8.norm_fiber(c8.minus_one(), 4);
        const auto delta = find_mrd_delta(c8, 1);
        ok = ok && delta.has_value();
        if (delta) {
            const auto v =
                inequivalence_screen(c8, nsz_code(c8, 4, fiber8[0], 1), csajbok_k(c8, 1, *delta));
            ok = ok && v.kind == ScreenKind::InequivalentByIdealizer && v.right_dim_a == 2 &&
                 v.right_dim_b == 4;
        }
        detail += "idealizer splits 2|6 (vs G) and 2|4 (vs K)";
    }

    // q = 5: h in F_5 gives equivalence with Z_{6,zeta}
    {
        const auto& ctx = ctx56();
        const RankCode z = z6(ctx, 2);
        std::size_t found = 0;
        for (fe h : {fe(2), fe(3)}) {
            const RankCode psi = nsz_code(ctx, 3, h, 1);
            const auto w = code_equiv(ctx, psi, z);
            if (w && verify_code_witness(ctx, psi.f, z.f, *w)) ++found;
        }
        ok = ok && found == 2;
        detail += "; q=5 h in {2,3}: " + std::to_string(found) + "/2 Z6 witnesses";
    }

    // q = 3: no witness against any twisted Gabidulin over all valid eta
    {
        const auto& ctx = ctx6();
        const auto fiber = ctx.norm_fiber(ctx.minus_one(), 3);
        std::size_t eta_count = 0, pairs_checked = 0;
        bool none_found = true;
        std::vector<fe> etas;
        for (std::uint64_t e = 1; e < ctx.card(); ++e) {
            const fe nr = ctx.norm(static_cast<fe>(e), 1);
            if (nr != 0 && nr != 1) etas.push_back(static_cast<fe>(e));
        }
        eta_count = etas.size();
        std::size_t sampled = 0;
        for (fe h : fiber) {
            if (ctx.in_subfield(h, 2)) continue;  // sample h outside F_{q^2}
            if (++sampled > 5) break;
            const QPoly Hh = h_standard_form(ctx, h, 1).f;
            for (fe eta : etas) {
                QPoly tg = QPoly::zero(ctx);
                tg.c[1] = eta;
                tg.c[5] = 1;
                if (standard_form_equiv(ctx, Hh, tg).has_value()) none_found = false;
                ++pairs_checked;
            }
        }
        ok = ok && none_found && pairs_checked == 5 * eta_count;
        detail += "; vs H_{2,s,eta}: no witness over " + std::to_string(pairs_checked) +
                  " (h, eta) pairs";
    }
    report(7, ok, "known-family separations (Gabidulin, K, Z6, twisted Gabidulin)", detail);
}

// C8: geometry of Gamma_s: intersection dimensions and projection
void criterion8() {
    const auto& ctx = ctx8();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    bool ok = true;
    std::size_t swept = 0;
    for (fe h : fiber)
        for (long long s : {1, 3, 5, 7}) {
            const auto rep = intersect_dims(ctx, h, s);
            for (const auto& [u, d] : rep.pairwise) ok = ok && d == 3;
            for (const auto& [u, d] : rep.triple) ok = ok && d == 1;
            ok = ok && rep.gamma_exponent != 1 && rep.gamma_exponent != 2;
            ++swept;
        }

    std::size_t projections = 0;
    for (std::size_t i : {0u, 8u, 16u, 24u, 32u, 40u, 48u, 56u, 64u, 81u}) {
        const long long s = std::array<long long, 4>{1, 3, 5, 7}[projections % 4];
        const auto proj = project_from_gamma(ctx, fiber[i], s);  // also certifies Gamma disjoint Sigma
        const auto ls = linear_set(ctx, nsz_poly(ctx, 4, fiber[i], s), kWorkers);
        ok = ok && projection_matches_linear_set(ctx, proj, ls);
        ok = ok && proj.point_count == (ctx.card() - 1) / (ctx.q() - 1);
        ++projections;
    }
    report(8, ok && swept == 328 && projections == 10,
           "geometry: dim(Gamma ^ Gamma^u) = 3, triple = 1, gamma not in {1,2}; projection = linear set",
           std::to_string(swept) + " (h,s) swept, " + std::to_string(projections) + " projections");
}

// C9: randomized algebra property suites (>= 1000 cases each) and exhaustive
// fiber sizes
void criterion9() {
    bool ok = true;
    std::mt19937_64 rng(1337);

    // field axioms, norm/trace transitivity
    for (const FieldContext* ctxp : {&ctx6(), &ctx8()}) {
        const auto& ctx = *ctxp;
        std::uniform_int_distribution<std::uint64_t> pick(0, ctx.card() - 1);
        for (int i = 0; i < 1000; ++i) {
            const fe a = static_cast<fe>(pick(rng)), b = static_cast<fe>(pick(rng)),
                     c = static_cast<fe>(pick(rng));
            ok = ok && ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c));
            ok = ok && ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c));
            ok = ok && ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c));
            if (a) ok = ok && ctx.mul(a, ctx.inv(a)) == 1;
            // transitivity through every intermediate subfield
            for (std::uint32_t d = 1; d < ctx.n(); ++d) {
                if (ctx.n() % d) continue;
                const fe inner_n = ctx.norm(a, d);
                ok = ok && ctx.norm(a, 1) ==
                               (inner_n ? ctx.pow(inner_n, static_cast<long long>(
                                                               (ipow(ctx.q(), d) - 1) / (ctx.q() - 1)))
                                        : 0);
                fe tr = 0;  // trace transitivity via explicit subfield sum
                for (std::uint32_t kk = 0; kk < d; ++kk)
                    tr = ctx.add(tr, ctx.frobenius(ctx.trace(a, d), kk));
                ok = ok && tr == ctx.trace(a, 1);
            }
        }
    }

    // rank metric axioms and composition consistency
    {
        const auto& ctx = ctx6();
        const FqBasis basis = FqBasis::make(ctx);
        std::uniform_int_distribution<std::uint64_t> pick(0, ctx.card() - 1);
        std::uniform_int_distribution<std::uint32_t> idx(0, ctx.n() - 1);
        auto rand_poly = [&]() {
            QPoly f = QPoly::zero(ctx);
            f.c[idx(rng)] = static_cast<fe>(pick(rng));
            f.c[idx(rng)] = static_cast<fe>(pick(rng));
            return f;
        };
        for (int i = 0; i < 1000; ++i) {
            const QPoly f = rand_poly(), g = rand_poly(), h = rand_poly();
            const auto d = [&](const QPoly& x, const QPoly& y) {
                return rank(ctx, qp_sub(ctx, x, y), basis);
            };
            ok = ok && d(f, g) == d(g, f);
            ok = ok && (d(f, g) == 0) == (f == g);
            ok = ok && d(f, h) <= d(f, g) + d(g, h);
            const fe e = static_cast<fe>(pick(rng));
            ok = ok && evaluate(ctx, compose(ctx, f, g), e) == evaluate(ctx, f, evaluate(ctx, g, e));
        }
    }

    // exhaustive fiber sizes at q = 3 for n = 6 and n = 8 via one-pass bucketing
    for (const FieldContext* ctxp : {&ctx6(), &ctx8()}) {
        const auto& ctx = *ctxp;
        for (std::uint32_t d = 1; d <= ctx.n(); ++d) {
            if (ctx.n() % d) continue;
            std::vector<std::uint64_t> buckets(ctx.card(), 0);
            for (std::uint64_t e = 1; e < ctx.card(); ++e) ++buckets[ctx.norm(static_cast<fe>(e), d)];
            const std::uint64_t expect = (ctx.card() - 1) / (ipow(ctx.q(), d) - 1);
            for (std::uint64_t c = 1; c < ctx.card(); ++c)
                if (buckets[c] != 0 && buckets[c] != expect) ok = false;
            // image = the full subfield multiplicative group
            std::uint64_t image = 0;
            for (std::uint64_t c = 1; c < ctx.card(); ++c) image += buckets[c] != 0;
            ok = ok && image == ipow(ctx.q(), d) - 1;
        }
    }
    report(9, ok, "algebra substrate property suites (1000+ cases each; exhaustive fiber sizes)");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
