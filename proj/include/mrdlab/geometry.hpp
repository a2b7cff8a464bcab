#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

#include "mrdlab/parallel.hpp"
#include "mrdlab/rank_code.hpp"

namespace mrdlab {

/// Point of PG(1, q^n), normalized so the first nonzero coordinate is 1.
struct ProjPoint1 {
    fe x0 = 0, x1 = 0;
    auto operator<=>(const ProjPoint1&) const = default;
};

inline ProjPoint1 normalize_point1(const FieldContext& ctx, fe x0, fe x1) {
    if (x0) {
        const fe s = ctx.inv(x0);
        return ProjPoint1{1, ctx.mul(s, x1)};
    }
    if (!x1) throw ParamError("zero vector is not a projective point");
    return ProjPoint1{0, 1};
}

/// Weight spectrum of the linear set L_f of PG(1, q^n): point -> weight,
/// where a weight-w point collects q^w - 1 nonzero vectors of U_f.
struct LinearSetRecord {
    std::vector<std::pair<ProjPoint1, std::uint32_t>> points;  // sorted by point
    std::size_t point_count = 0;
    bool scattered = false;
};

/// One pass over F_{q^n}^* accumulating fiber sizes per normalized point.
/// Accumulation is per-worker with a deterministic merge.
inline LinearSetRecord linear_set(const FieldContext& ctx, const QPoly& f, unsigned workers = 1) {
    const unsigned chunks = workers ? workers : 1;
    std::vector<std::vector<std::uint32_t>> partial(chunks);
    parallel_chunks(1, ctx.card(), chunks, [&](unsigned c, std::size_t lo, std::size_t hi) {
        partial[c].assign(ctx.card(), 0);
        for (std::size_t x = lo; x < hi; ++x) {
            const fe m = ctx.mul(evaluate(ctx, f, static_cast<fe>(x)), ctx.inv(static_cast<fe>(x)));
            ++partial[c][m];
        }
    });
    std::vector<std::uint32_t> fiber(ctx.card(), 0);
    for (const auto& part : partial) {
        if (part.empty()) continue;
        for (std::uint64_t m = 0; m < ctx.card(); ++m) fiber[m] += part[m];
    }
    LinearSetRecord rec;
    rec.scattered = true;
    const std::uint64_t q = ctx.q();
    for (std::uint64_t m = 0; m < ctx.card(); ++m) {
        if (!fiber[m]) continue;
        std::uint32_t w = 0;
        std::uint64_t pw = 1;
        while (pw - 1 < fiber[m]) {
            pw *= q;
            ++w;
        }
        if (pw - 1 != fiber[m]) throw VerifyError("linear set fiber size is not q^w - 1");
        if (w != 1) rec.scattered = false;
        rec.points.push_back({ProjPoint1{1, static_cast<fe>(m)}, w});
    }
    rec.point_count = rec.points.size();
    return rec;
}

// --- PG(7, q^8) machinery ---

using Point8 = std::array<fe, 8>;

inline Point8 normalize_point8(const FieldContext& ctx, Point8 v) {
    for (auto c : v) {
        if (!c) continue;
        const fe s = ctx.inv(c);
        for (auto& x : v) x = ctx.mul(s, x);
        return v;
    }
    throw ParamError("zero vector is not a projective point");
}

/// The canonical subgeometry Sigma = {(x, x^q, ..., x^{q^7})}, as its
/// (q^8-1)/(q-1) distinct normalized points, sorted.
inline std::vector<Point8> sigma_subgeometry(const FieldContext& ctx) {
    if (ctx.n() != 8) throw ParamError("sigma_subgeometry requires n = 8");
    std::vector<Point8> pts;
    pts.reserve(ctx.card() - 1);
    for (std::uint64_t x = 1; x < ctx.card(); ++x) {
        Point8 v;
        for (std::uint32_t i = 0; i < 8; ++i) v[i] = ctx.frobenius(static_cast<fe>(x), i);
        pts.push_back(normalize_point8(ctx, v));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// u-fold application of the collineation
/// (x_0, ..., x_7) -> (x_7^q, x_0^q, ..., x_6^q).
inline Point8 sigma_hat(const FieldContext& ctx, Point8 v, long long u) {
    const long long steps = imod(u, 8 * static_cast<long long>(ctx.degree()));
    for (long long k = 0; k < steps; ++k) {
        Point8 w;
        w[0] = ctx.frobenius(v[7], 1);
        for (std::uint32_t i = 1; i < 8; ++i) w[i] = ctx.frobenius(v[i - 1], 1);
        v = w;
    }
    return v;
}

/// Subspace of PG(7, q^8) given dually by independent linear forms.
struct ProjSubspace {
    std::vector<Point8> forms;

    int projective_dimension() const { return 7 - static_cast<int>(forms.size()); }

    fe eval_form(const FieldContext& ctx, std::size_t idx, const Point8& p) const {
        fe acc = 0;
        for (std::uint32_t i = 0; i < 8; ++i) acc = ctx.add(acc, ctx.mul(forms[idx][i], p[i]));
        return acc;
    }

    bool contains(const FieldContext& ctx, const Point8& p) const {
        for (std::size_t k = 0; k < forms.size(); ++k)
            if (eval_form(ctx, k, p)) return false;
        return true;
    }
};

/// The 5-dimensional subspace Gamma_s: x_0 = 0 and
/// x_s + x_{3s} - h^{1-q^{5s}} x_{5s} + h^{1-q^{7s}} x_{7s} = 0 (indices
/// mod 8). Requires n = 8, N_{q^8/q^4}(h) = -1, gcd(s, 8) = 1.
inline ProjSubspace gamma_s(const FieldContext& ctx, fe h, long long s) {
    if (ctx.n() != 8) throw ParamError("gamma_s requires n = 8");
    const auto si = static_cast<std::uint32_t>(imod(s, 8));
    if (std::gcd<std::uint64_t>(si, 8) != 1) throw ParamError("gamma_s: gcd(s, 8) must be 1");
    if (ctx.norm(h, 4) != ctx.minus_one()) throw ParamError("gamma_s: norm of h to F_{q^4} must be -1");
    Point8 l1{};
    l1[0] = 1;
    Point8 l2{};
    l2[si] = 1;
    l2[3 * si % 8] = ctx.add(l2[3 * si % 8], 1);
    l2[5 * si % 8] = ctx.add(l2[5 * si % 8], ctx.neg(ctx.mul(h, ctx.inv(ctx.frobenius(h, 5 * si)))));
    l2[7 * si % 8] = ctx.add(l2[7 * si % 8], ctx.mul(h, ctx.inv(ctx.frobenius(h, 7 * si))));
    return ProjSubspace{{l1, l2}};
}

/// Image of a subspace under sigma_hat^u, computed on forms: one step maps a
/// form L to M with M_k = (L_{k-1 mod 8})^q, so that M(sigma_hat(P)) = 0
/// exactly when L(P) = 0.
inline ProjSubspace subspace_image_under_sigma(const FieldContext& ctx, ProjSubspace S, long long u) {
    const long long steps = imod(u, 8 * static_cast<long long>(ctx.degree()));
    for (long long k = 0; k < steps; ++k) {
        for (auto& L : S.forms) {
            Point8 M;
            for (std::uint32_t i = 0; i < 8; ++i) M[i] = ctx.frobenius(L[(i + 7) % 8], 1);
            L = M;
        }
    }
    return S;
}

/// Stacks the defining forms of several subspaces and returns the projective
/// dimension of the intersection (-1 for empty).
inline int intersection_dimension(const FieldContext& ctx, const std::vector<const ProjSubspace*>& parts) {
    std::size_t rows = 0;
    for (auto* s : parts) rows += s->forms.size();
    FeMat m(rows, 8);
    std::size_t r = 0;
    for (auto* s : parts)
        for (const auto& L : s->forms) {
            for (std::uint32_t i = 0; i < 8; ++i) m.at(r, i) = L[i];
            ++r;
        }
    return 7 - static_cast<int>(gauss_rank(ctx, m));
}

struct IntersectReport {
    std::vector<std::pair<std::uint32_t, int>> pairwise;  // u -> dim(Gamma ^ Gamma^{sigma^u})
    std::vector<std::pair<std::uint32_t, int>> triple;    // u -> dim(... ^ Gamma^{sigma^{2u}})
    std::uint32_t gamma_exponent = 0;  // least g with dim(Gamma ^ ... ^ Gamma^{sigma^g}) > 5 - 2g
};

inline IntersectReport intersect_dims(const FieldContext& ctx, fe h, long long s) {
    const ProjSubspace G = gamma_s(ctx, h, s);
    IntersectReport rep;
    const auto si = static_cast<std::uint32_t>(imod(s, 8));
    for (std::uint32_t mult : {1u, 3u, 5u, 7u}) {
        const std::uint32_t u = (mult * si) % 8;
        const ProjSubspace Gu = subspace_image_under_sigma(ctx, G, u);
        const ProjSubspace G2u = subspace_image_under_sigma(ctx, G, 2 * u);
        rep.pairwise.push_back({u, intersection_dimension(ctx, {&G, &Gu})});
        rep.triple.push_back({u, intersection_dimension(ctx, {&G, &Gu, &G2u})});
    }
    std::vector<ProjSubspace> chain{G};
    for (std::uint32_t g = 1; g <= 8; ++g) {
        chain.push_back(subspace_image_under_sigma(ctx, G, g));
        std::vector<const ProjSubspace*> parts;
        for (const auto& ss : chain) parts.push_back(&ss);
        if (intersection_dimension(ctx, parts) > 5 - 2 * static_cast<int>(g)) {
            rep.gamma_exponent = g;
            break;
        }
    }
    return rep;
}

/// Projection of Sigma from a codimension-2 subspace onto the line
/// {x_i = 0 for i not in {0, line_index}}: for each Sigma-point P the span
/// <Gamma, P> is the hyperplane lam L1 + mu L2 with (lam, mu) solving
/// (lam L1 + mu L2)(P) = 0, and its trace on the line is a single point.
struct ProjectionRecord {
    std::vector<std::pair<ProjPoint1, std::uint32_t>> points;  // point -> number of Sigma preimages
    std::size_t point_count = 0;
};

inline ProjectionRecord project_from(const FieldContext& ctx, const ProjSubspace& S,
                                     std::uint32_t line_index) {
    if (S.forms.size() != 2) throw ParamError("project_from expects a codimension-2 subspace");
    const auto sigma = sigma_subgeometry(ctx);
    std::map<ProjPoint1, std::uint32_t> acc;
    for (const auto& P : sigma) {
        const fe v1 = S.eval_form(ctx, 0, P);
        const fe v2 = S.eval_form(ctx, 1, P);
        if (!v1 && !v2) throw ParamError("projection center meets Sigma");
        // hyperplane <Gamma, P>: M = v2 L1 - v1 L2
        Point8 M;
        for (std::uint32_t i = 0; i < 8; ++i)
            M[i] = ctx.sub(ctx.mul(v2, S.forms[0][i]), ctx.mul(v1, S.forms[1][i]));
        const fe m0 = M[0], ms = M[line_index];
        if (!m0 && !ms) throw ParamError("target line lies inside a projecting hyperplane");
        ++acc[normalize_point1(ctx, ms, ctx.neg(m0))];
    }
    ProjectionRecord rec;
    for (const auto& [pt, cnt] : acc) rec.points.push_back({pt, cnt});
    rec.point_count = rec.points.size();
    return rec;
}

/// Projection realizing L_{psi_{h,4,s}}: center Gamma_s, target line
/// x_{2s} = ... = x_{7s} = 0 (coordinates x_0 and x_s free).
inline ProjectionRecord project_from_gamma(const FieldContext& ctx, fe h, long long s) {
    const ProjSubspace G = gamma_s(ctx, h, s);
    const auto sigma = sigma_subgeometry(ctx);
    for (const auto& P : sigma)
        if (G.contains(ctx, P)) throw ParamError("gamma_s meets Sigma");
    return project_from(ctx, G, static_cast<std::uint32_t>(imod(s, 8)));
}

/// The projected multiset equals the linear set exactly when the points
/// agree and each projected point has (q^w - 1)/(q - 1) Sigma preimages.
inline bool projection_matches_linear_set(const FieldContext& ctx, const ProjectionRecord& proj,
                                          const LinearSetRecord& ls) {
    if (proj.points.size() != ls.points.size()) return false;
    for (std::size_t i = 0; i < proj.points.size(); ++i) {
        if (proj.points[i].first != ls.points[i].first) return false;
        const std::uint64_t expect = (ipow(ctx.q(), ls.points[i].second) - 1) / (ctx.q() - 1);
        if (proj.points[i].second != expect) return false;
    }
    return true;
}

// --- brute-force PGammaL(2, q^n) equivalence of linear sets ---

struct PglWitness {
    std::uint32_t rho = 0;  // automorphism exponent e -> e^{p^rho}
    Mat2 M;
};

inline ProjPoint1 apply_pgl(const FieldContext& ctx, const PglWitness& w, const ProjPoint1& p) {
    const fe x = ctx.p_automorphism(p.x0, w.rho), y = ctx.p_automorphism(p.x1, w.rho);
    return normalize_point1(ctx, ctx.add(ctx.mul(w.M.a, x), ctx.mul(w.M.b, y)),
                            ctx.add(ctx.mul(w.M.c, x), ctx.mul(w.M.d, y)));
}

inline bool verify_pgl_witness(const FieldContext& ctx, const PglWitness& w,
                               const LinearSetRecord& L1, const LinearSetRecord& L2) {
    if (!w.M.invertible(ctx)) return false;
    if (L1.points.size() != L2.points.size()) return false;
    std::unordered_set<std::uint64_t> target;
    for (const auto& [pt, wt] : L2.points)
        target.insert((static_cast<std::uint64_t>(pt.x0) << 32) | pt.x1);
    for (const auto& [pt, wt] : L1.points) {
        const auto im = apply_pgl(ctx, w, pt);
        if (!target.count((static_cast<std::uint64_t>(im.x0) << 32) | im.x1)) return false;
    }
    return true;
}

/// Exhaustive scan over PGL(2, q^n) representatives composed with the D
/// field automorphisms. Cost |PGL| * D must fit the budget; intended for
/// n = 6 at small q only.
inline std::optional<PglWitness> pgammal_equiv_bruteforce(const FieldContext& ctx,
                                                          const LinearSetRecord& L1,
                                                          const LinearSetRecord& L2,
                                                          std::uint64_t budget) {
    const std::uint64_t qn = ctx.card();
    const std::uint64_t pgl = qn * (qn * qn - 1);
    if (pgl > budget / ctx.degree())
        throw BudgetError("PGL scan cost " + std::to_string(pgl) + " * " +
                          std::to_string(ctx.degree()) + " exceeds budget " + std::to_string(budget));
    if (L1.points.size() != L2.points.size()) return std::nullopt;
    std::unordered_set<std::uint64_t> target;
    for (const auto& [pt, wt] : L2.points)
        target.insert((static_cast<std::uint64_t>(pt.x0) << 32) | pt.x1);

    auto try_matrix = [&](std::uint32_t rho, const Mat2& M) -> bool {
        for (const auto& [pt, wt] : L1.points) {
            const fe x = ctx.p_automorphism(pt.x0, rho), y = ctx.p_automorphism(pt.x1, rho);
            const auto im = normalize_point1(ctx, ctx.add(ctx.mul(M.a, x), ctx.mul(M.b, y)),
                                             ctx.add(ctx.mul(M.c, x), ctx.mul(M.d, y)));
            if (!target.count((static_cast<std::uint64_t>(im.x0) << 32) | im.x1)) return false;
        }
        return true;
    };

    for (std::uint32_t rho = 0; rho < ctx.degree(); ++rho) {
        // representatives with first row (1, b), then first row (0, 1)
        for (std::uint64_t b = 0; b < qn; ++b)
            for (std::uint64_t c = 0; c < qn; ++c)
                for (std::uint64_t d = 0; d < qn; ++d) {
                    const Mat2 M{1, static_cast<fe>(b), static_cast<fe>(c), static_cast<fe>(d)};
                    if (!M.invertible(ctx)) continue;
                    if (try_matrix(rho, M)) return PglWitness{rho, M};
                }
        for (std::uint64_t c = 1; c < qn; ++c)
            for (std::uint64_t d = 0; d < qn; ++d) {
                const Mat2 M{0, 1, static_cast<fe>(c), static_cast<fe>(d)};
                if (try_matrix(rho, M)) return PglWitness{rho, M};
            }
    }
    return std::nullopt;
}

}  // namespace mrdlab
