#pragma once

#include <optional>
#include <vector>

#include "mrdlab/parallel.hpp"
#include "mrdlab/qpoly.hpp"

namespace mrdlab {

/// The 2-dimensional F_{q^n}-linear rank-metric code C_f = <x, f(x)>.
/// The generator f must have zero q^0-coefficient and must not be a scalar
/// multiple of x. The distance cache makes concurrent min_distance calls on
/// one object unsafe; share the context across threads, not code objects.
struct RankCode {
    QPoly f;
    mutable std::optional<std::size_t> cached_min_distance;

    static RankCode make(const FieldContext& ctx, QPoly f) {
        if (f.c.size() != ctx.n()) throw ParamError("generator has wrong length");
        if (f.c[0] != 0) throw ParamError("generator must have zero q^0 coefficient");
        if (f.is_zero()) throw ParamError("code <x, f> must be 2-dimensional");
        return RankCode{std::move(f), std::nullopt};
    }
};

/// The codeword a*x + b*f(x); (a, b) != (0, 0).
inline QPoly codeword(const FieldContext& ctx, const RankCode& code, fe a, fe b) {
    if (!a && !b) throw ParamError("zero codeword pair");
    QPoly w = qp_scale(ctx, b, code.f);
    w.c[0] = ctx.add(w.c[0], a);
    return w;
}

/// Minimum rank over the q^n + 1 projective codewords: x itself plus
/// a*x + f for every a in F_{q^n}. Enumeration is data-parallel; the result
/// does not depend on the worker count.
inline std::size_t min_distance(const FieldContext& ctx, const RankCode& code, unsigned workers = 1) {
    if (code.cached_min_distance) return *code.cached_min_distance;
    const std::uint32_t n = ctx.n();
    const FqBasis basis = FqBasis::make(ctx);
    std::vector<fe> fvals(n);
    for (std::uint32_t j = 0; j < n; ++j) fvals[j] = evaluate(ctx, code.f, basis.elements()[j]);

    const unsigned chunks = workers ? workers : 1;
    std::vector<std::size_t> partial(chunks, n);  // rank(x) = n covers the b = 0 representative
    parallel_chunks(0, ctx.card(), chunks, [&](unsigned c, std::size_t lo, std::size_t hi) {
        FeMat m(n, n);
        std::size_t best = n;
        for (std::size_t a = lo; a < hi; ++a) {
            for (std::uint32_t j = 0; j < n; ++j) {
                const fe v = ctx.add(ctx.mul(static_cast<fe>(a), basis.elements()[j]), fvals[j]);
                const auto col = basis.coords(ctx, v);
                for (std::uint32_t i = 0; i < n; ++i) m.at(i, j) = col[i];
            }
            const std::size_t rk = gauss_rank(ctx, m);
            if (rk < best) best = rk;
        }
        partial[c] = best;
    });
    std::size_t d = n;
    for (auto v : partial) d = std::min(d, v);
    code.cached_min_distance = d;
    return d;
}

inline bool is_mrd(const FieldContext& ctx, const RankCode& code, unsigned workers = 1) {
    return min_distance(ctx, code, workers) == ctx.n() - 1;
}

/// Scatteredness via the linear-set weight criterion: every projective point
/// of L_f collects exactly q - 1 nonzero vectors. Single pass over F_{q^n}^*.
inline bool is_scattered(const FieldContext& ctx, const QPoly& f) {
    if (f.c[0] != 0) throw ParamError("scatteredness requires zero q^0 coefficient");
    std::vector<std::uint32_t> fiber(ctx.card(), 0);
    for (std::uint64_t x = 1; x < ctx.card(); ++x) {
        const fe m = ctx.mul(evaluate(ctx, f, static_cast<fe>(x)), ctx.inv(static_cast<fe>(x)));
        ++fiber[m];
    }
    const std::uint64_t qm1 = ctx.q() - 1;
    for (std::uint64_t m = 0; m < ctx.card(); ++m)
        if (fiber[m] != 0 && fiber[m] != qm1) return false;
    return true;
}

/// Literal definition, quadratic in the field size: f(k*y) = k*f(y) forces
/// k in F_q. Cross-validation mode for small fields only.
inline bool is_scattered_definitional(const FieldContext& ctx, const QPoly& f) {
    const auto fq = ctx.subfield_elements(1);
    std::vector<bool> in_fq(ctx.card(), false);
    for (fe e : fq) in_fq[e] = true;
    for (std::uint64_t y = 1; y < ctx.card(); ++y) {
        const fe fy = evaluate(ctx, f, static_cast<fe>(y));
        for (std::uint64_t k = 0; k < ctx.card(); ++k) {
            if (in_fq[k]) continue;
            const fe lhs = evaluate(ctx, f, ctx.mul(static_cast<fe>(k), static_cast<fe>(y)));
            if (lhs == ctx.mul(static_cast<fe>(k), fy)) return false;
        }
    }
    return true;
}

enum class IdealizerSide { Left, Right };

struct IdealizerReport {
    IdealizerSide side = IdealizerSide::Right;
    std::size_t dimension = 0;          // over F_q
    std::vector<QPoly> basis;           // each element as alpha*x + beta*f
    std::vector<std::pair<fe, fe>> ab;  // the (alpha, beta) pairs behind basis
    bool is_scalar_field = false;       // equals {alpha x : alpha in F_{q^m}}
};

namespace detail {

/// Residual of the membership test "g in span{x, f}": zero iff g = c*x + d*f
/// for some c, d. Uses the two lowest-index nonzero coordinates of (x, f)
/// to eliminate c and d, leaving n - 2 field-valued conditions.
inline std::vector<fe> span_residual(const FieldContext& ctx, const QPoly& f, const QPoly& g,
                                     std::uint32_t e0) {
    std::vector<fe> res;
    res.reserve(ctx.n() - 2);
    const fe f0 = f.c[e0];
    const fe g0 = g.c[e0];
    for (std::uint32_t k = 1; k < ctx.n(); ++k) {
        if (k == e0) continue;
        // g_k * f_{e0} - g_{e0} * f_k = 0  (covers both f-support and off-support k)
        res.push_back(ctx.sub(ctx.mul(g.c[k], f0), ctx.mul(g0, f.c[k])));
    }
    return res;
}

inline std::optional<std::pair<fe, fe>> span_solve(const FieldContext& ctx, const QPoly& f,
                                                   const QPoly& g, std::uint32_t e0) {
    const fe d = ctx.mul(g.c[e0], ctx.inv(f.c[e0]));
    for (std::uint32_t k = 1; k < ctx.n(); ++k) {
        if (k == e0) continue;
        if (g.c[k] != ctx.mul(d, f.c[k])) return std::nullopt;
    }
    return std::make_pair(g.c[0], d);
}

}  // namespace detail

/// Idealizer of C_f as the F_q-nullspace of the linear system expressing
/// "f o phi in C_f" (right) or "phi o f in C_f" (left) for phi = alpha*x +
/// beta*f. The system is assembled by probing the 2n F_q-basis directions
/// of (alpha, beta).
inline IdealizerReport idealizer(const FieldContext& ctx, const RankCode& code, IdealizerSide side) {
    const std::uint32_t n = ctx.n();
    const FqBasis basis = FqBasis::make(ctx);
    const std::uint32_t e0 = code.f.support().front();
    const QPoly ff = compose(ctx, code.f, code.f);

    auto condition = [&](fe alpha, fe beta) -> std::vector<fe> {
        QPoly g;
        if (side == IdealizerSide::Right) {
            QPoly inner = qp_scale(ctx, beta, code.f);
            inner.c[0] = ctx.add(inner.c[0], alpha);
            g = compose(ctx, code.f, inner);
        } else {
            g = qp_add(ctx, qp_scale(ctx, alpha, code.f), qp_scale(ctx, beta, ff));
        }
        return detail::span_residual(ctx, code.f, g, e0);
    };

    const std::size_t eq_blocks = n - 2;
    FeMat sys(eq_blocks * n, 2 * n);
    for (std::uint32_t u = 0; u < 2 * n; ++u) {
        const fe alpha = u < n ? basis.elements()[u] : 0;
        const fe beta = u < n ? 0 : basis.elements()[u - n];
        const auto res = condition(alpha, beta);
        for (std::size_t blk = 0; blk < eq_blocks; ++blk) {
            const auto co = basis.coords(ctx, res[blk]);
            for (std::uint32_t i = 0; i < n; ++i) sys.at(blk * n + i, u) = co[i];
        }
    }

    IdealizerReport rep;
    rep.side = side;
    const auto null_basis = gauss_nullspace(ctx, sys);
    rep.dimension = null_basis.size();
    for (const auto& v : null_basis) {
        std::vector<fe> ac(v.begin(), v.begin() + n), bc(v.begin() + n, v.end());
        const fe alpha = basis.from_coords(ctx, ac);
        const fe beta = basis.from_coords(ctx, bc);
        rep.ab.emplace_back(alpha, beta);
        QPoly phi = qp_scale(ctx, beta, code.f);
        phi.c[0] = ctx.add(phi.c[0], alpha);
        rep.basis.push_back(std::move(phi));
    }
    const std::size_t m = rep.dimension;
    rep.is_scalar_field = m >= 1 && ctx.n() % m == 0;  // {alpha x} needs F_{q^m} inside F_{q^n}
    if (rep.is_scalar_field)
        for (const auto& [alpha, beta] : rep.ab) {
            if (beta != 0 || !ctx.in_subfield(alpha, static_cast<std::uint32_t>(m))) {
                rep.is_scalar_field = false;
                break;
            }
        }
    return rep;
}

inline IdealizerReport right_idealizer(const FieldContext& ctx, const RankCode& code) {
    return idealizer(ctx, code, IdealizerSide::Right);
}

inline IdealizerReport left_idealizer(const FieldContext& ctx, const RankCode& code) {
    return idealizer(ctx, code, IdealizerSide::Left);
}

/// 2x2 matrix over F_{q^n}, rows (a b; c d).
struct Mat2 {
    fe a = 0, b = 0, c = 0, d = 0;

    bool operator==(const Mat2&) const = default;

    bool invertible(const FieldContext& ctx) const {
        return ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) != 0;
    }

    Mat2 mul(const FieldContext& ctx, const Mat2& o) const {
        return Mat2{ctx.add(ctx.mul(a, o.a), ctx.mul(b, o.c)), ctx.add(ctx.mul(a, o.b), ctx.mul(b, o.d)),
                    ctx.add(ctx.mul(c, o.a), ctx.mul(d, o.c)), ctx.add(ctx.mul(c, o.b), ctx.mul(d, o.d))};
    }

    Mat2 inverse(const FieldContext& ctx) const {
        const fe det = ctx.sub(ctx.mul(a, d), ctx.mul(b, c));
        const fe di = ctx.inv(det);
        return Mat2{ctx.mul(di, d), ctx.mul(di, ctx.neg(b)), ctx.mul(di, ctx.neg(c)), ctx.mul(di, a)};
    }

    Mat2 twisted(const FieldContext& ctx, long long j) const {
        return Mat2{ctx.p_automorphism(a, j), ctx.p_automorphism(b, j), ctx.p_automorphism(c, j),
                    ctx.p_automorphism(d, j)};
    }
};

struct StabilizerReport {
    std::uint64_t order = 0;
    std::vector<Mat2> elements;
    bool all_diagonal = false;
    std::optional<std::uint32_t> field_exponent;  // the s of diag(alpha, alpha^{q^s}) when that shape holds
};

/// The stabilizer G_f of U_f in GL(2, q^n) by exhaustive enumeration of the
/// first row (a, b): g(y) = f(a y + b f(y)) must match c*y + d*f(y).
/// Enumeration cost is card^2 and must fit the budget.
inline StabilizerReport stabilizer(const FieldContext& ctx, const QPoly& f, std::uint64_t budget,
                                   unsigned workers = 1) {
    if (ctx.card() * ctx.card() > budget)
        throw BudgetError("stabilizer enumeration cost " + std::to_string(ctx.card() * ctx.card()) +
                          " exceeds budget " + std::to_string(budget));
    const std::uint32_t e0 = f.support().front();
    const unsigned chunks = workers ? workers : 1;
    std::vector<std::vector<Mat2>> partial(chunks);
    parallel_chunks(0, ctx.card(), chunks, [&](unsigned c, std::size_t lo, std::size_t hi) {
        for (std::size_t a = lo; a < hi; ++a) {
            for (std::uint64_t b = (a == 0 ? 1 : 0); b < ctx.card(); ++b) {
                QPoly inner = qp_scale(ctx, static_cast<fe>(b), f);
                inner.c[0] = ctx.add(inner.c[0], static_cast<fe>(a));
                const QPoly g = compose(ctx, f, inner);
                const auto cd = detail::span_solve(ctx, f, g, e0);
                if (!cd) continue;
                const Mat2 m{static_cast<fe>(a), static_cast<fe>(b), cd->first, cd->second};
                if (m.invertible(ctx)) partial[c].push_back(m);
            }
        }
    });
    StabilizerReport rep;
    for (auto& part : partial)
        rep.elements.insert(rep.elements.end(), part.begin(), part.end());
    rep.order = rep.elements.size();
    rep.all_diagonal = true;
    for (const auto& m : rep.elements)
        if (m.b != 0 || m.c != 0) {
            rep.all_diagonal = false;
            break;
        }
    if (rep.all_diagonal) {
        for (std::uint32_t s = 0; s < ctx.n(); ++s) {
            bool ok = true;
            for (const auto& m : rep.elements)
                if (m.d != ctx.frobenius(m.a, s)) {
                    ok = false;
                    break;
                }
            if (ok) {
                rep.field_exponent = s;
                break;
            }
        }
    }
    return rep;
}

}  // namespace mrdlab
