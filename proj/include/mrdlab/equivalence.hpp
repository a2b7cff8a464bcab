#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mrdlab/families.hpp"
#include "mrdlab/rank_code.hpp"

namespace mrdlab {

/// Witness of equivalence between two codes generated by standard-form
/// polynomials. Diagonal shape: d F2(x) = F1^rho(a x) with scalars (a, d);
/// antidiagonal shape: F1^rho(b F2(x)) = c x with scalars (b, c). rho is the
/// automorphism exponent j of e -> e^{p^j}.
struct EquivalenceWitness {
    enum class Shape { Diagonal, Antidiagonal };
    Shape shape = Shape::Diagonal;
    std::uint32_t rho = 0;
    fe x = 0, y = 0;  // (a, d) or (b, c)
};

/// Exact re-check of the claimed identity by composition and coefficient
/// comparison.
inline bool verify_witness(const FieldContext& ctx, const QPoly& F1, const QPoly& F2,
                           const EquivalenceWitness& w) {
    if (w.x == 0 || w.y == 0) return false;
    const QPoly F1r = twist(ctx, F1, w.rho);
    if (w.shape == EquivalenceWitness::Shape::Diagonal) {
        // d F2(x) == F1^rho(a x), coefficientwise: d c2_i = c1r_i a^{q^i}
        for (std::uint32_t i = 0; i < ctx.n(); ++i) {
            const fe lhs = ctx.mul(w.y, F2.c[i]);
            const fe rhs = ctx.mul(F1r.c[i], ctx.frobenius(w.x, i));
            if (lhs != rhs) return false;
        }
        return true;
    }
    const QPoly comp = compose(ctx, F1r, qp_scale(ctx, w.x, F2));
    if (comp.c[0] != w.y) return false;
    for (std::uint32_t i = 1; i < ctx.n(); ++i)
        if (comp.c[i]) return false;
    return true;
}

namespace detail {

/// Solutions a of a^e = v in F_{q^n}^*, ascending by element code.
/// The exponent is taken mod (card - 1); an empty result means no solution.
inline std::vector<fe> power_equation_solutions(const FieldContext& ctx, std::uint64_t e, fe v) {
    const std::uint64_t M = ctx.order();
    e %= M;
    std::vector<fe> out;
    if (v == 0) return out;
    if (e == 0) {
        if (v != 1) return out;
        out.reserve(M);
        for (std::uint64_t c = 1; c < ctx.card(); ++c) out.push_back(static_cast<fe>(c));
        return out;
    }
    const std::uint64_t L = ctx.log(v);
    const std::uint64_t g = std::gcd(e, M);
    if (L % g) return out;
    // x * (e/g) = L/g (mod M/g)
    const std::uint64_t Mg = M / g;
    auto modinv = [](std::uint64_t a, std::uint64_t m) {
        long long t0 = 0, t1 = 1;
        long long r0 = static_cast<long long>(m), r1 = static_cast<long long>(a % m);
        while (r1) {
            const long long qq = r0 / r1;
            t0 -= qq * t1;
            std::swap(t0, t1);
            r0 -= qq * r1;
            std::swap(r0, r1);
        }
        return static_cast<std::uint64_t>(t0 < 0 ? t0 + static_cast<long long>(m) : t0) % m;
    };
    const std::uint64_t x0 = (static_cast<unsigned __int128>(L / g) * modinv(e / g, Mg)) % Mg;
    out.reserve(g);
    for (std::uint64_t k = 0; k < g; ++k) out.push_back(ctx.exp(x0 + k * Mg));
    std::sort(out.begin(), out.end());
    return out;
}

inline bool diagonal_full_check(const FieldContext& ctx, const QPoly& F1r, const QPoly& F2,
                                const std::vector<std::uint32_t>& supp, fe a, fe& d_out) {
    const std::uint32_t i0 = supp.front();
    const fe d = ctx.mul(ctx.mul(F1r.c[i0], ctx.frobenius(a, i0)), ctx.inv(F2.c[i0]));
    for (std::uint32_t i : supp)
        if (ctx.mul(d, F2.c[i]) != ctx.mul(F1r.c[i], ctx.frobenius(a, i))) return false;
    d_out = d;
    return true;
}

}  // namespace detail

/// Decides equivalence of two codes generated by standard-form polynomials
/// by searching the two shapes of the diagonal theorem over all D
/// automorphism exponents. Returns the witness minimizing
/// (shape, rho, element order of a resp. b), or nullopt.
///
/// Diagonal candidates for a come from the ratio of the two lowest-index
/// coefficient equations; the antidiagonal shape scans b over F_{q^n}^* in
/// canonical order.
inline std::optional<EquivalenceWitness> standard_form_equiv(const FieldContext& ctx, const QPoly& F1,
                                                             const QPoly& F2) {
    if (standard_form_gcd(ctx, F1) <= 1 || standard_form_gcd(ctx, F2) <= 1)
        throw ParamError("standard_form_equiv requires both polynomials in standard form");
    const std::uint32_t n = ctx.n();
    const std::uint32_t D = ctx.degree();
    const auto supp1 = F1.support();
    const auto supp2 = F2.support();

    // diagonal shape first
    if (supp1 == supp2) {
        for (std::uint32_t rho = 0; rho < D; ++rho) {
            const QPoly F1r = twist(ctx, F1, rho);
            if (supp1.size() == 1) {
                const fe a = 1;
                fe d = 0;
                if (detail::diagonal_full_check(ctx, F1r, F2, supp1, a, d))
                    return EquivalenceWitness{EquivalenceWitness::Shape::Diagonal, rho, a, d};
                continue;
            }
            const std::uint32_t i0 = supp1[0], i1 = supp1[1];
            // a^{q^{i1} - q^{i0}} = c1r_{i0} c2_{i1} / (c1r_{i1} c2_{i0})
            const fe v = ctx.mul(ctx.mul(F1r.c[i0], F2.c[i1]),
                                 ctx.inv(ctx.mul(F1r.c[i1], F2.c[i0])));
            const std::uint64_t e = ipow(ctx.q(), i1) - ipow(ctx.q(), i0);
            for (fe a : detail::power_equation_solutions(ctx, e, v)) {
                fe d = 0;
                if (detail::diagonal_full_check(ctx, F1r, F2, supp1, a, d))
                    return EquivalenceWitness{EquivalenceWitness::Shape::Diagonal, rho, a, d};
            }
        }
    }

    // antidiagonal shape: compose(F1^rho, b F2) must collapse to c x
    for (std::uint32_t rho = 0; rho < D; ++rho) {
        const QPoly F1r = twist(ctx, F1, rho);
        // coeff_k(b) = sum over i in supp1 of F1r_i (F2_{(k-i) mod n})^{q^i} b^{q^i}
        std::vector<std::vector<std::pair<std::uint32_t, fe>>> terms(n);
        for (std::uint32_t k = 0; k < n; ++k)
            for (std::uint32_t i : supp1) {
                const fe g = F2.c[(k + n - i % n) % n];
                if (g) terms[k].push_back({i, ctx.mul(F1r.c[i], ctx.frobenius(g, i))});
            }
        std::vector<fe> bq(n);
        for (std::uint64_t b = 1; b < ctx.card(); ++b) {
            for (std::uint32_t i : supp1) bq[i] = ctx.frobenius(static_cast<fe>(b), i);
            bool ok = true;
            for (std::uint32_t k = 1; k < n && ok; ++k) {
                fe acc = 0;
                for (const auto& [i, w] : terms[k]) acc = ctx.add(acc, ctx.mul(w, bq[i]));
                ok = (acc == 0);
            }
            if (!ok) continue;
            fe c = 0;
            for (const auto& [i, w] : terms[0]) c = ctx.add(c, ctx.mul(w, bq[i]));
            if (c)
                return EquivalenceWitness{EquivalenceWitness::Shape::Antidiagonal, rho,
                                          static_cast<fe>(b), c};
        }
    }
    return std::nullopt;
}

/// General code-equivalence witness: U_{f2} = A * U_{f1^rho}, i.e. for every
/// y the vector A (y, f1^rho(y)) lies in U_{f2}.
struct CodeWitness {
    std::uint32_t rho = 0;
    Mat2 A;
};

inline bool verify_code_witness(const FieldContext& ctx, const QPoly& f1, const QPoly& f2,
                                const CodeWitness& w) {
    if (!w.A.invertible(ctx)) return false;
    const QPoly ft = twist(ctx, f1, w.rho);
    QPoly top = qp_scale(ctx, w.A.b, ft);
    top.c[0] = ctx.add(top.c[0], w.A.a);
    QPoly bottom = qp_scale(ctx, w.A.d, ft);
    bottom.c[0] = ctx.add(bottom.c[0], w.A.c);
    return compose(ctx, f2, top) == bottom;
}

/// A standard form F equivalent to the input code, with the linking witness
/// U_F = P * U_f. When f is already standard this is the identity; otherwise
/// the right idealizer (a field of size q^m, m > 1) is diagonalized: a
/// non-scalar stabilizer element is split into its eigenbasis, which
/// conjugates the stabilizer field to diagonal matrices, and the theorem on
/// diagonal stabilizers forces the transformed generator into standard form.
struct Standardization {
    QPoly F;
    CodeWitness w;  // rho always 0: U_F = A * U_f
};

inline Standardization standardize(const FieldContext& ctx, const RankCode& code) {
    Standardization st;
    if (standard_form_gcd(ctx, code.f) > 1) {
        st.F = code.f;
        st.w = CodeWitness{0, Mat2{1, 0, 0, 1}};
        return st;
    }
    const auto ir = right_idealizer(ctx, code);
    if (ir.dimension <= 1)
        throw ParamError("code is not standardizable: right idealizer is F_q");
    // pick a non-scalar idealizer element; for a non-standard generator it
    // must have beta != 0
    fe alpha = 0, beta = 0;
    for (const auto& [a, b] : ir.ab)
        if (b != 0) {
            alpha = a;
            beta = b;
            break;
        }
    if (beta == 0) throw ParamError("standardize: no non-scalar idealizer element found");
    QPoly phi = qp_scale(ctx, beta, code.f);
    phi.c[0] = ctx.add(phi.c[0], alpha);
    const QPoly g = compose(ctx, code.f, phi);
    const auto cd = detail::span_solve(ctx, code.f, g, code.f.support().front());
    if (!cd) throw ParamError("standardize: idealizer element does not stabilize the code");
    const Mat2 S{alpha, beta, cd->first, cd->second};

    // eigenvalues of S: roots of z^2 - T z + Delta
    const fe T = ctx.add(S.a, S.d);
    const fe Delta = ctx.sub(ctx.mul(S.a, S.d), ctx.mul(S.b, S.c));
    const fe disc = ctx.sub(ctx.mul(T, T), ctx.mul(ctx.embed(4), Delta));
    if (disc == 0) throw ParamError("standardize: stabilizer element has a repeated eigenvalue");
    const std::uint64_t dl = ctx.log(disc);
    if (dl % 2) throw ParamError("standardize: eigenvalues lie outside the field");
    const fe root = ctx.exp(dl / 2);
    const fe inv2 = ctx.inv(ctx.embed(2));
    fe l1 = ctx.mul(inv2, ctx.add(T, root));
    fe l2 = ctx.mul(inv2, ctx.sub(T, root));
    if (l2 < l1) std::swap(l1, l2);

    const FqBasis basis = FqBasis::make(ctx);
    for (int attempt = 0; attempt < 2; ++attempt) {
        const fe e1 = attempt == 0 ? l1 : l2;
        const fe e2 = attempt == 0 ? l2 : l1;
        const Mat2 V{S.b, S.b, ctx.sub(e1, S.a), ctx.sub(e2, S.a)};
        const Mat2 P = V.inverse(ctx);
        QPoly u = qp_scale(ctx, P.b, code.f);
        u.c[0] = ctx.add(u.c[0], P.a);
        if (rank(ctx, u, basis) != ctx.n()) continue;
        QPoly w = qp_scale(ctx, P.d, code.f);
        w.c[0] = ctx.add(w.c[0], P.c);
        const QPoly F = compose(ctx, w, qpoly_inverse(ctx, u, basis));
        if (compose(ctx, F, u) != w) throw ParamError("standardize: interpolation inconsistency");
        if (standard_form_gcd(ctx, F) <= 1)
            throw ParamError("standardize: diagonalization did not yield a standard form");
        st.F = F;
        st.w = CodeWitness{0, P};
        return st;
    }
    throw ParamError("standardize: both eigenvector orderings degenerate");
}

namespace detail {

inline Mat2 witness_matrix(const FieldContext& ctx, const EquivalenceWitness& w) {
    if (w.shape == EquivalenceWitness::Shape::Diagonal)
        return Mat2{ctx.inv(w.x), 0, 0, ctx.inv(w.y)};
    return Mat2{0, ctx.inv(w.y), ctx.inv(w.x), 0};
}

}  // namespace detail

/// Composes a standard-form witness between F1 and F2 with the two
/// standardization maps, producing a witness linking the original codes:
/// U_{f2} = P2^{-1} M_w P1^rho * U_{f1^rho}.
inline CodeWitness compose_witness(const FieldContext& ctx, const Standardization& s1,
                                   const Standardization& s2, const EquivalenceWitness& w) {
    const Mat2 Mw = detail::witness_matrix(ctx, w);
    const Mat2 A = s2.w.A.inverse(ctx).mul(ctx, Mw.mul(ctx, s1.w.A.twisted(ctx, w.rho)));
    return CodeWitness{w.rho, A};
}

/// Full equivalence decision for scattered generators whose right idealizers
/// exceed F_q: both sides are reduced to standard forms, the diagonal
/// theorem decides, and the witness is pulled back to the original codes.
/// Differing right-idealizer dimensions short-circuit to nullopt.
inline std::optional<CodeWitness> code_equiv(const FieldContext& ctx, const RankCode& c1,
                                             const RankCode& c2) {
    const auto i1 = right_idealizer(ctx, c1);
    const auto i2 = right_idealizer(ctx, c2);
    if (i1.dimension <= 1 || i2.dimension <= 1)
        throw ParamError("code_equiv requires right idealizers larger than F_q");
    if (i1.dimension != i2.dimension) return std::nullopt;
    const Standardization s1 = standardize(ctx, c1);
    const Standardization s2 = standardize(ctx, c2);
    const auto w = standard_form_equiv(ctx, s1.F, s2.F);
    if (!w) return std::nullopt;
    CodeWitness cw = compose_witness(ctx, s1, s2, *w);
    if (!verify_code_witness(ctx, c1.f, c2.f, cw))
        throw VerifyError("code_equiv produced a witness that fails verification");
    return cw;
}

/// Closed-form equivalence predicate for psi_{h,t,s} vs psi_{k,t,ell},
/// t in {3, 4}: the congruence class of s * ell^{-1} mod 2t selects whether
/// h must hit +-k or +-k^{-1} under some automorphism.
inline bool nsz_equiv_predicate(const FieldContext& ctx, std::uint32_t t, fe h, long long s, fe k,
                                long long ell) {
    if (t != 3 && t != 4) throw ParamError("nsz_equiv_predicate: t must be 3 or 4");
    if (t != ctx.t()) throw ParamError("nsz_equiv_predicate: t must match the context");
    const std::uint32_t n = ctx.n();
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    const auto li = static_cast<std::uint32_t>(imod(ell, n));
    if (std::gcd<std::uint64_t>(si, n) != 1 || std::gcd<std::uint64_t>(li, n) != 1)
        throw ParamError("nsz_equiv_predicate: s and ell must be coprime to 2t");
    // r = s * ell^{-1} mod n; ell odd and coprime, brute-force the inverse
    std::uint32_t linv = 0;
    for (std::uint32_t c = 1; c < n; ++c)
        if ((c * li) % n == 1) {
            linv = c;
            break;
        }
    const std::uint32_t r = (si * linv) % n;
    bool use_inverse;
    if (t == 3) {
        use_inverse = (r == 5);  // s = -ell
    } else {
        use_inverse = (r == 7 || r == 5);  // s = -ell or s = 5 ell
    }
    const fe target = use_inverse ? ctx.inv(k) : k;
    const fe neg_target = ctx.neg(target);
    for (std::uint32_t j = 0; j < ctx.degree(); ++j) {
        const fe hr = ctx.p_automorphism(h, j);
        if (hr == target || hr == neg_target) return true;
    }
    return false;
}

// --- determinant identities ---

struct DetIdentityResult {
    fe computed = 0;
    fe closed_form = 0;
    bool equal = false;
    bool equal_up_to_sign = false;  // computed == closed_form or == -closed_form
};

inline fe det_mat(const FieldContext& ctx, FeMat m) {
    fe det = 1;
    for (std::size_t col = 0; col < m.cols; ++col) {
        std::size_t pr = col;
        while (pr < m.rows && m.at(pr, col) == 0) ++pr;
        if (pr == m.rows) return 0;
        if (pr != col) {
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(col, j), m.at(pr, j));
            det = ctx.neg(det);
        }
        det = ctx.mul(det, m.at(col, col));
        const fe piv_inv = ctx.inv(m.at(col, col));
        for (std::size_t i = col + 1; i < m.rows; ++i) {
            const fe f = ctx.mul(piv_inv, m.at(i, col));
            if (!f) continue;
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = ctx.sub(m.at(i, j), ctx.mul(f, m.at(col, j)));
        }
    }
    return det;
}

/// The 3x3 matrix A_{h,k,s} (primed: A'_{h,k,s}) of the t = 3 antidiagonal
/// linear system, its determinant, and the closed form
/// h^{1+q^{2s}} (h^{1+q^{2s}}-1)(h+h^2)(h+h^{q^s}) (k^{q^s+q^{3s}+q^{5s}}+1)^3.
inline DetIdentityResult det_identity_t3(const FieldContext& ctx, fe h, fe k, long long s,
                                         bool primed) {
    if (ctx.t() != 3) throw ParamError("det_identity_t3 requires t = 3");
    const std::uint32_t n = ctx.n();
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    if (std::gcd<std::uint64_t>(si, n) != 1) throw ParamError("det_identity_t3: gcd(s, 6) must be 1");
    detail::require_norm_minus_one(ctx, h, 3, "det_identity_t3 (h)");
    detail::require_norm_minus_one(ctx, k, 3, "det_identity_t3 (k)");

    const fe K1 = ctx.frobenius(k, si), K2 = ctx.frobenius(k, 2 * si), K3 = ctx.frobenius(k, 3 * si),
             K4 = ctx.frobenius(k, 4 * si), K5 = ctx.frobenius(k, 5 * si);
    const fe H2s = ctx.mul(h, ctx.frobenius(h, 2 * si));  // h^{1+q^{2s}}
    const fe A = ctx.sub(1, H2s);                         // 1 - h^{1+q^{2s}}
    const fe B = ctx.add(h, ctx.mul(h, h));               // h + h^2
    const fe C = ctx.mul(H2s, ctx.add(h, ctx.frobenius(h, si)));

    FeMat m(3, 3);
    auto sq = [&](fe v) { return ctx.mul(v, v); };
    if (!primed) {
        m.at(0, 0) = ctx.mul(ctx.mul(K1, K3), ctx.mul(A, ctx.add(K1, K2)));
        m.at(0, 1) = ctx.mul(B, ctx.add(K3, sq(K3)));
        m.at(0, 2) = ctx.mul(C, ctx.sub(1, ctx.mul(K5, K1)));
        m.at(1, 0) = ctx.mul(A, ctx.add(K1, sq(K1)));
        m.at(1, 1) = ctx.mul(B, ctx.sub(1, ctx.mul(K3, K5)));
        m.at(1, 2) = ctx.mul(ctx.mul(K5, K1), ctx.mul(C, ctx.add(K5, k)));
        m.at(2, 0) = ctx.mul(A, ctx.sub(1, ctx.mul(K1, K3)));
        m.at(2, 1) = ctx.mul(ctx.mul(K3, K5), ctx.mul(B, ctx.add(K3, K4)));
        m.at(2, 2) = ctx.mul(C, ctx.add(K5, sq(K5)));
    } else {
        m.at(0, 0) = ctx.mul(A, ctx.sub(1, ctx.mul(K1, K5)));
        m.at(0, 1) = ctx.mul(B, ctx.add(K3, sq(K3)));
        m.at(0, 2) = ctx.mul(ctx.mul(K5, K3), ctx.mul(C, ctx.add(K5, K4)));
        m.at(1, 0) = ctx.mul(ctx.mul(K1, K5), ctx.mul(A, ctx.add(K1, k)));
        m.at(1, 1) = ctx.mul(B, ctx.sub(1, ctx.mul(K3, K1)));
        m.at(1, 2) = ctx.mul(C, ctx.add(K5, sq(K5)));
        m.at(2, 0) = ctx.mul(A, ctx.add(K1, sq(K1)));
        m.at(2, 1) = ctx.mul(ctx.mul(K3, K1), ctx.mul(B, ctx.add(K3, K2)));
        m.at(2, 2) = ctx.mul(C, ctx.sub(1, ctx.mul(K5, K3)));
    }

    DetIdentityResult res;
    res.computed = det_mat(ctx, m);
    const fe kfac = ctx.add(ctx.mul(ctx.mul(K1, K3), K5), 1);
    res.closed_form = ctx.mul(ctx.mul(ctx.mul(H2s, ctx.sub(H2s, 1)), ctx.mul(B, ctx.add(h, ctx.frobenius(h, si)))),
                              ctx.mul(ctx.mul(kfac, kfac), kfac));
    res.equal = res.computed == res.closed_form;
    res.equal_up_to_sign = res.equal || res.computed == ctx.neg(res.closed_form);
    return res;
}

enum class DetCaseT4 { S, MinusS, ThreeS, FiveS };

/// The 4x4 system matrices of the t = 4 cases and the closed form
/// -+Tr_{q^8/q}(k^{q^s+1} + k^{q^{3s}+1}) h^{2-q^{5s}-q^{7s}} (sign + only
/// in the 3s case).
inline DetIdentityResult det_identity_t4(const FieldContext& ctx, fe h, fe k, long long s,
                                         DetCaseT4 kase) {
    if (ctx.t() != 4) throw ParamError("det_identity_t4 requires t = 4");
    const std::uint32_t n = ctx.n();
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    if (std::gcd<std::uint64_t>(si, n) != 1) throw ParamError("det_identity_t4: gcd(s, 8) must be 1");
    detail::require_norm_minus_one(ctx, h, 4, "det_identity_t4 (h)");
    detail::require_norm_minus_one(ctx, k, 4, "det_identity_t4 (k)");

    const fe H5 = ctx.mul(h, ctx.inv(ctx.frobenius(h, 5 * si)));  // h^{1-q^{5s}}
    const fe H7 = ctx.mul(h, ctx.inv(ctx.frobenius(h, 7 * si)));  // h^{1-q^{7s}}
    auto Kd = [&](std::uint32_t a, std::uint32_t b) {             // k^{q^{as}-q^{bs}}
        return ctx.mul(ctx.frobenius(k, static_cast<long long>(a) * si),
                       ctx.inv(ctx.frobenius(k, static_cast<long long>(b) * si)));
    };
    const fe N = ctx.minus_one();
    auto neg = [&](fe v) { return ctx.mul(N, v); };

    FeMat m(4, 4);
    switch (kase) {
        case DetCaseT4::S:
            m.at(0, 0) = 1;  m.at(0, 1) = Kd(3, 2);       m.at(0, 2) = ctx.mul(H5, Kd(5, 2));  m.at(0, 3) = H7;
            m.at(1, 0) = 1;  m.at(1, 1) = 1;              m.at(1, 2) = neg(ctx.mul(Kd(5, 4), H5));
            m.at(1, 3) = neg(ctx.mul(H7, Kd(7, 4)));
            m.at(2, 0) = neg(Kd(1, 6)); m.at(2, 1) = 1;   m.at(2, 2) = neg(H5);
            m.at(2, 3) = ctx.mul(H7, Kd(7, 6));
            m.at(3, 0) = Kd(1, 0); m.at(3, 1) = neg(Kd(3, 0)); m.at(3, 2) = neg(H5); m.at(3, 3) = H7;
            break;
        case DetCaseT4::MinusS:
            m.at(0, 0) = 1;  m.at(0, 1) = neg(Kd(3, 6));  m.at(0, 2) = neg(ctx.mul(H5, Kd(5, 6)));
            m.at(0, 3) = H7;
            m.at(1, 0) = 1;  m.at(1, 1) = 1;              m.at(1, 2) = ctx.mul(Kd(5, 0), H5);
            m.at(1, 3) = ctx.mul(H7, Kd(7, 0));
            m.at(2, 0) = Kd(1, 2); m.at(2, 1) = 1;        m.at(2, 2) = neg(H5);
            m.at(2, 3) = neg(ctx.mul(H7, Kd(7, 2)));
            m.at(3, 0) = neg(Kd(1, 4)); m.at(3, 1) = Kd(3, 4); m.at(3, 2) = neg(H5); m.at(3, 3) = H7;
            break;
        case DetCaseT4::ThreeS:
            m.at(0, 0) = 1;  m.at(0, 1) = neg(Kd(3, 2));  m.at(0, 2) = neg(ctx.mul(H5, Kd(5, 2)));
            m.at(0, 3) = H7;
            m.at(1, 0) = 1;  m.at(1, 1) = 1;              m.at(1, 2) = ctx.mul(Kd(5, 4), H5);
            m.at(1, 3) = ctx.mul(H7, Kd(7, 4));
            m.at(2, 0) = Kd(1, 6); m.at(2, 1) = 1;        m.at(2, 2) = neg(H5);
            m.at(2, 3) = neg(ctx.mul(H7, Kd(7, 6)));
            m.at(3, 0) = neg(Kd(1, 0)); m.at(3, 1) = Kd(3, 0); m.at(3, 2) = neg(H5); m.at(3, 3) = H7;
            break;
        case DetCaseT4::FiveS:
            m.at(0, 0) = 1;  m.at(0, 1) = Kd(3, 6);       m.at(0, 2) = ctx.mul(H5, Kd(5, 6));
            m.at(0, 3) = H7;
            m.at(1, 0) = 1;  m.at(1, 1) = 1;              m.at(1, 2) = neg(ctx.mul(Kd(5, 0), H5));
            m.at(1, 3) = neg(ctx.mul(H7, Kd(7, 0)));
            m.at(2, 0) = neg(Kd(1, 2)); m.at(2, 1) = 1;   m.at(2, 2) = neg(H5);
            m.at(2, 3) = ctx.mul(H7, Kd(7, 2));
            m.at(3, 0) = Kd(1, 4); m.at(3, 1) = neg(Kd(3, 4)); m.at(3, 2) = neg(H5); m.at(3, 3) = H7;
            break;
    }

    DetIdentityResult res;
    res.computed = det_mat(ctx, m);
    const fe tr_arg = ctx.add(ctx.mul(ctx.frobenius(k, si), k), ctx.mul(ctx.frobenius(k, 3 * si), k));
    const fe Tr = ctx.trace(tr_arg, 1);
    const fe hpow = ctx.mul(ctx.mul(h, h), ctx.inv(ctx.mul(ctx.frobenius(h, 5 * si), ctx.frobenius(h, 7 * si))));
    fe cf = ctx.mul(Tr, hpow);
    if (kase != DetCaseT4::ThreeS) cf = neg(cf);
    res.closed_form = cf;
    res.equal = res.computed == res.closed_form;
    res.equal_up_to_sign = res.equal || res.computed == ctx.neg(res.closed_form);
    return res;
}

// --- classification census ---

struct CensusEdge {
    std::size_t from = 0, to = 0;  // indices into pairs; witness links pair[from] -> pair[to]
    CodeWitness witness;
};

struct CensusClass {
    std::size_t representative = 0;
    std::vector<std::size_t> members;
    std::vector<CensusEdge> edges;
};

struct CensusRecord {
    FieldParams params;
    NszVariant variant = NszVariant::SEC4;
    std::vector<fe> fiber;                                // h values, canonical order
    std::vector<std::pair<std::size_t, long long>> pairs;  // (h index, s)
    std::vector<CensusClass> classes;                     // computational partition
    std::vector<std::vector<std::size_t>> predicted;      // predicted partition
    bool agreement = false;
    bool all_mrd = false;
    std::size_t class_count = 0;
    std::uint64_t lower_bound = 0;
    // set on disagreement: the offending pair indices and the two verdicts
    std::optional<std::array<std::size_t, 2>> mismatch;
};

inline std::uint64_t census_lower_bound(const FieldParams& params) {
    const std::uint64_t qt = ipow(params.q(), params.t);
    return euler_phi(params.t) * (qt + 1) / (8ull * params.r * params.t);
}

/// Enumerates all (h, s) with h in norm_fiber(-1, t) and 0 < s < 2t coprime,
/// partitions them by the closed-form predicate and independently by the
/// standard-form search, and reports both partitions with witnesses on every
/// intra-class edge. A predicate/search mismatch is recorded, never
/// reconciled.
inline CensusRecord census(const FieldContext& ctx, NszVariant variant = NszVariant::SEC4,
                           std::uint64_t budget = 1ull << 30, unsigned workers = 1) {
    const std::uint32_t t = ctx.t();
    if (t != 3 && t != 4) throw ParamError("census requires t in {3, 4}");
    if (ctx.q() % 2 == 0) throw ParamError("census requires odd q");

    CensusRecord rec;
    rec.params = ctx.params();
    rec.variant = variant;
    rec.fiber = ctx.norm_fiber(ctx.minus_one(), t);
    std::vector<long long> svals;
    for (std::uint32_t s = 1; s < 2 * t; ++s)
        if (std::gcd(s, 2 * t) == 1) svals.push_back(s);
    for (std::size_t hi = 0; hi < rec.fiber.size(); ++hi)
        for (long long s : svals) rec.pairs.push_back({hi, s});

    const std::uint64_t m = rec.pairs.size();
    if (m * m > budget)
        throw BudgetError("census cost " + std::to_string(m * m) + " exceeds budget " +
                          std::to_string(budget));

    // predicted partition: union-find over the closed-form predicate
    std::vector<std::size_t> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto [hi, s] = rec.pairs[i];
            const auto [ki, ell] = rec.pairs[j];
            if (nsz_equiv_predicate(ctx, t, rec.fiber[hi], s, rec.fiber[ki], ell)) {
                const auto a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    {
        std::vector<std::vector<std::size_t>> blocks(m);
        for (std::size_t i = 0; i < m; ++i) blocks[find(i)].push_back(i);
        for (auto& blk : blocks)
            if (!blk.empty()) rec.predicted.push_back(std::move(blk));
    }

    // computational partition: standardize every pair once, then match each
    // pair against class representatives via the standard-form search
    std::vector<RankCode> codes;
    std::vector<Standardization> stds;
    codes.reserve(m);
    stds.reserve(m);
    rec.all_mrd = true;
    for (const auto& [hi, s] : rec.pairs) {
        codes.push_back(nsz_code(ctx, t, rec.fiber[hi], s, variant));
        if (!is_mrd(ctx, codes.back(), workers)) rec.all_mrd = false;
        stds.push_back(standardize(ctx, codes.back()));
    }
    for (std::size_t i = 0; i < m; ++i) {
        bool placed = false;
        for (auto& cls : rec.classes) {
            const std::size_t r = cls.representative;
            const auto w = standard_form_equiv(ctx, stds[r].F, stds[i].F);
            if (!w) continue;
            CodeWitness cw = compose_witness(ctx, stds[r], stds[i], *w);
            if (!verify_code_witness(ctx, codes[r].f, codes[i].f, cw))
                throw VerifyError("census witness failed verification");
            cls.members.push_back(i);
            cls.edges.push_back(CensusEdge{r, i, cw});
            placed = true;
            break;
        }
        if (!placed) rec.classes.push_back(CensusClass{i, {i}, {}});
    }
    rec.class_count = rec.classes.size();
    rec.lower_bound = census_lower_bound(ctx.params());

    // agreement: both partitions as sorted block families
    auto canon = [](std::vector<std::vector<std::size_t>> blocks) {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end());
        return blocks;
    };
    std::vector<std::vector<std::size_t>> comp;
    for (const auto& cls : rec.classes) comp.push_back(cls.members);
    const auto a = canon(rec.predicted), b = canon(comp);
    rec.agreement = (a == b);
    if (!rec.agreement) {
        // locate one offending pair of indices for the reproducer
        for (std::size_t i = 0; i < m && !rec.mismatch; ++i)
            for (std::size_t j = i + 1; j < m && !rec.mismatch; ++j) {
                auto same_in = [&](const std::vector<std::vector<std::size_t>>& blocks) {
                    for (const auto& blk : blocks) {
                        const bool has_i = std::find(blk.begin(), blk.end(), i) != blk.end();
                        const bool has_j = std::find(blk.begin(), blk.end(), j) != blk.end();
                        if (has_i || has_j) return has_i && has_j;
                    }
                    return false;
                };
                if (same_in(a) != same_in(b)) rec.mismatch = {{i, j}};
            }
    }
    return rec;
}

// --- screening against known families ---

enum class ScreenKind { InequivalentByIdealizer, InequivalentBySearch, Equivalent, Inconclusive };

struct ScreenVerdict {
    ScreenKind kind = ScreenKind::Inconclusive;
    std::size_t right_dim_a = 0, right_dim_b = 0;
    std::size_t left_dim_a = 0, left_dim_b = 0;
    std::optional<CodeWitness> witness;
};

/// Idealizer dimensions first (codes with non-isomorphic idealizers cannot
/// be equivalent); on a tie runs the full standard-form decision when both
/// sides standardize.
inline ScreenVerdict inequivalence_screen(const FieldContext& ctx, const RankCode& a,
                                          const RankCode& b) {
    ScreenVerdict v;
    v.right_dim_a = right_idealizer(ctx, a).dimension;
    v.right_dim_b = right_idealizer(ctx, b).dimension;
    v.left_dim_a = left_idealizer(ctx, a).dimension;
    v.left_dim_b = left_idealizer(ctx, b).dimension;
    if (v.right_dim_a != v.right_dim_b || v.left_dim_a != v.left_dim_b) {
        v.kind = ScreenKind::InequivalentByIdealizer;
        return v;
    }
    if (v.right_dim_a <= 1) {
        v.kind = ScreenKind::Inconclusive;
        return v;
    }
    const auto w = code_equiv(ctx, a, b);
    if (w) {
        v.kind = ScreenKind::Equivalent;
        v.witness = w;
    } else {
        v.kind = ScreenKind::InequivalentBySearch;
    }
    return v;
}

}  // namespace mrdlab
