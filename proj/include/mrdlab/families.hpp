#pragma once

#include <numeric>
#include <optional>
#include <string>

#include "mrdlab/rank_code.hpp"

namespace mrdlab {

enum class Family { G, H2, Z6, K, LZ, LMTZ, NSZ, H_std, BZZ };

/// The two circulating readings of the third psi coefficient: EQ5 is
/// +h^{1+q^s}, SEC4 is -h^{1-q^{s(t+1)}}. On the valid parameter set
/// (q odd, norm -1, s odd) they coincide identically.
enum class NszVariant { EQ5, SEC4 };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::G: return "G";
        case Family::H2: return "H2";
        case Family::Z6: return "Z6";
        case Family::K: return "K";
        case Family::LZ: return "LZ";
        case Family::LMTZ: return "LMTZ";
        case Family::NSZ: return "NSZ";
        case Family::H_std: return "H_std";
        case Family::BZZ: return "BZZ";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    for (Family f : {Family::G, Family::H2, Family::Z6, Family::K, Family::LZ, Family::LMTZ,
                     Family::NSZ, Family::H_std, Family::BZZ})
        if (s == family_name(f)) return f;
    throw ParamError("unknown family tag: " + s);
}

/// Parameters of one family instance. Which fields apply depends on the tag:
/// s for G/H2/K/NSZ/H_std, t for LMTZ/NSZ, element = eta/zeta/delta/h.
struct FamilySpec {
    Family family = Family::NSZ;
    long long s = 1;
    std::uint32_t t = 3;
    std::optional<fe> element;  // h, eta, delta or zeta, depending on family
    NszVariant variant = NszVariant::SEC4;
};

namespace detail {

inline void require_odd_q(const FieldContext& ctx, const char* fam) {
    if (ctx.q() % 2 == 0) throw ParamError(std::string(fam) + " requires odd q");
}

inline void require_norm_minus_one(const FieldContext& ctx, fe h, std::uint32_t d, const char* fam) {
    if (ctx.norm(h, d) != ctx.minus_one())
        throw ParamError(std::string(fam) + ": element norm to F_{q^" + std::to_string(d) +
                         "} must be -1");
}

}  // namespace detail

/// Gabidulin code G_{2,s} = <x, x^{q^s}>; requires gcd(s, n) = 1.
inline RankCode gabidulin(const FieldContext& ctx, long long s) {
    const auto si = static_cast<std::uint32_t>(imod(s, ctx.n()));
    if (std::gcd<std::uint64_t>(si, ctx.n()) != 1) throw ParamError("gabidulin: gcd(s, n) must be 1");
    return RankCode::make(ctx, QPoly::monomial(ctx, si));
}

/// Twisted Gabidulin H_{2,s,eta} = <x, eta x^{q^s} + x^{q^{(n-1)s}}>;
/// requires gcd(s, n) = 1 and N_{q^n/q}(eta) not in {0, 1}.
inline RankCode twisted_gabidulin(const FieldContext& ctx, long long s, fe eta) {
    const std::uint32_t n = ctx.n();
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    if (std::gcd<std::uint64_t>(si, n) != 1) throw ParamError("twisted_gabidulin: gcd(s, n) must be 1");
    const fe nrm = ctx.norm(eta, 1);
    if (nrm == 0 || nrm == 1) throw ParamError("twisted_gabidulin: N_{q^n/q}(eta) must avoid {0, 1}");
    QPoly f = QPoly::zero(ctx);
    f.c[si] = eta;
    const auto i2 = static_cast<std::uint32_t>((static_cast<std::uint64_t>(n - 1) * si) % n);
    f.c[i2] = ctx.add(f.c[i2], 1);
    return RankCode::make(ctx, f);
}

/// Roots of z^2 + z - 1 in F_{q^n} (they lie in the F_{q^2} subfield),
/// ascending.
inline std::vector<fe> z6_roots(const FieldContext& ctx) {
    std::vector<fe> roots;
    for (fe z : ctx.subfield_elements(2))
        if (ctx.add(ctx.mul(z, z), ctx.sub(z, 1)) == 0) roots.push_back(z);
    return roots;
}

/// Z_{6,zeta} = <x, x^q + x^{q^3} + zeta x^{q^5}> at n = 6, q odd, with
/// zeta^2 + zeta = 1.
inline RankCode z6(const FieldContext& ctx, fe zeta) {
    if (ctx.n() != 6) throw ParamError("z6 requires n = 6");
    detail::require_odd_q(ctx, "z6");
    if (ctx.add(ctx.mul(zeta, zeta), ctx.sub(zeta, 1)) != 0)
        throw ParamError("z6: zeta^2 + zeta must equal 1");
    QPoly f = QPoly::zero(ctx);
    f.c[1] = 1;
    f.c[3] = 1;
    f.c[5] = zeta;
    return RankCode::make(ctx, f);
}

/// K_{n,s,delta} = <x, delta x^{q^s} + x^{q^{s+n/2}}> for n in {6, 8};
/// requires gcd(s, n/2) = 1 and N_{q^n/q^{n/2}}(delta) not in {0, 1}.
/// Beyond these the constructor asserts nothing: MRD status is checked
/// empirically when assert_mrd is set.
inline RankCode csajbok_k(const FieldContext& ctx, long long s, fe delta, bool assert_mrd = false) {
    const std::uint32_t n = ctx.n();
    if (n != 6 && n != 8) throw ParamError("csajbok_k requires n in {6, 8}");
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    if (std::gcd<std::uint64_t>(si, n / 2) != 1) throw ParamError("csajbok_k: gcd(s, n/2) must be 1");
    const fe nrm = ctx.norm(delta, n / 2);
    if (nrm == 0 || nrm == 1)
        throw ParamError("csajbok_k: N_{q^n/q^{n/2}}(delta) must avoid {0, 1}");
    QPoly f = QPoly::zero(ctx);
    f.c[si] = delta;
    const std::uint32_t i2 = (si + n / 2) % n;
    f.c[i2] = ctx.add(f.c[i2], 1);
    auto code = RankCode::make(ctx, f);
    if (assert_mrd && !is_mrd(ctx, code)) throw ParamError("csajbok_k: instance is not MRD");
    return code;
}

/// First delta (in canonical order) giving an MRD K-family instance.
inline std::optional<fe> find_mrd_delta(const FieldContext& ctx, long long s) {
    for (std::uint64_t d = 1; d < ctx.card(); ++d) {
        const fe nrm = ctx.norm(static_cast<fe>(d), ctx.n() / 2);
        if (nrm == 0 || nrm == 1) continue;
        auto code = csajbok_k(ctx, s, static_cast<fe>(d));
        if (is_mrd(ctx, code)) return static_cast<fe>(d);
    }
    return std::nullopt;
}

/// C_t = <x, x^q + x^{q^{t-1}} - x^{q^{t+1}} + x^{q^{2t-1}}>; q odd with
/// either t >= 3 odd and q = 1 (mod 4), or t even.
inline RankCode lz_code(const FieldContext& ctx) {
    detail::require_odd_q(ctx, "lz_code");
    const std::uint32_t t = ctx.t();
    if (t % 2 == 1 && ctx.q() % 4 != 1)
        throw ParamError("lz_code: odd t requires q = 1 (mod 4)");
    QPoly f = QPoly::zero(ctx);
    f.c[1] = 1;
    f.c[t - 1] = ctx.add(f.c[t - 1], 1);
    f.c[t + 1] = ctx.add(f.c[t + 1], ctx.minus_one());
    f.c[2 * t - 1] = ctx.add(f.c[2 * t - 1], 1);
    return RankCode::make(ctx, f);
}

/// psi_{h,t,s} under the selected coefficient reading. Support
/// {s, s(t-1), s(t+1), s(2t-1)} mod n with coefficients
/// (1, 1, -h^{1-q^{s(t+1)}}, h^{1-q^{s(2t-1)}}) (SEC4) or third coefficient
/// +h^{1+q^s} (EQ5). Requires gcd(s, 2t) = 1, N_{q^{2t}/q^t}(h) = -1, q odd.
inline QPoly nsz_poly(const FieldContext& ctx, std::uint32_t t, fe h, long long s,
                      NszVariant variant = NszVariant::SEC4) {
    if (t != ctx.t()) throw ParamError("nsz_poly: t must match the field context");
    detail::require_odd_q(ctx, "nsz_poly");
    const std::uint32_t n = ctx.n();
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    if (std::gcd<std::uint64_t>(si, n) != 1) throw ParamError("nsz_poly: gcd(s, 2t) must be 1");
    detail::require_norm_minus_one(ctx, h, t, "nsz_poly");
    const std::uint32_t e1 = si;
    const std::uint32_t e2 = static_cast<std::uint32_t>((static_cast<std::uint64_t>(si) * (t - 1)) % n);
    const std::uint32_t e3 = static_cast<std::uint32_t>((static_cast<std::uint64_t>(si) * (t + 1)) % n);
    const std::uint32_t e4 = static_cast<std::uint32_t>((static_cast<std::uint64_t>(si) * (2 * t - 1)) % n);
    QPoly f = QPoly::zero(ctx);
    f.c[e1] = 1;
    f.c[e2] = 1;
    if (variant == NszVariant::SEC4)
        f.c[e3] = ctx.neg(ctx.mul(h, ctx.inv(ctx.frobenius(h, e3))));  // -h^{1-q^{s(t+1)}}
    else
        f.c[e3] = ctx.mul(h, ctx.frobenius(h, e1));  // +h^{1+q^s}
    f.c[e4] = ctx.mul(h, ctx.inv(ctx.frobenius(h, e4)));  // +h^{1-q^{s(2t-1)}}
    return f;
}

inline RankCode nsz_code(const FieldContext& ctx, std::uint32_t t, fe h, long long s,
                         NszVariant variant = NszVariant::SEC4) {
    return RankCode::make(ctx, nsz_poly(ctx, t, h, s, variant));
}

/// psi_{h,t} (the s = 1 ancestor); additionally requires h outside F_{q^t}.
inline RankCode lmtz_code(const FieldContext& ctx, std::uint32_t t, fe h) {
    if (ctx.in_subfield(h, t)) throw ParamError("lmtz_code: h must lie outside F_{q^t}");
    return nsz_code(ctx, t, h, 1, NszVariant::SEC4);
}

/// The standard form H_{h,s} = (1-h^{1+q^{2s}}) x^{q^s} + (h+h^2) x^{q^{3s}}
/// + h^{1+q^{2s}} (h+h^{q^s}) x^{q^{5s}} at t = 3; gcd(s, 6) = 1 and
/// N_{q^6/q^3}(h) = -1.
inline RankCode h_standard_form(const FieldContext& ctx, fe h, long long s) {
    if (ctx.t() != 3) throw ParamError("h_standard_form requires t = 3");
    detail::require_odd_q(ctx, "h_standard_form");
    const std::uint32_t n = ctx.n();
    const auto si = static_cast<std::uint32_t>(imod(s, n));
    if (std::gcd<std::uint64_t>(si, n) != 1) throw ParamError("h_standard_form: gcd(s, 6) must be 1");
    detail::require_norm_minus_one(ctx, h, 3, "h_standard_form");
    const fe h_q2s = ctx.mul(h, ctx.frobenius(h, 2 * si));       // h^{1+q^{2s}}
    const fe c1 = ctx.sub(1, h_q2s);                             // 1 - h^{1+q^{2s}}
    const fe c3 = ctx.add(h, ctx.mul(h, h));                     // h + h^2
    const fe c5 = ctx.mul(h_q2s, ctx.add(h, ctx.frobenius(h, si)));
    QPoly f = QPoly::zero(ctx);
    f.c[si] = c1;
    f.c[(3 * si) % n] = c3;
    f.c[(5 * si) % n] = c5;
    return RankCode::make(ctx, f);
}

/// The n = 6 family <x, h^{q-1} x^q - h^{q^2-1} x^{q^2} + x^{q^4} + x^{q^5}>
/// with N_{q^6/q^3}(h) = -1, q odd.
inline RankCode bzz_code(const FieldContext& ctx, fe h) {
    if (ctx.n() != 6) throw ParamError("bzz_code requires n = 6");
    detail::require_odd_q(ctx, "bzz_code");
    detail::require_norm_minus_one(ctx, h, 3, "bzz_code");
    const fe hi = ctx.inv(h);
    QPoly f = QPoly::zero(ctx);
    f.c[1] = ctx.mul(ctx.frobenius(h, 1), hi);            // h^{q-1}
    f.c[2] = ctx.neg(ctx.mul(ctx.frobenius(h, 2), hi));   // -h^{q^2-1}
    f.c[4] = 1;
    f.c[5] = 1;
    return RankCode::make(ctx, f);
}

/// Builds the code described by a FamilySpec against the given context.
inline RankCode build_family(const FieldContext& ctx, const FamilySpec& spec) {
    auto need_elem = [&]() -> fe {
        if (!spec.element) throw ParamError("family requires an element parameter");
        if (*spec.element >= ctx.card()) throw ParamError("element parameter out of range");
        return *spec.element;
    };
    switch (spec.family) {
        case Family::G: return gabidulin(ctx, spec.s);
        case Family::H2: return twisted_gabidulin(ctx, spec.s, need_elem());
        case Family::Z6: {
            if (spec.element) return z6(ctx, *spec.element);
            const auto roots = z6_roots(ctx);
            if (roots.empty()) throw ParamError("z6: no root of z^2 + z - 1 found");
            return z6(ctx, roots.front());
        }
        case Family::K: return csajbok_k(ctx, spec.s, need_elem());
        case Family::LZ: return lz_code(ctx);
        case Family::LMTZ: return lmtz_code(ctx, spec.t, need_elem());
        case Family::NSZ: return nsz_code(ctx, spec.t, need_elem(), spec.s, spec.variant);
        case Family::H_std: return h_standard_form(ctx, need_elem(), spec.s);
        case Family::BZZ: return bzz_code(ctx, need_elem());
    }
    throw ParamError("unknown family");
}

}  // namespace mrdlab
