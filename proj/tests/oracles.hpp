#pragma once

// Independent test oracles. These deliberately avoid the library's primary
// computation paths: rank by exhaustive kernel counting instead of Gaussian
// elimination, idealizers by enumeration instead of linear algebra.

#include "mrdlab/rank_code.hpp"

namespace testing_support {

using namespace mrdlab;

inline std::size_t rank_by_kernel_count(const FieldContext& ctx, const QPoly& f) {
    std::uint64_t kernel = 0;
    for (std::uint64_t e = 0; e < ctx.card(); ++e)
        if (evaluate(ctx, f, static_cast<fe>(e)) == 0) ++kernel;
    std::uint32_t w = 0;
    while (ipow(ctx.q(), w) < kernel) ++w;
    if (ipow(ctx.q(), w) != kernel) throw std::logic_error("kernel size is not a power of q");
    return ctx.n() - w;
}

inline std::size_t min_distance_by_kernel_count(const FieldContext& ctx, const RankCode& code) {
    std::size_t best = ctx.n();
    for (std::uint64_t a = 0; a < ctx.card(); ++a) {
        QPoly w = code.f;
        w.c[0] = ctx.add(w.c[0], static_cast<fe>(a));
        best = std::min(best, rank_by_kernel_count(ctx, w));
    }
    return best;
}

/// Brute-force right idealizer size: the number of (alpha, beta) with
/// f(alpha y + beta f(y)) in span{x, f}.
inline std::uint64_t right_idealizer_size_by_enumeration(const FieldContext& ctx, const RankCode& code) {
    const std::uint32_t e0 = code.f.support().front();
    std::uint64_t count = 0;
    for (std::uint64_t alpha = 0; alpha < ctx.card(); ++alpha)
        for (std::uint64_t beta = 0; beta < ctx.card(); ++beta) {
            QPoly phi = qp_scale(ctx, static_cast<fe>(beta), code.f);
            phi.c[0] = ctx.add(phi.c[0], static_cast<fe>(alpha));
            const QPoly g = compose(ctx, code.f, phi);
            bool ok = true;
            const fe f0 = code.f.c[e0], g0 = g.c[e0];
            for (std::uint32_t k = 1; k < ctx.n() && ok; ++k) {
                if (k == e0) continue;
                ok = ctx.mul(g.c[k], f0) == ctx.mul(g0, code.f.c[k]);
            }
            if (ok) ++count;
        }
    return count;
}

}  // namespace testing_support
