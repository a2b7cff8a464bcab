#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mrdlab/families.hpp"
#include "mrdlab/geometry.hpp"

using namespace mrdlab;
using testing_support::Rng;
using testing_support::ctx_q3_t3;
using testing_support::ctx_q3_t4;

TEST_CASE("linear set of a scattered monomial") {
    const auto& ctx = ctx_q3_t3();
    const auto rec = linear_set(ctx, QPoly::monomial(ctx, 1));
    CHECK(rec.point_count == 364);  // (3^6 - 1)/2
    CHECK(rec.scattered);
    for (const auto& [pt, w] : rec.points) CHECK(w == 1);

    // monomials with coprime exponents give the same point set
    const auto rec5 = linear_set(ctx, QPoly::monomial(ctx, 5));
    CHECK(rec.points == rec5.points);

    // x^{q^2} is F_{q^2}-semilinear: weights 2 appear
    const auto rec2 = linear_set(ctx, QPoly::monomial(ctx, 2));
    CHECK_FALSE(rec2.scattered);
    bool has2 = false;
    for (const auto& [pt, w] : rec2.points) has2 |= (w == 2);
    CHECK(has2);
}

TEST_CASE("weight-sum identity") {
    const auto& ctx = ctx_q3_t3();
    Rng rng(101);
    for (int trial = 0; trial < 6; ++trial) {
        QPoly f = QPoly::zero(ctx);
        f.c[1 + rng.index(ctx.n() - 1)] = rng.nonzero(ctx);
        f.c[1 + rng.index(ctx.n() - 1)] = rng.element(ctx);
        const auto rec = linear_set(ctx, f);
        std::uint64_t total = 0;
        for (const auto& [pt, w] : rec.points) total += ipow(ctx.q(), w) - 1;
        CHECK(total == ctx.card() - 1);
    }
    // worker count does not change the record
    const QPoly f = nsz_poly(ctx, 3, ctx.norm_fiber(ctx.minus_one(), 3)[0], 1);
    const auto r1 = linear_set(ctx, f, 1);
    const auto r4 = linear_set(ctx, f, 4);
    CHECK(r1.points == r4.points);
}

TEST_CASE("canonical subgeometry") {
    const auto& ctx = ctx_q3_t4();
    const auto sigma = sigma_subgeometry(ctx);
    CHECK(sigma.size() == (ctx.card() - 1) / (ctx.q() - 1));

    // x in F_q gives the all-ones point
    Point8 ones;
    ones.fill(1);
    CHECK(std::binary_search(sigma.begin(), sigma.end(), ones));

    // sigma_hat fixes Sigma pointwise
    Rng rng(103);
    for (int i = 0; i < 100; ++i) {
        const auto& P = sigma[rng.index(sigma.size())];
        const long long u = 1 + static_cast<long long>(rng.index(7));
        CHECK(normalize_point8(ctx, sigma_hat(ctx, P, u)) == P);
    }

    CHECK_THROWS_AS(sigma_subgeometry(ctx_q3_t3()), ParamError);
}

TEST_CASE("sigma_hat basics") {
    const auto& ctx = ctx_q3_t4();
    Point8 e0{};
    e0[0] = 1;
    Point8 e1{};
    e1[1] = 1;
    CHECK(sigma_hat(ctx, e0, 1) == e1);

    Rng rng(107);
    for (int i = 0; i < 20; ++i) {
        Point8 v;
        for (auto& c : v) c = rng.element(ctx);
        if (v == Point8{}) continue;
        // sigma_hat^8 acts coordinatewise as the q^8-power, the identity
        CHECK(sigma_hat(ctx, v, 8) == v);
    }
}

TEST_CASE("gamma_s subspace") {
    const auto& ctx = ctx_q3_t4();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    const auto G = gamma_s(ctx, fiber[0], 1);
    CHECK(G.projective_dimension() == 5);
    CHECK(G.forms.size() == 2);

    // the s = 3 form permutes indices as stated:
    // x_3 + x_1 - h^{1-q^7} x_7 + h^{1-q^5} x_5
    const fe h = fiber[0];
    const auto G3 = gamma_s(ctx, h, 3);
    const auto& L2 = G3.forms[1];
    CHECK(L2[3] == 1);
    CHECK(L2[1] == 1);
    CHECK(L2[7] == ctx.neg(ctx.mul(h, ctx.inv(ctx.frobenius(h, 15)))));
    CHECK(L2[5] == ctx.mul(h, ctx.inv(ctx.frobenius(h, 21))));

    // gamma_s is disjoint from Sigma (this h; exhaustive sweep in acceptance)
    const auto sigma = sigma_subgeometry(ctx);
    for (const auto& P : sigma) CHECK_FALSE(G.contains(ctx, P));

    CHECK_THROWS_AS(gamma_s(ctx, fiber[0], 2), ParamError);
    CHECK_THROWS_AS(gamma_s(ctx, 1, 1), ParamError);
    CHECK_THROWS_AS(gamma_s(ctx_q3_t3(), 1, 1), ParamError);
}

TEST_CASE("subspace image under sigma_hat") {
    const auto& ctx = ctx_q3_t4();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    const fe h = fiber[7];
    const auto G = gamma_s(ctx, h, 1);

    // u = 0 is the identity
    CHECK(subspace_image_under_sigma(ctx, G, 0).forms == G.forms);

    // the image matches the printed twisted system for u in {s,3s,5s,7s}:
    // x_u = 0, x_{s+u} + x_{3s+u} - h^{q^u-q^{5s+u}} x_{5s+u} + h^{q^u-q^{7s+u}} x_{7s+u} = 0
    const long long s = 1;
    for (long long u : {1, 3, 5, 7}) {
        const auto img = subspace_image_under_sigma(ctx, G, u);
        CHECK(img.projective_dimension() == 5);
        Point8 m1{};
        m1[u % 8] = 1;
        Point8 m2{};
        m2[(s + u) % 8] = 1;
        m2[(3 * s + u) % 8] = 1;
        m2[(5 * s + u) % 8] =
            ctx.neg(ctx.mul(ctx.frobenius(h, u), ctx.inv(ctx.frobenius(h, 5 * s + u))));
        m2[(7 * s + u) % 8] = ctx.mul(ctx.frobenius(h, u), ctx.inv(ctx.frobenius(h, 7 * s + u)));
        const ProjSubspace printed{{m1, m2}};
        // same subspace: stacking all four forms must keep rank 2
        FeMat stack(4, 8);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 8; ++c) {
                stack.at(r, c) = img.forms[r][c];
                stack.at(2 + r, c) = printed.forms[r][c];
            }
        CHECK(gauss_rank(ctx, stack) == 2);
    }

    // naturality on points: P in S iff sigma_hat(P) in image(S)
    Rng rng(109);
    const auto img2 = subspace_image_under_sigma(ctx, G, 3);
    for (int i = 0; i < 200; ++i) {
        Point8 v;
        for (auto& c : v) c = rng.element(ctx);
        if (v == Point8{}) continue;
        CHECK(G.contains(ctx, v) == img2.contains(ctx, sigma_hat(ctx, v, 3)));
    }
}

TEST_CASE("intersection dimensions") {
    const auto& ctx = ctx_q3_t4();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    // sampled here; the full (h, s, u) sweep runs in the acceptance suite
    for (std::size_t i : {0u, 17u, 81u}) {
        for (long long s : {1, 3, 5, 7}) {
            const auto rep = intersect_dims(ctx, fiber[i], s);
            for (const auto& [u, d] : rep.pairwise) CHECK(d == 3);
            for (const auto& [u, d] : rep.triple) CHECK(d == 1);
            CHECK(rep.gamma_exponent != 1);
            CHECK(rep.gamma_exponent != 2);
        }
    }

    // sigma-naturality of intersections: dim is invariant under applying
    // sigma_hat to both subspaces
    const auto G = gamma_s(ctx, fiber[3], 1);
    const auto Gu = subspace_image_under_sigma(ctx, G, 3);
    const int d0 = intersection_dimension(ctx, {&G, &Gu});
    const auto Gs = subspace_image_under_sigma(ctx, G, 2);
    const auto Gus = subspace_image_under_sigma(ctx, Gu, 2);
    CHECK(intersection_dimension(ctx, {&Gs, &Gus}) == d0);
}

TEST_CASE("projection of Sigma from gamma_s") {
    const auto& ctx = ctx_q3_t4();
    const auto fiber = ctx.norm_fiber(ctx.minus_one(), 4);
    for (std::size_t i : {0u, 40u}) {
        for (long long s : {1, 3}) {
            const auto proj = project_from_gamma(ctx, fiber[i], s);
            CHECK(proj.point_count == (ctx.card() - 1) / (ctx.q() - 1));
            const auto ls = linear_set(ctx, nsz_poly(ctx, 4, fiber[i], s));
            CHECK(projection_matches_linear_set(ctx, proj, ls));
        }
    }

    // degenerate center: a subspace containing a Sigma point is rejected
    Point8 ones;
    ones.fill(1);
    Point8 l1{};  // x_0 - x_1 = 0 contains the all-ones point
    l1[0] = 1;
    l1[1] = ctx.minus_one();
    Point8 l2{};  // x_2 - x_3 = 0 as well
    l2[2] = 1;
    l2[3] = ctx.minus_one();
    const ProjSubspace bad{{l1, l2}};
    CHECK(bad.contains(ctx, ones));
    CHECK_THROWS_AS(project_from(ctx, bad, 1), ParamError);
}

TEST_CASE("brute-force projective equivalence of linear sets") {
    const auto& ctx = ctx_q3_t3();
    const auto l1 = linear_set(ctx, QPoly::monomial(ctx, 1));
    const auto l5 = linear_set(ctx, QPoly::monomial(ctx, 5));

    // equal point sets: the identity witness is found immediately
    const auto w = pgammal_equiv_bruteforce(ctx, l1, l5, 1ull << 40);
    REQUIRE(w.has_value());
    CHECK(w->rho == 0);
    CHECK((w->M == Mat2{1, 0, 0, 1}));
    CHECK(verify_pgl_witness(ctx, *w, l1, l5));

    // a set vs itself: identity
    const auto wi = pgammal_equiv_bruteforce(ctx, l1, l1, 1ull << 40);
    REQUIRE(wi.has_value());
    CHECK(verify_pgl_witness(ctx, *wi, l1, l1));

    // n = 8 exceeds the default budget
    const auto& c8 = ctx_q3_t4();
    const auto big = linear_set(c8, QPoly::monomial(c8, 1));
    CHECK_THROWS_AS(pgammal_equiv_bruteforce(c8, big, big, 1ull << 33), BudgetError);
}
