#pragma once

#include <random>

#include "mrdlab/field.hpp"

namespace testing_support {

using namespace mrdlab;

// one shared context per parameter set; construction is deterministic so
// sharing across test cases is safe
inline const FieldContext& ctx_q3_t3() {
    static const FieldContext ctx(FieldParams{3, 1, 3});
    return ctx;
}

inline const FieldContext& ctx_q3_t4() {
    static const FieldContext ctx(FieldParams{3, 1, 4});
    return ctx;
}

inline const FieldContext& ctx_q5_t3() {
    static const FieldContext ctx(FieldParams{5, 1, 3});
    return ctx;
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    fe element(const FieldContext& ctx) {
        return static_cast<fe>(std::uniform_int_distribution<std::uint64_t>(0, ctx.card() - 1)(eng));
    }

    fe nonzero(const FieldContext& ctx) {
        return static_cast<fe>(std::uniform_int_distribution<std::uint64_t>(1, ctx.card() - 1)(eng));
    }

    std::uint64_t index(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(eng);
    }
};

}  // namespace testing_support
