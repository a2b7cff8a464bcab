#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "mrdlab/field.hpp"

namespace mrdlab {

/// A q-polynomial sum c_i x^{q^i} reduced mod x^{q^n} - x, as the dense
/// length-n coefficient vector (c_0, ..., c_{n-1}) over F_{q^n}.
struct QPoly {
    std::vector<fe> c;

    static QPoly zero(const FieldContext& ctx) { return QPoly{std::vector<fe>(ctx.n(), 0)}; }

    static QPoly monomial(const FieldContext& ctx, std::uint32_t i, fe coeff = 1) {
        QPoly f = zero(ctx);
        f.c.at(i % ctx.n()) = coeff;
        return f;
    }

    /// The identity map x.
    static QPoly x(const FieldContext& ctx) { return monomial(ctx, 0); }

    bool is_zero() const {
        for (fe v : c)
            if (v) return false;
        return true;
    }

    std::vector<std::uint32_t> support() const {
        std::vector<std::uint32_t> s;
        for (std::uint32_t i = 0; i < c.size(); ++i)
            if (c[i]) s.push_back(i);
        return s;
    }

    bool operator==(const QPoly&) const = default;
};

inline QPoly qp_add(const FieldContext& ctx, const QPoly& f, const QPoly& g) {
    QPoly h = f;
    for (std::uint32_t i = 0; i < ctx.n(); ++i) h.c[i] = ctx.add(h.c[i], g.c[i]);
    return h;
}

inline QPoly qp_sub(const FieldContext& ctx, const QPoly& f, const QPoly& g) {
    QPoly h = f;
    for (std::uint32_t i = 0; i < ctx.n(); ++i) h.c[i] = ctx.sub(h.c[i], g.c[i]);
    return h;
}

inline QPoly qp_scale(const FieldContext& ctx, fe a, const QPoly& f) {
    QPoly h = f;
    for (auto& v : h.c) v = ctx.mul(a, v);
    return h;
}

inline fe evaluate(const FieldContext& ctx, const QPoly& f, fe x) {
    fe acc = 0;
    for (std::uint32_t i = 0; i < ctx.n(); ++i)
        if (f.c[i]) acc = ctx.add(acc, ctx.mul(f.c[i], ctx.frobenius(x, i)));
    return acc;
}

/// Coefficients of f(g(x)) mod x^{q^n} - x:
/// result_k = sum over i+j == k (mod n) of f_i * g_j^{q^i}.
inline QPoly compose(const FieldContext& ctx, const QPoly& f, const QPoly& g) {
    QPoly h = QPoly::zero(ctx);
    const std::uint32_t n = ctx.n();
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!f.c[i]) continue;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (!g.c[j]) continue;
            const std::uint32_t k = (i + j) % n;
            h.c[k] = ctx.add(h.c[k], ctx.mul(f.c[i], ctx.frobenius(g.c[j], i)));
        }
    }
    return h;
}

/// Coefficientwise automorphism twist f^rho with rho: e -> e^{p^j}.
inline QPoly twist(const FieldContext& ctx, const QPoly& f, long long j) {
    QPoly h = f;
    for (auto& v : h.c) v = ctx.p_automorphism(v, j);
    return h;
}

// --- generic linear algebra over (sub)fields of F_{q^n} ---

/// Row-major matrix of field element codes. Entries may lie in any subfield;
/// elimination stays inside the subfield the entries generate.
struct FeMat {
    std::size_t rows = 0, cols = 0;
    std::vector<fe> a;

    FeMat() = default;
    FeMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    fe& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    fe at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// In-place reduction to row echelon form; returns pivot columns.
inline std::vector<std::size_t> gauss_echelon(const FieldContext& ctx, FeMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t pr = row;
        while (pr < m.rows && m.at(pr, col) == 0) ++pr;
        if (pr == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(row, j), m.at(pr, j));
        const fe piv_inv = ctx.inv(m.at(row, col));
        for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) = ctx.mul(piv_inv, m.at(row, j));
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            const fe factor = m.at(i, col);
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = ctx.sub(m.at(i, j), ctx.mul(factor, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t gauss_rank(const FieldContext& ctx, FeMat m) { return gauss_echelon(ctx, m).size(); }

/// Solves A x = b exactly; nullopt when inconsistent. With a non-trivial
/// kernel the free variables are set to zero.
inline std::optional<std::vector<fe>> gauss_solve(const FieldContext& ctx, const FeMat& A,
                                                  const std::vector<fe>& b) {
    FeMat m(A.rows, A.cols + 1);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) m.at(i, j) = A.at(i, j);
        m.at(i, A.cols) = b[i];
    }
    const auto pivots = gauss_echelon(ctx, m);
    for (std::size_t k = 0; k < pivots.size(); ++k)
        if (pivots[k] == A.cols) return std::nullopt;
    std::vector<fe> x(A.cols, 0);
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = m.at(k, A.cols);
    return x;
}

/// Basis of the right nullspace of A.
inline std::vector<std::vector<fe>> gauss_nullspace(const FieldContext& ctx, FeMat m) {
    const auto pivots = gauss_echelon(ctx, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<fe>> basis;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<fe> v(m.cols, 0);
        v[free_col] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = ctx.neg(m.at(k, free_col));
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::optional<FeMat> gauss_inverse(const FieldContext& ctx, const FeMat& A) {
    FeMat m(A.rows, 2 * A.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) m.at(i, j) = A.at(i, j);
        m.at(i, A.cols + i) = 1;
    }
    const auto pivots = gauss_echelon(ctx, m);
    if (pivots.size() != A.cols) return std::nullopt;
    for (std::size_t k = 0; k < pivots.size(); ++k)
        if (pivots[k] != k) return std::nullopt;
    FeMat inv(A.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) inv.at(i, j) = m.at(i, A.cols + j);
    return inv;
}

// --- F_q coordinates ---

/// The power basis {beta^0, ..., beta^{n-1}} of F_{q^n} over F_q, where beta
/// is the smallest element (in canonical code order) of degree n over F_q.
/// F_q-coordinates are realized as field element codes lying in the F_q
/// subfield.
class FqBasis {
public:
    static FqBasis make(const FieldContext& ctx) {
        FqBasis b;
        b.n_ = ctx.n();
        b.r_ = ctx.r();
        b.deg_ = ctx.degree();
        b.p_ = ctx.p();
        b.beta_ = find_degree_n_element(ctx);
        b.elems_.resize(b.n_);
        b.elems_[0] = 1;
        for (std::uint32_t j = 1; j < b.n_; ++j) b.elems_[j] = ctx.mul(b.elems_[j - 1], b.beta_);
        b.gamma_pows_.resize(b.r_);
        b.gamma_pows_[0] = 1;
        if (b.r_ > 1) {
            const fe gamma = find_fq_generator(ctx);
            for (std::uint32_t i = 1; i < b.r_; ++i) b.gamma_pows_[i] = ctx.mul(b.gamma_pows_[i - 1], gamma);
        }
        b.build_transform(ctx);
        return b;
    }

    fe beta() const { return beta_; }
    const std::vector<fe>& elements() const { return elems_; }

    /// F_q-coordinates of e: the unique (x_0,...,x_{n-1}) in F_q^n with
    /// e = sum x_j beta^j.
    std::vector<fe> coords(const FieldContext& ctx, fe e) const {
        std::vector<std::uint32_t> dig = ctx.coords(e);
        std::vector<std::uint32_t> out(deg_, 0);
        for (std::uint32_t i = 0; i < deg_; ++i) {
            if (!dig[i]) continue;
            for (std::uint32_t row = 0; row < deg_; ++row)
                out[row] = (out[row] + inv_transform_[row * deg_ + i] * dig[i]) % p_;
        }
        std::vector<fe> x(n_, 0);
        for (std::uint32_t j = 0; j < n_; ++j) {
            fe acc = 0;
            for (std::uint32_t i = 0; i < r_; ++i)
                acc = ctx.add(acc, ctx.mul(static_cast<fe>(out[j * r_ + i]), gamma_pows_[i]));
            x[j] = acc;
        }
        return x;
    }

    fe from_coords(const FieldContext& ctx, const std::vector<fe>& x) const {
        fe acc = 0;
        for (std::uint32_t j = 0; j < n_; ++j) acc = ctx.add(acc, ctx.mul(x[j], elems_[j]));
        return acc;
    }

private:
    static fe find_degree_n_element(const FieldContext& ctx) {
        const std::uint32_t n = ctx.n();
        std::vector<std::uint32_t> proper;
        for (std::uint32_t d = 1; d < n; ++d)
            if (n % d == 0) proper.push_back(d);
        for (std::uint64_t e = 1; e < ctx.card(); ++e) {
            bool in_proper = false;
            for (auto d : proper) {
                if (ctx.in_subfield(static_cast<fe>(e), d)) {
                    in_proper = true;
                    break;
                }
            }
            if (!in_proper) return static_cast<fe>(e);
        }
        throw ParamError("no degree-n element found");
    }

    // smallest generator of F_q over F_p (degree exactly r), as a subfield element
    static fe find_fq_generator(const FieldContext& ctx) {
        const auto fq = ctx.subfield_elements(1);  // F_q = fixed field of frobenius(.,1)
        for (fe e : fq) {
            if (!e) continue;
            bool proper = false;
            for (std::uint32_t rp = 1; rp < ctx.r(); ++rp) {
                if (ctx.r() % rp) continue;
                // e in F_{p^rp} iff e^{p^rp} == e
                if (ctx.p_automorphism(e, rp) == e) {
                    proper = true;
                    break;
                }
            }
            if (!proper) return e;
        }
        throw ParamError("no F_q generator found");
    }

    void build_transform(const FieldContext& ctx) {
        // T columns: digits of gamma^i * beta^j at column j*r+i; inverse over F_p.
        const std::uint32_t D = deg_;
        std::vector<std::uint32_t> T(D * D, 0);
        for (std::uint32_t j = 0; j < n_; ++j) {
            for (std::uint32_t i = 0; i < r_; ++i) {
                const auto dig = ctx.coords(ctx.mul(gamma_pows_[i], elems_[j]));
                for (std::uint32_t row = 0; row < D; ++row) T[row * D + (j * r_ + i)] = dig[row];
            }
        }
        inv_transform_ = invert_fp(T, D, p_);
    }

    static std::vector<std::uint32_t> invert_fp(std::vector<std::uint32_t> m, std::uint32_t D,
                                                std::uint32_t p) {
        std::vector<std::uint32_t> inv(D * D, 0);
        for (std::uint32_t i = 0; i < D; ++i) inv[i * D + i] = 1;
        auto inv_mod = [p](std::uint32_t v) {
            std::uint32_t r = 1, b = v % p, e = p - 2;
            while (e) {
                if (e & 1) r = r * b % p;
                b = b * b % p;
                e >>= 1;
            }
            return r;
        };
        for (std::uint32_t col = 0; col < D; ++col) {
            std::uint32_t pr = col;
            while (pr < D && m[pr * D + col] == 0) ++pr;
            if (pr == D) throw ParamError("basis transform singular");
            if (pr != col)
                for (std::uint32_t j = 0; j < D; ++j) {
                    std::swap(m[pr * D + j], m[col * D + j]);
                    std::swap(inv[pr * D + j], inv[col * D + j]);
                }
            const std::uint32_t piv = inv_mod(m[col * D + col]);
            for (std::uint32_t j = 0; j < D; ++j) {
                m[col * D + j] = m[col * D + j] * piv % p;
                inv[col * D + j] = inv[col * D + j] * piv % p;
            }
            for (std::uint32_t i = 0; i < D; ++i) {
                if (i == col) continue;
                const std::uint32_t f = m[i * D + col];
                if (!f) continue;
                for (std::uint32_t j = 0; j < D; ++j) {
                    m[i * D + j] = (m[i * D + j] + (p - f) * m[col * D + j]) % p;
                    inv[i * D + j] = (inv[i * D + j] + (p - f) * inv[col * D + j]) % p;
                }
            }
        }
        return inv;
    }

    std::uint32_t n_ = 0, r_ = 0, deg_ = 0, p_ = 0;
    fe beta_ = 0;
    std::vector<fe> elems_;
    std::vector<fe> gamma_pows_;
    std::vector<std::uint32_t> inv_transform_;  // D x D over F_p, row-major
};

/// Matrix of the F_q-linear map f w.r.t. basis: column j holds the
/// coordinates of f(beta^j). Matrix product corresponds to composition.
inline FeMat to_matrix(const FieldContext& ctx, const QPoly& f, const FqBasis& basis) {
    const std::uint32_t n = ctx.n();
    FeMat m(n, n);
    for (std::uint32_t j = 0; j < n; ++j) {
        const auto col = basis.coords(ctx, evaluate(ctx, f, basis.elements()[j]));
        for (std::uint32_t i = 0; i < n; ++i) m.at(i, j) = col[i];
    }
    return m;
}

inline std::size_t rank(const FieldContext& ctx, const QPoly& f, const FqBasis& basis) {
    return gauss_rank(ctx, to_matrix(ctx, f, basis));
}

inline std::size_t rank(const FieldContext& ctx, const QPoly& f) {
    return rank(ctx, f, FqBasis::make(ctx));
}

/// m_F = gcd({(i-j) mod n : c_i c_j != 0, i != j} united with {n}); the
/// polynomial is in standard form iff m_F > 1.
inline std::uint32_t standard_form_gcd(const FieldContext& ctx, const QPoly& f) {
    if (f.is_zero()) throw ParamError("standard form gcd of the zero polynomial");
    const auto supp = f.support();
    std::uint32_t m = ctx.n();
    for (std::size_t a = 0; a < supp.size(); ++a)
        for (std::size_t b = a + 1; b < supp.size(); ++b)
            m = std::gcd(m, supp[b] - supp[a]);
    return m;
}

/// The unique s in [0, m_F) with every support exponent congruent to s.
inline std::uint32_t standard_form_offset(const FieldContext& ctx, const QPoly& f) {
    const std::uint32_t m = standard_form_gcd(ctx, f);
    if (m <= 1) throw ParamError("polynomial is not in standard form");
    return f.support().front() % m;
}

/// Recovers the unique q-polynomial taking the given values on the basis
/// (Moore-matrix interpolation over F_{q^n}).
inline QPoly qpoly_from_values(const FieldContext& ctx, const FqBasis& basis,
                               const std::vector<fe>& values) {
    const std::uint32_t n = ctx.n();
    FeMat moore(n, n);
    for (std::uint32_t j = 0; j < n; ++j)
        for (std::uint32_t i = 0; i < n; ++i) moore.at(j, i) = ctx.frobenius(basis.elements()[j], i);
    const auto sol = gauss_solve(ctx, moore, values);
    if (!sol) throw ParamError("Moore interpolation failed");
    return QPoly{*sol};
}

/// Compositional inverse of a bijective q-polynomial.
inline QPoly qpoly_inverse(const FieldContext& ctx, const QPoly& f, const FqBasis& basis) {
    const auto m = to_matrix(ctx, f, basis);
    const auto mi = gauss_inverse(ctx, m);
    if (!mi) throw ParamError("q-polynomial is not invertible");
    const std::uint32_t n = ctx.n();
    std::vector<fe> values(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        std::vector<fe> col(n);
        for (std::uint32_t i = 0; i < n; ++i) col[i] = mi->at(i, j);
        values[j] = basis.from_coords(ctx, col);
    }
    return qpoly_from_values(ctx, basis, values);
}

}  // namespace mrdlab
