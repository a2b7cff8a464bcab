#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "mrdlab/common.hpp"

namespace mrdlab {

/// Parameters of the tower F_p c F_q c F_{q^n} with q = p^r and n = 2t.
struct FieldParams {
    std::uint32_t p = 3;
    std::uint32_t r = 1;
    std::uint32_t t = 3;

    std::uint32_t n() const { return 2 * t; }
    std::uint32_t degree() const { return r * n(); }  // absolute degree D over F_p
    std::uint64_t q() const { return ipow(p, r); }

    void validate() const {
        if (!is_prime(p)) throw ParamError("p = " + std::to_string(p) + " is not prime");
        if (r < 1) throw ParamError("r must be >= 1");
        if (t < 3) throw ParamError("t must be >= 3");
        if (degree() > 24 || ipow(p, degree()) > (1ull << 23))
            throw ParamError("field F_{p^" + std::to_string(degree()) + "} exceeds desk scale");
    }

    bool operator==(const FieldParams&) const = default;
};

namespace detail {

/// Dense polynomial arithmetic over F_p, used only while bootstrapping a
/// context (modulus search, generator certification). Coefficients
/// low-to-high.
class PrimePoly {
public:
    explicit PrimePoly(std::uint32_t p) : p_(p) {}

    using Coeffs = std::vector<std::uint32_t>;

    Coeffs mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& mod) const {
        const std::size_t d = mod.size() - 1;
        Coeffs res(2 * d, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                res[i + j] = (res[i + j] + a[i] * b[j]) % p_;
        }
        for (std::size_t k = 2 * d; k-- > d;) {
            if (!res[k]) continue;
            const std::uint32_t c = res[k];
            res[k] = 0;
            for (std::size_t i = 0; i < d; ++i)
                res[k - d + i] = (res[k - d + i] + c * (p_ - mod[i] % p_)) % p_;
        }
        res.resize(d);
        return res;
    }

    Coeffs powmod_x(std::uint64_t e, const Coeffs& mod) const {
        Coeffs base(mod.size() - 1, 0);
        base[1 % base.size()] = 1;
        return powmod(base, e, mod);
    }

    Coeffs powmod(Coeffs base, std::uint64_t e, const Coeffs& mod) const {
        Coeffs acc(mod.size() - 1, 0);
        acc[0] = 1;
        while (e) {
            if (e & 1) acc = mulmod(acc, base, mod);
            base = mulmod(base, base, mod);
            e >>= 1;
        }
        return acc;
    }

    static void strip(Coeffs& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }

    Coeffs gcd(Coeffs a, Coeffs b) const {
        strip(a);
        strip(b);
        while (!b.empty()) {
            a = remainder(a, b);
            strip(a);
            std::swap(a, b);
        }
        return a;
    }

    Coeffs remainder(Coeffs a, const Coeffs& b) const {
        const std::uint32_t lead_inv = mod_inverse(b.back());
        while (a.size() >= b.size()) {
            const std::uint32_t c = (a.back() * lead_inv) % p_;
            if (c) {
                const std::size_t off = a.size() - b.size();
                for (std::size_t i = 0; i < b.size(); ++i)
                    a[off + i] = (a[off + i] + (p_ - (c * b[i]) % p_)) % p_;
            }
            a.pop_back();
            strip(a);
            if (a.empty()) break;
        }
        return a;
    }

    std::uint32_t mod_inverse(std::uint32_t v) const {
        std::uint32_t r = 1, b = v % p_, e = p_ - 2;
        while (e) {
            if (e & 1) r = (r * b) % p_;
            b = (b * b) % p_;
            e >>= 1;
        }
        return r;
    }

private:
    std::uint32_t p_;
};

}  // namespace detail

/// Exact arithmetic in F_{q^n}. The modulus is the lexicographically
/// smallest monic irreducible of degree D = r*n over F_p (coefficient
/// sequences compared low-degree-first) and the generator is the smallest
/// element of full multiplicative order, so element encodings are
/// reproducible across runs and platforms. Immutable after construction.
class FieldContext {
public:
    explicit FieldContext(FieldParams params) : params_(params) {
        init_sizes();
        find_modulus();
        find_generator();
        build_tables();
    }

    /// Construction from cached canonical data. The modulus is re-certified
    /// irreducible and the generator's order re-checked; canonicality
    /// (lex-minimality) is trusted from the cache.
    FieldContext(FieldParams params, const std::vector<std::uint32_t>& modulus, fe generator)
        : params_(params) {
        init_sizes();
        if (modulus.size() != deg_ + 1 || modulus.back() != 1)
            throw ParamError("cached modulus has wrong shape");
        detail::PrimePoly pp(p_);
        if (!is_irreducible(pp, modulus, prime_factors(deg_)))
            throw ParamError("cached modulus is not irreducible");
        modulus_ = modulus;
        std::vector<std::uint32_t> one_poly(deg_, 0);
        one_poly[0] = 1;
        if (generator == 0 || generator >= card_) throw ParamError("cached generator out of range");
        for (auto f : prime_factors(order_))
            if (pp.powmod(poly_of(generator), order_ / f, modulus_) == one_poly)
                throw ParamError("cached generator has small order");
        generator_ = generator;
        build_tables();
    }

    const FieldParams& params() const { return params_; }
    std::uint32_t p() const { return p_; }
    std::uint32_t r() const { return params_.r; }
    std::uint32_t t() const { return params_.t; }
    std::uint32_t n() const { return n_; }
    std::uint32_t degree() const { return deg_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t card() const { return card_; }
    std::uint64_t order() const { return order_; }
    fe generator() const { return generator_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    bool operator==(const FieldContext& o) const {
        return params_ == o.params_ && modulus_ == o.modulus_ && generator_ == o.generator_;
    }

    // --- element encoding ---

    std::vector<std::uint32_t> coords(fe e) const {
        std::vector<std::uint32_t> out(deg_);
        for (std::uint32_t i = 0; i < deg_; ++i) {
            out[i] = e % p_;
            e /= p_;
        }
        return out;
    }

    fe from_coords(const std::vector<std::uint32_t>& c) const {
        if (c.size() != deg_) throw ParamError("element coordinates must have length D");
        fe e = 0;
        for (std::uint32_t i = deg_; i-- > 0;) {
            if (c[i] >= p_) throw ParamError("element coordinate out of range");
            e = e * p_ + c[i];
        }
        return e;
    }

    /// Scalar embedding of an integer (its residue mod p).
    fe embed(long long v) const { return static_cast<fe>(imod(v, p_)); }
    fe one() const { return 1; }
    fe minus_one() const { return static_cast<fe>(p_ - 1); }

    // --- arithmetic ---

    fe add(fe a, fe b) const {
        return add_lo_[a % split_ * split_ + b % split_] +
               add_hi_[a / split_ * hi_count_ + b / split_] * split_;
    }
    fe neg(fe a) const { return neg_lo_[a % split_] + neg_hi_[a / split_] * split_; }
    fe sub(fe a, fe b) const { return add(a, neg(b)); }

    fe mul(fe a, fe b) const { return (a && b) ? exp_[log_[a] + log_[b]] : 0; }
    fe inv(fe a) const {
        if (!a) throw ParamError("inversion of zero");
        return exp_[order_ - log_[a]];
    }

    fe pow(fe a, long long e) const {
        if (!a) {
            if (e > 0) return 0;
            if (e == 0) return 1;
            throw ParamError("inversion of zero");
        }
        const std::uint64_t k = static_cast<std::uint64_t>(imod(e, static_cast<long long>(order_)));
        return exp_[(log_[a] * k) % order_];
    }

    /// e^{q^i}; i taken mod n (negative i allowed).
    fe frobenius(fe e, long long i) const {
        if (!e) return 0;
        return exp_[(log_[e] * qpow_[imod(i, n_)]) % order_];
    }

    /// e^{p^j}, the general automorphism of F_{q^n}; j taken mod D.
    fe p_automorphism(fe e, long long j) const {
        if (!e) return 0;
        return exp_[(log_[e] * ppow_[imod(j, deg_)]) % order_];
    }

    /// Relative norm N_{q^n/q^d}(e) = e^{(q^n-1)/(q^d-1)}; requires d | n.
    fe norm(fe e, std::uint32_t d) const {
        check_divisor(d);
        if (!e) return 0;
        const std::uint64_t E = order_ / (ipow(q_, d) - 1);
        return exp_[(log_[e] * (E % order_)) % order_];
    }

    /// Relative trace Tr_{q^n/q^d}(e); requires d | n.
    fe trace(fe e, std::uint32_t d) const {
        check_divisor(d);
        fe acc = 0;
        for (std::uint32_t i = 0; i < n_ / d; ++i) acc = add(acc, frobenius(e, static_cast<long long>(i) * d));
        return acc;
    }

    bool in_subfield(fe e, std::uint32_t d) const { return frobenius(e, d) == e; }

    /// All e with norm(e, d) = target, in canonical ascending code order.
    std::vector<fe> norm_fiber(fe target, std::uint32_t d) const {
        check_divisor(d);
        std::vector<fe> out;
        for (std::uint64_t e = 0; e < card_; ++e)
            if (norm(static_cast<fe>(e), d) == target) out.push_back(static_cast<fe>(e));
        return out;
    }

    /// The q^d elements of the subfield F_{q^d}, ascending; requires d | n.
    std::vector<fe> subfield_elements(std::uint32_t d) const {
        check_divisor(d);
        const std::uint64_t sub_order = ipow(q_, d) - 1;
        const std::uint64_t step = order_ / sub_order;
        std::vector<fe> out;
        out.reserve(sub_order + 1);
        out.push_back(0);
        for (std::uint64_t j = 0; j < sub_order; ++j) out.push_back(exp_[j * step % order_]);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::uint64_t mul_order(fe e) const {
        if (!e) throw ParamError("order of zero");
        return order_ / std::gcd(order_, static_cast<std::uint64_t>(log_[e]));
    }

    std::uint64_t log(fe e) const {
        if (!e) throw ParamError("log of zero");
        return log_[e];
    }
    fe exp(std::uint64_t k) const { return exp_[k % order_]; }

private:
    void init_sizes() {
        params_.validate();
        p_ = params_.p;
        n_ = params_.n();
        deg_ = params_.degree();
        q_ = params_.q();
        card_ = ipow(p_, deg_);
        order_ = card_ - 1;
        pow_p_.resize(deg_ + 1);
        pow_p_[0] = 1;
        for (std::uint32_t i = 1; i <= deg_; ++i) pow_p_[i] = pow_p_[i - 1] * p_;
    }

    void check_divisor(std::uint32_t d) const {
        if (d == 0 || n_ % d != 0) throw ParamError("d = " + std::to_string(d) + " does not divide n");
    }

    // Lexicographically smallest monic irreducible of degree D, certified by
    // Rabin's criterion: x^{p^D} == x (mod f) and gcd(x^{p^{D/l}} - x, f) = 1
    // for each prime l | D.
    void find_modulus() {
        detail::PrimePoly pp(p_);
        const auto ell = prime_factors(deg_);
        std::vector<std::uint32_t> cand(deg_ + 1, 0);
        cand[deg_] = 1;
        // enumerate coefficient sequences (c_0,...,c_{D-1}) in lex order:
        // c_0 is the most significant counter digit
        std::vector<std::uint32_t> c(deg_, 0);
        for (;;) {
            if (c[0] != 0) {  // x | f otherwise
                for (std::uint32_t i = 0; i < deg_; ++i) cand[i] = c[i];
                if (is_irreducible(pp, cand, ell)) {
                    modulus_ = cand;
                    return;
                }
            }
            std::uint32_t pos = deg_;
            while (pos-- > 0) {
                if (++c[pos] < p_) break;
                c[pos] = 0;
                if (pos == 0) throw ParamError("no irreducible polynomial found");
            }
        }
    }

    bool is_irreducible(const detail::PrimePoly& pp, const std::vector<std::uint32_t>& f,
                        const std::vector<std::uint64_t>& ell) const {
        std::vector<std::uint32_t> x(deg_, 0);
        x[1] = 1;
        auto xq = pp.powmod_x(ipow(p_, deg_), f);
        if (xq != x) return false;
        for (auto l : ell) {
            auto g = pp.powmod_x(ipow(p_, deg_ / static_cast<std::uint32_t>(l)), f);
            // g - x
            g[1] = (g[1] + p_ - 1) % p_;
            auto d = pp.gcd(f, g);
            if (!(d.size() == 1 && d[0] != 0)) return false;
        }
        return true;
    }

    std::vector<std::uint32_t> poly_of(fe e) const { return coords(e); }

    fe code_of(const std::vector<std::uint32_t>& c) const {
        fe e = 0;
        for (std::uint32_t i = deg_; i-- > 0;) e = e * p_ + c[i];
        return e;
    }

    void find_generator() {
        detail::PrimePoly pp(p_);
        const auto fs = prime_factors(order_);
        std::vector<std::uint32_t> one_poly(deg_, 0);
        one_poly[0] = 1;
        for (std::uint64_t cand = 2; cand < card_; ++cand) {
            const auto a = poly_of(static_cast<fe>(cand));
            bool ok = true;
            for (auto f : fs) {
                if (pp.powmod(a, order_ / f, modulus_) == one_poly) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                generator_ = static_cast<fe>(cand);
                return;
            }
        }
        throw ParamError("no multiplicative generator found");
    }

    void build_tables() {
        detail::PrimePoly pp(p_);
        exp_.assign(2 * order_, 0);
        log_.assign(card_, 0);
        std::vector<std::uint32_t> cur(deg_, 0);
        cur[0] = 1;
        const auto g = poly_of(generator_);
        for (std::uint64_t i = 0; i < order_; ++i) {
            const fe code = code_of(cur);
            exp_[i] = code;
            exp_[i + order_] = code;
            log_[code] = i;
            cur = pp.mulmod(cur, g, modulus_);
        }

        const std::uint32_t klo = (deg_ + 1) / 2;
        split_ = static_cast<std::uint32_t>(pow_p_[klo]);
        hi_count_ = static_cast<std::uint32_t>(card_ / split_);
        const std::uint32_t m = std::max(split_, hi_count_);
        auto digit_add = [&](std::uint32_t a, std::uint32_t b) {
            std::uint32_t out = 0, mulp = 1;
            while (a || b) {
                std::uint32_t s = a % p_ + b % p_;
                if (s >= p_) s -= p_;
                out += s * mulp;
                mulp *= p_;
                a /= p_;
                b /= p_;
            }
            return out;
        };
        add_lo_.assign(static_cast<std::size_t>(split_) * split_, 0);
        for (std::uint32_t a = 0; a < split_; ++a)
            for (std::uint32_t b = 0; b < split_; ++b)
                add_lo_[static_cast<std::size_t>(a) * split_ + b] = static_cast<std::uint16_t>(digit_add(a, b));
        add_hi_.assign(static_cast<std::size_t>(hi_count_) * hi_count_, 0);
        for (std::uint32_t a = 0; a < hi_count_; ++a)
            for (std::uint32_t b = 0; b < hi_count_; ++b)
                add_hi_[static_cast<std::size_t>(a) * hi_count_ + b] = static_cast<std::uint16_t>(digit_add(a, b));
        auto digit_neg = [&](std::uint32_t a) {
            std::uint32_t out = 0, mulp = 1;
            while (a) {
                const std::uint32_t d = a % p_;
                out += (d ? p_ - d : 0) * mulp;
                mulp *= p_;
                a /= p_;
            }
            return out;
        };
        neg_lo_.assign(split_, 0);
        for (std::uint32_t a = 0; a < split_; ++a) neg_lo_[a] = static_cast<std::uint16_t>(digit_neg(a));
        neg_hi_.assign(m, 0);
        for (std::uint32_t a = 0; a < hi_count_; ++a) neg_hi_[a] = static_cast<std::uint16_t>(digit_neg(a));

        qpow_.resize(n_);
        for (std::uint32_t i = 0; i < n_; ++i) {
            std::uint64_t v = 1;
            for (std::uint32_t k = 0; k < i; ++k) v = (v * (q_ % order_)) % order_;
            qpow_[i] = v;
        }
        ppow_.resize(deg_);
        for (std::uint32_t j = 0; j < deg_; ++j) {
            std::uint64_t v = 1;
            for (std::uint32_t k = 0; k < j; ++k) v = (v * (p_ % order_)) % order_;
            ppow_[j] = v;
        }
    }

    FieldParams params_;
    std::uint32_t p_ = 0, n_ = 0, deg_ = 0;
    std::uint64_t q_ = 0, card_ = 0, order_ = 0;
    std::vector<std::uint64_t> pow_p_;
    std::vector<std::uint32_t> modulus_;  // length D+1, low-to-high, monic
    fe generator_ = 0;
    std::vector<fe> exp_;             // g^i for i in [0, 2(card-1)), doubled to skip reductions
    std::vector<std::uint32_t> log_;  // discrete log base g; log_[0] unused
    std::uint32_t split_ = 0, hi_count_ = 0;
    std::vector<std::uint16_t> add_lo_, add_hi_, neg_lo_, neg_hi_;
    std::vector<std::uint64_t> qpow_, ppow_;  // q^i, p^j mod (card-1)
};

inline FieldContext make_context(const FieldParams& params) { return FieldContext(params); }

}  // namespace mrdlab
