#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "integer.hpp"

namespace anticyc {

namespace detail {

// Dense polynomials over F_p, little-endian, trimmed of leading zeros.
using FpPoly = std::vector<i64>;

inline void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly fp_rem(FpPoly a, const FpPoly& b, i64 p) {
    fp_trim(a);
    i64 inv_lead = nt::invmod(b.back(), p);
    while (a.size() >= b.size()) {
        i64 q = nt::mulmod(a.back(), inv_lead, p);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = nt::mod(a[shift + i] - q * b[i], p);
        fp_trim(a);
    }
    return a;
}

inline FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, i64 p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = nt::mod(r[i + j] + a[i] * b[j], p);
    return fp_rem(std::move(r), m, p);
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, i64 p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// x^(p^k) mod m over F_p.
inline FpPoly fp_frobenius_power(const FpPoly& m, i64 p, int k) {
    FpPoly x = fp_rem({0, 1}, m, p);
    for (int i = 0; i < k; ++i) {
        FpPoly r{1};
        FpPoly base = x;
        i64 e = p;
        while (e > 0) {
            if (e & 1) r = fp_mulmod(r, base, m, p);
            base = fp_mulmod(base, base, m, p);
            e >>= 1;
        }
        x = r;
    }
    return x;
}

/// Rabin's irreducibility test for a monic h of degree f over F_p.
inline bool fp_irreducible(const FpPoly& h, i64 p) {
    const int f = static_cast<int>(h.size()) - 1;
    if (f <= 1) return f == 1;
    FpPoly xq = fp_frobenius_power(h, p, f);
    FpPoly x = fp_rem({0, 1}, h, p);
    if (xq != x) return false;
    for (auto [q, e] : nt::factorize(f)) {
        (void)e;
        FpPoly t = fp_frobenius_power(h, p, f / static_cast<int>(q));
        t.resize(std::max<std::size_t>(t.size(), 2), 0);
        t[1] = nt::mod(t[1] - 1, p);
        fp_trim(t);
        FpPoly g = fp_gcd(h, t, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace detail

class PadicContext;
using PadicCtx = std::shared_ptr<const PadicContext>;

/// Finite-precision model of the unramified extension W_f of Z_p of degree f,
/// presented as Z_p[x]/(h) with h monic and irreducible mod p. Elements are
/// known modulo p^N at most.
class PadicContext {
public:
    static PadicCtx make(i64 p, int N, int f = 1) {
        if (f < 1) fail(Errc::DomainError, "unramified degree must be >= 1");
        return make_with_poly(p, N, conway_like_poly(p, f));
    }

    static PadicCtx make_with_poly(i64 p, int N, std::vector<i64> h) {
        if (p == 2 || !nt::is_prime(p)) fail(Errc::DomainError, "p must be an odd prime, got " + std::to_string(p));
        if (h.size() < 2 || h.back() != 1) fail(Errc::DomainError, "defining polynomial must be monic of degree >= 1");
        for (auto& c : h) c = nt::mod(c, p);
        if (!detail::fp_irreducible(h, p)) fail(Errc::DomainError, "defining polynomial is reducible mod p");
        auto ctx = std::shared_ptr<PadicContext>(new PadicContext(p, N, std::move(h)));
        return ctx;
    }

    /// Minimal unramified degree so that roots of unity of each prime-to-p part of
    /// `orders` exist in W_f.
    static PadicCtx for_root_orders(i64 p, int N, std::span<const i64> orders) {
        i64 need = 1;
        for (i64 r : orders) {
            while (r % p == 0 && r != 0) r /= p;
            if (r > 0) need = std::lcm(need, r);
        }
        int f = 1;
        for (;; ++f) {
            if (nt::powmod(p, f, need) == 1 % need) break;
        }
        return make(p, N, f);
    }

    PadicCtx with_precision(int N) const { return make_with_poly(p_, N, h_); }

    i64 p() const noexcept { return p_; }
    int N() const noexcept { return N_; }
    int f() const noexcept { return static_cast<int>(h_.size()) - 1; }
    const std::vector<i64>& poly() const noexcept { return h_; }
    i64 gamma() const noexcept { return 1 + p_; }
    /// Size q = p^f of the residue field.
    i64 residue_order() const noexcept { return q_; }
    i64 pow_p(int k) const {
        if (k < 0 || k >= static_cast<int>(pw_.size())) fail(Errc::BoundExceeded, "p^k out of int64 range");
        return pw_[static_cast<std::size_t>(k)];
    }
    /// Largest precision whose modulus squares into 128 bits.
    int max_prec() const noexcept { return static_cast<int>(pw_.size()) - 1; }

    bool compatible(const PadicContext& o) const noexcept { return p_ == o.p_ && N_ == o.N_ && h_ == o.h_; }

    /// A generator of the multiplicative group of the residue field, as coefficients mod p.
    const std::vector<i64>& residue_generator() const noexcept { return gen_; }

private:
    PadicContext(i64 p, int N, std::vector<i64> h) : p_(p), N_(N), h_(std::move(h)) {
        pw_.push_back(1);
        while (pw_.back() <= (i64{1} << 62) / p_) pw_.push_back(pw_.back() * p_);
        if (N_ < 1 || N_ > max_prec())
            fail(Errc::BoundExceeded, "precision N=" + std::to_string(N_) + " outside [1, " + std::to_string(max_prec()) + "]");
        q_ = nt::ipow(p_, f());
        gen_ = find_generator();
    }

    static std::vector<i64> conway_like_poly(i64 p, int f) {
        if (f == 1) return {0, 1};
        const i64 count = nt::ipow(p, f);
        for (i64 t = 0; t < count; ++t) {
            std::vector<i64> h(static_cast<std::size_t>(f) + 1, 0);
            i64 x = t;
            for (int i = 0; i < f; ++i) {
                h[static_cast<std::size_t>(i)] = x % p;
                x /= p;
            }
            h.back() = 1;
            if (h[0] != 0 && detail::fp_irreducible(h, p)) return h;
        }
        fail(Errc::DomainError, "no irreducible polynomial found");
    }

    std::vector<i64> find_generator() const {
        const int f = this->f();
        const i64 order = q_ - 1;
        auto fac = nt::factorize(order);
        auto pow_res = [&](std::vector<i64> base, i64 e) {
            detail::FpPoly r{1};
            detail::fp_trim(base);
            while (e > 0) {
                if (e & 1) r = detail::fp_mulmod(r, base, h_, p_);
                base = detail::fp_mulmod(base, base, h_, p_);
                e >>= 1;
            }
            return r;
        };
        for (i64 t = 1; t < q_; ++t) {
            std::vector<i64> g(static_cast<std::size_t>(f), 0);
            i64 x = t;
            for (int i = 0; i < f; ++i) {
                g[static_cast<std::size_t>(i)] = x % p_;
                x /= p_;
            }
            bool ok = true;
            for (auto [ell, e] : fac) {
                (void)e;
                if (pow_res(g, order / ell) == detail::FpPoly{1}) {
                    ok = false;
                    break;
                }
            }
            if (ok) return g;
        }
        return std::vector<i64>(static_cast<std::size_t>(f), 0);
    }

    i64 p_;
    int N_;
    std::vector<i64> h_;
    std::vector<i64> pw_;
    i64 q_ = 0;
    std::vector<i64> gen_;
};

/// Element of W_f known modulo p^prec. Coefficients are kept reduced into [0, p^prec).
class PadicElt {
public:
    PadicElt() = default;

    PadicElt(PadicCtx ctx, i64 value) : PadicElt(ctx, value, ctx->N()) {}

    PadicElt(PadicCtx ctx, i64 value, int prec) : ctx_(std::move(ctx)), prec_(prec) {
        check_prec(prec_);
        c_.assign(static_cast<std::size_t>(ctx_->f()), 0);
        c_[0] = value;
        normalize();
    }

    static PadicElt from_coeffs(PadicCtx ctx, std::vector<i64> coeffs, int prec) {
        if (static_cast<int>(coeffs.size()) != ctx->f()) fail(Errc::DomainError, "coefficient vector length must equal f");
        PadicElt r;
        r.ctx_ = std::move(ctx);
        r.prec_ = prec;
        r.check_prec(prec);
        r.c_ = std::move(coeffs);
        r.normalize();
        return r;
    }

    static PadicElt zero(const PadicCtx& ctx) { return PadicElt(ctx, 0); }
    static PadicElt one(const PadicCtx& ctx) { return PadicElt(ctx, 1); }

    const PadicCtx& ctx() const noexcept { return ctx_; }
    int prec() const noexcept { return prec_; }
    const std::vector<i64>& coeffs() const noexcept { return c_; }
    i64 p() const noexcept { return ctx_->p(); }

    /// v_p, capped at prec when the element is zero to its precision.
    int valuation() const noexcept {
        int v = prec_;
        for (i64 c : c_)
            if (c != 0) v = std::min(v, nt::vp(c, ctx_->p()));
        return v;
    }
    bool is_zero() const noexcept {
        return std::all_of(c_.begin(), c_.end(), [](i64 c) { return c == 0; });
    }
    bool is_unit() const noexcept { return prec_ > 0 && valuation() == 0; }

    /// Residue in [0, p^prec) for f = 1.
    i64 residue() const {
        require_base();
        return c_[0];
    }
    /// Representative in (-p^prec/2, p^prec/2] for f = 1.
    i64 to_signed() const {
        require_base();
        i64 m = ctx_->pow_p(prec_);
        return c_[0] > m / 2 ? c_[0] - m : c_[0];
    }

    PadicElt with_prec(int k) const {
        PadicElt r = *this;
        r.prec_ = std::min(k, prec_);
        r.check_prec(r.prec_);
        r.normalize();
        return r;
    }

    /// Declares extra precision; only meaningful for values that are exact integers.
    PadicElt lift_prec(int k) const {
        PadicElt r = *this;
        r.prec_ = std::min(k, ctx_->N());
        return r;
    }

    PadicElt rebase(const PadicCtx& other) const {
        if (other->p() != ctx_->p() || other->poly() != ctx_->poly())
            fail(Errc::ContextMismatch, "rebase between incompatible contexts");
        PadicElt r = *this;
        r.ctx_ = other;
        r.prec_ = std::min(prec_, other->N());
        r.normalize();
        return r;
    }

    PadicElt operator-() const {
        PadicElt r = *this;
        i64 m = ctx_->pow_p(prec_);
        for (auto& c : r.c_) c = nt::mod(-c, m);
        return r;
    }

    friend PadicElt operator+(const PadicElt& a, const PadicElt& b) {
        a.check_ctx(b);
        PadicElt r;
        r.ctx_ = a.ctx_;
        r.prec_ = std::min(a.prec_, b.prec_);
        r.c_.resize(a.c_.size());
        i64 m = a.ctx_->pow_p(r.prec_);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = nt::mod(a.c_[i] % m + b.c_[i] % m, m);
        return r;
    }
    friend PadicElt operator-(const PadicElt& a, const PadicElt& b) { return a + (-b); }

    friend PadicElt operator*(const PadicElt& a, const PadicElt& b) {
        a.check_ctx(b);
        const int va = a.valuation(), vb = b.valuation();
        int prec = std::min({a.prec_ + vb, b.prec_ + va, a.ctx_->N()});
        PadicElt r;
        r.ctx_ = a.ctx_;
        r.prec_ = prec;
        i64 m = a.ctx_->pow_p(prec);
        if (a.c_.size() == 1) {
            r.c_ = {nt::mulmod(a.c_[0], b.c_[0], m)};
            return r;
        }
        r.c_ = poly_mulmod(a.c_, b.c_, a.ctx_->poly(), m);
        return r;
    }

    PadicElt& operator+=(const PadicElt& o) { return *this = *this + o; }
    PadicElt& operator-=(const PadicElt& o) { return *this = *this - o; }
    PadicElt& operator*=(const PadicElt& o) { return *this = *this * o; }

    /// Multiplication by an integer.
    PadicElt scaled(i64 n) const { return *this * PadicElt(ctx_, n); }

    PadicElt mul_p_power(int k) const {
        PadicElt r = *this;
        r.prec_ = std::min(prec_ + k, ctx_->N());
        i64 m = ctx_->pow_p(r.prec_);
        for (auto& c : r.c_) c = nt::mulmod(c, ctx_->pow_p(k), m);
        return r;
    }

    /// Exact division by p^k; precision drops by k.
    PadicElt div_p_power(int k) const {
        if (k == 0) return *this;
        if (prec_ - k < 0) fail(Errc::PrecisionExhausted, "division by p^" + std::to_string(k) + " exhausts precision", k - prec_);
        int v = valuation();
        if (v < k) fail(Errc::PrecisionLoss, "element not divisible by p^" + std::to_string(k), k - v);
        PadicElt r = *this;
        r.prec_ = prec_ - k;
        for (auto& c : r.c_) c /= ctx_->pow_p(k);
        return r;
    }

    /// Inverse of a unit, to the unit's precision.
    PadicElt inverse() const {
        if (!is_unit()) fail(Errc::NonUnit, "inverse of a non-unit");
        const i64 p = ctx_->p();
        if (c_.size() == 1) return PadicElt(ctx_, nt::invmod(c_[0], ctx_->pow_p(prec_)), prec_);
        // inverse mod p in the residue field via a^(q-2), then Newton
        PadicElt a1 = with_prec(1);
        PadicElt x = a1.pow(ctx_->residue_order() - 2);
        int k = 1;
        while (k < prec_) {
            k = std::min(2 * k, prec_);
            PadicElt ak = with_prec(k);
            PadicElt xk = x.lift_prec(k);
            x = xk * (PadicElt(ctx_, 2, k) - ak * xk);
        }
        (void)p;
        return x.with_prec(prec_);
    }

    /// Division by an arbitrary nonzero element (drops precision by its valuation).
    friend PadicElt operator/(const PadicElt& a, const PadicElt& b) {
        int v = b.valuation();
        if (v >= b.prec_) fail(Errc::PrecisionExhausted, "division by an element that is zero to its precision");
        PadicElt bu = b.div_p_power(v);
        return (a * bu.inverse()).div_p_power(v);
    }

    /// Division by a nonzero integer.
    PadicElt div_int(i64 n) const {
        if (n == 0) fail(Errc::DomainError, "division by zero");
        const i64 p = ctx_->p();
        int k = nt::vp(n, p);
        i64 u = n / ctx_->pow_p(k);
        PadicElt uinv(ctx_, nt::invmod(nt::mod(u, ctx_->pow_p(ctx_->N())), ctx_->pow_p(ctx_->N())));
        return (*this * uinv).div_p_power(k);
    }

    /// Non-negative integer power (negative exponents use the inverse).
    PadicElt pow(i64 e) const {
        if (e < 0) return inverse().pow(-e);
        PadicElt r(ctx_, 1);
        PadicElt base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return r;
    }

    /// Equality modulo the joint precision.
    bool agrees(const PadicElt& o) const {
        check_ctx(o);
        int k = std::min(prec_, o.prec_);
        i64 m = ctx_->pow_p(k);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (nt::mod(c_[i] - o.c_[i], m) != 0) return false;
        return true;
    }

    /// Structural equality: same precision and residues.
    friend bool operator==(const PadicElt& a, const PadicElt& b) { return a.prec_ == b.prec_ && a.c_ == b.c_; }

private:
    static std::vector<i64> poly_mulmod(const std::vector<i64>& a, const std::vector<i64>& b, const std::vector<i64>& h, i64 m) {
        const std::size_t f = a.size();
        std::vector<i128> t(2 * f - 1, 0);
        for (std::size_t i = 0; i < f; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < f; ++j) t[i + j] = nt::mod(t[i + j] + static_cast<i128>(a[i]) * b[j], m);
        }
        for (std::size_t i = t.size(); i-- > f;) {
            i64 top = nt::mod(t[i], m);
            if (top == 0) continue;
            for (std::size_t j = 0; j < f; ++j) t[i - f + j] = nt::mod(t[i - f + j] - static_cast<i128>(top) * h[j], m);
        }
        std::vector<i64> r(f);
        for (std::size_t i = 0; i < f; ++i) r[i] = nt::mod(t[i], m);
        return r;
    }

    void normalize() {
        i64 m = ctx_->pow_p(prec_);
        for (auto& c : c_) c = nt::mod(c, m);
    }
    void check_prec(int k) const {
        if (k < 0) fail(Errc::PrecisionExhausted, "negative precision");
        if (k > ctx_->N()) fail(Errc::DomainError, "precision above context N");
    }
    void check_ctx(const PadicElt& o) const {
        if (!ctx_ || !o.ctx_) fail(Errc::ContextMismatch, "uninitialised p-adic element");
        if (ctx_ != o.ctx_ && !ctx_->compatible(*o.ctx_)) fail(Errc::ContextMismatch, "p-adic elements from different contexts");
    }
    void require_base() const {
        if (c_.size() != 1) fail(Errc::DomainError, "operation requires an element of Z_p (f = 1)");
    }

    PadicCtx ctx_;
    std::vector<i64> c_;
    int prec_ = 0;
};

// Ring glue used by the generic series/q-expansion code.
inline PadicElt zero_like(const PadicElt& x) { return PadicElt::zero(x.ctx()); }
inline PadicElt one_like(const PadicElt& x) { return PadicElt::one(x.ctx()); }
inline PadicElt int_like(const PadicElt& x, i64 v) { return PadicElt(x.ctx(), v); }
inline bool agrees(const PadicElt& a, const PadicElt& b) { return a.agrees(b); }
inline int precision_of(const PadicElt& x) { return x.prec(); }

/// The (p^f - 1)-th root of unity congruent to a mod p.
inline PadicElt teichmuller_lift(const PadicElt& a) {
    if (a.prec() < 1 || a.valuation() > 0) fail(Errc::NonUnit, "Teichmuller lift of a non-unit");
    const auto& ctx = a.ctx();
    PadicElt x = a.with_prec(1).lift_prec(ctx->N());
    const i64 q = ctx->residue_order();
    for (int i = 0; i <= ctx->N() + 1; ++i) {
        PadicElt y = x.pow(q);
        if (y == x) return x;
        x = y;
    }
    return x;
}

/// Fixed generator of the roots of unity of order q - 1 in W_f.
inline PadicElt unit_root_generator(const PadicCtx& ctx) {
    return teichmuller_lift(PadicElt::from_coeffs(ctx, ctx->residue_generator(), ctx->N()));
}

/// A primitive root of unity of order r, r | q - 1, as a power of the fixed generator.
inline PadicElt tame_root_of_unity(const PadicCtx& ctx, i64 r) {
    const i64 q1 = ctx->residue_order() - 1;
    if (r <= 0 || q1 % r != 0) fail(Errc::DomainError, "W_f has no primitive root of unity of order " + std::to_string(r));
    return unit_root_generator(ctx).pow(q1 / r);
}

/// p-adic logarithm of u = 1 mod p, to the precision of u.
inline PadicElt padic_log(const PadicElt& u) {
    const auto& ctx = u.ctx();
    const i64 p = ctx->p();
    PadicElt x = u - PadicElt::one(ctx);
    if (u.prec() < 1 || x.valuation() < 1) fail(Errc::DomainError, "log requires u = 1 mod p");
    const int P = u.prec();
    if (x.is_zero()) return PadicElt::zero(ctx).with_prec(P);
    const int v = x.valuation();
    i64 L = 1;
    while ((L + 1) * v - nt::floor_log(p, L + 1) < P) ++L;
    const int guard = nt::floor_log(p, L) + 1;
    auto hi = ctx->with_precision(std::min(P + guard, ctx->max_prec()));
    PadicElt xh = x.rebase(hi);
    PadicElt power = xh;
    PadicElt sum = PadicElt::zero(hi).with_prec(P);
    for (i64 n = 1; n <= L; ++n) {
        PadicElt term = power.div_int(n);
        sum = (n % 2 == 1) ? sum + term : sum - term;
        power = power * xh;
    }
    return sum.with_prec(P).rebase(ctx);
}

/// p-adic exponential of x with v_p(x) >= 1, to the precision of x.
inline PadicElt padic_exp(const PadicElt& x) {
    const auto& ctx = x.ctx();
    const i64 p = ctx->p();
    if (x.prec() >= 1 && x.valuation() < 1) fail(Errc::DomainError, "exp requires v_p(x) >= 1");
    const int P = x.prec();
    if (x.is_zero()) return PadicElt::one(ctx).with_prec(P);
    const int v = x.valuation();
    // terms n > L have valuation n*v - v_p(n!) >= P
    i64 L = 1;
    while ((L + 1) * v - nt::vp_factorial(L + 1, p) < P) ++L;
    const int guard = nt::vp_factorial(L, p) + 1;
    auto hi = ctx->with_precision(std::min(P + guard, ctx->max_prec()));
    PadicElt xh = x.rebase(hi);
    PadicElt term = PadicElt::one(hi);
    PadicElt sum = PadicElt::one(hi).with_prec(P);
    for (i64 n = 1; n <= L; ++n) {
        term = (term * xh).div_int(n);
        sum = sum + term;
    }
    return sum.with_prec(P).rebase(ctx);
}

/// gamma^s = (1+p)^s for s in Z_p known mod p^k; the result is known mod p^(k+1).
inline PadicElt gamma_pow(const PadicElt& s) {
    const auto& ctx = s.ctx();
    int k = std::min(s.prec() + 1, ctx->N());
    i64 m = ctx->pow_p(k);
    return PadicElt(ctx, nt::powmod(ctx->gamma(), s.residue(), m), k);
}

struct UnitDecomposition {
    i64 torsion_exponent;  ///< a with omega(z) = g^a for the fixed generator g of mu_{p-1}
    PadicElt s;            ///< <z> = gamma^s
    PadicElt omega;        ///< Teichmuller representative of z
};

/// Splits a unit z of Z_p as omega(z) * gamma^s.
inline UnitDecomposition decompose_unit(const PadicElt& z) {
    const auto& ctx = z.ctx();
    if (ctx->f() != 1) fail(Errc::DomainError, "decompose_unit requires f = 1");
    if (!z.is_unit()) fail(Errc::NonUnit, "decompose_unit of a non-unit");
    const i64 p = ctx->p();
    const i64 g = ctx->residue_generator()[0];
    const i64 r = z.residue() % p;
    i64 a = 0;
    for (i64 x = 1; x != r; x = x * g % p) ++a;
    PadicElt omega = teichmuller_lift(z);
    PadicElt principal = z * omega.inverse();
    PadicElt log_z = padic_log(principal);
    PadicElt log_gamma = padic_log(PadicElt(ctx, ctx->gamma(), z.prec()));
    PadicElt s = log_z.div_p_power(1) * log_gamma.div_p_power(1).inverse();
    return {a, s, omega};
}

}  // namespace anticyc
