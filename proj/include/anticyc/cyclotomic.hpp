#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "padic.hpp"

namespace anticyc {

class CycloContext;
class CycloElt;
using CycloCtx = std::shared_ptr<const CycloContext>;

/// Z_p[zeta_{p^n}] over the unramified base W_f, in the power basis of pi = zeta - 1.
/// Precision is counted in pi-adic units: an element is known modulo pi^K.
class CycloContext : public std::enable_shared_from_this<CycloContext> {
public:
    static CycloCtx make(PadicCtx base, int n, int pi_prec = 0) {
        if (n < 1) fail(Errc::DomainError, "cyclotomic level must be >= 1");
        auto ctx = std::shared_ptr<CycloContext>(new CycloContext(std::move(base), n, pi_prec));
        ctx->init_zeta_powers();
        return ctx;
    }

    const PadicCtx& base() const noexcept { return base_; }
    i64 p() const noexcept { return base_->p(); }
    int n() const noexcept { return n_; }
    /// p^n, the order of zeta.
    i64 pn() const noexcept { return pn_; }
    int e() const noexcept { return e_; }
    int f() const noexcept { return base_->f(); }
    int pi_prec() const noexcept { return K_; }
    /// Modulus used for raw coefficient storage.
    i64 modulus() const noexcept { return mod_; }

    /// p-adic precision of the coefficient of pi^i in an element known mod pi^K.
    int coeff_prec(int i, int K) const noexcept {
        int r = K - i;
        return r <= 0 ? 0 : (r + e_ - 1) / e_;
    }

    /// pi^e = -sum_i relation()[i] pi^i.
    const std::vector<i64>& relation() const noexcept { return rel_; }

    CycloElt zeta_pow(i64 j) const;
    CycloElt zero() const;
    CycloElt one() const;
    CycloElt pi() const;
    CycloElt from_int(i64 v) const;
    CycloElt from_base(const PadicElt& x) const;

private:
    CycloContext(PadicCtx base, int n, int pi_prec) : base_(std::move(base)), n_(n) {
        const i64 p = base_->p();
        pn_ = nt::ipow(p, n);
        e_ = static_cast<int>(pn_ / p * (p - 1));
        K_ = pi_prec > 0 ? pi_prec : e_ * base_->N();
        int cp = (K_ + e_ - 1) / e_;
        if (cp > base_->N()) fail(Errc::DomainError, "pi-precision exceeds the base precision");
        mod_ = base_->pow_p(cp);
        // Phi_{p^n}(1 + pi) = sum_{j<p} (1+pi)^{j p^{n-1}}
        auto binom = nt::binomial_table(e_ + 1, mod_);
        std::vector<i64> phi(static_cast<std::size_t>(e_) + 1, 0);
        const i64 step = pn_ / p;
        for (i64 j = 0; j < p; ++j) {
            i64 d = j * step;
            for (i64 i = 0; i <= d; ++i)
                phi[static_cast<std::size_t>(i)] = nt::mod(phi[static_cast<std::size_t>(i)] + binom[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)], mod_);
        }
        rel_.assign(phi.begin(), phi.end() - 1);
    }

    void init_zeta_powers();

    PadicCtx base_;
    int n_;
    i64 pn_;
    int e_;
    int K_;
    i64 mod_;
    std::vector<i64> rel_;
    std::vector<std::vector<i64>> zeta_;
};

class CycloElt {
public:
    CycloElt() = default;

    CycloElt(CycloCtx ctx, std::vector<i64> raw, int K) : ctx_(std::move(ctx)), c_(std::move(raw)), K_(K) {
        if (static_cast<int>(c_.size()) != ctx_->e() * ctx_->f()) fail(Errc::DomainError, "cyclotomic coefficient vector has wrong length");
        K_ = std::min(K_, ctx_->pi_prec());
        if (K_ < 0) fail(Errc::PrecisionExhausted, "negative pi-precision");
        canonicalize();
    }

    const CycloCtx& ctx() const noexcept { return ctx_; }
    int pi_prec() const noexcept { return K_; }
    const std::vector<i64>& raw() const noexcept { return c_; }

    /// Coefficient of pi^i as a base-ring element.
    PadicElt coeff(int i) const {
        const int f = ctx_->f();
        std::vector<i64> v(c_.begin() + i * f, c_.begin() + (i + 1) * f);
        return PadicElt::from_coeffs(ctx_->base(), std::move(v), ctx_->coeff_prec(i, K_));
    }

    static constexpr int infinity = std::numeric_limits<int>::max();

    /// v_pi; `infinity` when the element is zero to its precision.
    int pi_val() const noexcept {
        const int e = ctx_->e(), f = ctx_->f();
        const i64 p = ctx_->p();
        int best = infinity;
        for (int i = 0; i < e; ++i) {
            for (int k = 0; k < f; ++k) {
                i64 c = c_[static_cast<std::size_t>(i * f + k)];
                if (c != 0) best = std::min(best, e * nt::vp(c, p) + i);
            }
        }
        return best;
    }
    /// v_pi capped at the precision.
    int pi_val_capped() const noexcept { return std::min(pi_val(), K_); }
    bool is_zero() const noexcept {
        return std::all_of(c_.begin(), c_.end(), [](i64 c) { return c == 0; });
    }

    CycloElt with_pi_prec(int K) const { return CycloElt(ctx_, c_, std::min(K, K_)); }

    /// Declares extra precision; only meaningful for exactly known values.
    CycloElt lift_pi_prec(int K) const { return CycloElt(ctx_, c_, std::min(K, ctx_->pi_prec())); }

    friend CycloElt operator+(const CycloElt& a, const CycloElt& b) {
        a.check(b);
        std::vector<i64> r(a.c_.size());
        const i64 m = a.ctx_->modulus();
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = nt::mod(a.c_[i] + b.c_[i], m);
        return CycloElt(a.ctx_, std::move(r), std::min(a.K_, b.K_));
    }
    CycloElt operator-() const {
        std::vector<i64> r(c_.size());
        const i64 m = ctx_->modulus();
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = nt::mod(-c_[i], m);
        return CycloElt(ctx_, std::move(r), K_);
    }
    friend CycloElt operator-(const CycloElt& a, const CycloElt& b) { return a + (-b); }

    friend CycloElt operator*(const CycloElt& a, const CycloElt& b) {
        a.check(b);
        const int va = a.pi_val_capped(), vb = b.pi_val_capped();
        const int K = std::min({a.K_ + vb, b.K_ + va, a.ctx_->pi_prec()});
        return CycloElt(a.ctx_, multiply_raw(*a.ctx_, a.c_, b.c_), K);
    }

    CycloElt& operator+=(const CycloElt& o) { return *this = *this + o; }
    CycloElt& operator-=(const CycloElt& o) { return *this = *this - o; }
    CycloElt& operator*=(const CycloElt& o) { return *this = *this * o; }

    CycloElt scaled(i64 v) const { return *this * ctx_->from_int(v); }
    CycloElt scaled(const PadicElt& x) const { return *this * ctx_->from_base(x); }

    CycloElt pow(i64 k) const {
        if (k < 0) return inverse().pow(-k);
        CycloElt r = ctx_->one();
        CycloElt b = *this;
        while (k > 0) {
            if (k & 1) r *= b;
            k >>= 1;
            if (k) b *= b;
        }
        return r;
    }

    /// Exact division by p^k. The pi-valuation must be at least k*e.
    CycloElt div_p_power(int k) const {
        if (k == 0) return *this;
        const int e = ctx_->e();
        const int need = k * e;
        if (K_ < need) fail(Errc::PrecisionExhausted, "division by p^" + std::to_string(k) + " exhausts pi-precision", need - K_);
        int v = pi_val_capped();
        if (v < need) fail(Errc::PrecisionLoss, "sum not divisible by p^" + std::to_string(k), need - v);
        std::vector<i64> r(c_);
        const i64 pk = ctx_->base()->pow_p(k);
        for (auto& x : r) x /= pk;
        return CycloElt(ctx_, std::move(r), K_ - need);
    }

    /// Inverse of a unit (pi_val = 0) by Newton iteration.
    CycloElt inverse() const {
        if (K_ == 0 || pi_val() != 0) fail(Errc::NonUnit, "inverse of a non-unit in the cyclotomic ring");
        CycloElt x = ctx_->from_base(coeff(0).with_prec(1).inverse()).lift_pi_prec(K_);
        const CycloElt two = ctx_->from_int(2);
        for (int iter = 0; iter < 64; ++iter) {
            CycloElt y = (x * (two - *this * x)).with_pi_prec(K_);
            if (y.c_ == x.c_) return y;
            x = y;
        }
        fail(Errc::NoConvergence, "Newton inverse did not stabilise");
    }

    /// The image under zeta -> zeta^a (a prime to p).
    CycloElt galois(i64 a) const {
        if (nt::mod(a, ctx_->p()) == 0) fail(Errc::DomainError, "Galois exponent must be prime to p");
        CycloElt img = ctx_->zeta_pow(a) - ctx_->one();
        return horner(img).with_pi_prec(K_);
    }

    /// Equality modulo the joint pi-precision.
    bool agrees(const CycloElt& o) const {
        CycloElt d = (*this - o);
        return d.is_zero();
    }

    /// Extracts the base-ring value when every pi^i coefficient with i >= 1 vanishes.
    PadicElt descend_to_base() const {
        const int f = ctx_->f();
        for (std::size_t i = static_cast<std::size_t>(f); i < c_.size(); ++i)
            if (c_[i] != 0) fail(Errc::NotRational, "element does not lie in the base ring");
        std::vector<i64> v(c_.begin(), c_.begin() + f);
        return PadicElt::from_coeffs(ctx_->base(), std::move(v), K_ / ctx_->e());
    }

    /// Image of an element of a lower level under zeta_{p^{n-1}} -> zeta_{p^n}^p.
    static CycloElt embed_from_lower(const CycloElt& x, const CycloCtx& upper) {
        const auto& lo = x.ctx();
        if (lo->n() + 1 != upper->n() || lo->p() != upper->p() || lo->base()->poly() != upper->base()->poly())
            fail(Errc::ContextMismatch, "embedding requires consecutive levels over the same base");
        CycloElt img = upper->zeta_pow(upper->p()) - upper->one();
        return x.horner_into(img, upper).with_pi_prec(x.pi_prec() * static_cast<int>(upper->p()));
    }

    friend bool operator==(const CycloElt& a, const CycloElt& b) { return a.K_ == b.K_ && a.c_ == b.c_; }

private:
    friend class CycloContext;

    static std::vector<i64> multiply_raw(const CycloContext& ctx, const std::vector<i64>& a, const std::vector<i64>& b) {
        const int e = ctx.e(), f = ctx.f();
        const i64 m = ctx.modulus();
        if (f == 1) {
            std::vector<i128> t(static_cast<std::size_t>(2 * e - 1), 0);
            for (int i = 0; i < e; ++i) {
                if (a[static_cast<std::size_t>(i)] == 0) continue;
                const i128 ai = a[static_cast<std::size_t>(i)];
                for (int j = 0; j < e; ++j) {
                    auto& s = t[static_cast<std::size_t>(i + j)];
                    s = nt::mod(s + ai * b[static_cast<std::size_t>(j)], m);
                }
            }
            reduce_pi(ctx, t, 1);
            std::vector<i64> r(static_cast<std::size_t>(e));
            for (int i = 0; i < e; ++i) r[static_cast<std::size_t>(i)] = nt::mod(t[static_cast<std::size_t>(i)], m);
            return r;
        }
        // general f: multiply in (pi, x), reduce x by h, then pi by the relation
        const auto& h = ctx.base()->poly();
        const int X = 2 * f - 1;
        std::vector<i128> t(static_cast<std::size_t>((2 * e - 1) * X), 0);
        for (int i = 0; i < e; ++i)
            for (int k = 0; k < f; ++k) {
                i64 av = a[static_cast<std::size_t>(i * f + k)];
                if (av == 0) continue;
                for (int j = 0; j < e; ++j)
                    for (int l = 0; l < f; ++l) {
                        auto& s = t[static_cast<std::size_t>((i + j) * X + k + l)];
                        s = nt::mod(s + static_cast<i128>(av) * b[static_cast<std::size_t>(j * f + l)], m);
                    }
            }
        std::vector<i128> u(static_cast<std::size_t>((2 * e - 1) * f), 0);
        for (int s = 0; s < 2 * e - 1; ++s) {
            i128* row = &t[static_cast<std::size_t>(s * X)];
            for (int d = X - 1; d >= f; --d) {
                i64 top = nt::mod(row[d], m);
                if (top == 0) continue;
                for (int q = 0; q < f; ++q) row[d - f + q] = nt::mod(row[d - f + q] - static_cast<i128>(top) * h[static_cast<std::size_t>(q)], m);
            }
            for (int q = 0; q < f; ++q) u[static_cast<std::size_t>(s * f + q)] = row[q];
        }
        reduce_pi(ctx, u, f);
        std::vector<i64> r(static_cast<std::size_t>(e * f));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = nt::mod(u[i], m);
        return r;
    }

    // Top-down elimination of pi^s, s >= e, with blocks of width f.
    static void reduce_pi(const CycloContext& ctx, std::vector<i128>& t, int f) {
        const int e = ctx.e();
        const i64 m = ctx.modulus();
        const auto& rel = ctx.relation();
        const int top_deg = static_cast<int>(t.size()) / f - 1;
        for (int s = top_deg; s >= e; --s) {
            for (int q = 0; q < f; ++q) {
                i64 c = nt::mod(t[static_cast<std::size_t>(s * f + q)], m);
                if (c == 0) continue;
                t[static_cast<std::size_t>(s * f + q)] = 0;
                for (int i = 0; i < e; ++i) {
                    if (rel[static_cast<std::size_t>(i)] == 0) continue;
                    auto& x = t[static_cast<std::size_t>((s - e + i) * f + q)];
                    x = nt::mod(x - static_cast<i128>(c) * rel[static_cast<std::size_t>(i)], m);
                }
            }
        }
    }

    // Evaluates sum_i c_i y^i in the context of y.
    CycloElt horner_into(const CycloElt& y, const CycloCtx& target) const {
        const int e = ctx_->e(), f = ctx_->f();
        CycloElt acc = target->zero();
        for (int i = e - 1; i >= 0; --i) {
            std::vector<i64> v(c_.begin() + i * f, c_.begin() + (i + 1) * f);
            PadicElt ci = PadicElt::from_coeffs(target->base(), std::move(v), target->base()->N());
            acc = acc * y + target->from_base(ci);
        }
        return acc;
    }
    CycloElt horner(const CycloElt& y) const { return horner_into(y, ctx_); }

    void canonicalize() {
        const int e = ctx_->e(), f = ctx_->f();
        for (int i = 0; i < e; ++i) {
            i64 m = ctx_->base()->pow_p(ctx_->coeff_prec(i, K_));
            for (int k = 0; k < f; ++k) {
                auto& c = c_[static_cast<std::size_t>(i * f + k)];
                c = nt::mod(c, m);
            }
        }
    }

    void check(const CycloElt& o) const {
        if (!ctx_ || !o.ctx_) fail(Errc::ContextMismatch, "uninitialised cyclotomic element");
        if (ctx_ != o.ctx_ && (ctx_->n() != o.ctx_->n() || ctx_->pi_prec() != o.ctx_->pi_prec() || !ctx_->base()->compatible(*o.ctx_->base())))
            fail(Errc::ContextMismatch, "cyclotomic elements from different contexts");
    }

    CycloCtx ctx_;
    std::vector<i64> c_;
    int K_ = 0;
};

inline CycloElt CycloContext::zero() const {
    return CycloElt(shared_from_this(), std::vector<i64>(static_cast<std::size_t>(e_ * f()), 0), K_);
}
inline CycloElt CycloContext::one() const { return from_int(1); }
inline CycloElt CycloContext::from_int(i64 v) const {
    std::vector<i64> r(static_cast<std::size_t>(e_ * f()), 0);
    r[0] = nt::mod(v, mod_);
    return CycloElt(shared_from_this(), std::move(r), K_);
}
inline CycloElt CycloContext::from_base(const PadicElt& x) const {
    if (x.ctx()->p() != p() || x.ctx()->poly() != base_->poly()) fail(Errc::ContextMismatch, "base element from a different p-adic context");
    std::vector<i64> r(static_cast<std::size_t>(e_ * f()), 0);
    for (int k = 0; k < f(); ++k) r[static_cast<std::size_t>(k)] = nt::mod(x.coeffs()[static_cast<std::size_t>(k)], mod_);
    return CycloElt(shared_from_this(), std::move(r), std::min(K_, x.prec() * e_));
}
inline CycloElt CycloContext::pi() const {
    std::vector<i64> r(static_cast<std::size_t>(e_ * f()), 0);
    if (e_ > 1) {
        r[static_cast<std::size_t>(f())] = 1;
    } else {
        // e = 1 never happens for odd p; kept for completeness
        for (int k = 0; k < f(); ++k) r[static_cast<std::size_t>(k)] = nt::mod(-rel_[0], mod_);
    }
    return CycloElt(shared_from_this(), std::move(r), K_);
}
inline CycloElt CycloContext::zeta_pow(i64 j) const {
    j = nt::mod(j, pn_);
    return CycloElt(shared_from_this(), zeta_[static_cast<std::size_t>(j)], K_);
}
inline void CycloContext::init_zeta_powers() {
    zeta_.resize(static_cast<std::size_t>(pn_));
    std::vector<i64> cur(static_cast<std::size_t>(e_ * f()), 0);
    cur[0] = 1;
    std::vector<i64> z(static_cast<std::size_t>(e_ * f()), 0);
    z[0] = 1;
    z[static_cast<std::size_t>(f())] = 1;
    for (i64 j = 0; j < pn_; ++j) {
        zeta_[static_cast<std::size_t>(j)] = cur;
        cur = CycloElt::multiply_raw(*this, cur, z);
    }
}

inline CycloElt zero_like(const CycloElt& x) { return x.ctx()->zero(); }
inline CycloElt one_like(const CycloElt& x) { return x.ctx()->one(); }
inline CycloElt int_like(const CycloElt& x, i64 v) { return x.ctx()->from_int(v); }
inline bool agrees(const CycloElt& a, const CycloElt& b) { return a.agrees(b); }
inline int precision_of(const CycloElt& x) { return x.pi_prec(); }

}  // namespace anticyc
