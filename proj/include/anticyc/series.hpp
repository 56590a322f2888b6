#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "padic.hpp"

namespace anticyc {

inline PadicElt mul_int(const PadicElt& x, i64 n) { return x.scaled(n); }
inline CycloElt mul_int(const CycloElt& x, i64 n) { return x.scaled(n); }
inline i64 prime_of(const PadicElt& x) { return x.p(); }
inline i64 prime_of(const CycloElt& x) { return x.ctx()->p(); }
/// Valuation in the ring's own precision units.
inline int valuation_units(const PadicElt& x) { return x.valuation(); }
inline int valuation_units(const CycloElt& x) { return x.pi_val_capped(); }
inline PadicElt cap_precision(const PadicElt& x, int k) { return x.with_prec(std::max(k, 0)); }
inline CycloElt cap_precision(const CycloElt& x, int k) { return x.with_pi_prec(std::max(k, 0)); }

namespace detail {

/// Largest power of p below 2^62; binomials are reduced modulo it before scaling.
inline i64 big_modulus(i64 p) {
    i64 m = 1;
    while (m <= (i64{1} << 62) / p) m *= p;
    return m;
}

template <class T>
bool coeff_agrees(const T& a, const T& b) {
    return agrees(a, b);
}

}  // namespace detail

/// Truncated power series sum c_k T^k. When `exact` is set the series is a
/// polynomial (all coefficients past size() vanish); otherwise it is known
/// only modulo T^size().
template <class R>
class PowerSeries {
public:
    PowerSeries() = default;
    PowerSeries(std::vector<R> coeffs, bool exact) : c_(std::move(coeffs)), exact_(exact) {
        if (c_.empty()) fail(Errc::DomainError, "power series needs at least one coefficient");
    }

    static PowerSeries constant(const R& c) { return PowerSeries({c}, true); }

    std::size_t size() const noexcept { return c_.size(); }
    bool exact() const noexcept { return exact_; }
    const std::vector<R>& coeffs() const noexcept { return c_; }
    const R& operator[](std::size_t i) const { return c_[i]; }

    /// Coefficient k, zero past the end of an exact series.
    R coeff(std::size_t k) const {
        if (k < c_.size()) return c_[k];
        if (exact_) return zero_like(c_[0]);
        fail(Errc::TruncationError, "coefficient " + std::to_string(k) + " beyond truncation " + std::to_string(c_.size()));
    }

    /// Forgets exactness and keeps M coefficients.
    PowerSeries truncated(std::size_t M) const {
        if (M == 0) fail(Errc::DomainError, "truncation must be positive");
        std::vector<R> r;
        r.reserve(M);
        for (std::size_t k = 0; k < M; ++k) {
            if (k < c_.size()) {
                r.push_back(c_[k]);
            } else if (exact_) {
                r.push_back(zero_like(c_[0]));
            } else {
                fail(Errc::TruncationError, "cannot extend a truncated series");
            }
        }
        return PowerSeries(std::move(r), false);
    }

    /// Drops trailing zero coefficients of an exact series.
    PowerSeries trimmed() const {
        if (!exact_) return *this;
        std::size_t n = c_.size();
        while (n > 1 && is_zero_coeff(c_[n - 1])) --n;
        return PowerSeries(std::vector<R>(c_.begin(), c_.begin() + static_cast<long>(n)), true);
    }

    template <class F>
    auto map(F&& fn) const {
        using S = decltype(fn(c_[0]));
        std::vector<S> r;
        r.reserve(c_.size());
        for (const auto& x : c_) r.push_back(fn(x));
        return PowerSeries<S>(std::move(r), exact_);
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
        const std::size_t L = joint_length(a, b, std::max(a.size(), b.size()));
        std::vector<R> r;
        r.reserve(L);
        for (std::size_t k = 0; k < L; ++k) r.push_back(a.coeff(k) + b.coeff(k));
        return PowerSeries(std::move(r), a.exact_ && b.exact_);
    }
    PowerSeries operator-() const {
        return map([](const R& x) { return -x; });
    }
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) { return a + (-b); }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        const std::size_t L = joint_length(a, b, a.size() + b.size() - 1);
        std::vector<R> r(L, zero_like(a.c_[0]));
        for (std::size_t i = 0; i < a.size() && i < L; ++i) {
            if (is_zero_coeff(a.c_[i]) && a.exact_) continue;
            for (std::size_t j = 0; j < b.size() && i + j < L; ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        }
        return PowerSeries(std::move(r), a.exact_ && b.exact_);
    }

    PowerSeries& operator+=(const PowerSeries& o) { return *this = *this + o; }
    PowerSeries& operator-=(const PowerSeries& o) { return *this = *this - o; }
    PowerSeries& operator*=(const PowerSeries& o) { return *this = *this * o; }

    /// Coefficientwise product with a scalar.
    PowerSeries scaled(const R& s) const {
        return map([&](const R& x) { return x * s; });
    }

    /// Equality of coefficients on the joint range, each to its joint precision.
    bool agrees(const PowerSeries& o) const {
        const std::size_t L = joint_length(*this, o, std::max(size(), o.size()));
        for (std::size_t k = 0; k < L; ++k)
            if (!detail::coeff_agrees(coeff(k), o.coeff(k))) return false;
        return true;
    }

private:
    static std::size_t joint_length(const PowerSeries& a, const PowerSeries& b, std::size_t exact_len) {
        if (a.exact_ && b.exact_) return exact_len;
        if (a.exact_) return b.size();
        if (b.exact_) return a.size();
        return std::min(a.size(), b.size());
    }
    static bool is_zero_coeff(const R& x) { return detail::coeff_agrees(x, zero_like(x)) && precision_of(x) > 0; }

    std::vector<R> c_;
    bool exact_ = false;
};

template <class R>
PowerSeries<R> zero_like(const PowerSeries<R>& x) {
    return PowerSeries<R>::constant(zero_like(x[0]));
}
template <class R>
PowerSeries<R> one_like(const PowerSeries<R>& x) {
    return PowerSeries<R>::constant(one_like(x[0]));
}
template <class R>
PowerSeries<R> int_like(const PowerSeries<R>& x, i64 v) {
    return PowerSeries<R>::constant(int_like(x[0], v));
}
template <class R>
bool agrees(const PowerSeries<R>& a, const PowerSeries<R>& b) {
    return a.agrees(b);
}
template <class R>
int precision_of(const PowerSeries<R>& x) {
    int p = precision_of(x[0]);
    for (const auto& c : x.coeffs()) p = std::min(p, precision_of(c));
    return p;
}
template <class R>
PowerSeries<R> mul_int(const PowerSeries<R>& x, i64 n) {
    return x.map([n](const R& c) { return mul_int(c, n); });
}
template <class R>
i64 prime_of(const PowerSeries<R>& x) {
    return prime_of(x[0]);
}

using Lambda = PowerSeries<PadicElt>;
using LambdaCyclo = PowerSeries<CycloElt>;

/// Katz operator D = (1+T) d/dT applied m times. On a truncated series each
/// application loses the top coefficient.
template <class R>
PowerSeries<R> katz_D(const PowerSeries<R>& f, int m) {
    if (m < 0) fail(Errc::DomainError, "negative order for D");
    std::vector<R> c = f.coeffs();
    for (int it = 0; it < m; ++it) {
        const std::size_t L = c.size();
        if (!f.exact() && L <= 1) fail(Errc::TruncationError, "D exhausts the truncation");
        std::vector<R> d;
        const std::size_t out = f.exact() ? L : L - 1;
        d.reserve(out);
        for (std::size_t k = 0; k < out; ++k) {
            R v = mul_int(c[k], static_cast<i64>(k));
            if (k + 1 < L) v = v + mul_int(c[k + 1], static_cast<i64>(k + 1));
            d.push_back(std::move(v));
        }
        c = std::move(d);
    }
    return PowerSeries<R>(std::move(c), f.exact());
}

/// Coefficients w_b of f(t - 1) in powers of t = 1 + T (exact series only).
template <class R>
std::vector<R> to_t_basis(const PowerSeries<R>& f) {
    if (!f.exact()) fail(Errc::PrecisionLoss, "t-basis conversion needs an exact polynomial");
    const std::size_t L = f.size();
    const i64 mod = detail::big_modulus(prime_of(f[0]));
    auto binom = nt::binomial_table(static_cast<int>(L), mod);
    std::vector<R> w(L, zero_like(f[0]));
    for (std::size_t k = 0; k < L; ++k) {
        for (std::size_t b = 0; b <= k; ++b) {
            i64 c = binom[k][b];
            if ((k - b) % 2 == 1) c = nt::mod(-c, mod);
            if (c != 0) w[b] = w[b] + mul_int(f[k], c);
        }
    }
    return w;
}

/// The polynomial sum_b w_b (1+T)^b.
template <class R>
PowerSeries<R> from_t_basis(const std::vector<R>& w) {
    const std::size_t L = w.size();
    const i64 mod = detail::big_modulus(prime_of(w[0]));
    auto binom = nt::binomial_table(static_cast<int>(L), mod);
    std::vector<R> c(L, zero_like(w[0]));
    for (std::size_t b = 0; b < L; ++b)
        for (std::size_t k = 0; k <= b; ++k)
            if (binom[b][k] != 0) c[k] = c[k] + mul_int(w[b], binom[b][k]);
    return PowerSeries<R>(std::move(c), true);
}

/// (1+T)^a for an integer a >= 0, as an exact polynomial.
template <class R>
PowerSeries<R> group_like(const R& unit, i64 a) {
    if (a < 0) fail(Errc::DomainError, "group-like element needs a >= 0; use group_like_padic");
    std::vector<R> w(static_cast<std::size_t>(a) + 1, zero_like(unit));
    w.back() = unit;
    return from_t_basis(w);
}

/// (1+T)^s for s in Z_p known mod p^P, truncated at T^M. Coefficient i >= 1 is
/// known modulo p^(P - floor(log_p i)), since (1+T)^(p^P) - 1 has coefficients
/// of valuation P - v_p(i).
inline Lambda group_like_padic(const PadicElt& s, std::size_t M) {
    const auto& ctx = s.ctx();
    const i64 p = ctx->p();
    const int P = s.prec();
    const i64 st = s.residue();
    std::vector<PadicElt> c;
    c.reserve(M);
    c.push_back(PadicElt::one(ctx));
    // binom(st, i) with p-parts tracked separately
    const int W = ctx->N();
    const i64 mw = ctx->pow_p(W);
    int vexp = 0;
    i64 unit = 1;
    bool zero = false;
    for (std::size_t i = 1; i < M; ++i) {
        int pr = std::max(0, P - nt::floor_log(p, static_cast<i64>(i)));
        i64 num = st - static_cast<i64>(i) + 1;
        i64 den = static_cast<i64>(i);
        if (num == 0) zero = true;
        if (!zero) {
            int vn = nt::vp(num, p), vd = nt::vp(den, p);
            vexp += vn - vd;
            unit = nt::mulmod(unit, nt::mod(num / ctx->pow_p(vn), mw), mw);
            unit = nt::mulmod(unit, nt::invmod(nt::mod(den / ctx->pow_p(vd), mw), mw), mw);
        }
        i64 val = (zero || vexp >= W) ? 0 : nt::mulmod(unit, ctx->pow_p(vexp), mw);
        c.emplace_back(ctx, val, std::min(pr, W));
    }
    return Lambda(std::move(c), false);
}

/// Horner evaluation at T = x. A truncated series contributes a tail bound:
/// the result is capped at size() * v(x) in the ring's precision units.
template <class R>
R evaluate(const PowerSeries<R>& f, const R& x) {
    R acc = zero_like(x);
    for (std::size_t k = f.size(); k-- > 0;) acc = acc * x + f[k];
    if (!f.exact()) {
        const int v = valuation_units(x);
        const long cap = static_cast<long>(f.size()) * v;
        if (cap < precision_of(acc)) acc = cap_precision(acc, static_cast<int>(cap));
    }
    return acc;
}

/// Horner evaluation of a series with coefficients in a scalar ring at a point
/// of a larger ring, given an embedding.
template <class R, class S, class Embed>
S evaluate_embedded(const PowerSeries<R>& f, const S& x, Embed&& embed) {
    return evaluate(f.map(embed), x);
}

}  // namespace anticyc
