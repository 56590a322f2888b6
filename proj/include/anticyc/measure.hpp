#pragma once

#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "series.hpp"

namespace anticyc {

enum class Support { Zp, ZpUnits };

/// Values mu(b + p^n Z_p) for b mod p^n.
template <class R>
struct Distribution {
    i64 p = 0;
    int n = 0;
    std::vector<R> table;

    const R& operator()(i64 b) const { return table[static_cast<std::size_t>(nt::mod(b, static_cast<i64>(table.size())))]; }
};

/// Amice series together with a support flag. Measures on Z_p^x are measures on
/// Z_p that vanish off the units.
template <class R>
struct Measure {
    PowerSeries<R> series;
    Support support = Support::Zp;
};

/// Level-n distribution of an exact series by folding its t-basis coefficients.
template <class R>
Distribution<R> fold_to_level(const PowerSeries<R>& f, int n) {
    const i64 p = prime_of(f[0]);
    const i64 pn = nt::ipow(p, n);
    auto w = to_t_basis(f);
    Distribution<R> d{p, n, std::vector<R>(static_cast<std::size_t>(pn), zero_like(f[0]))};
    for (std::size_t b = 0; b < w.size(); ++b) {
        auto& slot = d.table[b % static_cast<std::size_t>(pn)];
        slot = slot + w[b];
    }
    return d;
}

/// sum_b d(b) (1+T)^b, an exact polynomial of degree < p^n.
template <class R>
PowerSeries<R> series_from_distribution(const Distribution<R>& d) {
    return from_t_basis(d.table);
}

/// Reduction modulo (1+T)^{p^n} - 1.
template <class R>
PowerSeries<R> reduce_mod_level(const PowerSeries<R>& f, int n) {
    return series_from_distribution(fold_to_level(f, n));
}

/// Refines a level-n distribution of a series to level n + 1 and checks the
/// distribution relation on the way back.
template <class R>
bool distribution_relation_holds(const PowerSeries<R>& f, int n) {
    auto lo = fold_to_level(f, n);
    auto hi = fold_to_level(f, n + 1);
    const i64 pn = nt::ipow(lo.p, n);
    for (i64 b = 0; b < pn; ++b) {
        R s = zero_like(lo.table[0]);
        for (i64 c = 0; c < lo.p; ++c) s = s + hi(b + pn * c);
        if (!agrees(s, lo(b))) return false;
    }
    return true;
}

/// d(b) = p^{-n} sum_j zeta^{-jb} f(zeta^j - 1), evaluated in Z_p[zeta_{p^n}] and
/// descended. The map f -> d is integral and linear, so the coefficient
/// representatives are pushed through n guard digits and the result is capped
/// at the least input precision.
inline Distribution<PadicElt> distribution_from_series(const Lambda& f, int n) {
    const auto& base = f[0].ctx();
    auto guard = base->with_precision(std::min(base->N() + n, base->max_prec()));
    auto cc = CycloContext::make(guard, n);
    const i64 pn = cc->pn();
    const int in_prec = precision_of(f);
    std::vector<CycloElt> vals;
    vals.reserve(static_cast<std::size_t>(pn));
    auto fc = f.map([&](const PadicElt& x) { return cc->from_base(x.rebase(guard).lift_prec(guard->N())); });
    for (i64 j = 0; j < pn; ++j) vals.push_back(evaluate(fc, cc->zeta_pow(j) - cc->one()));
    Distribution<PadicElt> d{base->p(), n, {}};
    d.table.reserve(static_cast<std::size_t>(pn));
    for (i64 b = 0; b < pn; ++b) {
        CycloElt s = cc->zero();
        for (i64 j = 0; j < pn; ++j) s += cc->zeta_pow(-j * b) * vals[static_cast<std::size_t>(j)];
        d.table.push_back(s.div_p_power(n).descend_to_base().rebase(base).with_prec(in_prec));
    }
    return d;
}

/// Constant term of D^m f, i.e. the m-th moment of the measure.
template <class R>
R moment(const PowerSeries<R>& f, int m) {
    if (m < 0) fail(Errc::DomainError, "negative moment index");
    if (!f.exact() && static_cast<std::size_t>(m) >= f.size())
        fail(Errc::TruncationError, "moment " + std::to_string(m) + " needs truncation > " + std::to_string(m));
    return katz_D(f, m)[0];
}

/// Twist by a locally constant function given as a table mod p^n: multiply each
/// Dirac mass by phi(b). Exact on exact series.
template <class R>
PowerSeries<R> twist_pointwise(const PowerSeries<R>& f, const std::vector<R>& phi) {
    if (!f.exact()) fail(Errc::PrecisionLoss, "pointwise twist needs an exact series");
    auto w = to_t_basis(f);
    const std::size_t pn = phi.size();
    for (std::size_t b = 0; b < w.size(); ++b) w[b] = w[b] * phi[b % pn];
    return from_t_basis(w);
}

template <class R>
Measure<R> twist_pointwise(const Measure<R>& mu, const std::vector<R>& phi) {
    return {twist_pointwise(mu.series, phi), mu.support};
}

/// Indicator of the units mod p, in the coefficient ring of `like`.
template <class R>
std::vector<R> unit_indicator(const R& like) {
    const i64 p = prime_of(like);
    std::vector<R> t;
    for (i64 b = 0; b < p; ++b) t.push_back(int_like(like, b == 0 ? 0 : 1));
    return t;
}

template <class R>
Measure<R> restrict_to_units(const Measure<R>& mu) {
    return {twist_pointwise(mu.series, unit_indicator(mu.series[0])), Support::ZpUnits};
}

/// Support check at level n: the table vanishes on p | b.
template <class R>
bool supported_on_units(const PowerSeries<R>& f, int n) {
    auto d = fold_to_level(f, n);
    for (std::size_t b = 0; b < d.table.size(); b += static_cast<std::size_t>(d.p))
        if (!agrees(d.table[b], zero_like(d.table[b]))) return false;
    return true;
}

/// The Fourier form of the twist,
///   [phi] f(T) = p^{-n} sum_b phi(b) sum_j zeta^{-jb} f(zeta^j (1+T) - 1).
/// Expanding (zeta^j(1+T) - 1)^i = sum_k C(i,k) zeta^{jk} (zeta^j - 1)^{i-k} T^k turns the
/// inner sums into S(r, d) = p^{-n} sum_j zeta^{jr} (zeta^j - 1)^d, which are
/// computed once per (level, truncation) in cyclotomic arithmetic.
class FourierTwister {
public:
    FourierTwister(const PadicCtx& base, int n, std::size_t M) : base_(base), n_(n), M_(M) {
        auto guard = base->with_precision(std::min(base->N() + n, base->max_prec()));
        auto cc = CycloContext::make(guard, n);
        pn_ = cc->pn();
        e_ = cc->e();
        S_.assign(static_cast<std::size_t>(pn_) * M, 0);
        std::vector<CycloElt> pw;  // (zeta^j - 1)^d, updated in d
        for (i64 j = 0; j < pn_; ++j) pw.push_back(cc->one());
        for (std::size_t d = 0; d < M; ++d) {
            for (i64 r = 0; r < pn_; ++r) {
                CycloElt s = cc->zero();
                for (i64 j = 0; j < pn_; ++j) s += cc->zeta_pow(j * r) * pw[static_cast<std::size_t>(j)];
                PadicElt v = s.div_p_power(n).descend_to_base();
                S_[static_cast<std::size_t>(r) * M + d] = v.residue();
                sprec_ = std::min(sprec_, v.prec());
            }
            for (i64 j = 0; j < pn_; ++j) pw[static_cast<std::size_t>(j)] *= cc->zeta_pow(j) - cc->one();
        }
        binom_ = nt::binomial_table(static_cast<int>(M), detail::big_modulus(base->p()));
    }

    int level() const noexcept { return n_; }
    std::size_t truncation() const noexcept { return M_; }
    /// S(r, d) as an integer residue.
    i64 S(i64 r, std::size_t d) const { return S_[static_cast<std::size_t>(nt::mod(r, pn_)) * M_ + d]; }

    template <class R>
    PowerSeries<R> twist(const PowerSeries<R>& f, const std::vector<R>& phi) const {
        if (static_cast<i64>(phi.size()) != pn_) fail(Errc::DomainError, "twist table must have p^n entries");
        const std::size_t L = f.size();
        if (L > M_) fail(Errc::TruncationError, "series longer than the twister truncation");
        const R zero = zero_like(f[0]);
        // Psi(k, d) = sum_b phi(b) S(k - b, d)
        std::vector<R> out(L, zero);
        for (std::size_t k = 0; k < L; ++k) {
            for (std::size_t i = k; i < L; ++i) {
                const std::size_t d = i - k;
                R psi = zero_like(phi[0]);
                for (i64 b = 0; b < pn_; ++b) {
                    i64 s = S(static_cast<i64>(k) - b, d);
                    if (s != 0) psi = psi + mul_int(phi[static_cast<std::size_t>(b)], s);
                }
                i64 c = binom_[i][k];
                if (c != 0) out[k] = out[k] + mul_int(f[i] * psi, c);
            }
            long cap = sprec_;
            if (!f.exact()) {
                // unknown tail i >= L contributes terms of valuation >= ceil((L-k)/e) - n
                cap = std::min(cap, (static_cast<long>(L - k) + e_ - 1) / e_ - n_);
            }
            out[k] = cap_to_padic_digits(out[k], static_cast<int>(std::max(cap, 0L)));
        }
        return PowerSeries<R>(std::move(out), f.exact());
    }

private:
    static PadicElt cap_to_padic_digits(const PadicElt& x, int k) { return x.with_prec(k); }
    static CycloElt cap_to_padic_digits(const CycloElt& x, int k) { return x.with_pi_prec(k * x.ctx()->e()); }
    template <class R>
    static PowerSeries<R> cap_to_padic_digits(const PowerSeries<R>& x, int k) {
        return x.map([k](const R& c) { return cap_to_padic_digits(c, k); });
    }

    PadicCtx base_;
    int n_;
    std::size_t M_;
    i64 pn_ = 0;
    int e_ = 1;
    int sprec_ = 1 << 30;  // p-adic precision of the S table
    std::vector<i64> S_;
    std::vector<std::vector<i64>> binom_;
};

template <class R>
PowerSeries<R> twist_fourier(const PowerSeries<R>& f, const std::vector<R>& phi, const FourierTwister& tw) {
    return tw.twist(f, phi);
}

/// (D^m f)(zeta^u - 1) in the given cyclotomic ring.
inline CycloElt eval_at_root(const Lambda& f, i64 u, const CycloCtx& cc, int m) {
    if (!f.exact() && static_cast<std::size_t>(m) >= f.size()) fail(Errc::TruncationError, "eval_at_root needs m < truncation");
    auto g = katz_D(f, m).map([&](const PadicElt& x) { return cc->from_base(x.rebase(cc->base())); });
    return evaluate(g, cc->zeta_pow(u) - cc->one());
}

/// Amice series from moments: c_n = (1/n!) sum_m s(n, m) ms[m] with signed
/// Stirling numbers of the first kind. Coefficient n loses v_p(n!) digits.
inline Lambda from_moments(const std::vector<PadicElt>& ms) {
    if (ms.empty()) fail(Errc::DomainError, "empty moment list");
    const auto& ctx = ms[0].ctx();
    const i64 p = ctx->p();
    const i64 mod = detail::big_modulus(p);
    const std::size_t L = ms.size();
    // s(n, m) mod p^big via s(n+1, m) = s(n, m-1) - n s(n, m)
    std::vector<std::vector<i64>> s(L, std::vector<i64>(L, 0));
    s[0][0] = 1;
    for (std::size_t n = 0; n + 1 < L; ++n)
        for (std::size_t m = 0; m <= n + 1; ++m) {
            i64 v = 0;
            if (m > 0) v = s[n][m - 1];
            if (m <= n) v = nt::mod(static_cast<i128>(v) - static_cast<i128>(n) * s[n][m], mod);
            s[n + 1][m] = v;
        }
    std::vector<PadicElt> c;
    c.reserve(L);
    for (std::size_t n = 0; n < L; ++n) {
        PadicElt acc = PadicElt::zero(ctx);
        for (std::size_t m = 0; m <= n; ++m)
            if (s[n][m] != 0) acc += ms[m].scaled(s[n][m]);
        for (std::size_t j = 2; j <= n; ++j) acc = acc.div_int(static_cast<i64>(j));
        if (acc.prec() <= 0) fail(Errc::PrecisionExhausted, "binomial moment " + std::to_string(n) + " has no precision left", nt::vp_factorial(static_cast<i64>(n), p));
        c.push_back(acc);
    }
    return Lambda(std::move(c), false);
}

}  // namespace anticyc
