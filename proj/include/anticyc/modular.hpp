#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "characters.hpp"
#include "padic.hpp"
#include "quadratic.hpp"
#include "series.hpp"

namespace anticyc {

/// Truncated q-expansion sum_{n<Q} a(n) q^n with weight/level/nebentypus metadata.
template <class R>
struct QExp {
    std::vector<R> a;
    int k = 0;
    i64 level = 1;
    DirichletChar neben;

    std::size_t Q() const noexcept { return a.size(); }
    bool agrees(const QExp& o) const {
        std::size_t n = std::min(Q(), o.Q());
        for (std::size_t i = 0; i < n; ++i)
            if (!anticyc::agrees(a[i], o.a[i])) return false;
        return true;
    }
    QExp operator+(const QExp& o) const {
        QExp r = *this;
        r.a.resize(std::min(Q(), o.Q()), a[0]);
        for (std::size_t i = 0; i < r.Q(); ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    QExp scaled(const R& s) const {
        QExp r = *this;
        for (auto& x : r.a) x = x * s;
        return r;
    }
};

/// a(n, T(l) f) = a(nl) + psi(l) l^(k-1) a(n/l); output truncation ceil(Q/l).
template <class R>
QExp<R> hecke_T(const QExp<R>& f, i64 l, const R& psi_l) {
    if (!nt::is_prime(l) || f.level % l == 0) fail(Errc::BadPrime, "T(" + std::to_string(l) + ") needs a prime not dividing the level");
    const std::size_t Q = f.Q();
    const std::size_t Qo = (Q + static_cast<std::size_t>(l) - 1) / static_cast<std::size_t>(l);
    const R lk = int_like(f.a[0], l).pow(f.k - 1) * psi_l;
    QExp<R> g = f;
    g.a.assign(Qo, zero_like(f.a[0]));
    for (std::size_t n = 0; n < Qo; ++n) {
        g.a[n] = f.a[n * static_cast<std::size_t>(l)];
        if (n % static_cast<std::size_t>(l) == 0) g.a[n] = g.a[n] + lk * f.a[n / static_cast<std::size_t>(l)];
    }
    return g;
}

/// a(n, U(p) f) = a(np); output truncation ceil(Q/p).
template <class R>
QExp<R> hecke_U(const QExp<R>& f, i64 p) {
    const std::size_t P = static_cast<std::size_t>(p);
    QExp<R> g = f;
    g.a.clear();
    for (std::size_t n = 0; n * P < f.Q(); ++n) g.a.push_back(f.a[n * P]);
    if (g.level % p != 0) g.level *= p;
    return g;
}

/// f(q^p); output truncation p(Q-1)+1.
template <class R>
QExp<R> hecke_V(const QExp<R>& f, i64 p) {
    const std::size_t P = static_cast<std::size_t>(p);
    QExp<R> g = f;
    g.a.assign(P * (f.Q() - 1) + 1, zero_like(f.a[0]));
    for (std::size_t n = 0; n < f.Q(); ++n) g.a[n * P] = f.a[n];
    g.level *= p;
    return g;
}

/// d^m: a(n) -> n^m a(n).
template <class R>
QExp<R> katz_d(const QExp<R>& f, int m) {
    if (m < 0) fail(Errc::DomainError, "negative power of d");
    QExp<R> g = f;
    for (std::size_t n = 0; n < f.Q(); ++n) g.a[n] = int_like(f.a[n], static_cast<i64>(n)).pow(m) * f.a[n];
    g.k += 2 * m;
    return g;
}

template <class R>
QExp<R> p_deplete(const QExp<R>& f, i64 p) {
    QExp<R> g = f;
    for (std::size_t n = 0; n < f.Q(); n += static_cast<std::size_t>(p)) g.a[n] = zero_like(f.a[n]);
    if (g.level % p != 0) g.level *= p * p;
    return g;
}

// ---------------------------------------------------------------------------

using BigInt = boost::multiprecision::cpp_int;

/// tau(n) for n < Q from q prod (1 - q^n)^24, with the Euler product expanded
/// by the pentagonal number theorem.
inline std::vector<BigInt> delta_coeffs(std::size_t Q) {
    std::vector<BigInt> eta(Q, 0);  // prod (1 - q^n), truncated at q^(Q-1)
    eta[0] = 1;
    for (i64 k = 1;; ++k) {
        bool any = false;
        for (i64 s : {k, -k}) {
            i64 e = s * (3 * s - 1) / 2;
            if (e < static_cast<i64>(Q)) {
                eta[static_cast<std::size_t>(e)] += (k % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) break;
    }
    auto mul = [&](const std::vector<BigInt>& x, const std::vector<BigInt>& y) {
        std::vector<BigInt> z(Q, 0);
        for (std::size_t i = 0; i < Q; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; i + j < Q; ++j)
                if (y[j] != 0) z[i + j] += x[i] * y[j];
        }
        return z;
    };
    std::vector<BigInt> e2 = mul(eta, eta), e4 = mul(e2, e2), e8 = mul(e4, e4), e16 = mul(e8, e8);
    std::vector<BigInt> e24 = mul(e16, e8);
    std::vector<BigInt> tau(Q, 0);
    for (std::size_t n = 1; n < Q; ++n) tau[n] = e24[n - 1];
    return tau;
}

inline i64 bigint_mod(const BigInt& x, i64 m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return static_cast<i64>(r);
}

/// Delta as a q-expansion over Z_p, truncated at Q.
inline QExp<PadicElt> delta_qexp(const PadicCtx& ctx, std::size_t Q) {
    auto tau = delta_coeffs(Q);
    const i64 m = ctx->pow_p(ctx->N());
    QExp<PadicElt> f;
    for (const auto& t : tau) f.a.emplace_back(ctx, bigint_mod(t, m));
    f.k = 12;
    f.level = 1;
    f.neben = DirichletChar::trivial(ctx->p());
    return f;
}

/// Theta series of a class group character: a(n) = sum over ideals of norm n
/// (prime to the conductor) of chi(class). a(0) is set to 0.
inline QExp<CycloElt> theta_series(const ClassGroupChar& chi, std::size_t Q, const CharRing& R) {
    const auto& O = chi.group->order();
    const i64 D = O.K.D, c = O.conductor;
    QExp<CycloElt> f;
    f.a.assign(Q, R.ctx()->zero());
    f.k = 1;
    f.level = -O.disc;
    f.neben = DirichletChar::trivial(R.ctx()->p());
    for (std::size_t n = 1; n < Q; ++n) {
        for (const auto& L : ideals_of_norm(D, static_cast<i64>(n))) {
            if (std::gcd(static_cast<i64>(n), c) != 1) continue;
            FormClass cls = lattice_to_form(intersect_order(L, c), D, c);
            f.a[n] += R.realize(class_char_eval(chi, cls));
        }
    }
    return f;
}

/// Ideal counts sum_{d|n} (D|d), the theta series of the trivial character.
inline std::vector<i64> theta_counts(i64 D, std::size_t Q) {
    std::vector<i64> a(Q, 0);
    for (std::size_t n = 1; n < Q; ++n) a[n] = static_cast<i64>(ideals_of_norm(D, static_cast<i64>(n)).size());
    return a;
}

// ---------------------------------------------------------------------------
// Matrices mod p^N and the ordinary projector.

using ModMatrix = std::vector<std::vector<i64>>;

inline ModMatrix mat_mul(const ModMatrix& A, const ModMatrix& B, i64 m) {
    const std::size_t r = A.size(), s = B.size(), t = B.empty() ? 0 : B[0].size();
    ModMatrix C(r, std::vector<i64>(t, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < s; ++k) {
            if (A[i][k] == 0) continue;
            for (std::size_t j = 0; j < t; ++j) C[i][j] = nt::mod(C[i][j] + static_cast<i128>(A[i][k]) * B[k][j], m);
        }
    return C;
}

inline ModMatrix mat_pow(ModMatrix A, i64 e, i64 m) {
    const std::size_t r = A.size();
    ModMatrix R(r, std::vector<i64>(r, 0));
    for (std::size_t i = 0; i < r; ++i) R[i][i] = 1 % m;
    while (e > 0) {
        if (e & 1) R = mat_mul(R, A, m);
        e >>= 1;
        if (e) A = mat_mul(A, A, m);
    }
    return R;
}

/// Rank over F_p.
inline int mat_rank_mod_p(ModMatrix A, i64 p) {
    int rank = 0;
    const std::size_t rows = A.size(), cols = A.empty() ? 0 : A[0].size();
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = static_cast<std::size_t>(rank); r < rows; ++r)
            if (nt::mod(A[r][c], p) != 0) {
                piv = r;
                break;
            }
        if (piv == rows) continue;
        std::swap(A[piv], A[static_cast<std::size_t>(rank)]);
        auto& P = A[static_cast<std::size_t>(rank)];
        i64 inv = nt::invmod(nt::mod(P[c], p), p);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == static_cast<std::size_t>(rank)) continue;
            i64 f = nt::mulmod(nt::mod(A[r][c], p), inv, p);
            for (std::size_t j = 0; j < cols; ++j) A[r][j] = nt::mod(A[r][j] - static_cast<i128>(f) * P[j], p);
        }
        ++rank;
    }
    return rank;
}

struct OrdinaryProjection {
    ModMatrix U;                      ///< column j: coordinates of U(p) b_j
    ModMatrix E;                      ///< lim U^(n!)
    int rank = 0;                     ///< rank of E over F_p
    std::vector<std::vector<i64>> ordinary_basis;  ///< coordinate vectors spanning the image
    i64 modulus = 1;
    int iterations = 0;
};

/// U(p) on a span of q-expansions over Z_p, and its ordinary idempotent mod p^N.
inline OrdinaryProjection ordinary_projector(const std::vector<QExp<PadicElt>>& basis, i64 p, int N, int budget = 64) {
    if (basis.empty()) fail(Errc::DomainError, "empty span");
    const i64 m = nt::ipow(p, N);
    const std::size_t r = basis.size();
    std::vector<QExp<PadicElt>> images;
    for (const auto& b : basis) images.push_back(hecke_U(b, p));
    const std::size_t Qo = images[0].Q();
    for (const auto& b : basis)
        for (std::size_t n = 0; n < Qo; ++n)
            if (b.a[n].prec() < N) fail(Errc::PrecisionLoss, "basis coefficients known to fewer than N digits", N - b.a[n].prec());
    auto coef = [&](const QExp<PadicElt>& f, std::size_t n) { return nt::mod(f.a[n].residue(), m); };

    // pivot rows with a unit minor
    ModMatrix work(Qo, std::vector<i64>(r));
    for (std::size_t n = 0; n < Qo; ++n)
        for (std::size_t i = 0; i < r; ++i) work[n][i] = coef(basis[i], n);
    std::vector<std::size_t> pivots;
    {
        ModMatrix red = work;
        std::vector<bool> used(Qo, false);
        for (std::size_t col = 0; col < r; ++col) {
            std::size_t piv = Qo;
            for (std::size_t n = 0; n < Qo; ++n)
                if (!used[n] && nt::mod(red[n][col], p) != 0) {
                    piv = n;
                    break;
                }
            if (piv == Qo) fail(Errc::NotStable, "span basis is dependent mod p within the truncation");
            used[piv] = true;
            pivots.push_back(piv);
            i64 inv = nt::invmod(nt::mod(red[piv][col], m), m);
            for (std::size_t n = 0; n < Qo; ++n) {
                if (n == piv) continue;
                i64 f = nt::mulmod(nt::mod(red[n][col], m), inv, m);
                for (std::size_t j = 0; j < r; ++j) red[n][j] = nt::mod(red[n][j] - static_cast<i128>(f) * red[piv][j], m);
            }
        }
    }
    // inverse of the pivot minor (Gauss-Jordan; unit pivots exist)
    ModMatrix Bm(r, std::vector<i64>(2 * r, 0));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) Bm[i][j] = work[pivots[i]][j];
        Bm[i][r + i] = 1;
    }
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t piv = c;
        while (piv < r && nt::mod(Bm[piv][c], p) == 0) ++piv;
        if (piv == r) fail(Errc::NotStable, "pivot minor is singular mod p");
        std::swap(Bm[piv], Bm[c]);
        i64 inv = nt::invmod(Bm[c][c], m);
        for (auto& x : Bm[c]) x = nt::mulmod(x, inv, m);
        for (std::size_t i = 0; i < r; ++i) {
            if (i == c || Bm[i][c] == 0) continue;
            i64 f = Bm[i][c];
            for (std::size_t j = 0; j < 2 * r; ++j) Bm[i][j] = nt::mod(Bm[i][j] - static_cast<i128>(f) * Bm[c][j], m);
        }
    }
    OrdinaryProjection out;
    out.modulus = m;
    out.U.assign(r, std::vector<i64>(r, 0));
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<i64> y(r);
        for (std::size_t i = 0; i < r; ++i) y[i] = coef(images[j], pivots[i]);
        for (std::size_t i = 0; i < r; ++i) {
            i128 s = 0;
            for (std::size_t t = 0; t < r; ++t) s = (s + static_cast<i128>(Bm[i][r + t]) * y[t]) % m;
            out.U[i][j] = nt::mod(s, m);
        }
        // residual over the whole truncation
        for (std::size_t n = 0; n < Qo; ++n) {
            i128 s = 0;
            for (std::size_t i = 0; i < r; ++i) s = (s + static_cast<i128>(out.U[i][j]) * work[n][i]) % m;
            if (nt::mod(s - coef(images[j], n), m) != 0)
                fail(Errc::NotStable, "U(p) image of basis element " + std::to_string(j) + " leaves the span at q^" + std::to_string(n));
        }
    }
    // M = U^(j!); once M is idempotent every later factorial power equals M
    ModMatrix M = out.U;
    bool stable = false;
    for (int j = 2; j <= budget; ++j) {
        M = mat_pow(M, j, m);
        ++out.iterations;
        if (mat_mul(M, M, m) == M) {
            stable = true;
            break;
        }
    }
    if (!stable) fail(Errc::NoConvergence, "U(p)^(n!) did not stabilize within the iteration budget");
    out.E = M;
    out.rank = mat_rank_mod_p(out.E, p);
    // image basis: greedy independent columns mod p
    ModMatrix cols;
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<i64> col(r);
        for (std::size_t i = 0; i < r; ++i) col[i] = out.E[i][j];
        ModMatrix trial = cols;
        trial.push_back(col);
        if (mat_rank_mod_p(trial, p) == static_cast<int>(trial.size())) cols = std::move(trial);
    }
    out.ordinary_basis = cols;
    return out;
}

// ---------------------------------------------------------------------------

/// Lambda-adic q-expansion: coefficients in Lambda = Z_p[[T]].
struct LambdaQExp {
    std::vector<Lambda> a;
    i64 a0 = 0;  ///< nebentypus omega^a0
    i64 level = 1;

    std::size_t Q() const noexcept { return a.size(); }
};

/// a(n)(T) = sum_{p not | d | n} omega^a0(d) d^{-1} (1+T)^s(d), a(0) = 0. At
/// 1+T = gamma^k this is sum psi omega^{-k}(d) d^{k-1}.
inline LambdaQExp eisenstein_family(const PadicCtx& ctx, i64 a0, std::size_t Q, std::size_t M) {
    const i64 p = ctx->p();
    LambdaQExp F;
    F.a0 = nt::mod(a0, p - 1);
    F.level = 1;
    std::map<i64, Lambda> term;
    auto term_of = [&](i64 d) -> const Lambda& {
        auto it = term.find(d);
        if (it != term.end()) return it->second;
        PadicElt z(ctx, d);
        auto dec = decompose_unit(z);
        PadicElt scalar = dec.omega.pow(F.a0) * z.inverse();
        return term.emplace(d, group_like_padic(dec.s, M).scaled(scalar)).first->second;
    };
    std::vector<PadicElt> zeros(M, PadicElt::zero(ctx));
    F.a.push_back(Lambda(zeros, true));
    for (std::size_t n = 1; n < Q; ++n) {
        Lambda acc(zeros, false);
        bool first = true;
        for (i64 d : nt::divisors(static_cast<i64>(n))) {
            if (d % p == 0) continue;
            if (first) {
                acc = term_of(d);
                first = false;
            } else {
                acc = acc + term_of(d);
            }
        }
        F.a.push_back(acc);
    }
    return F;
}

/// 1+T -> eps(gamma) gamma^k in every coefficient; nebentypus psi omega^{-k} eps.
inline QExp<CycloElt> specialize_lambda_form(const LambdaQExp& F, int k, const DirichletChar& eps, const CharRing& R) {
    if (k < 2) fail(Errc::DomainError, "weight must be >= 2");
    if (eps.a != 0) fail(Errc::DomainError, "eps must be trivial on mu_{p-1}");
    const auto& cc = R.ctx();
    const auto& base = cc->base();
    const i64 p = base->p();
    const i64 gamma = 1 + p;
    CycloElt x = char_eval(eps, gamma, R) * cc->from_base(PadicElt(base, gamma).pow(k)) - cc->one();
    auto embed = [&](const PadicElt& c) { return cc->from_base(c.rebase(base)); };
    QExp<CycloElt> f;
    f.k = k;
    f.level = F.level * p;
    f.neben = DirichletChar::make(p, std::max(eps.n, 1), F.a0 - k, eps.w);
    for (const auto& c : F.a) f.a.push_back(evaluate_embedded(c, x, embed));
    return f;
}

/// Specialization at the trivial wild character, over Z_p.
inline QExp<PadicElt> specialize_lambda_form(const LambdaQExp& F, int k, const PadicCtx& ctx) {
    if (k < 2) fail(Errc::DomainError, "weight must be >= 2");
    const i64 p = ctx->p();
    PadicElt x = PadicElt(ctx, 1 + p).pow(k) - PadicElt::one(ctx);
    QExp<PadicElt> f;
    f.k = k;
    f.level = F.level * p;
    f.neben = DirichletChar::make(p, 1, F.a0 - k, 0);
    for (const auto& c : F.a) f.a.push_back(evaluate(c.map([&](const PadicElt& y) { return y.rebase(ctx); }), x));
    return f;
}

}  // namespace anticyc
