#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "measure.hpp"
#include "quadratic.hpp"
#include "series.hpp"

namespace anticyc {

/// exp(2 pi i num/den), stored exactly as an element of Q/Z.
struct RootOfUnity {
    i64 num = 0, den = 1;

    static RootOfUnity make(i64 num, i64 den) {
        if (den <= 0) fail(Errc::DomainError, "root of unity needs a positive denominator");
        num = nt::mod(num, den);
        i64 g = std::gcd(num, den);
        if (g == 0) g = den;
        return {num / g, den / g};
    }
    bool is_one() const noexcept { return num == 0; }
    i64 order() const noexcept { return den; }
    RootOfUnity operator*(const RootOfUnity& o) const {
        i64 l = std::lcm(den, o.den);
        return make(static_cast<i64>((static_cast<i128>(num) * (l / den) + static_cast<i128>(o.num) * (l / o.den)) % l), l);
    }
    RootOfUnity inverse() const { return make(-num, den); }
    RootOfUnity pow(i64 e) const { return make(static_cast<i64>(static_cast<i128>(num) * nt::mod(e, den) % den), den); }
    bool operator==(const RootOfUnity&) const = default;
};

/// Coordinates of a unit z mod p^n: z = omega(z) gamma^s with omega(z) = teich(g)^l,
/// g the least primitive root mod p. Returns (l mod p-1, s mod p^(n-1)).
inline std::pair<i64, i64> unit_coordinates(i64 p, int n, i64 z) {
    if (nt::mod(z, p) == 0) fail(Errc::NonUnit, "unit coordinates of a multiple of p");
    const i64 g = nt::primitive_root(p);
    const i64 r = nt::mod(z, p);
    i64 l = 0;
    for (i64 x = 1; x != r; x = x * g % p) ++l;
    if (n <= 1) return {l, 0};
    const i64 pn = nt::ipow(p, n), pn1 = pn / p;
    const i64 zm = nt::mod(z, pn);
    const i64 teich = nt::powmod(zm, pn1, pn);
    const i64 u = nt::mulmod(zm, nt::invmod(teich, pn), pn);
    i64 s = 0;
    for (i64 x = 1; x != u; x = nt::mulmod(x, 1 + p, pn)) {
        ++s;
        if (s > pn1) fail(Errc::DomainError, "unit coordinate search failed");
    }
    return {l, s};
}

/// Dirichlet character mod p^n: chi(z) = omega(z)^a * zeta_{p^(n-1)}^(w s(z)).
struct DirichletChar {
    i64 p = 3;
    int n = 0;
    i64 a = 0;  ///< torsion exponent mod p - 1
    i64 w = 0;  ///< wild exponent mod p^(n-1)

    static DirichletChar make(i64 p, int n, i64 a, i64 w) {
        if (p < 3 || !nt::is_prime(p)) fail(Errc::BadPrime, "characters need an odd prime");
        if (n < 0) fail(Errc::DomainError, "negative modulus exponent");
        DirichletChar c{p, n, 0, 0};
        if (n >= 1) c.a = nt::mod(a, p - 1);
        if (n >= 2) c.w = nt::mod(w, nt::ipow(p, n - 1));
        return c;
    }
    static DirichletChar trivial(i64 p) { return make(p, 0, 0, 0); }

    i64 modulus() const { return nt::ipow(p, n); }
    /// Exponent c of the conductor p^c.
    int conductor_exponent() const {
        if (n >= 2 && w != 0) return n - nt::vp(w, p);
        return a != 0 ? 1 : 0;
    }
    bool is_primitive() const { return conductor_exponent() == n; }
    bool is_even() const { return a % 2 == 0; }

    std::optional<RootOfUnity> value(i64 z) const {
        if (nt::mod(z, p) == 0) return n == 0 ? std::optional<RootOfUnity>(RootOfUnity{}) : std::nullopt;
        if (n == 0) return RootOfUnity{};
        auto [l, s] = unit_coordinates(p, n, z);
        RootOfUnity r = RootOfUnity::make(a * l, p - 1);
        if (n >= 2) r = r * RootOfUnity::make(static_cast<i64>(static_cast<i128>(w) * s % nt::ipow(p, n - 1)), nt::ipow(p, n - 1));
        return r;
    }

    DirichletChar inverse() const { return make(p, n, -a, -w); }
    /// Product, lifting both to the larger modulus.
    DirichletChar operator*(const DirichletChar& o) const {
        if (o.p != p) fail(Errc::ContextMismatch, "characters for different primes");
        int m = std::max(n, o.n);
        auto lift = [&](const DirichletChar& c) { return c.n >= 2 ? c.w * nt::ipow(p, m - c.n) : 0; };
        return make(p, m, a + o.a, lift(*this) + lift(o));
    }
    bool operator==(const DirichletChar&) const = default;
};

/// Realizes roots of unity in a cyclotomic ring. The tame generator is chosen so
/// that exp(2 pi i/(p-1)) maps to the Teichmuller lift of the least primitive root.
class CharRing {
public:
    explicit CharRing(CycloCtx cc) : cc_(std::move(cc)) {
        const auto& base = cc_->base();
        const i64 p = base->p(), q1 = base->residue_order() - 1;
        PadicElt G = unit_root_generator(base);
        PadicElt target = teichmuller_lift(PadicElt(base, nt::primitive_root(p)));
        PadicElt h = G.pow(q1 / (p - 1));
        i64 c = 1;
        for (PadicElt x = h; !x.agrees(target); x = x * h) ++c;
        i64 j = c;
        while (std::gcd(j, q1) != 1) j += p - 1;
        gen_ = G.pow(j);
    }

    const CycloCtx& ctx() const noexcept { return cc_; }

    bool contains(const RootOfUnity& r) const {
        const i64 p = cc_->p();
        int a = nt::vp(r.den, p);
        i64 t = r.den / nt::ipow(p, a);
        return a <= cc_->n() && (cc_->base()->residue_order() - 1) % t == 0;
    }

    CycloElt realize(const RootOfUnity& r) const {
        const i64 p = cc_->p();
        const int a = nt::vp(r.den, p);
        const i64 pa = nt::ipow(p, a), t = r.den / pa;
        const i64 q1 = cc_->base()->residue_order() - 1;
        if (a > cc_->n() || q1 % t != 0) fail(Errc::DomainError, "root of unity of order " + std::to_string(r.den) + " is not in the working ring");
        const i64 A = pa == 1 ? 0 : nt::mulmod(nt::mod(r.num, pa), nt::invmod(nt::mod(t, pa), pa), pa);
        const i64 B = t == 1 ? 0 : nt::mulmod(nt::mod(r.num, t), nt::invmod(nt::mod(pa, t), t), t);
        CycloElt z = cc_->zeta_pow(A * (cc_->pn() / pa));
        if (B != 0) z = z * cc_->from_base(gen_.pow(B * (q1 / t)));
        return z;
    }

private:
    CycloCtx cc_;
    PadicElt gen_;
};

inline CycloElt char_eval(const DirichletChar& chi, i64 z, const CharRing& R) {
    auto v = chi.value(z);
    if (!v) fail(Errc::NonUnit, "character evaluated at a non-unit");
    return R.realize(*v);
}

inline CycloElt char_eval(const DirichletChar& chi, const PadicElt& z, const CharRing& R) {
    if (!z.is_unit()) fail(Errc::NonUnit, "character evaluated at a non-unit");
    if (z.prec() < chi.n) fail(Errc::PrecisionLoss, "unit known to fewer digits than the modulus", chi.n - z.prec());
    return char_eval(chi, z.residue(), R);
}

/// Values of chi on Z/p^n (zero on multiples of p), in the working ring.
inline std::vector<CycloElt> char_table(const DirichletChar& chi, const CharRing& R) {
    const i64 pn = std::max<i64>(chi.modulus(), chi.p);
    std::vector<CycloElt> t;
    t.reserve(static_cast<std::size_t>(pn));
    for (i64 b = 0; b < pn; ++b) t.push_back(b % chi.p == 0 ? R.ctx()->zero() : char_eval(chi, b, R));
    return t;
}

/// G(chi) = sum_{b mod p^n} chi(b) zeta_{p^n}^b.
inline CycloElt gauss_sum(const DirichletChar& chi, const CharRing& R) {
    if (chi.n < 1 || !chi.is_primitive()) fail(Errc::NotPrimitive, "Gauss sum needs a primitive character of conductor p^n, n >= 1");
    const auto& cc = R.ctx();
    if (cc->n() < chi.n) fail(Errc::DomainError, "cyclotomic level below the character modulus");
    const i64 pn = chi.modulus(), step = cc->pn() / pn;
    CycloElt s = cc->zero();
    for (i64 b = 1; b < pn; ++b)
        if (b % chi.p != 0) s += char_eval(chi, b, R) * cc->zeta_pow(b * step);
    return s;
}

// ---------------------------------------------------------------------------

/// Character of a ring class group, by exponents on the SNF generators:
/// chi(g_i) = exp(2 pi i e_i / d_i).
struct ClassGroupChar {
    std::shared_ptr<const RingClassGroup> group;
    std::vector<i64> exps;

    static ClassGroupChar make(std::shared_ptr<const RingClassGroup> G, std::vector<i64> e) {
        if (e.size() != G->invariants().size()) fail(Errc::DomainError, "character needs one exponent per invariant factor");
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = nt::mod(e[i], G->invariants()[i]);
        return {std::move(G), std::move(e)};
    }
    static ClassGroupChar trivial(std::shared_ptr<const RingClassGroup> G) {
        std::vector<i64> e(G->invariants().size(), 0);
        return {std::move(G), std::move(e)};
    }
    bool is_trivial() const {
        return std::all_of(exps.begin(), exps.end(), [](i64 x) { return x == 0; });
    }
    i64 order() const {
        i64 o = 1;
        for (std::size_t i = 0; i < exps.size(); ++i) o = std::lcm(o, group->invariants()[i] / std::gcd(group->invariants()[i], exps[i]));
        return o;
    }
};

inline RootOfUnity class_char_eval(const ClassGroupChar& chi, const FormClass& x) {
    const auto& y = chi.group->coords(x);
    RootOfUnity r;
    for (std::size_t i = 0; i < y.size(); ++i) r = r * RootOfUnity::make(static_cast<i64>(static_cast<i128>(chi.exps[i]) * y[i] % chi.group->invariants()[i]), chi.group->invariants()[i]);
    return r;
}

/// All characters of G, in lexicographic order of exponents.
inline std::vector<ClassGroupChar> all_class_chars(const std::shared_ptr<const RingClassGroup>& G) {
    std::vector<ClassGroupChar> out;
    const auto& inv = G->invariants();
    std::vector<i64> e(inv.size(), 0);
    for (;;) {
        out.push_back(ClassGroupChar::make(G, e));
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == inv[i]) e[i++] = 0;
        if (i == e.size()) break;
    }
    return out;
}

// ---------------------------------------------------------------------------

/// z -> chi(z) z^m on Z_p^x.
struct AvatarOnUnits {
    DirichletChar chi;
    int m = 0;
};

inline CycloElt avatar_eval(const AvatarOnUnits& av, const PadicElt& z, const CharRing& R) {
    if (!z.is_unit()) fail(Errc::NonUnit, "avatar evaluated at a non-unit");
    const auto& cc = R.ctx();
    return char_eval(av.chi, z, R) * cc->from_base(z.rebase(cc->base()).pow(av.m));
}

// ---------------------------------------------------------------------------

/// theta(z) = omega(z)^b (1+T)^(s(z)/2) with 2b = a0 mod p-1, so theta(z)^2 = [z]
/// = omega^a0(z) (1+T)^s(z) in Lambda.
struct CriticalCharacter {
    PadicCtx ctx;
    i64 a0 = 0;
    i64 b = 0;
    int branch = 0;
    std::size_t M = 0;

    Lambda value(const PadicElt& z) const {
        auto d = decompose_unit(z.rebase(ctx));
        return group_like_padic(d.s.div_int(2), M).scaled(d.omega.pow(b));
    }
    Lambda bracket(const PadicElt& z) const {
        auto d = decompose_unit(z.rebase(ctx));
        return group_like_padic(d.s, M).scaled(d.omega.pow(a0));
    }
};

inline CriticalCharacter build_critical_character(const PadicCtx& ctx, i64 a0, int branch = 0, std::size_t M = 40) {
    const i64 p = ctx->p();
    if (ctx->f() != 1) fail(Errc::DomainError, "critical character lives over Z_p");
    a0 = nt::mod(a0, p - 1);
    if (a0 % 2 != 0) fail(Errc::OddExponent, "omega^" + std::to_string(a0) + " has no square root among powers of omega");
    i64 b = a0 / 2 + (branch ? (p - 1) / 2 : 0);
    return {ctx, a0, nt::mod(b, p - 1), branch, M};
}

/// theta at the arithmetic point 1+T -> eps(gamma) gamma^k, evaluated at z.
inline CycloElt specialize_theta(const CriticalCharacter& th, int k, const DirichletChar& eps, const PadicElt& z, const CharRing& R) {
    if (k < 2) fail(Errc::DomainError, "weight must be >= 2");
    if (eps.a != 0) fail(Errc::DomainError, "eps must be a character of Gamma (trivial on mu_{p-1})");
    const auto& cc = R.ctx();
    const auto& base = cc->base();
    CycloElt pt = char_eval(eps, th.ctx->gamma(), R) * cc->from_base(PadicElt(base, th.ctx->gamma()).pow(k));
    auto embed = [&](const PadicElt& c) { return cc->from_base(c.rebase(base)); };
    return evaluate_embedded(th.value(z), pt - cc->one(), embed);
}

// ---------------------------------------------------------------------------

enum class PrimeTag { Split, Inert, Ramified };

struct LocalConductor {
    i64 ell = 2;
    PrimeTag tag = PrimeTag::Split;
    int exp_l = 0;     ///< exponent at l (for split l, the prime (l, w - r) with r the least root)
    int exp_lbar = 0;  ///< exponent at the conjugate; zero unless split
};

struct HeckeCharRecipeData {
    i64 D = -4;
    i64 p = 5;
    std::vector<LocalConductor> primes;  ///< away from p
    int exp_p = 0, exp_pbar = 0;         ///< conductor exponents at the chosen P and its conjugate
    int inf_k = 0, inf_kbar = 0;         ///< infinity type
    int target_k = 0;                    ///< required infinity type (k, 0)
    i64 neben_conductor = 1;             ///< tame conductor of the nebentypus
    i64 neben_exponent = 0;              ///< nebentypus omega^e on the p-part
    i64 restriction_exponent = 0;        ///< restriction to Z_p^x torsion is omega^r
};

struct RecipeReport {
    bool consistent = true;
    bool unramified_away = true;
    bool one_sided_split = true;
    bool p_support = true;
    bool infinity_and_restriction = true;
    std::vector<std::string> notes;

    bool ok() const { return consistent && unramified_away && one_sided_split && p_support && infinity_and_restriction; }
};

inline RecipeReport validate_recipe(const HeckeCharRecipeData& d) {
    RecipeReport r;
    auto note = [&](bool& flag, std::string msg) {
        flag = false;
        r.notes.push_back(std::move(msg));
    };
    for (const auto& lc : d.primes) {
        const std::string l = std::to_string(lc.ell);
        if (lc.exp_l < 0 || lc.exp_lbar < 0) note(r.consistent, "negative exponent at " + l);
        if (lc.ell == d.p) note(r.consistent, "p listed among the tame primes");
        const int kr = nt::kronecker(d.D, lc.ell);
        PrimeTag actual = kr == 1 ? PrimeTag::Split : (kr == 0 ? PrimeTag::Ramified : PrimeTag::Inert);
        if (actual != lc.tag) note(r.consistent, "splitting tag at " + l + " does not match the field");
        if (lc.tag != PrimeTag::Split && lc.exp_lbar != 0) note(r.consistent, "conjugate exponent at non-split " + l);
        if ((lc.exp_l > 0 || lc.exp_lbar > 0) && d.neben_conductor % lc.ell != 0) note(r.unramified_away, "ramified at " + l + " outside the nebentypus conductor");
        if (lc.tag == PrimeTag::Split && lc.exp_l > 0 && lc.exp_lbar > 0) note(r.one_sided_split, "conductor at both primes above " + l);
    }
    if (d.exp_p < 0 || d.exp_pbar < 0) note(r.consistent, "negative exponent at p");
    if (d.exp_pbar != 0) note(r.p_support, "conductor at the conjugate of the chosen prime above p");
    if (d.exp_p > 1) note(r.p_support, "exponent at the chosen prime above p exceeds 1");
    if (d.inf_kbar != 0 || d.inf_k != d.target_k) note(r.infinity_and_restriction, "infinity type is not (k, 0)");
    if (nt::mod(d.restriction_exponent + d.neben_exponent, d.p - 1) != 0) note(r.infinity_and_restriction, "restriction to Z_p^x is not the inverse nebentypus");
    return r;
}

// ---------------------------------------------------------------------------

struct IntegrationCheck {
    CycloElt lhs;
    CycloElt rhs;
    bool agree = false;
    int pi_prec = 0;  ///< joint precision of the comparison, in pi-units
};

/// Both sides of  int phi(x) x^m dmu = p^{-n} G(phi) sum_u phi^{-1}(-u) (D^m Phi)(zeta^u - 1)
/// for an exact Amice series Phi and phi primitive mod p^n.
inline IntegrationCheck integration_identity_check(const Lambda& Phi, const DirichletChar& phi, int m) {
    if (!Phi.exact()) fail(Errc::PrecisionLoss, "integration identity needs an exact series");
    if (phi.n < 1 || !phi.is_primitive()) fail(Errc::NotPrimitive, "integration identity needs a primitive character of conductor p^n, n >= 1");
    const auto& base = Phi[0].ctx();
    if (base->f() != 1) fail(Errc::DomainError, "integration identity is stated over Z_p");
    const int n = phi.n;
    const int in_prec = precision_of(Phi);
    if (in_prec <= 0) fail(Errc::PrecisionExhausted, "series has no known digits");
    // Both sides are integral linear functions of Phi; evaluate on lifted
    // representatives with n guard digits and report at the input precision.
    auto hi = base->with_precision(std::min(base->N() + n, base->max_prec()));
    auto cc = CycloContext::make(hi, n);
    CharRing R(cc);
    const int e = cc->e();
    Lambda lifted = Phi.map([&](const PadicElt& x) { return x.rebase(hi).lift_prec(hi->N()); });
    auto embed = [&](const PadicElt& x) { return cc->from_base(x); };
    LambdaCyclo Phic = lifted.map(embed);

    CycloElt lhs = moment(twist_pointwise(Phic, char_table(phi, R)), m);

    const i64 pn = cc->pn();
    const DirichletChar inv = phi.inverse();
    CycloElt acc = cc->zero();
    for (i64 u = 1; u < pn; ++u) {
        if (u % phi.p == 0) continue;
        acc += char_eval(inv, nt::mod(-u, pn), R) * eval_at_root(lifted, u, cc, m);
    }
    CycloElt rhs = (gauss_sum(phi, R) * acc).div_p_power(n);

    const int joint = std::min({in_prec * e, lhs.pi_prec(), rhs.pi_prec()});
    lhs = lhs.with_pi_prec(joint);
    rhs = rhs.with_pi_prec(joint);
    return {lhs, rhs, lhs.agrees(rhs), joint};
}

}  // namespace anticyc
