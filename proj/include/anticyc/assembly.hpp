#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "characters.hpp"
#include "measure.hpp"
#include "modular.hpp"
#include "quadratic.hpp"

namespace anticyc {

/// Data attached to one class A_j of Pic(O_c): the scalars lambda_k(A_j^{-1}) =
/// c d^k and the t-expansion at the corresponding CM point, either over Z_p
/// (texp) or with Lambda coefficients (family).
struct CMClassData {
    int j = 1;
    FormClass rep;
    PadicElt c, d;
    Lambda texp;
    PowerSeries<Lambda> family;
    std::optional<i64> branch;  ///< residue mod p-1 the scalars were declared on

    bool has_texp() const noexcept { return texp.size() > 0; }
    bool has_family() const noexcept { return family.size() > 0; }
};

/// sum_{p not | n} a(n) (1+S)^n: the p-depleted q-expansion read as a combination
/// of Dirac masses. Exact.
inline Lambda texp_from_qexp(const QExp<PadicElt>& f, i64 p) {
    if (f.a.empty()) fail(Errc::DomainError, "empty q-expansion");
    std::vector<PadicElt> w;
    w.reserve(f.Q());
    for (std::size_t n = 0; n < f.Q(); ++n) w.push_back(n % static_cast<std::size_t>(p) == 0 ? PadicElt::zero(f.a[0].ctx()) : f.a[n]);
    return from_t_basis(w);
}

/// The same with Lambda coefficients.
inline PowerSeries<Lambda> texp_from_family(const LambdaQExp& F, i64 p) {
    if (F.a.empty()) fail(Errc::DomainError, "empty Lambda-adic q-expansion");
    const Lambda zero = zero_like(F.a[0]);
    std::vector<Lambda> w;
    w.reserve(F.Q());
    for (std::size_t n = 0; n < F.Q(); ++n) w.push_back(n % static_cast<std::size_t>(p) == 0 ? zero : F.a[n]);
    return from_t_basis(w);
}

struct ClassMeasure {
    FormClass rep;
    Measure<PadicElt> mu;
};

/// The measure whose Amice series is Phi; the support flag comes from the
/// table test at levels 1 and 2.
inline ClassMeasure measure_from_texpansion(const Lambda& Phi, const FormClass& rep) {
    ClassMeasure out{rep, {Phi, Support::Zp}};
    if (Phi.exact() && supported_on_units(Phi, 1) && supported_on_units(Phi, 2)) out.mu.support = Support::ZpUnits;
    return out;
}

// ---------------------------------------------------------------------------

/// Working ring for assembled values: Z_p[zeta_{p^L}] over a copy of the base
/// carrying L guard digits, so that the Gauss-sum forms can divide by p^s.
class AssemblyRing {
public:
    static AssemblyRing make(const PadicCtx& base, int level) {
        if (base->f() != 1) fail(Errc::DomainError, "assembly works over Z_p");
        if (level < 1) fail(Errc::DomainError, "assembly level must be >= 1");
        auto hi = base->with_precision(std::min(base->N() + level, base->max_prec()));
        return AssemblyRing(base, CycloContext::make(hi, level));
    }

    const PadicCtx& base() const noexcept { return base_; }
    const CycloCtx& ctx() const noexcept { return R_.ctx(); }
    const CharRing& chars() const noexcept { return R_; }
    int level() const noexcept { return R_.ctx()->n(); }
    i64 p() const noexcept { return base_->p(); }
    /// Precision ceiling of anything computed from base-precision inputs.
    int cap() const noexcept { return base_->N() * R_.ctx()->e(); }

    CycloElt embed(const PadicElt& x) const { return ctx()->from_base(x.rebase(ctx()->base())); }
    /// Representative pushed to the guard precision (for integral linear maps).
    PadicElt lifted(const PadicElt& x) const { return x.rebase(ctx()->base()).lift_prec(ctx()->base()->N()); }
    CycloElt root(const RootOfUnity& r) const { return R_.realize(r); }
    /// zeta_{p^n}^u inside the level-L ring.
    i64 root_index(i64 u, int n) const { return u * nt::ipow(p(), level() - n); }

private:
    AssemblyRing(PadicCtx base, CycloCtx cc) : base_(std::move(base)), R_(std::move(cc)) {}
    PadicCtx base_;
    CharRing R_;
};

/// u -> (D^m Phi)(zeta_{p^n}^u - 1) for u in (Z/p^n)^x.
inline std::vector<std::pair<i64, CycloElt>> cm_fiber_values(const Lambda& Phi, int n, int m, const AssemblyRing& ring) {
    if (n < 1 || n > ring.level()) fail(Errc::DomainError, "fiber level outside the working ring");
    const i64 p = ring.p(), pn = nt::ipow(p, n);
    std::vector<std::pair<i64, CycloElt>> out;
    for (i64 u = 1; u < pn; ++u)
        if (u % p != 0) out.emplace_back(u, eval_at_root(Phi, ring.root_index(u, n), ring.ctx(), m));
    return out;
}

// ---------------------------------------------------------------------------

/// chi_fin * z^m: a character of Pic(O_{c p^s}) together with the infinity exponent.
struct AnticycloCharSpec {
    ClassGroupChar chi;
    int s = 0;
    int m = 0;
};

/// z -> chi(kappa(z)) as a Dirichlet character mod p^s.
inline DirichletChar induced_p_char(const ClassGroupChar& chi, i64 D, i64 p, int s, i64 c) {
    if (s == 0) return DirichletChar::trivial(p);
    const i64 ps = nt::ipow(p, s);
    auto val = [&](i64 z) { return class_char_eval(chi, kernel_class(z, D, p, s, c)); };
    const i64 g = nt::powmod(nt::primitive_root(p), ps / p, ps);  // omega(g) for the least primitive root
    RootOfUnity rg = val(g), rw = s >= 2 ? val(1 + p) : RootOfUnity{};
    if ((p - 1) % rg.den != 0 || (ps / p) % rw.den != 0) fail(Errc::DomainError, "class character does not restrict to a character mod p^s");
    auto phi = DirichletChar::make(p, s, rg.num * ((p - 1) / rg.den), rw.num * ((ps / p) / rw.den));
    for (i64 z = 1; z < ps; ++z)
        if (z % p != 0 && !(*phi.value(z) == val(z))) fail(Errc::DomainError, "class character does not restrict to a character mod p^s");
    return phi;
}

/// The primitive character inducing phi.
inline DirichletChar primitive_part(const DirichletChar& phi) {
    const int n0 = phi.conductor_exponent();
    if (n0 == 0) return DirichletChar::trivial(phi.p);
    const i64 w = n0 >= 2 ? phi.w / nt::ipow(phi.p, phi.n - n0) : 0;
    return DirichletChar::make(phi.p, n0, phi.a, w);
}

// ---------------------------------------------------------------------------

struct SingleVarTerm {
    FormClass rep;
    PadicElt scalar;  ///< lambda(A_j^{-1})
    Lambda texp;
    bool unit_supported = false;
};

struct SingleVarMeasure {
    i64 D = 0, p = 0, c = 1;
    int k = 0;
    std::vector<SingleVarTerm> classes;
};

namespace detail {

inline void check_tower(i64 D, i64 p, i64 c) {
    QuadField K = QuadField::make(D);
    if (!is_split(p, K)) fail(Errc::NotSplit, std::to_string(p) + " is not split in Q(sqrt(" + std::to_string(D) + "))");
    if (std::gcd(c, p) != 1) fail(Errc::ConductorMismatch, "tame conductor must be prime to p");
    if (c == 1 && K.wK > 2) fail(Errc::UnitObstruction, "extra units in Q(sqrt(" + std::to_string(D) + ")) at conductor 1");
}

/// The representatives must enumerate Pic(O_c) exactly once.
inline void check_cosets(const std::vector<FormClass>& reps, i64 D, i64 c) {
    auto G = class_group(QuadOrder::make(D, c));
    std::vector<bool> seen(static_cast<std::size_t>(G.size()), false);
    for (const auto& r : reps) {
        auto i = G.index_of(reduce_form(r));
        if (seen[i]) fail(Errc::DomainError, "class " + r.str() + " listed twice");
        seen[i] = true;
    }
    if (static_cast<i64>(reps.size()) != G.size())
        fail(Errc::DomainError, "expected " + std::to_string(G.size()) + " classes, got " + std::to_string(reps.size()));
}

inline void check_char(const AnticycloCharSpec& chi, i64 D, i64 p, i64 c, const AssemblyRing& ring) {
    const i64 f = c * nt::ipow(p, chi.s);
    if (chi.chi.group->disc() != f * f * D) fail(Errc::ConductorMismatch, "class character is not defined on Pic(O_" + std::to_string(f) + ")");
    if (chi.s > ring.level()) fail(Errc::DomainError, "character level exceeds the working ring");
    if (chi.m < 0) fail(Errc::DomainError, "infinity exponent must be >= 0");
}

/// chi(lift(A)^{-1}) in the working ring.
inline CycloElt class_factor(const AnticycloCharSpec& chi, const FormClass& rep, i64 D, i64 p, i64 c, const AssemblyRing& ring) {
    const FormClass lift = chi.s == 0 ? reduce_form(rep) : lift_class(rep, D, c, c * nt::ipow(p, chi.s));
    return ring.root(class_char_eval(chi.chi, lift).inverse());
}

}  // namespace detail

/// Scalar data at weight k: lambda = c d^k.
inline SingleVarMeasure build_single_var(const std::vector<CMClassData>& classes, i64 D, i64 p, i64 c, int k) {
    detail::check_tower(D, p, c);
    std::vector<FormClass> reps;
    SingleVarMeasure mu{D, p, c, k, {}};
    for (const auto& cl : classes) {
        if (!cl.has_texp()) fail(Errc::DomainError, "class " + std::to_string(cl.j) + " has no scalar t-expansion");
        if (!cl.d.is_unit()) fail(Errc::NonUnit, "d_j must be a unit");
        reps.push_back(cl.rep);
        auto cm = measure_from_texpansion(cl.texp, cl.rep);
        mu.classes.push_back({cl.rep, cl.c * cl.d.pow(k), cl.texp, cm.mu.support == Support::ZpUnits});
    }
    detail::check_cosets(reps, D, c);
    return mu;
}

struct LValue {
    CycloElt value;
    int pi_prec = 0;
    std::optional<CycloElt> gauss;  ///< Gauss-sum form, when the p-part has conductor >= 1
    bool agree = true;
};

/// sum_j chi(A_j^{-1}) lambda_j int_{Z_p^x} phi(z) z^m dmu_j, twist then moment;
/// also through p^{-n} G(phi) sum_u phi^{-1}(-u) (D^m Phi_j)(zeta^u - 1).
inline LValue single_var_L(const SingleVarMeasure& mu, const AnticycloCharSpec& chi, const AssemblyRing& ring) {
    detail::check_char(chi, mu.D, mu.p, mu.c, ring);
    const auto& cc = ring.ctx();
    const DirichletChar phi = induced_p_char(chi.chi, mu.D, mu.p, chi.s, mu.c);
    const DirichletChar phi0 = primitive_part(phi);
    const int n0 = phi0.n;
    const auto table = char_table(phi, ring.chars());
    std::optional<CycloElt> G;
    if (n0 >= 1) G = gauss_sum(phi0, ring.chars());
    const DirichletChar inv0 = phi0.inverse();
    const i64 pn0 = phi0.modulus();

    CycloElt twist_sum = cc->zero(), gauss_sum_acc = cc->zero();
    int in_prec = ring.base()->N();
    for (const auto& t : mu.classes) {
        in_prec = std::min({in_prec, precision_of(t.texp), t.scalar.prec()});
        CycloElt w = detail::class_factor(chi, t.rep, mu.D, mu.p, mu.c, ring) * ring.embed(t.scalar);
        LambdaCyclo Phic = t.texp.map([&](const PadicElt& x) { return ring.embed(x); });
        twist_sum += w * moment(twist_pointwise(Phic, table), chi.m);
        if (G) {
            Lambda lifted = t.texp.map([&](const PadicElt& x) { return ring.lifted(x); });
            CycloElt acc = cc->zero();
            for (i64 u = 1; u < pn0; ++u) {
                if (u % mu.p == 0) continue;
                acc += char_eval(inv0, nt::mod(-u, pn0), ring.chars()) * eval_at_root(lifted, ring.root_index(u, n0), cc, chi.m);
            }
            gauss_sum_acc += w * acc;
        }
    }
    LValue out;
    int joint = std::min({in_prec * cc->e(), ring.cap(), twist_sum.pi_prec()});
    if (G) {
        CycloElt g = (*G * gauss_sum_acc).div_p_power(n0);
        joint = std::min(joint, g.pi_prec());
        out.gauss = g.with_pi_prec(joint);
    }
    out.value = twist_sum.with_pi_prec(joint);
    out.pi_prec = joint;
    if (out.gauss) out.agree = out.value.agrees(*out.gauss);
    return out;
}

/// G(phi) p^{-s} sum_j sum_u chi(a_{j,u}^{-1}) lambda_j (D^m Phi_j)(zeta^u - 1), with
/// a_{j,u} the fiber classes over A_j. phi must be primitive mod p^s.
inline CycloElt fiber_sum_expansion(const SingleVarMeasure& mu, const AnticycloCharSpec& chi, const AssemblyRing& ring) {
    detail::check_char(chi, mu.D, mu.p, mu.c, ring);
    if (chi.s < 1) fail(Errc::DomainError, "fiber sum needs level s >= 1");
    const auto& cc = ring.ctx();
    const DirichletChar phi = induced_p_char(chi.chi, mu.D, mu.p, chi.s, mu.c);
    if (!phi.is_primitive()) fail(Errc::NotPrimitive, "p-part of the character is not primitive mod p^" + std::to_string(chi.s));
    CycloElt acc = cc->zero();
    int in_prec = ring.base()->N();
    for (const auto& t : mu.classes) {
        in_prec = std::min({in_prec, precision_of(t.texp), t.scalar.prec()});
        auto fib = fiber_classes(t.rep, mu.D, mu.p, mu.c, chi.s);
        Lambda lifted = t.texp.map([&](const PadicElt& x) { return ring.lifted(x); });
        CycloElt inner = cc->zero();
        for (std::size_t i = 0; i < fib.labels.size(); ++i)
            inner += ring.root(class_char_eval(chi.chi, fib.classes[i]).inverse()) *
                     eval_at_root(lifted, ring.root_index(fib.labels[i], chi.s), cc, chi.m);
        acc += ring.embed(t.scalar) * inner;
    }
    CycloElt v = (gauss_sum(phi, ring.chars()) * acc).div_p_power(chi.s);
    return v.with_pi_prec(std::min(in_prec * cc->e(), ring.cap()));
}

// ---------------------------------------------------------------------------

struct TwoVarTerm {
    FormClass rep;
    PowerSeries<Lambda> Psi;  ///< c omega(d)^k0 (1+T)^s(d) Phi(S, T)
};

struct TwoVarMeasure {
    i64 D = 0, p = 0, c = 1;
    i64 k0 = 0;
    std::size_t M = 0;
    std::vector<TwoVarTerm> classes;
};

/// Folds c omega(d)^k0 into a scalar and <d>^k into the group-like (1+T)^s(d).
inline TwoVarMeasure build_two_var(const std::vector<CMClassData>& classes, i64 D, i64 p, i64 c, i64 k0) {
    detail::check_tower(D, p, c);
    TwoVarMeasure F{D, p, c, nt::mod(k0, p - 1), 0, {}};
    std::vector<FormClass> reps;
    for (const auto& cl : classes) {
        if (!cl.has_family()) fail(Errc::DomainError, "class " + std::to_string(cl.j) + " has no Lambda-adic t-expansion");
        auto dec = decompose_unit(cl.d);
        if (cl.branch && nt::mod(*cl.branch - F.k0, p - 1) != 0 && nt::mod(dec.torsion_exponent, p - 1) != 0)
            fail(Errc::BranchMismatch, "scalars of class " + std::to_string(cl.j) + " were declared on branch " + std::to_string(nt::mod(*cl.branch, p - 1)));
        std::size_t M = cl.family[0].size();
        for (const auto& b : cl.family.coeffs()) M = std::max(M, b.size());
        F.M = std::max(F.M, M);
        Lambda factor = group_like_padic(dec.s, M).scaled(cl.c * dec.omega.pow(F.k0));
        reps.push_back(cl.rep);
        F.classes.push_back({cl.rep, cl.family.map([&](const Lambda& b) { return b * factor; })});
    }
    detail::check_cosets(reps, D, c);
    return F;
}

/// Lambda-adic scalar data at weight k: family coefficients evaluated at gamma^k - 1.
inline std::vector<CMClassData> slice_classes(const std::vector<CMClassData>& classes, int k) {
    std::vector<CMClassData> out;
    for (const auto& cl : classes) {
        if (!cl.has_family()) fail(Errc::DomainError, "class " + std::to_string(cl.j) + " has no Lambda-adic t-expansion");
        const auto& ctx = cl.c.ctx();
        PadicElt x = PadicElt(ctx, ctx->gamma()).pow(k) - PadicElt::one(ctx);
        CMClassData s = cl;
        s.texp = cl.family.map([&](const Lambda& b) { return evaluate(b, x); });
        out.push_back(std::move(s));
    }
    return out;
}

/// The Cl-integral with the Gamma variable left free: a series in T.
inline LambdaCyclo two_var_series(const TwoVarMeasure& F, const AnticycloCharSpec& chi, const AssemblyRing& ring) {
    detail::check_char(chi, F.D, F.p, F.c, ring);
    const auto& cc = ring.ctx();
    const DirichletChar phi = induced_p_char(chi.chi, F.D, F.p, chi.s, F.c);
    const LambdaCyclo zero(std::vector<CycloElt>(F.M, cc->zero()), true);
    LambdaCyclo total = zero;
    for (const auto& t : F.classes) {
        // Dirac weights w_b(T): int phi(z) z^m = sum_b phi(b) b^m w_b(T)
        auto w = to_t_basis(t.Psi);
        LambdaCyclo acc = zero;
        for (std::size_t b = 0; b < w.size(); ++b) {
            const i64 bb = static_cast<i64>(b);
            if (bb % F.p == 0) continue;
            CycloElt coef = char_eval(phi, bb, ring.chars()) * cc->from_int(nt::powmod(bb, chi.m, nt::ipow(F.p, cc->base()->N())));
            acc += w[b].map([&](const PadicElt& x) { return ring.embed(x) * coef; });
        }
        total += acc.scaled(detail::class_factor(chi, t.rep, F.D, F.p, F.c, ring));
    }
    return total;
}

/// Evaluates the T-series at the arithmetic point 1+T = gamma^k.
inline CycloElt two_var_at(const TwoVarMeasure& F, const LambdaCyclo& L, int k, const AssemblyRing& ring) {
    if (k < 2) fail(Errc::DomainError, "weight must be >= 2");
    if (nt::mod(k - F.k0, F.p - 1) != 0)
        fail(Errc::BranchMismatch, "weight " + std::to_string(k) + " is not on branch " + std::to_string(F.k0) + " mod " + std::to_string(F.p - 1));
    const auto& cc = ring.ctx();
    CycloElt x = ring.embed(PadicElt(ring.base(), 1 + F.p).pow(k)) - cc->one();
    CycloElt v = evaluate(L, x);
    return v.with_pi_prec(std::min(v.pi_prec(), ring.cap()));
}

inline CycloElt two_var_L(const TwoVarMeasure& F, const AnticycloCharSpec& chi, int k, const AssemblyRing& ring) {
    if (nt::mod(k - F.k0, F.p - 1) != 0)
        fail(Errc::BranchMismatch, "weight " + std::to_string(k) + " is not on branch " + std::to_string(F.k0) + " mod " + std::to_string(F.p - 1));
    return two_var_at(F, two_var_series(F, chi, ring), k, ring);
}

// ---------------------------------------------------------------------------

/// Eisenstein family data on every class of Pic(O_c), with the given scalars. No
/// branch is declared: the family covers every weight.
inline std::vector<CMClassData> eisenstein_classes(const PadicCtx& ctx, i64 D, i64 c, i64 a0, std::size_t Q, std::size_t M,
                                                   const std::vector<std::pair<i64, i64>>& scalars) {
    auto G = class_group(QuadOrder::make(D, c));
    if (scalars.size() != static_cast<std::size_t>(G.size()))
        fail(Errc::DomainError, "need one (c_j, d_j) pair per class, " + std::to_string(G.size()) + " classes");
    auto fam = texp_from_family(eisenstein_family(ctx, a0, Q, M), ctx->p());
    std::vector<CMClassData> out;
    for (std::size_t j = 0; j < scalars.size(); ++j) {
        CMClassData cl;
        cl.j = static_cast<int>(j) + 1;
        cl.rep = G.elements()[j];
        cl.c = PadicElt(ctx, scalars[j].first);
        cl.d = PadicElt(ctx, scalars[j].second);
        cl.family = fam;
        out.push_back(std::move(cl));
    }
    return out;
}

}  // namespace anticyc
