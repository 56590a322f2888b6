#include <gtest/gtest.h>

#include <optional>
#include <random>
#include <set>

#include "anticyc/characters.hpp"

using namespace anticyc;

namespace {

template <class F>
std::optional<Errc> error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

CharRing ring(i64 p, int n, int N = 6) { return CharRing(CycloContext::make(PadicContext::make(p, N), n)); }

std::vector<DirichletChar> all_chars(i64 p, int n) {
    std::vector<DirichletChar> out;
    i64 wmax = n >= 2 ? nt::ipow(p, n - 1) : 1;
    for (i64 a = 0; a < p - 1; ++a)
        for (i64 w = 0; w < wmax; ++w) out.push_back(DirichletChar::make(p, n, a, w));
    return out;
}

// Oracle: a primitive root mod p^n by brute force (the order of g is phi(p^n)).
i64 cyclic_generator(i64 p, int n) {
    const i64 pn = nt::ipow(p, n), phi = pn / p * (p - 1);
    for (i64 g = 2; g < pn; ++g) {
        if (g % p == 0) continue;
        i64 x = g, ord = 1;
        while (x != 1) {
            x = nt::mulmod(x, g, pn);
            ++ord;
        }
        if (ord == phi) return g;
    }
    return 0;
}

Lambda random_poly(const PadicCtx& ctx, std::mt19937_64& rng, std::size_t deg) {
    std::vector<PadicElt> c;
    const i64 m = ctx->pow_p(ctx->N());
    for (std::size_t i = 0; i <= deg; ++i) c.emplace_back(ctx, static_cast<i64>(rng() % static_cast<std::uint64_t>(m)));
    return Lambda(std::move(c), true);
}

}  // namespace

TEST(Characters, RootOfUnity) {
    auto r = RootOfUnity::make(3, 12);
    EXPECT_EQ(r.num, 1);
    EXPECT_EQ(r.den, 4);
    EXPECT_TRUE((r * r.inverse()).is_one());
    EXPECT_EQ(r.pow(4), RootOfUnity{});
    EXPECT_EQ((RootOfUnity::make(1, 4) * RootOfUnity::make(1, 5)), RootOfUnity::make(9, 20));
}

TEST(Characters, RealizationIsAHomomorphism) {
    auto R = ring(5, 2);
    const auto& cc = R.ctx();
    for (i64 den : {1, 2, 4, 5, 10, 20, 25, 100})
        for (i64 num = 0; num < den; num += std::max<i64>(1, den / 7)) {
            auto r = RootOfUnity::make(num, den);
            EXPECT_TRUE(R.realize(r).pow(den).agrees(cc->one()));
            if (!r.is_one()) {
                EXPECT_FALSE(R.realize(r).agrees(cc->one()));
            }
            auto s = RootOfUnity::make(3, 20);
            EXPECT_TRUE(R.realize(r * s).agrees(R.realize(r) * R.realize(s)));
        }
    EXPECT_TRUE(R.realize(RootOfUnity::make(1, 25)).agrees(cc->zeta_pow(1)));
    EXPECT_FALSE(R.contains(RootOfUnity::make(1, 3)));
    EXPECT_EQ(error_of([&] { R.realize(RootOfUnity::make(1, 125)); }), Errc::DomainError);
    // exp(2 pi i/(p-1)) is the Teichmuller lift of the least primitive root
    auto g = teichmuller_lift(PadicElt(cc->base(), 2));
    EXPECT_TRUE(R.realize(RootOfUnity::make(1, 4)).agrees(cc->from_base(g)));
}

TEST(Characters, DirichletValues) {
    auto R = ring(5, 2);
    const auto& cc = R.ctx();
    auto quad = DirichletChar::make(5, 1, 2, 0);
    EXPECT_TRUE(char_eval(quad, 2, R).agrees(cc->from_int(-1)));
    EXPECT_TRUE(char_eval(quad, 4, R).agrees(cc->one()));
    for (i64 z : {1, 2, 3, 7, 24}) EXPECT_TRUE(char_eval(DirichletChar::trivial(5), z, R).agrees(cc->one()));
    EXPECT_EQ(error_of([&] { char_eval(quad, 10, R); }), Errc::NonUnit);

    std::mt19937_64 rng(7);
    for (const auto& chi : all_chars(5, 2)) {
        for (int t = 0; t < 10; ++t) {
            i64 z1 = 1 + static_cast<i64>(rng() % 24), z2 = 1 + static_cast<i64>(rng() % 24);
            if (z1 % 5 == 0 || z2 % 5 == 0) continue;
            EXPECT_TRUE(char_eval(chi, z1 * z2, R).agrees(char_eval(chi, z1, R) * char_eval(chi, z2, R)));
        }
        // periodic mod 25
        EXPECT_TRUE(char_eval(chi, 3, R).agrees(char_eval(chi, 28, R)));
        // orthogonality
        CycloElt s = cc->zero();
        for (i64 b = 1; b < 25; ++b)
            if (b % 5) s += char_eval(chi, b, R);
        if (chi.a == 0 && chi.w == 0)
            EXPECT_TRUE(s.agrees(cc->from_int(20)));
        else
            EXPECT_TRUE(s.is_zero());
    }
}

TEST(Characters, DualGroupIsCyclicAndComplete) {
    // chi is determined by chi(g) for a generator g of (Z/p^n)^x; distinct
    // exponent pairs give distinct characters.
    for (auto [p, n] : {std::pair<i64, int>{5, 1}, {5, 2}, {7, 2}, {3, 3}}) {
        auto R = ring(p, n, 4);
        i64 g = cyclic_generator(p, n);
        std::set<std::pair<i64, i64>> seen;
        int primitive = 0;
        for (const auto& chi : all_chars(p, n)) {
            auto v = *chi.value(g);
            seen.insert({v.num, v.den});
            if (chi.is_primitive()) ++primitive;
        }
        const i64 pn = nt::ipow(p, n), phi = pn / p * (p - 1);
        EXPECT_EQ(static_cast<i64>(seen.size()), phi);
        EXPECT_EQ(primitive, n == 1 ? p - 2 : phi - phi / p);
    }
}

TEST(Characters, GaussSums) {
    auto R1 = ring(5, 1);
    auto quad = DirichletChar::make(5, 1, 2, 0);
    auto G = gauss_sum(quad, R1);
    EXPECT_EQ((G * G).descend_to_base().residue(), 5);
    EXPECT_EQ(error_of([&] { gauss_sum(DirichletChar::trivial(5), R1); }), Errc::NotPrimitive);

    for (i64 p : {5, 7})
        for (int n : {1, 2}) {
            auto R = ring(p, n, 5);
            const auto& cc = R.ctx();
            for (const auto& chi : all_chars(p, n)) {
                if (!chi.is_primitive()) continue;
                CycloElt prod = gauss_sum(chi, R) * gauss_sum(chi.inverse(), R);
                i64 sign = chi.is_even() ? 1 : -1;
                EXPECT_TRUE(prod.agrees(cc->from_int(sign * nt::ipow(p, n)))) << p << " " << n << " " << chi.a << " " << chi.w;
                EXPECT_TRUE(char_eval(chi, -1, R).agrees(cc->from_int(sign)));
            }
        }
}

TEST(Characters, ClassGroupCharacters) {
    auto G = std::make_shared<const RingClassGroup>(class_group(QuadOrder::make(-4, 5)));
    auto chars = all_class_chars(G);
    ASSERT_EQ(chars.size(), 2u);
    EXPECT_TRUE(class_char_eval(chars[0], {2, 2, 13}).is_one());
    EXPECT_EQ(class_char_eval(chars[1], {2, 2, 13}), RootOfUnity::make(1, 2));

    auto H = std::make_shared<const RingClassGroup>(class_group(QuadOrder::make(-11, 25)));
    auto hc = all_class_chars(H);
    EXPECT_EQ(static_cast<i64>(hc.size()), H->size());
    auto R = ring(5, 1);
    for (const auto& chi : hc) {
        CycloElt s = R.ctx()->zero();
        for (const auto& x : H->elements()) {
            s += R.realize(class_char_eval(chi, x));
            for (const auto& y : {H->elements()[1], H->elements()[3]})
                EXPECT_EQ(class_char_eval(chi, compose(x, y)), class_char_eval(chi, x) * class_char_eval(chi, y));
        }
        if (chi.is_trivial())
            EXPECT_TRUE(s.agrees(R.ctx()->from_int(20)));
        else
            EXPECT_TRUE(s.is_zero());
    }
    EXPECT_EQ(error_of([&] { class_char_eval(hc[1], {1, 1, 3}); }), Errc::NotInGroup);
}

TEST(Characters, Avatar) {
    auto R = ring(5, 1);
    const auto& cc = R.ctx();
    auto z = PadicElt(cc->base(), 2);
    EXPECT_TRUE(avatar_eval({DirichletChar::trivial(5), 0}, z, R).agrees(cc->one()));
    EXPECT_TRUE(avatar_eval({DirichletChar::trivial(5), 1}, z, R).agrees(cc->from_int(2)));
    EXPECT_TRUE(avatar_eval({DirichletChar::make(5, 1, 2, 0), 2}, z, R).agrees(cc->from_int(-4)));
    EXPECT_EQ(error_of([&] { avatar_eval({DirichletChar::trivial(5), 1}, PadicElt(cc->base(), 5), R); }), Errc::NonUnit);
}

TEST(Characters, CriticalCharacterSquares) {
    auto ctx = PadicContext::make(5, 8);
    auto th = build_critical_character(ctx, 2);
    EXPECT_EQ(th.b, 1);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        i64 zi = 1 + static_cast<i64>(rng() % 390624);
        if (zi % 5 == 0) continue;
        PadicElt z(ctx, zi);
        EXPECT_TRUE((th.value(z) * th.value(z)).agrees(th.bracket(z)));
    }
    // theta(6)^2 at T = 0 is psi(6) = omega^2(6)
    auto sq = th.value(PadicElt(ctx, 6)) * th.value(PadicElt(ctx, 6));
    EXPECT_TRUE(sq[0].agrees(teichmuller_lift(PadicElt(ctx, 6)).pow(2)));
    EXPECT_EQ(error_of([&] { build_critical_character(ctx, 1); }), Errc::OddExponent);
}

TEST(Characters, CriticalBranches) {
    auto ctx = PadicContext::make(5, 8);
    auto th0 = build_critical_character(ctx, 2, 0), th1 = build_critical_character(ctx, 2, 1);
    EXPECT_EQ(th1.b, 3);
    for (i64 zi : {2, 3, 6, 7, 13, 101}) {
        PadicElt z(ctx, zi);
        auto w2 = teichmuller_lift(z).pow(2);
        EXPECT_TRUE(th1.value(z).agrees(th0.value(z).scaled(w2)));
    }
    // a0 = 0 on torsion: theta(z)^2 = 1
    auto thz = build_critical_character(ctx, 0);
    auto t = teichmuller_lift(PadicElt(ctx, 2));
    auto sq = thz.value(t) * thz.value(t);
    EXPECT_TRUE(sq.agrees(Lambda({PadicElt::one(ctx)}, true).truncated(sq.size())));
}

TEST(Characters, SpecializedTheta) {
    auto ctx = PadicContext::make(5, 10);
    auto th = build_critical_character(ctx, 2);
    auto R = ring(5, 1, 10);
    const auto& cc = R.ctx();
    const int target = 5 * cc->e();
    std::mt19937_64 rng(9);
    for (i64 w : {0, 1, 3}) {
        auto eps = DirichletChar::make(5, 2, 0, w);
        for (int k = 2; k <= 8; ++k)
            for (int t = 0; t < 6; ++t) {
                i64 zi = 1 + static_cast<i64>(rng() % 1000000);
                if (zi % 5 == 0) continue;
                PadicElt z(ctx, zi);
                CycloElt v = specialize_theta(th, k, eps, z, R);
                auto om = teichmuller_lift(z);
                CycloElt rhs = char_eval(eps, zi, R) * cc->from_base(om.pow(2) * om.pow(-k) * z.pow(k));
                CycloElt lhs = v * v;
                ASSERT_GE(lhs.pi_prec(), target);
                EXPECT_TRUE(lhs.with_pi_prec(target).agrees(rhs.with_pi_prec(target))) << zi << " " << k << " " << w;
            }
    }
    // z = gamma: the square is gamma^k
    CycloElt g2 = specialize_theta(th, 4, DirichletChar::trivial(5), PadicElt(ctx, 6), R);
    EXPECT_TRUE((g2 * g2).with_pi_prec(target).agrees(cc->from_int(nt::ipow(6, 4)).with_pi_prec(target)));
    // k and k + (p-1)p agree mod p^2
    for (i64 zi : {2, 7, 12}) {
        auto a = specialize_theta(th, 2, DirichletChar::trivial(5), PadicElt(ctx, zi), R);
        auto b = specialize_theta(th, 22, DirichletChar::trivial(5), PadicElt(ctx, zi), R);
        EXPECT_TRUE(a.with_pi_prec(2 * cc->e()).agrees(b.with_pi_prec(2 * cc->e())));
    }
}

TEST(Characters, Recipe) {
    HeckeCharRecipeData d;
    d.D = -4;
    d.p = 5;
    d.target_k = d.inf_k = 1;
    EXPECT_TRUE(validate_recipe(d).ok());

    auto both = d;
    both.neben_conductor = 13;
    both.primes.push_back({13, PrimeTag::Split, 1, 1});
    auto r = validate_recipe(both);
    EXPECT_FALSE(r.one_sided_split);
    EXPECT_TRUE(r.unramified_away);

    // conductor exactly P, infinity type (1, 0), restriction omega^{-1} against nebentypus omega
    auto om = d;
    om.exp_p = 1;
    om.neben_exponent = 1;
    om.restriction_exponent = -1;
    EXPECT_TRUE(validate_recipe(om).ok());

    auto bad = om;
    bad.exp_pbar = 1;
    bad.primes.push_back({3, PrimeTag::Split, 1, 0});
    auto rb = validate_recipe(bad);
    EXPECT_FALSE(rb.p_support);
    EXPECT_FALSE(rb.consistent);        // 3 is inert in Q(i)
    EXPECT_FALSE(rb.unramified_away);  // and ramified outside the nebentypus conductor
}

TEST(Characters, IntegrationIdentityDirac) {
    auto ctx = PadicContext::make(5, 6);
    for (int n : {1, 2}) {
        for (i64 a : {1, 2, 3, 7, 13})
            for (int m : {0, 1, 3})
                for (const auto& phi : all_chars(5, n)) {
                    if (!phi.is_primitive()) continue;
                    auto chk = integration_identity_check(group_like(PadicElt::one(ctx), a), phi, m);
                    EXPECT_TRUE(chk.agree);
                    // closed form phi(a) a^m, realized in the check's own ring
                    CharRing Rc(chk.lhs.ctx());
                    EXPECT_TRUE(chk.lhs.agrees(char_eval(phi, a, Rc) * Rc.ctx()->from_int(nt::ipow(a, m))));
                }
        // Dirac at p: both sides vanish
        auto chk = integration_identity_check(group_like(PadicElt::one(ctx), 5), DirichletChar::make(5, n, 1, 1), 2);
        EXPECT_TRUE(chk.agree);
        EXPECT_TRUE(chk.lhs.is_zero());
        EXPECT_TRUE(chk.rhs.is_zero());
    }
}

TEST(Characters, IntegrationIdentityRandom) {
    auto ctx = PadicContext::make(5, 6);
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 20; ++t) {
        int n = 1 + t % 2;
        auto chars = all_chars(5, n);
        std::vector<DirichletChar> prim;
        for (auto& c : chars)
            if (c.is_primitive()) prim.push_back(c);
        auto phi = prim[rng() % prim.size()];
        auto Phi = random_poly(ctx, rng, 24);
        int m = static_cast<int>(rng() % 5);
        auto chk = integration_identity_check(Phi, phi, m);
        EXPECT_TRUE(chk.agree) << t;
        EXPECT_EQ(chk.pi_prec, 6 * chk.lhs.ctx()->e());
    }
}
