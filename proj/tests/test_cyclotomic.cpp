#include <gtest/gtest.h>

#include <random>

#include "anticyc/cyclotomic.hpp"

using namespace anticyc;

namespace {

CycloCtx level(int n, int N = 4, i64 p = 5, int f = 1) { return CycloContext::make(PadicContext::make(p, N, f), n); }

CycloElt random_elt(const CycloCtx& c, std::mt19937_64& rng) {
    std::vector<i64> raw(static_cast<std::size_t>(c->e() * c->f()));
    for (auto& x : raw) x = static_cast<i64>(rng() % static_cast<std::uint64_t>(c->modulus()));
    return CycloElt(c, raw, c->pi_prec());
}

}  // namespace

TEST(Cyclotomic, Shape) {
    auto c = level(2);
    EXPECT_EQ(c->e(), 20);
    EXPECT_EQ(c->pi_prec(), 80);
    EXPECT_EQ(c->pn(), 25);
    // Eisenstein relation: constant term p, all others divisible by p.
    EXPECT_EQ(c->relation()[0] % 5, 0);
    EXPECT_EQ(nt::vp(c->relation()[0], 5), 1);
    for (i64 r : c->relation()) EXPECT_EQ(r % 5, 0);
}

TEST(Cyclotomic, RootsOfUnity) {
    for (int n : {1, 2, 3}) {
        auto c = level(n, 3);
        EXPECT_TRUE(c->zeta_pow(0).agrees(c->one()));
        EXPECT_TRUE(c->zeta_pow(c->pn()).agrees(c->one()));
        EXPECT_TRUE((c->one() + c->pi()).pow(c->pn()).agrees(c->one()));
        CycloElt s = c->zero();
        for (i64 j = 0; j < c->pn(); ++j) s += c->zeta_pow(j);
        EXPECT_TRUE(s.is_zero());
        // zeta^(p^{n-1}) has order exactly p
        EXPECT_FALSE(c->zeta_pow(c->pn() / 5).agrees(c->one()));
    }
}

TEST(Cyclotomic, PiValuation) {
    auto c = level(2);
    EXPECT_EQ(c->from_int(5).pi_val(), c->e());
    EXPECT_EQ(c->pi().pi_val(), 1);
    EXPECT_EQ((c->zeta_pow(2) - c->one()).pi_val(), 1);
    EXPECT_EQ((c->zeta_pow(5) - c->one()).pi_val(), 5);  // zeta_p - 1 has v_pi = p^{n-1}
    EXPECT_EQ(c->zero().pi_val(), CycloElt::infinity);
}

TEST(Cyclotomic, ValuationIsMultiplicative) {
    auto c = level(2, 5);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 40; ++t) {
        CycloElt a = random_elt(c, rng) * c->pi().pow(static_cast<i64>(rng() % 7));
        CycloElt b = random_elt(c, rng) * c->pi().pow(static_cast<i64>(rng() % 7));
        int va = a.pi_val(), vb = b.pi_val();
        CycloElt ab = a * b;
        if (va + vb < ab.pi_prec()) {
            EXPECT_EQ(ab.pi_val(), va + vb);
        }
        EXPECT_GE((a + b).pi_val_capped(), std::min({va, vb, (a + b).pi_prec()}));
    }
}

TEST(Cyclotomic, RingAxioms) {
    auto c = level(2, 4, 5, 2);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        auto a = random_elt(c, rng), b = random_elt(c, rng), d = random_elt(c, rng);
        EXPECT_TRUE(((a * b) * d).agrees(a * (b * d)));
        EXPECT_TRUE((a * (b + d)).agrees(a * b + a * d));
        EXPECT_TRUE((a * b).agrees(b * a));
    }
}

TEST(Cyclotomic, Inverse) {
    auto c = level(2);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto a = random_elt(c, rng);
        if (a.pi_val() != 0) continue;
        EXPECT_TRUE((a * a.inverse()).agrees(c->one()));
    }
    EXPECT_TRUE((c->zeta_pow(3) * c->zeta_pow(3).inverse()).agrees(c->one()));
}

TEST(Cyclotomic, Descent) {
    auto c = level(1);
    EXPECT_EQ(c->from_int(3).descend_to_base().residue(), 3);
    EXPECT_EQ(c->from_int(3).descend_to_base().prec(), 4);
    try {
        (void)c->pi().descend_to_base();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotRational);
    }
    // Quadratic Gauss sum mod 5 via the Legendre symbol: G^2 = 5.
    CycloElt g = c->zero();
    for (i64 b = 1; b < 5; ++b) g += c->zeta_pow(b).scaled(nt::jacobi(b, 5));
    auto g2 = (g * g).descend_to_base();
    EXPECT_EQ(g2.residue(), 5);
}

TEST(Cyclotomic, DivisionByP) {
    auto c = level(2);
    CycloElt s = c->zero();
    // zeta^{5j} runs over mu_5 five times
    for (i64 j = 0; j < 25; ++j) s += c->zeta_pow(5 * j);
    EXPECT_TRUE(s.is_zero());
    CycloElt t = c->from_int(50) + c->pi().scaled(25);
    auto q = t.div_p_power(1);
    EXPECT_EQ(q.pi_prec(), c->pi_prec() - c->e());
    EXPECT_TRUE(q.agrees(c->from_int(10) + c->pi().scaled(5)));
    try {
        (void)c->pi().div_p_power(1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PrecisionLoss);
        EXPECT_EQ(e.deficit(), c->e() - 1);
    }
}

TEST(Cyclotomic, Galois) {
    auto c = level(2);
    for (i64 a : {2, 3, 7, 24})
        for (i64 j : {1, 4, 5, 11}) EXPECT_TRUE(c->zeta_pow(j).galois(a).agrees(c->zeta_pow(a * j)));
}

TEST(Cyclotomic, TowerCompatibility) {
    auto lo = level(1, 3);
    auto hi = level(2, 3);
    for (i64 j = 0; j < 5; ++j) {
        auto img = CycloElt::embed_from_lower(lo->zeta_pow(j), hi);
        EXPECT_TRUE(img.agrees(hi->zeta_pow(5 * j)));
    }
    std::mt19937_64 rng(4);
    auto a = random_elt(lo, rng), b = random_elt(lo, rng);
    EXPECT_TRUE(CycloElt::embed_from_lower(a * b, hi).agrees(CycloElt::embed_from_lower(a, hi) * CycloElt::embed_from_lower(b, hi)));
}
