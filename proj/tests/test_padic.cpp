#include <gtest/gtest.h>

#include <random>

#include "anticyc/padic.hpp"

using namespace anticyc;

namespace {

// Brute force: the unique x mod p^N with x = a mod p and x^(p-1) = 1.
i64 brute_teichmuller(i64 a, i64 p, int N) {
    i64 m = nt::ipow(p, N);
    for (i64 x = nt::mod(a, p); x < m; x += p)
        if (nt::powmod(x, p - 1, m) == 1) return x;
    return -1;
}

}  // namespace

TEST(Padic, TeichmullerSmall) {
    auto c2 = PadicContext::make(5, 2);
    auto c3 = PadicContext::make(5, 3);
    EXPECT_EQ(teichmuller_lift(PadicElt(c2, 1)).residue(), 1);
    EXPECT_EQ(teichmuller_lift(PadicElt(c2, 2)).residue(), 7);
    EXPECT_EQ(teichmuller_lift(PadicElt(c3, 2)).residue(), 57);
}

TEST(Padic, TeichmullerMatchesBruteForce) {
    for (i64 p : {3, 5, 7, 11}) {
        auto ctx = PadicContext::make(p, 4);
        for (i64 a = 1; a < p; ++a) {
            auto w = teichmuller_lift(PadicElt(ctx, a));
            EXPECT_EQ(w.residue(), brute_teichmuller(a, p, 4)) << p << " " << a;
            EXPECT_TRUE(w.pow(p - 1).agrees(PadicElt::one(ctx)));
        }
    }
}

TEST(Padic, TeichmullerNonUnit) {
    auto ctx = PadicContext::make(5, 3);
    try {
        teichmuller_lift(PadicElt(ctx, 10));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonUnit);
    }
}

TEST(Padic, TeichmullerUnramified) {
    auto ctx = PadicContext::make(5, 4, 2);
    EXPECT_EQ(ctx->f(), 2);
    EXPECT_EQ(ctx->residue_order(), 25);
    auto g = unit_root_generator(ctx);
    EXPECT_TRUE(g.pow(24).agrees(PadicElt::one(ctx)));
    EXPECT_FALSE(g.pow(12).agrees(PadicElt::one(ctx)));
    EXPECT_FALSE(g.pow(8).agrees(PadicElt::one(ctx)));
    auto w3 = tame_root_of_unity(ctx, 3);
    EXPECT_TRUE(w3.pow(3).agrees(PadicElt::one(ctx)));
    EXPECT_FALSE(w3.agrees(PadicElt::one(ctx)));
}

TEST(Padic, MinimalDegreeForRootOrders) {
    std::vector<i64> orders{3};
    EXPECT_EQ(PadicContext::for_root_orders(5, 3, orders)->f(), 2);
    orders = {4, 25};
    EXPECT_EQ(PadicContext::for_root_orders(5, 3, orders)->f(), 1);
    orders = {7};
    EXPECT_EQ(PadicContext::for_root_orders(5, 3, orders)->f(), 6);
}

TEST(Padic, InverseUnramified) {
    auto ctx = PadicContext::make(7, 5, 3);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        std::vector<i64> c(3);
        for (auto& x : c) x = static_cast<i64>(rng() % 16807);
        if (c[0] % 7 == 0 && c[1] % 7 == 0 && c[2] % 7 == 0) continue;
        auto a = PadicElt::from_coeffs(ctx, c, 5);
        EXPECT_TRUE((a * a.inverse()).agrees(PadicElt::one(ctx)));
    }
}

TEST(Padic, LogSmall) {
    auto ctx = PadicContext::make(5, 3);
    EXPECT_TRUE(padic_log(PadicElt(ctx, 1)).is_zero());
    auto l = padic_log(PadicElt(ctx, 6));
    EXPECT_EQ(l.prec(), 3);
    EXPECT_EQ(l.residue(), 55);
}

TEST(Padic, LogDomain) {
    auto ctx = PadicContext::make(5, 3);
    try {
        padic_log(PadicElt(ctx, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DomainError);
    }
}

TEST(Padic, ExpLogRoundTrip) {
    std::mt19937_64 rng(7);
    for (i64 p : {3, 5, 7}) {
        auto ctx = PadicContext::make(p, 8);
        for (int t = 0; t < 30; ++t) {
            i64 r = static_cast<i64>(rng() % 100000);
            PadicElt u(ctx, 1 + p * r);
            auto back = padic_exp(padic_log(u));
            EXPECT_GE(back.prec(), 7);
            EXPECT_TRUE(back.agrees(u)) << p << " " << r;
        }
    }
}

TEST(Padic, LogIsHomomorphism) {
    auto ctx = PadicContext::make(5, 6);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        PadicElt a(ctx, 1 + 5 * static_cast<i64>(rng() % 3125));
        PadicElt b(ctx, 1 + 5 * static_cast<i64>(rng() % 3125));
        EXPECT_TRUE(padic_log(a * b).agrees(padic_log(a) + padic_log(b)));
    }
}

TEST(Padic, DecomposeUnitExamples) {
    auto ctx = PadicContext::make(5, 4);
    auto d = decompose_unit(PadicElt(ctx, 6));
    EXPECT_EQ(d.torsion_exponent, 0);
    EXPECT_EQ(d.s.residue(), 1);

    auto c3 = PadicContext::make(5, 3);
    auto d7 = decompose_unit(PadicElt(c3, 57));
    EXPECT_TRUE(d7.s.is_zero());
    i64 g = c3->residue_generator()[0];
    EXPECT_EQ(nt::powmod(g, d7.torsion_exponent, 5), 2);

    auto d2 = decompose_unit(PadicElt(ctx, 2));
    EXPECT_EQ(d2.s.prec(), 3);
    auto back = d2.omega * gamma_pow(d2.s);
    EXPECT_TRUE(back.agrees(PadicElt(ctx, 2)));
    EXPECT_EQ(back.prec(), 4);
}

TEST(Padic, DecomposeUnitProperties) {
    auto ctx = PadicContext::make(7, 6);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        i64 z = static_cast<i64>(rng() % 117649), w = static_cast<i64>(rng() % 117649);
        if (z % 7 == 0 || w % 7 == 0) continue;
        auto dz = decompose_unit(PadicElt(ctx, z));
        auto dw = decompose_unit(PadicElt(ctx, w));
        auto dzw = decompose_unit(PadicElt(ctx, z * w));
        EXPECT_TRUE((dz.omega * gamma_pow(dz.s)).agrees(PadicElt(ctx, z)));
        EXPECT_TRUE(dzw.s.agrees(dz.s + dw.s));
        EXPECT_EQ(dzw.torsion_exponent, (dz.torsion_exponent + dw.torsion_exponent) % 6);
    }
}

TEST(Padic, PrecisionSoundness) {
    // Recomputing with a larger N and truncating agrees on the declared precision.
    auto lo = PadicContext::make(5, 4);
    auto hi = PadicContext::make(5, 9);
    for (i64 z : {2, 3, 7, 13, 1234, 99}) {
        auto a = decompose_unit(PadicElt(lo, z));
        auto b = decompose_unit(PadicElt(hi, z));
        EXPECT_TRUE(b.s.rebase(lo).agrees(a.s));
        EXPECT_TRUE(b.omega.rebase(lo).agrees(a.omega));
    }
    for (i64 u : {6, 11, 31, 126}) {
        EXPECT_TRUE(padic_log(PadicElt(hi, u)).rebase(lo).agrees(padic_log(PadicElt(lo, u))));
    }
}

TEST(Padic, MultiplicationPrecision) {
    auto ctx = PadicContext::make(5, 6);
    PadicElt a(ctx, 25, 4);  // 25 + O(5^4)
    PadicElt b(ctx, 3, 2);   // 3 + O(5^2)
    auto c = a * b;
    EXPECT_EQ(c.prec(), 4);  // min(4 + 0, 2 + 2)
    EXPECT_EQ(c.residue(), 75);
    auto q = a.div_p_power(2);
    EXPECT_EQ(q.prec(), 2);
    EXPECT_EQ(q.residue(), 1);
}

TEST(Padic, ContextMismatch) {
    auto a = PadicContext::make(5, 4);
    auto b = PadicContext::make(7, 4);
    try {
        (void)(PadicElt(a, 1) + PadicElt(b, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ContextMismatch);
    }
}
