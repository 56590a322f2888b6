#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "anticyc/json_io.hpp"

using namespace anticyc;

namespace {

struct Run {
    int code;
    std::string out;
    json doc() const { return json::parse(out); }
};

Run cli(const std::string& args) {
    std::string cmd = std::string(ANTICYC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int st = pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

i64 first_digit(const json& padic) { return padic.at("coeffs").at(0).get<i64>(); }

std::filesystem::path tmp_file(const std::string& name) { return std::filesystem::temp_directory_path() / ("anticyc_test_" + name); }

}  // namespace

TEST(Json, PadicRoundTrip) {
    for (int f : {1, 2}) {
        auto ctx = PadicContext::make(7, 5, f);
        std::vector<i64> c(static_cast<std::size_t>(f));
        for (int i = 0; i < f; ++i) c[static_cast<std::size_t>(i)] = 1234 + 77 * i;
        auto x = PadicElt::from_coeffs(ctx, c, 4);
        auto y = io::padic_from(json::parse(io::to_json(x).dump()));
        EXPECT_TRUE(io::same(x, y));
        EXPECT_TRUE((x * x).agrees(y * y));
    }
}

TEST(Json, CycloAndSeriesRoundTrip) {
    auto base = PadicContext::make(5, 4);
    auto cc = CycloContext::make(base, 2);
    CycloElt z = cc->zeta_pow(7) * cc->from_int(3) - cc->pi().pow(5);
    EXPECT_TRUE(io::same(z, io::cyclo_from(json::parse(io::to_json(z).dump()))));
    auto lowp = z.with_pi_prec(33);
    EXPECT_TRUE(io::same(lowp, io::cyclo_from(io::to_json(lowp))));

    Lambda f = group_like_padic(PadicElt(base, 17), 9);
    EXPECT_TRUE(io::same(f, io::lambda_from(json::parse(io::to_json(f).dump()))));
    Lambda g = group_like(PadicElt::one(base), 4);
    EXPECT_TRUE(io::same(g, io::lambda_from(io::to_json(g))));
    LambdaCyclo h = g.map([&](const PadicElt& x) { return cc->from_base(x) * z; });
    EXPECT_TRUE(io::same(h, io::lambda_cyclo_from(json::parse(io::to_json(h).dump()))));
}

TEST(Json, SmallPayloadsRoundTrip) {
    FormClass F{3, -2, 5};
    EXPECT_EQ(io::form_from(json::parse(io::to_json(F).dump())), F);
    auto chi = DirichletChar::make(5, 3, 3, 7);
    EXPECT_EQ(io::dirichlet_from(json::parse(io::to_json(chi).dump())), chi);
    auto r = RootOfUnity::make(7, 30);
    EXPECT_EQ(io::root_from(json::parse(io::to_json(r).dump())), r);
    Error e(Errc::PrecisionLoss, "x", 3);
    auto j = io::to_json(e);
    EXPECT_EQ(j["error"], "PrecisionLoss");
    EXPECT_EQ(j["deficit"], 3);
    EXPECT_TRUE(j["precision"].get<bool>());
}

TEST(Cli, ClassGroup) {
    auto a = cli("classgroup --disc -11");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.doc()["h"], 1);
    auto b = cli("classgroup --disc -11 --conductor 5");
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(b.doc()["h"], 4);
    auto t = cli("classgroup --disc -11 --p 5 --levels 2");
    ASSERT_EQ(t.code, 0);
    auto tower = t.doc()["tower"];
    EXPECT_EQ(tower[1]["h"], 4);
    EXPECT_EQ(tower[2]["h"], 20);
    EXPECT_EQ(tower[2]["fiber_sizes"][0], 20);
    auto bad = cli("classgroup --disc -11 --p 7");
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(bad.doc()["error"], "NotSplit");
}

TEST(Cli, Theta) {
    auto r = cli("theta --disc -4 --trunc-Q 30");
    ASSERT_EQ(r.code, 0);
    auto counts = r.doc()["counts"];
    for (i64 n = 1; n < 30; ++n) {
        i64 s = 0;
        for (i64 d : nt::divisors(n)) s += nt::kronecker(-4, d);
        EXPECT_EQ(counts[static_cast<std::size_t>(n)], s) << n;
    }
}

TEST(Cli, Measure) {
    auto m = cli("measure moments --group-like 3 --m-max 3");
    ASSERT_EQ(m.code, 0);
    std::vector<i64> got;
    auto md = m.doc();
    for (const auto& x : md["moments"]) got.push_back(first_digit(x));
    EXPECT_EQ(got, (std::vector<i64>{1, 3, 9, 27}));

    auto t = cli("measure twist --group-like 2 --char-a 2 --level 1 --method both");
    ASSERT_EQ(t.code, 0);
    auto d = t.doc();
    EXPECT_TRUE(d["agree"].get<bool>());
    auto w2 = io::cyclo_from(d["dirac_weights"][2]);
    EXPECT_TRUE(w2.agrees(-w2.ctx()->one()));
    EXPECT_TRUE(io::cyclo_from(d["dirac_weights"][1]).is_zero());

    auto c1 = cli("measure check-integration --seed 11 --level 2 --m 3");
    ASSERT_EQ(c1.code, 0);
    EXPECT_TRUE(c1.doc()["agree"].get<bool>());
    EXPECT_EQ(c1.out, cli("measure check-integration --seed 11 --level 2 --m 3").out);
    EXPECT_NE(c1.out, cli("measure check-integration --seed 12 --level 2 --m 3").out);
    auto np = cli("measure check-integration --level 2 --char-w 5");
    EXPECT_EQ(np.code, 1);
    EXPECT_EQ(np.doc()["error"], "NotPrimitive");
}

TEST(Cli, PrecisionErrorsExitTwo) {
    auto base = PadicContext::make(5, 6);
    auto path = tmp_file("trunc.json");
    {
        std::ofstream f(path);
        f << io::to_json(group_like_padic(PadicElt(base, 3), 4)).dump();
    }
    auto r = cli("measure moments --in " + path.string() + " --m-max 6");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.doc()["error"], "TruncationError");
    auto tw = cli("measure twist --in " + path.string() + " --char-a 2 --level 1");
    EXPECT_EQ(tw.code, 2);
    EXPECT_EQ(tw.doc()["error"], "PrecisionLoss");
    std::filesystem::remove(path);
}

TEST(Cli, Family) {
    auto s = cli("family specialize --k 4 --trunc-Q 30");
    ASSERT_EQ(s.code, 0);
    auto cs = s.doc()["coefficients"];
    for (i64 n = 1; n < 30; ++n) {
        i64 sig = 0;
        for (i64 d : nt::divisors(n))
            if (d % 5 != 0) sig += d * d * d;
        EXPECT_EQ(first_digit(cs[static_cast<std::size_t>(n)]), nt::mod(sig, nt::ipow(5, 6))) << n;
    }
    auto c = cli("family congruence --k 2 --k2 22 --trunc-Q 200");
    ASSERT_EQ(c.code, 0);
    EXPECT_GE(c.doc()["min_valuation"].get<int>(), 2);
    // wild eps of conductor 25: same coefficients as the library, congruence mod 25 with digits to spare
    auto w = cli("family specialize --k 4 --eps-n 2 --eps-w 1 --trunc-Q 30 --prec-M 24");
    ASSERT_EQ(w.code, 0);
    {
        auto ctx = PadicContext::make(5, 6);
        CharRing R(CycloContext::make(ctx, 1));
        auto ref = specialize_lambda_form(eisenstein_family(ctx, 0, 30, 24), 4, DirichletChar::make(5, 2, 0, 1), R);
        auto wc = w.doc()["coefficients"];
        for (std::size_t n = 1; n < 30; ++n) EXPECT_TRUE(io::cyclo_from(wc[n]).agrees(ref.a[n])) << n;
    }
    auto wc = cli("family congruence --k 2 --k2 22 --eps-n 2 --eps-w 1 --trunc-Q 100 --prec-M 24");
    ASSERT_EQ(wc.code, 0);
    EXPECT_GE(wc.doc()["min_valuation"].get<int>(), 2);
    EXPECT_GT(wc.doc()["min_pi_prec"].get<int>(), wc.doc()["min_pi_valuation"].get<int>());
    auto o11 = cli("family ordinary --fixture delta11 --prec-N 4");
    ASSERT_EQ(o11.code, 0);
    EXPECT_EQ(o11.doc()["rank"], 1);
    auto o5 = cli("family ordinary --fixture delta5 --prec-N 4");
    ASSERT_EQ(o5.code, 0);
    EXPECT_EQ(o5.doc()["tau_p"], "4830");
    EXPECT_FALSE(o5.doc()["tau_p_unit"].get<bool>());
    EXPECT_EQ(o5.doc()["rank"], 0);
}

TEST(Cli, AssembleAndLvalue) {
    auto a = cli("assemble");
    ASSERT_EQ(a.code, 0);
    auto d = a.doc();
    EXPECT_TRUE(d["all_ok"].get<bool>());
    EXPECT_EQ(d["L_values"].size(), 27u);
    // r = 1: the s = 0 character fails the local form, s = 1 the global form
    std::multiset<std::pair<int, std::string>> warned;
    for (const auto& w : d["warnings"]) warned.insert({w["chi"]["s"].get<int>(), w["condition"].get<std::string>()});
    EXPECT_EQ(warned, (std::multiset<std::pair<int, std::string>>{{0, "local"}, {1, "global"}}));

    auto cfg = tmp_file("run.json");
    {
        std::ofstream f(cfg);
        f << json{{"p", 5}, {"D", -11}, {"c", 1}, {"precision", {{"N", 5}, {"Q", 30}}}, {"weights", {2, 6}}, {"m", {0, 1}},
                  {"classes", {{{"form", {1, 1, 3}}, {"c_j", 3}, {"d_j", 2}, {"texp", "eisenstein"}}}},
                  {"chars", {{{"s", 1}, {"exps", {1}}}, {{"s", 2}, {"exps", {7}}}}}}
                 .dump();
    }
    auto b = cli("assemble --config " + cfg.string());
    ASSERT_EQ(b.code, 0);
    EXPECT_TRUE(b.doc()["all_ok"].get<bool>());
    EXPECT_EQ(b.doc()["L_values"].size(), 8u);
    auto out = tmp_file("out.json");
    ASSERT_EQ(cli("assemble --config " + cfg.string() + " --out " + out.string()).code, 0);
    std::ifstream in(out);
    EXPECT_EQ(json::parse(in), b.doc());
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);

    auto l = cli("lvalue --chi trivial --k 2");
    ASSERT_EQ(l.code, 0);
    EXPECT_TRUE(l.doc()["agree"].get<bool>());
    // matches the assembled value for the same character
    for (const auto& v : d["L_values"])
        if (v["chi"]["s"] == 0 && v["k"] == 2 && v["m"] == 0) {
            auto base = PadicContext::make(5, 6);
            auto x = io::cyclo_from(v["value"]).descend_to_base().rebase(base);
            auto y = io::cyclo_from(l.doc()["two_var"]).descend_to_base().rebase(base);
            EXPECT_TRUE(x.agrees(y));
            EXPECT_EQ(x.prec(), 6);
        }
    auto br = cli("lvalue --chi 1:1 --k 2 --branch 0");
    EXPECT_EQ(br.code, 1);
    EXPECT_EQ(br.doc()["error"], "BranchMismatch");
}
