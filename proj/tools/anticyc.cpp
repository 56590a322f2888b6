// Command-line front end: JSON in, JSON out.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "anticyc/anticyc.hpp"
#include "anticyc/json_io.hpp"

using namespace anticyc;

namespace {

struct Globals {
    i64 p = 5;
    i64 D = -11;
    i64 c = 1;
    int N = 6;
    int M = 0;  // Lambda truncation; 0 means N + 2
    int pi = 0;
    std::size_t Q = 40;
    std::uint64_t seed = 1;
    std::string out;

    std::size_t lambda_trunc() const { return static_cast<std::size_t>(M > 0 ? M : N + 2); }
};

std::vector<i64> parse_list(const std::string& s) {
    std::vector<i64> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) v.push_back(std::stoll(item));
    return v;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::DomainError, "cannot open " + path);
    return json::parse(in);
}

std::shared_ptr<const RingClassGroup> group_at(i64 D, i64 f) {
    return std::make_shared<const RingClassGroup>(class_group(QuadOrder::make(D, f)));
}

AnticycloCharSpec char_spec(i64 D, i64 p, i64 c, int s, std::vector<i64> exps, int m) {
    if (s < 0) fail(Errc::DomainError, "character level must be >= 0");
    auto G = group_at(D, c * nt::ipow(p, s));
    if (exps.empty()) exps.assign(G->invariants().size(), 0);
    return {ClassGroupChar::make(G, exps), s, m};
}

/// "s:e1,e2,..." or "trivial".
AnticycloCharSpec parse_chi(const Globals& g, const std::string& desc, int m) {
    if (desc == "trivial" || desc.empty()) return char_spec(g.D, g.p, g.c, 0, {}, m);
    auto colon = desc.find(':');
    if (colon == std::string::npos) fail(Errc::DomainError, "character descriptor must look like s:e1,e2");
    return char_spec(g.D, g.p, g.c, std::stoi(desc.substr(0, colon)), parse_list(desc.substr(colon + 1)), m);
}

json chi_json(const AnticycloCharSpec& chi) { return {{"s", chi.s}, {"exps", chi.chi.exps}, {"m", chi.m}}; }

/// Working level: deep enough for the characters' p-power orders.
int level_for(const std::vector<AnticycloCharSpec>& chis, i64 p) {
    int L = 1;
    for (const auto& x : chis) L = std::max({L, x.s, nt::vp(x.chi.order(), p)});
    return L;
}

Lambda series_input(const Globals& g, const std::string& in, const std::string& coeffs, i64 group_like_a) {
    auto ctx = PadicContext::make(g.p, g.N);
    if (!in.empty()) return io::lambda_from(read_json(in));
    if (!coeffs.empty()) {
        std::vector<PadicElt> c;
        for (i64 v : parse_list(coeffs)) c.emplace_back(ctx, v);
        if (c.empty()) fail(Errc::DomainError, "empty coefficient list");
        return Lambda(c, true);
    }
    if (group_like_a >= 0) return group_like(PadicElt::one(ctx), group_like_a);
    fail(Errc::DomainError, "measure commands need --in, --coeffs or --group-like");
}

CycloCtx cyclo_ring(const PadicCtx& base, int n, int pi) { return CycloContext::make(base, std::max(n, 1), pi); }

// --- classgroup -------------------------------------------------------------

json cmd_classgroup(const Globals& g, bool tower, int levels) {
    auto G = class_group(QuadOrder::make(g.D, g.c));
    json out{{"D", g.D}, {"conductor", g.c}, {"disc", G.disc()}, {"h", G.size()}, {"invariants", G.invariants()}};
    json forms = json::array();
    for (const auto& f : G.elements()) forms.push_back(io::to_json(f));
    out["classes"] = forms;
    if (!tower) return out;
    if (!is_split(g.p, QuadField::make(g.D))) fail(Errc::NotSplit, std::to_string(g.p) + " is not split in Q(sqrt(" + std::to_string(g.D) + "))");
    json t = json::array();
    for (int n = 0; n <= levels; ++n) {
        const i64 f = g.c * nt::ipow(g.p, n);
        auto Gn = class_group(QuadOrder::make(g.D, f));
        json row{{"n", n}, {"conductor", f}, {"h", Gn.size()}, {"invariants", Gn.invariants()}};
        if (n >= 1) {
            json sizes = json::array();
            for (const auto& A : G.elements()) sizes.push_back(fiber_classes(A, g.D, g.p, g.c, n).classes.size());
            row["fiber_sizes"] = sizes;
        }
        t.push_back(row);
    }
    out["p"] = g.p;
    out["tower"] = t;
    return out;
}

// --- theta ------------------------------------------------------------------

json cmd_theta(const Globals& g, const std::string& char_exps) {
    json out{{"D", g.D}, {"Q", g.Q}};
    if (char_exps.empty()) {
        out["counts"] = theta_counts(g.D, g.Q);
        return out;
    }
    auto G = group_at(g.D, g.c);
    auto chi = ClassGroupChar::make(G, parse_list(char_exps));
    std::vector<i64> orders{chi.order()};
    auto base = PadicContext::for_root_orders(g.p, g.N, orders);
    CharRing R(cyclo_ring(base, std::max(1, nt::vp(chi.order(), g.p)), g.pi));
    out["conductor"] = g.c;
    out["exps"] = chi.exps;
    out["coefficients"] = json::array();
    for (const auto& a : theta_series(chi, g.Q, R).a) out["coefficients"].push_back(io::to_json(a));
    return out;
}

// --- measure ----------------------------------------------------------------

json cmd_measure(const Globals& g, const std::string& op, const Lambda& Phi, int m_max, int m, i64 ca, i64 cw, int n,
                 const std::string& method, std::size_t deg) {
    const auto& base = Phi[0].ctx();
    if (op == "moments") {
        json ms = json::array();
        for (int k = 0; k <= m_max; ++k) ms.push_back(io::to_json(moment(Phi, k)));
        return {{"moments", ms}};
    }
    auto chi = DirichletChar::make(base->p(), n, ca, cw);
    if (op == "twist" || op == "mellin") {
        auto cc = cyclo_ring(base, n, g.pi);
        CharRing R(cc);
        auto table = char_table(chi, R);
        LambdaCyclo Phic = Phi.map([&](const PadicElt& x) { return cc->from_base(x); });
        LambdaCyclo tw = twist_pointwise(Phic, table);
        if (op == "mellin") return {{"character", io::to_json(chi)}, {"m", m}, {"value", io::to_json(moment(tw, m))}};
        json out{{"character", io::to_json(chi)}, {"method", method}, {"series", io::to_json(tw)}};
        json w = json::array();
        for (const auto& x : to_t_basis(tw)) w.push_back(io::to_json(x));
        out["dirac_weights"] = w;
        if (method == "fourier" || method == "both") {
            FourierTwister ft(base, std::max(n, 1), Phi.size());
            auto tf = twist_fourier(Phic, table, ft);
            out["fourier"] = io::to_json(tf);
            out["agree"] = tf.agrees(tw);
        }
        return out;
    }
    if (op == "check-integration") {
        std::mt19937_64 rng(g.seed);
        std::uniform_int_distribution<i64> d(0, base->pow_p(base->N()) - 1);
        std::vector<PadicElt> c;
        for (std::size_t i = 0; i <= deg; ++i) c.emplace_back(base, d(rng));
        auto r = integration_identity_check(Lambda(c, true), chi, m);
        return {{"character", io::to_json(chi)}, {"m", m}, {"seed", g.seed}, {"agree", r.agree}, {"pi_prec", r.pi_prec}, {"lhs", io::to_json(r.lhs)}, {"rhs", io::to_json(r.rhs)}};
    }
    fail(Errc::DomainError, "unknown measure operation " + op);
}

// --- family -----------------------------------------------------------------

json cmd_family(const Globals& g, const std::string& op, int k, int k2, i64 a0, int eps_n, i64 eps_w, const std::string& fixture) {
    auto ctx = PadicContext::make(g.p, g.N);
    if (op == "ordinary") {
        i64 p = fixture == "delta11" ? 11 : (fixture == "delta5" ? 5 : 0);
        if (p == 0) fail(Errc::DomainError, "unknown fixture " + fixture + " (delta5, delta11)");
        auto pc = PadicContext::make(p, g.N);
        auto Dq = delta_qexp(pc, std::max<std::size_t>(g.Q, static_cast<std::size_t>(p * (p + 2))));
        auto op_ = ordinary_projector({Dq, hecke_V(Dq, p)}, p, g.N);
        json out{{"fixture", fixture}, {"p", p}, {"modulus", op_.modulus}, {"U", op_.U}, {"E", op_.E}, {"rank", op_.rank},
                 {"ordinary_basis", op_.ordinary_basis}, {"iterations", op_.iterations}};
        BigInt tau = delta_coeffs(static_cast<std::size_t>(p) + 1)[static_cast<std::size_t>(p)];
        out["tau_p"] = tau.str();
        out["tau_p_unit"] = bigint_mod(tau, p) != 0;
        return out;
    }
    auto F = eisenstein_family(ctx, a0, g.Q, g.lambda_trunc());
    if (eps_n >= 2 && nt::mod(eps_w, nt::ipow(g.p, eps_n - 1)) != 0) {
        // wild eps: coefficients live in Z_p[zeta_{p^(n-1)}], compared in pi-digits
        auto eps = DirichletChar::make(g.p, eps_n, 0, eps_w);
        CharRing R(CycloContext::make(ctx, eps_n - 1));
        const int e = R.ctx()->e();
        auto spec = [&](int kk) { return specialize_lambda_form(F, kk, eps, R).a; };
        if (op == "specialize") {
            json cs = json::array();
            for (const auto& x : spec(k)) cs.push_back(io::to_json(x));
            return {{"k", k}, {"a0", nt::mod(a0, g.p - 1)}, {"eps", io::to_json(eps)}, {"Q", g.Q}, {"coefficients", cs}};
        }
        if (op == "congruence") {
            auto A = spec(k), B = spec(k2);
            int vmin = g.N * e, pmin = g.N * e;
            std::size_t worst = 0;
            for (std::size_t n = 1; n < A.size(); ++n) {
                CycloElt d = A[n] - B[n];
                pmin = std::min(pmin, d.pi_prec());
                int v = d.pi_val_capped();
                if (v < vmin) {
                    vmin = v;
                    worst = n;
                }
            }
            return {{"k", k}, {"k2", k2}, {"p", g.p}, {"Q", g.Q}, {"eps", io::to_json(eps)}, {"min_pi_valuation", vmin}, {"min_valuation", vmin / e}, {"min_pi_prec", pmin}, {"worst_n", worst}};
        }
    }
    auto spec = [&](int kk) { return specialize_lambda_form(F, kk, ctx).a; };
    if (op == "specialize") {
        json cs = json::array();
        for (const auto& x : spec(k)) cs.push_back(io::to_json(x));
        return {{"k", k}, {"a0", nt::mod(a0, g.p - 1)}, {"Q", g.Q}, {"coefficients", cs}};
    }
    if (op == "congruence") {
        auto A = spec(k), B = spec(k2);
        int vmin = g.N;
        std::size_t worst = 0;
        for (std::size_t n = 1; n < A.size(); ++n) {
            PadicElt d = A[n] - B[n];
            int v = d.is_zero() ? d.prec() : d.valuation();
            if (v < vmin) {
                vmin = v;
                worst = n;
            }
        }
        return {{"k", k}, {"k2", k2}, {"p", g.p}, {"Q", g.Q}, {"min_valuation", vmin}, {"worst_n", worst}};
    }
    fail(Errc::DomainError, "unknown family operation " + op);
}

// --- assemble / lvalue -------------------------------------------------------

struct RunSetup {
    Globals g;
    std::vector<CMClassData> classes;
    std::optional<i64> k0;
    std::vector<AnticycloCharSpec> chars;
    std::vector<int> weights;
    PadicElt omega;
};

std::vector<CMClassData> classes_from_config(const Globals& g, const json& cfg, const PadicCtx& ctx, i64 a0) {
    auto G = class_group(QuadOrder::make(g.D, g.c));
    std::vector<CMClassData> out;
    if (!cfg.contains("classes")) {
        std::vector<std::pair<i64, i64>> sc(static_cast<std::size_t>(G.size()), {1, 1});
        return eisenstein_classes(ctx, g.D, g.c, a0, g.Q, g.lambda_trunc(), sc);
    }
    std::optional<PowerSeries<Lambda>> fam;
    int j = 0;
    for (const auto& e : cfg.at("classes")) {
        CMClassData cl;
        cl.j = ++j;
        cl.rep = e.contains("form") ? io::form_from(e.at("form")) : G.elements().at(static_cast<std::size_t>(j - 1));
        cl.c = PadicElt(ctx, e.value("c_j", i64{1}));
        cl.d = PadicElt(ctx, e.value("d_j", i64{1}));
        if (e.contains("branch")) cl.branch = e.at("branch").get<i64>();
        const json tx = e.value("texp", json("eisenstein"));
        if (tx.is_string() && tx.get<std::string>() == "eisenstein") {
            if (!fam) fam = texp_from_family(eisenstein_family(ctx, a0, g.Q, g.lambda_trunc()), g.p);
            cl.family = *fam;
        } else if (tx.is_object() && tx.contains("file")) {
            cl.texp = io::lambda_from(read_json(tx.at("file").get<std::string>())).map([&](const PadicElt& x) { return x.rebase(ctx); });
        } else {
            cl.texp = io::lambda_from(tx).map([&](const PadicElt& x) { return x.rebase(ctx); });
        }
        out.push_back(std::move(cl));
    }
    return out;
}

json cmd_assemble(Globals g, const std::string& config) {
    json cfg = config.empty() ? json::object() : read_json(config);
    g.p = cfg.value("p", g.p);
    g.D = cfg.value("D", g.D);
    g.c = cfg.value("c", g.c);
    if (cfg.contains("precision")) {
        const auto& pr = cfg.at("precision");
        g.N = pr.value("N", g.N);
        g.M = pr.value("M", g.M);
        g.pi = pr.value("piPrec", g.pi);
        g.Q = pr.value("Q", g.Q);
    }
    auto ctx = PadicContext::make(g.p, g.N);
    const i64 a0 = cfg.value("a0", i64{0});
    auto classes = classes_from_config(g, cfg, ctx, a0);
    std::optional<i64> k0;
    if (cfg.contains("branch")) k0 = cfg.at("branch").get<i64>();
    std::vector<AnticycloCharSpec> chars;
    std::vector<int> ms = cfg.value("m", std::vector<int>{0, 1, 2});
    if (cfg.contains("chars")) {
        for (const auto& e : cfg.at("chars"))
            for (int m : ms) chars.push_back(char_spec(g.D, g.p, g.c, e.value("s", 0), e.value("exps", std::vector<i64>{}), m));
    } else {
        for (int s : {0, 1, 2}) {
            auto G = group_at(g.D, g.c * nt::ipow(g.p, s));
            for (int m : ms) chars.push_back({ClassGroupChar::make(G, std::vector<i64>(G->invariants().size(), 1)), s, m});
        }
    }
    std::vector<int> weights = cfg.value("weights", std::vector<int>{2, 4, 6});
    PadicElt omega(ctx, cfg.value("omega_p", i64{1}));
    if (!omega.is_unit()) fail(Errc::NonUnit, "period placeholder must be a unit");

    // Two forms of the conductor condition, reported but not enforced here:
    // global s >= r + ord_p(p) unless the p-part is trivial, local s >= r.
    const int r = cfg.value("r", 1);
    json warnings = json::array();
    for (const auto& chi : chars) {
        if (chi.m != ms.front()) continue;
        const int n0 = induced_p_char(chi.chi, g.D, g.p, chi.s, g.c).conductor_exponent();
        if (n0 >= 1 && chi.s < r + 1)
            warnings.push_back({{"chi", chi_json(chi)}, {"condition", "global"}, {"message", "s < r + 1 with nontrivial p-part"}});
        if (chi.s < r) warnings.push_back({{"chi", chi_json(chi)}, {"condition", "local"}, {"message", "s < r"}});
    }

    auto ring = AssemblyRing::make(ctx, level_for(chars, g.p));
    const bool family = !classes.empty() && classes[0].has_family();
    json Ls = json::array(), checks = json::array();
    bool all_ok = true;
    auto check = [&](const std::string& name, const AnticycloCharSpec& chi, std::optional<int> k, bool ok) {
        json c{{"name", name}, {"chi", chi_json(chi)}, {"ok", ok}};
        if (k) c["k"] = *k;
        checks.push_back(c);
        all_ok = all_ok && ok;
    };
    auto over_omega = [&](const CycloElt& v, int k, int m) { return v * ring.embed(omega.pow(k + 2 * m).inverse()); };
    if (family) {
        for (int k : weights) {
            auto F = build_two_var(classes, g.D, g.p, g.c, k0 ? *k0 : k);
            auto mu = build_single_var(slice_classes(classes, k), g.D, g.p, g.c, k);
            for (const auto& chi : chars) {
                CycloElt two = two_var_L(F, chi, k, ring);
                LValue one = single_var_L(mu, chi, ring);
                check("two_var_equals_single_var", chi, k, two.agrees(one.value));
                if (one.gauss) check("gauss_unfolding", chi, k, one.agree);
                if (chi.s >= 1 && induced_p_char(chi.chi, g.D, g.p, chi.s, g.c).is_primitive())
                    check("fiber_sum_expansion", chi, k, fiber_sum_expansion(mu, chi, ring).agrees(one.value));
                Ls.push_back({{"chi", chi_json(chi)}, {"k", k}, {"m", chi.m}, {"value", io::to_json(two)}, {"value_over_omega", io::to_json(over_omega(two, k, chi.m))}});
            }
        }
    } else {
        const int k = weights.empty() ? 0 : weights[0];
        auto mu = build_single_var(classes, g.D, g.p, g.c, k);
        for (const auto& chi : chars) {
            LValue one = single_var_L(mu, chi, ring);
            if (one.gauss) check("gauss_unfolding", chi, std::nullopt, one.agree);
            if (chi.s >= 1 && induced_p_char(chi.chi, g.D, g.p, chi.s, g.c).is_primitive())
                check("fiber_sum_expansion", chi, std::nullopt, fiber_sum_expansion(mu, chi, ring).agrees(one.value));
            Ls.push_back({{"chi", chi_json(chi)}, {"k", k}, {"m", chi.m}, {"value", io::to_json(one.value)}, {"value_over_omega", io::to_json(over_omega(one.value, k, chi.m))}});
        }
    }
    return {{"p", g.p}, {"D", g.D}, {"c", g.c}, {"N", g.N}, {"L_values", Ls}, {"checks", checks}, {"warnings", warnings}, {"all_ok", all_ok}};
}

json cmd_lvalue(const Globals& g, const std::string& desc, int k, int m, std::optional<i64> k0, i64 a0) {
    auto ctx = PadicContext::make(g.p, g.N);
    auto chi = parse_chi(g, desc, m);
    auto ring = AssemblyRing::make(ctx, level_for({chi}, g.p));
    auto classes = classes_from_config(g, json::object(), ctx, a0);
    auto F = build_two_var(classes, g.D, g.p, g.c, k0 ? *k0 : k);
    CycloElt two = two_var_L(F, chi, k, ring);
    LValue one = single_var_L(build_single_var(slice_classes(classes, k), g.D, g.p, g.c, k), chi, ring);
    json out{{"chi", chi_json(chi)}, {"k", k}, {"m", m}, {"two_var", io::to_json(two)}, {"single_var", io::to_json(one.value)},
             {"agree", two.agrees(one.value)}, {"pi_prec", one.pi_prec}};
    if (one.gauss) out["gauss_agree"] = one.agree;
    return out;
}

void emit(const Globals& g, const json& j) {
    if (g.out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(g.out);
    if (!f) fail(Errc::DomainError, "cannot write " + g.out);
    f << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anticyc: p-adic measures on anticyclotomic class group towers"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--p", g.p, "odd prime");
    app.add_option("--disc", g.D, "fundamental discriminant");
    app.add_option("--conductor", g.c, "tame conductor");
    app.add_option("--prec-N", g.N, "p-adic digits");
    app.add_option("--prec-M", g.M, "Lambda truncation (default N+2)");
    app.add_option("--prec-pi", g.pi, "pi-adic precision of cyclotomic rings (0 = full)");
    app.add_option("--trunc-Q", g.Q, "q-expansion truncation");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "write JSON here instead of stdout");

    json result;
    auto* cg = app.add_subcommand("classgroup", "ring class group and its p-tower");
    int levels = 2;
    cg->add_option("--levels", levels, "tower depth when --p is given");
    cg->fallthrough();
    cg->callback([&] { result = cmd_classgroup(g, app.count("--p") > 0, levels); });

    auto* th = app.add_subcommand("theta", "ideal counts or theta series of a class group character");
    std::string th_char;
    th->add_option("--char", th_char, "exponents on the class group generators");
    th->fallthrough();
    th->callback([&] { result = cmd_theta(g, th_char); });

    auto* ms = app.add_subcommand("measure", "measure calculus");
    ms->require_subcommand(1);
    ms->fallthrough();
    std::string in, coeffs, method = "pointwise";
    i64 gl = -1, ca = 1, cw = 1;
    int m_max = 3, m = 0, n = 1;
    std::size_t deg = 24;
    for (const char* name : {"moments", "twist", "mellin", "check-integration"}) {
        static const std::map<std::string, std::string> about{{"moments", "moments int x^m dmu"},
                                                              {"twist", "twist by a Dirichlet character"},
                                                              {"mellin", "int phi(x) x^m dmu"},
                                                              {"check-integration", "both sides of the Gauss-sum identity on a random measure"}};
        auto* s = ms->add_subcommand(name, about.at(name));
        s->add_option("--in", in, "series JSON file");
        s->add_option("--coeffs", coeffs, "exact polynomial coefficients c0,c1,...");
        s->add_option("--group-like", gl, "use (1+T)^a");
        s->add_option("--m-max", m_max);
        s->add_option("--m", m);
        s->add_option("--char-a", ca, "torsion exponent");
        s->add_option("--char-w", cw, "wild exponent");
        s->add_option("--level", n, "character modulus exponent");
        s->add_option("--method", method, "pointwise | fourier | both");
        s->add_option("--deg", deg, "degree of the random series");
        s->fallthrough();
        std::string op = name;
        s->callback([&, op] {
            Lambda Phi = op == "check-integration" ? Lambda::constant(PadicElt::one(PadicContext::make(g.p, g.N))) : series_input(g, in, coeffs, gl);
            result = cmd_measure(g, op, Phi, m_max, m, ca, cw, n, method, deg);
        });
    }

    auto* fm = app.add_subcommand("family", "Eisenstein family and ordinary projector");
    fm->require_subcommand(1);
    fm->fallthrough();
    int k = 2, k2 = 22, eps_n = 0;
    i64 a0 = 0, eps_w = 0;
    std::string fixture = "delta5";
    for (const char* name : {"specialize", "congruence", "ordinary"}) {
        static const std::map<std::string, std::string> about{{"specialize", "weight-k specialization"},
                                                              {"congruence", "p-adic distance between two specializations"},
                                                              {"ordinary", "ordinary projector on a Delta fixture"}};
        auto* s = fm->add_subcommand(name, about.at(name));
        s->add_option("--k", k);
        s->add_option("--k2", k2);
        s->add_option("--a0", a0, "nebentypus exponent of the family");
        s->add_option("--eps-n", eps_n, "modulus exponent of a wild character eps of 1+pZ_p");
        s->add_option("--eps-w", eps_w, "wild exponent of eps");
        s->add_option("--fixture", fixture, "delta5 | delta11");
        s->fallthrough();
        std::string op = name;
        s->callback([&, op] { result = cmd_family(g, op, k, k2, a0, eps_n, eps_w, fixture); });
    }

    auto* as = app.add_subcommand("assemble", "two-variable assembly and consistency checks");
    std::string config;
    as->add_option("--config", config, "run configuration (JSON)");
    as->fallthrough();
    as->callback([&] { result = cmd_assemble(g, config); });

    auto* lv = app.add_subcommand("lvalue", "one value of the two-variable transform");
    std::string chi_desc = "trivial";
    int lk = 2, lm = 0;
    std::optional<i64> branch;
    i64 la0 = 0;
    lv->add_option("--chi", chi_desc, "s:e1,e2,... or trivial");
    lv->add_option("--k", lk);
    lv->add_option("--m", lm);
    lv->add_option("--branch", branch, "residue k0 mod p-1");
    lv->add_option("--a0", la0);
    lv->fallthrough();
    lv->callback([&] { result = cmd_lvalue(g, chi_desc, lk, lm, branch, la0); });

    try {
        app.parse(argc, argv);
        emit(g, result);
        return 0;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        try {
            emit(g, io::to_json(e));
        } catch (...) {
        }
        return e.precision_related() ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        emit(g, {{"error", "DomainError"}, {"message", e.what()}});
        return 1;
    }
}
