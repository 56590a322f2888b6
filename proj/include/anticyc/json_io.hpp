#pragma once

#include <json.hpp>

#include "anticyc/assembly.hpp"

namespace anticyc {

using json = nlohmann::json;

namespace io {

// Every p-adic payload carries its context (p, N, defining polynomial) and its
// precision, so parse(print(x)) rebuilds an equal element in a compatible ring.

inline json ctx_json(const PadicCtx& c) { return {{"p", c->p()}, {"N", c->N()}, {"poly", c->poly()}}; }

inline PadicCtx ctx_from(const json& j) {
    return PadicContext::make_with_poly(j.at("p").get<i64>(), j.at("N").get<int>(), j.at("poly").get<std::vector<i64>>());
}

inline json to_json(const PadicElt& x) {
    json j = ctx_json(x.ctx());
    j["type"] = "padic";
    j["prec"] = x.prec();
    j["coeffs"] = x.coeffs();
    return j;
}

inline PadicElt padic_from(const json& j, const PadicCtx& ctx) {
    return PadicElt::from_coeffs(ctx, j.at("coeffs").get<std::vector<i64>>(), j.at("prec").get<int>());
}

inline PadicElt padic_from(const json& j) { return padic_from(j, ctx_from(j)); }

inline json to_json(const CycloElt& x) {
    const auto& cc = x.ctx();
    json j = ctx_json(cc->base());
    j["type"] = "cyclo";
    j["level"] = cc->n();
    j["ring_pi_prec"] = cc->pi_prec();
    j["pi_prec"] = x.pi_prec();
    j["raw"] = x.raw();
    return j;
}

inline CycloElt cyclo_from(const json& j, const CycloCtx& cc) { return CycloElt(cc, j.at("raw").get<std::vector<i64>>(), j.at("pi_prec").get<int>()); }

inline CycloElt cyclo_from(const json& j) {
    auto cc = CycloContext::make(ctx_from(j), j.at("level").get<int>(), j.at("ring_pi_prec").get<int>());
    return cyclo_from(j, cc);
}

template <class R>
json to_json(const PowerSeries<R>& f) {
    json c = json::array();
    for (const auto& x : f.coeffs()) c.push_back(to_json(x));
    return {{"type", "series"}, {"exact", f.exact()}, {"coeffs", c}};
}

inline Lambda lambda_from(const json& j) {
    const auto& cs = j.at("coeffs");
    if (cs.empty()) fail(Errc::DomainError, "series payload has no coefficients");
    auto ctx = ctx_from(cs.at(0));
    std::vector<PadicElt> c;
    for (const auto& x : cs) c.push_back(padic_from(x, ctx));
    return Lambda(std::move(c), j.at("exact").get<bool>());
}

inline LambdaCyclo lambda_cyclo_from(const json& j) {
    const auto& cs = j.at("coeffs");
    if (cs.empty()) fail(Errc::DomainError, "series payload has no coefficients");
    const auto& c0 = cs.at(0);
    auto cc = CycloContext::make(ctx_from(c0), c0.at("level").get<int>(), c0.at("ring_pi_prec").get<int>());
    std::vector<CycloElt> c;
    for (const auto& x : cs) c.push_back(cyclo_from(x, cc));
    return LambdaCyclo(std::move(c), j.at("exact").get<bool>());
}

inline json to_json(const FormClass& f) { return json::array({f.a, f.b, f.c}); }
inline FormClass form_from(const json& j) { return {j.at(0).get<i64>(), j.at(1).get<i64>(), j.at(2).get<i64>()}; }

inline json to_json(const DirichletChar& c) { return {{"p", c.p}, {"n", c.n}, {"a", c.a}, {"w", c.w}}; }
inline DirichletChar dirichlet_from(const json& j) {
    return DirichletChar::make(j.at("p").get<i64>(), j.at("n").get<int>(), j.at("a").get<i64>(), j.at("w").get<i64>());
}

inline json to_json(const RootOfUnity& r) { return {{"num", r.num}, {"den", r.den}}; }
inline RootOfUnity root_from(const json& j) { return RootOfUnity::make(j.at("num").get<i64>(), j.at("den").get<i64>()); }

inline json to_json(const ModMatrix& M) { return json(M); }

inline json to_json(const Error& e) {
    return {{"error", std::string(errc_name(e.code()))}, {"message", e.what()}, {"deficit", e.deficit()}, {"precision", e.precision_related()}};
}

/// Lossless equality of payloads (same context and same stored digits).
inline bool same(const PadicElt& a, const PadicElt& b) {
    return a.ctx()->compatible(*b.ctx()) && a.prec() == b.prec() && a.coeffs() == b.coeffs();
}
inline bool same(const CycloElt& a, const CycloElt& b) {
    return a.ctx()->n() == b.ctx()->n() && a.ctx()->base()->compatible(*b.ctx()->base()) && a.pi_prec() == b.pi_prec() && a.raw() == b.raw();
}
template <class R>
bool same(const PowerSeries<R>& a, const PowerSeries<R>& b) {
    if (a.exact() != b.exact() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same(a[i], b[i])) return false;
    return true;
}

}  // namespace io
}  // namespace anticyc
