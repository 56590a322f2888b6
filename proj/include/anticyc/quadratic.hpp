#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "integer.hpp"

namespace anticyc {

/// Binary quadratic form a x^2 + b xy + c y^2.
struct FormClass {
    i64 a = 1, b = 0, c = 0;

    i64 disc() const { return b * b - 4 * a * c; }
    auto operator<=>(const FormClass&) const = default;
    std::string str() const { return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")"; }
};

struct QuadField {
    i64 D;
    int wK;

    static bool is_fundamental(i64 D) {
        if (D >= 0) return false;
        auto squarefree = [](i64 m) {
            for (auto [q, e] : nt::factorize(m))
                if (e > 1) return false;
            return true;
        };
        if (nt::mod(D, 4) == 1) return squarefree(-D);
        if (nt::mod(D, 4) != 0) return false;
        i64 m = D / 4;
        i64 r = nt::mod(m, 4);
        return (r == 2 || r == 3) && squarefree(-m);
    }

    static QuadField make(i64 D) {
        if (!is_fundamental(D)) fail(Errc::DomainError, "D = " + std::to_string(D) + " is not a negative fundamental discriminant");
        return {D, D == -3 ? 6 : (D == -4 ? 4 : 2)};
    }
};

struct QuadOrder {
    QuadField K;
    i64 conductor;
    i64 disc;

    static QuadOrder make(i64 D, i64 c) {
        if (c < 1) fail(Errc::DomainError, "conductor must be >= 1");
        QuadField K = QuadField::make(D);
        i64 disc;
        if (__builtin_mul_overflow(c * c, D, &disc)) fail(Errc::BoundExceeded, "discriminant overflows");
        return {K, c, disc};
    }

    /// h(O_c) = h(K) c prod_{l | c} (1 - (D|l)/l) / [O_K^x : O_c^x].
    i64 class_number_formula(i64 hK) const {
        i64 num = hK * conductor, den = 1;
        for (auto [l, e] : nt::factorize(conductor)) {
            (void)e;
            num = num / l * (l - nt::kronecker(K.D, l));
        }
        if (conductor > 1) den = K.wK / 2;
        return num / den;
    }
};

inline FormClass reduce_form(i64 a, i64 b, i64 c) {
    const i128 disc = static_cast<i128>(b) * b - static_cast<i128>(4) * a * c;
    if (disc >= 0 || a <= 0) fail(Errc::NotDefinite, "form is not positive definite");
    if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) fail(Errc::NotPrimitive, "form is not primitive");
    for (;;) {
        // b into (-a, a]
        i64 two_a = 2 * a;
        i64 k = nt::mod(b, two_a);
        i64 nb = k > a ? k - two_a : k;
        i128 shift = (static_cast<i128>(nb) - b) / two_a;  // b -> b + 2 a shift
        c = static_cast<i64>(c + shift * shift * a + shift * b);
        b = nb;
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if ((a == c || b == -a) && b < 0) b = -b;
        if (b == -a) b = a;
        break;
    }
    return {a, b, c};
}

inline FormClass reduce_form(const FormClass& f) { return reduce_form(f.a, f.b, f.c); }

inline FormClass principal_form(i64 disc) {
    i64 b = nt::mod(disc, 2);
    return {1, b, (b * b - disc) / 4};
}

inline FormClass inverse_form(const FormClass& f) { return reduce_form(f.a, -f.b, f.c); }

/// Gauss composition (Dirichlet's united forms), followed by reduction.
inline FormClass compose(FormClass f1, FormClass f2) {
    const i64 disc = f1.disc();
    if (f2.disc() != disc) fail(Errc::DiscMismatch, "composition of forms with different discriminants");
    if (f1.a > f2.a) std::swap(f1, f2);
    const i64 s = (f1.b + f2.b) / 2;
    const i64 n = f2.b - s;
    i64 y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        auto [g, u, v] = nt::xgcd(f2.a, f1.a);
        (void)v;
        d = g;
        y1 = u;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        auto [g, u, v] = nt::xgcd(s, d);
        x2 = u;
        y2 = -v;
        d1 = g;
    }
    const i64 v1 = f1.a / d1, v2 = f2.a / d1;
    const i64 r = nt::mod(static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c, v1);
    const i128 b3 = static_cast<i128>(f2.b) + static_cast<i128>(2) * v2 * r;
    const i128 a3 = static_cast<i128>(v1) * v2;
    const i128 c3 = (b3 * b3 - disc) / (4 * a3);
    // reduce b3 first so that the entries fit in 64 bits
    const i128 two_a = 2 * a3;
    i128 k = b3 % two_a;
    if (k < 0) k += two_a;
    i128 nb = k > a3 ? k - two_a : k;
    i128 nc = (nb * nb - disc) / (4 * a3);
    (void)c3;
    return reduce_form(static_cast<i64>(a3), static_cast<i64>(nb), static_cast<i64>(nc));
}

inline FormClass form_pow(const FormClass& f, i64 e) {
    FormClass base = e < 0 ? inverse_form(f) : f;
    if (e < 0) e = -e;
    FormClass r = principal_form(f.disc());
    while (e > 0) {
        if (e & 1) r = compose(r, base);
        e >>= 1;
        if (e) base = compose(base, base);
    }
    return r;
}

/// Pic of an order, with Smith normal form coordinates on every class.
class RingClassGroup {
public:
    static constexpr i64 disc_bound = 10'000'000;

    static RingClassGroup make(const QuadOrder& O) {
        RingClassGroup G;
        G.order_ = O;
        G.enumerate();
        G.solve_structure();
        return G;
    }

    const QuadOrder& order() const noexcept { return order_; }
    i64 disc() const noexcept { return order_.disc; }
    i64 size() const noexcept { return static_cast<i64>(elems_.size()); }
    const std::vector<FormClass>& elements() const noexcept { return elems_; }
    /// Invariant factors d_1 | d_2 | ... (all > 1).
    const std::vector<i64>& invariants() const noexcept { return inv_; }
    /// Generators matching the invariant factors.
    const std::vector<FormClass>& generators() const noexcept { return gens_; }
    FormClass identity() const { return principal_form(disc()); }

    bool contains(const FormClass& f) const { return index_.count(f) > 0; }
    std::size_t index_of(const FormClass& f) const {
        auto it = index_.find(f);
        if (it == index_.end()) fail(Errc::NotInGroup, "form " + f.str() + " is not a reduced class of discriminant " + std::to_string(disc()));
        return it->second;
    }
    /// Coordinates on the SNF generators.
    const std::vector<i64>& coords(const FormClass& f) const { return coords_[index_of(reduce_checked(f))]; }

    FormClass from_coords(const std::vector<i64>& y) const {
        FormClass r = identity();
        for (std::size_t i = 0; i < gens_.size(); ++i) r = compose(r, form_pow(gens_[i], nt::mod(y[i], inv_[i])));
        return r;
    }

    i64 element_order(const FormClass& f) const {
        i64 o = 1;
        const auto& y = coords(f);
        for (std::size_t i = 0; i < y.size(); ++i) {
            i64 oi = inv_[i] / std::gcd(inv_[i], y[i]);
            o = std::lcm(o, oi);
        }
        return o;
    }

private:
    FormClass reduce_checked(const FormClass& f) const {
        if (f.disc() != disc()) fail(Errc::NotInGroup, "form " + f.str() + " has discriminant " + std::to_string(f.disc()));
        return reduce_form(f);
    }

    void enumerate() {
        const i64 disc = order_.disc;
        if (-disc > disc_bound) fail(Errc::BoundExceeded, "|disc| above " + std::to_string(disc_bound));
        const i64 amax = static_cast<i64>(std::sqrt(static_cast<double>(-disc) / 3.0)) + 1;
        for (i64 a = 1; a <= amax; ++a) {
            for (i64 b = -a + 1; b <= a; ++b) {
                if (nt::mod(b - disc, 2) != 0) continue;
                i64 num = b * b - disc;
                if (num % (4 * a) != 0) continue;
                i64 c = num / (4 * a);
                if (c < a) continue;
                if ((a == c || b == -a) && b < 0) continue;
                if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
                index_[FormClass{a, b, c}] = elems_.size();
                elems_.push_back({a, b, c});
            }
        }
    }

    void solve_structure() {
        const std::size_t h = elems_.size();
        // greedy generators with exponent vectors relative to them
        std::vector<FormClass> ggen;
        std::vector<std::vector<i64>> gvec(h);
        std::vector<bool> in_h(h, false);
        std::vector<std::size_t> members{index_of(identity())};
        in_h[members[0]] = true;
        gvec[members[0]] = {};
        std::vector<std::vector<i64>> relations;
        for (std::size_t cand = 0; cand < h && members.size() < h; ++cand) {
            if (in_h[cand]) continue;
            const FormClass x = elems_[cand];
            const std::size_t r = ggen.size();
            ggen.push_back(x);
            for (auto m : members) gvec[m].resize(r + 1, 0);
            // order of x modulo the current subgroup
            i64 k = 1;
            FormClass xk = x;
            while (!in_h[index_of(xk)]) {
                xk = compose(xk, x);
                ++k;
            }
            std::vector<i64> rel = gvec[index_of(xk)];
            rel.resize(r + 1, 0);
            for (auto& v : rel) v = -v;
            rel[r] += k;
            relations.push_back(rel);
            std::vector<std::size_t> grown = members;
            FormClass xi = identity();
            for (i64 i = 1; i < k; ++i) {
                xi = compose(xi, x);
                for (auto m : members) {
                    std::size_t idx = index_of(compose(elems_[m], xi));
                    in_h[idx] = true;
                    gvec[idx] = gvec[m];
                    gvec[idx][r] = i;
                    grown.push_back(idx);
                }
            }
            members = std::move(grown);
        }
        const std::size_t r = ggen.size();
        for (auto& rel : relations) rel.resize(r, 0);
        for (auto& v : gvec) v.resize(r, 0);

        // Smith normal form with column transforms V and V^{-1}
        std::vector<std::vector<i64>> A = relations;
        std::vector<std::vector<i64>> V(r, std::vector<i64>(r, 0)), Vi = V;
        for (std::size_t i = 0; i < r; ++i) V[i][i] = Vi[i][i] = 1;
        auto col_sub = [&](std::size_t j, std::size_t t, i64 q) {  // col_j -= q col_t
            for (auto& row : A) row[j] -= q * row[t];
            for (auto& row : V) row[j] -= q * row[t];
            for (std::size_t c = 0; c < r; ++c) Vi[t][c] += q * Vi[j][c];
        };
        auto col_swap = [&](std::size_t i, std::size_t j) {
            for (auto& row : A) std::swap(row[i], row[j]);
            for (auto& row : V) std::swap(row[i], row[j]);
            std::swap(Vi[i], Vi[j]);
        };
        for (std::size_t t = 0; t < r; ++t) {
            for (;;) {
                std::size_t pi = r, pj = r;
                i64 best = 0;
                for (std::size_t i = t; i < r; ++i)
                    for (std::size_t j = t; j < r; ++j)
                        if (A[i][j] != 0 && (best == 0 || std::abs(A[i][j]) < best)) {
                            best = std::abs(A[i][j]);
                            pi = i;
                            pj = j;
                        }
                if (pi == r) break;
                std::swap(A[t], A[pi]);
                if (pj != t) col_swap(t, pj);
                bool dirty = false;
                for (std::size_t i = t + 1; i < r; ++i) {
                    i64 q = A[i][t] / A[t][t];
                    for (std::size_t c = 0; c < r; ++c) A[i][c] -= q * A[t][c];
                    if (A[i][t] != 0) dirty = true;
                }
                for (std::size_t j = t + 1; j < r; ++j) {
                    i64 q = A[t][j] / A[t][t];
                    if (q != 0) col_sub(j, t, q);
                    if (A[t][j] != 0) dirty = true;
                }
                if (dirty) continue;
                bool divides = true;
                for (std::size_t i = t + 1; i < r && divides; ++i)
                    for (std::size_t j = t + 1; j < r; ++j)
                        if (A[i][j] % A[t][t] != 0) {
                            for (std::size_t c = 0; c < r; ++c) A[t][c] += A[i][c];
                            divides = false;
                            break;
                        }
                if (divides) break;
            }
        }
        std::vector<i64> diag(r);
        for (std::size_t i = 0; i < r; ++i) diag[i] = std::abs(A[i][i]);

        // keep nontrivial factors; generators are prod_j g_j^{Vi[i][j]}
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < r; ++i)
            if (diag[i] > 1) keep.push_back(i);
        std::sort(keep.begin(), keep.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
        for (auto i : keep) {
            inv_.push_back(diag[i]);
            FormClass g = identity();
            for (std::size_t j = 0; j < r; ++j) g = compose(g, form_pow(ggen[j], Vi[i][j]));
            gens_.push_back(g);
        }
        coords_.assign(h, {});
        for (std::size_t e = 0; e < h; ++e) {
            std::vector<i64> y;
            for (std::size_t q = 0; q < keep.size(); ++q) {
                i64 s = 0;
                for (std::size_t j = 0; j < r; ++j) s = nt::mod(static_cast<i128>(s) + static_cast<i128>(gvec[e][j]) * V[j][keep[q]], inv_[q]);
                y.push_back(s);
            }
            coords_[e] = std::move(y);
        }
    }

    QuadOrder order_{};
    std::vector<FormClass> elems_;
    std::map<FormClass, std::size_t> index_;
    std::vector<i64> inv_;
    std::vector<FormClass> gens_;
    std::vector<std::vector<i64>> coords_;
};

inline RingClassGroup class_group(const QuadOrder& O) { return RingClassGroup::make(O); }

inline bool is_split(i64 p, const QuadField& K) {
    if (K.D % p == 0) fail(Errc::Ramified, std::to_string(p) + " ramifies in Q(sqrt(" + std::to_string(K.D) + "))");
    return nt::kronecker(K.D, p) == 1;
}

// ---------------------------------------------------------------------------
// Lattices in K, in the Z-basis (1, w) with w = (D + sqrt D)/2 and
// w^2 = D w - (D^2 - D)/4.

/// Element x + y w of the maximal order.
struct QElt {
    i64 x = 0, y = 0;
};

inline QElt qmul(const QElt& u, const QElt& v, i64 D) {
    const i128 nrm = (static_cast<i128>(D) * D - D) / 4;
    i128 x = static_cast<i128>(u.x) * v.x - static_cast<i128>(u.y) * v.y * nrm;
    i128 y = static_cast<i128>(u.x) * v.y + static_cast<i128>(u.y) * v.x + static_cast<i128>(u.y) * v.y * D;
    return {static_cast<i64>(x), static_cast<i64>(y)};
}

/// Lattice in Hermite normal form: span{(A, 0), (B, C)} with A, C > 0 and 0 <= B < A.
struct Lattice {
    i64 A = 1, B = 0, C = 1;
    auto operator<=>(const Lattice&) const = default;
};

inline Lattice lattice_hnf(const std::vector<QElt>& gens) {
    auto gcd128 = [](i128 x, i128 y) {
        if (x < 0) x = -x;
        if (y < 0) y = -y;
        while (y != 0) {
            i128 t = x % y;
            x = y;
            y = t;
        }
        return x;
    };
    i128 A = 0, B = 0, C = 0;
    bool have = false;
    for (const auto& g : gens) {
        i128 wx = g.x, wy = g.y;
        if (wy == 0) {
            A = gcd128(A, wx);
            continue;
        }
        if (!have) {
            B = wx;
            C = wy;
            have = true;
            continue;
        }
        auto [gg, u, v] = nt::xgcd(static_cast<i64>(C), static_cast<i64>(wy));
        i128 nB = static_cast<i128>(u) * B + static_cast<i128>(v) * wx;
        i128 rx = (wy / gg) * B - (C / gg) * wx;  // y-component cancels
        A = gcd128(A, rx);
        B = nB;
        C = gg;
    }
    if (!have || A == 0) fail(Errc::DomainError, "generators do not span a full lattice");
    if (C < 0) {
        C = -C;
        B = -B;
    }
    B %= A;
    if (B < 0) B += A;
    return {static_cast<i64>(A), static_cast<i64>(B), static_cast<i64>(C)};
}

/// The O_f-ideal [a, (-b + sqrt(f^2 D))/2] attached to a form of discriminant f^2 D.
inline Lattice form_to_lattice(const FormClass& F, i64 D, i64 f) {
    return lattice_hnf({{F.a, 0}, {(-F.b - f * D) / 2, f}});
}

/// Product of two lattices (as ideals of the maximal order's ring structure).
inline Lattice lattice_mul(const Lattice& L1, const Lattice& L2, i64 D) {
    QElt a1{L1.A, 0}, b1{L1.B, L1.C}, a2{L2.A, 0}, b2{L2.B, L2.C};
    return lattice_hnf({qmul(a1, a2, D), qmul(a1, b2, D), qmul(b1, a2, D), qmul(b1, b2, D)});
}

/// Extension L O_f of a lattice to the order of conductor f.
inline Lattice extend_to_order(const Lattice& L, i64 D, i64 f) { return lattice_mul(L, Lattice{1, 0, f}, D); }

/// Intersection of a lattice with O_f.
inline Lattice intersect_order(const Lattice& L, i64 f) {
    i64 j0 = f / std::gcd(f, L.C);
    return lattice_hnf({{L.A, 0}, {L.B * j0, L.C * j0}});
}

/// Reduced form of the class of a (scaled) proper O_f-ideal.
inline FormClass lattice_to_form(const Lattice& L, i64 D, i64 f) {
    if (L.C % f != 0) fail(Errc::DomainError, "lattice is not contained in the order of conductor " + std::to_string(f));
    const i64 m = L.C / f;
    if (L.A % m != 0 || L.B % m != 0) fail(Errc::DomainError, "lattice is not an ideal of the order");
    const i64 a = L.A / m;
    const i64 B = L.B / m;
    const i64 b = -(2 * B + f * D);
    const i128 disc = static_cast<i128>(f) * f * D;
    i128 num = static_cast<i128>(b) * b - disc;
    if (num % (4 * static_cast<i128>(a)) != 0) fail(Errc::DomainError, "lattice is not an ideal of the order");
    return reduce_form(a, b, static_cast<i64>(num / (4 * a)));
}

/// An equivalent (unreduced) form whose first coefficient is prime to m.
inline FormClass coprime_representative(const FormClass& F, i64 m) {
    if (std::gcd(F.a, m) == 1) return F;
    for (i64 bound = 1; bound < 200; ++bound) {
        for (i64 x = -bound; x <= bound; ++x)
            for (i64 y = 0; y <= bound; ++y) {
                if (std::max(std::abs(x), y) != bound || std::gcd(std::abs(x), y) != 1) continue;
                i128 val = static_cast<i128>(F.a) * x * x + static_cast<i128>(F.b) * x * y + static_cast<i128>(F.c) * y * y;
                if (val > (i128{1} << 40) || std::gcd(static_cast<i64>(val), m) != 1) continue;
                auto [g, w, z] = nt::xgcd(x, y);  // x w + y z = 1
                (void)g;
                i64 zz = -z;  // matrix [[x, zz], [y, w]] has det x w - y zz = 1
                i128 a2 = val;
                i128 b2 = 2 * static_cast<i128>(F.a) * x * zz + static_cast<i128>(F.b) * (static_cast<i128>(x) * w + static_cast<i128>(y) * zz) + 2 * static_cast<i128>(F.c) * y * w;
                i128 two_a = 2 * a2;
                i128 k = b2 % two_a;
                if (k < 0) k += two_a;
                b2 = k > a2 ? k - two_a : k;
                i128 c2 = (b2 * b2 - F.disc()) / (4 * a2);
                return {static_cast<i64>(a2), static_cast<i64>(b2), static_cast<i64>(c2)};
            }
    }
    fail(Errc::BoundExceeded, "no representative prime to " + std::to_string(m) + " found");
}

/// Class in Pic(O_{f'}) of x O_{f'} for a class x of conductor f, f' | f.
inline FormClass project_class(const FormClass& x, i64 D, i64 f, i64 f_to) {
    if (f_to <= 0 || f % f_to != 0) fail(Errc::ConductorMismatch, "target conductor must divide the source conductor");
    if (x.disc() != f * f * D) fail(Errc::DiscMismatch, "form discriminant does not match the conductor");
    return lattice_to_form(extend_to_order(form_to_lattice(x, D, f), D, f_to), D, f_to);
}

/// Lift of a class of conductor f to conductor F (f | F) through a
/// representative prime to F/f: A -> A cap O_F.
inline FormClass lift_class(const FormClass& x, i64 D, i64 f, i64 F) {
    if (F % f != 0) fail(Errc::ConductorMismatch, "lift target must be a multiple of the conductor");
    FormClass rep = coprime_representative(x, F);
    return lattice_to_form(intersect_order(form_to_lattice(rep, D, f), F), D, F);
}

/// Hensel-lifted root of w^2 - D w + (D^2 - D)/4 modulo p^s, starting from the
/// smallest root mod p. This root defines the prime P = (p, w - r).
inline i64 split_root(i64 D, i64 p, int s) {
    const i64 ps = nt::ipow(p, s);
    const i64 c0 = nt::mod((static_cast<i128>(D) * D - D) / 4, ps);
    auto poly = [&](i64 r, i64 m) { return nt::mod(static_cast<i128>(r) * r - static_cast<i128>(D) * r + c0, m); };
    i64 r = -1;
    for (i64 t = 0; t < p; ++t)
        if (poly(t, p) == 0) {
            r = t;
            break;
        }
    if (r < 0) fail(Errc::NotSplit, std::to_string(p) + " is not split");
    i64 m = p;
    for (int k = 1; k < s; ++k) {
        m *= p;
        i64 deriv = nt::mod(2 * r - D, m);
        r = nt::mod(r - static_cast<i128>(poly(r, m)) * nt::invmod(deriv, m), m);
    }
    return r;
}

/// kappa(z): the class of alpha O_K cap O_f with alpha = z mod P^s, alpha = 1 mod
/// Pbar^s and alpha = 1 mod c, where f = c p^s. This is the embedding of
/// (Z/p^s)^x into Pic(O_f) whose image is the kernel of the projection to O_c.
inline FormClass kernel_class(i64 z, i64 D, i64 p, int s, i64 c) {
    if (s == 0) return principal_form(c * c * D);
    const i64 ps = nt::ipow(p, s);
    if (std::gcd(z, p) != 1) fail(Errc::NonUnit, "kernel class needs z prime to p");
    const i64 r = split_root(D, p, s);
    const i64 rb = nt::mod(D - r, ps);  // the conjugate root
    // alpha = x + y w: x + y r = z, x + y rb = 1 (mod p^s)
    i64 y = nt::mulmod(nt::mod(z - 1, ps), nt::invmod(nt::mod(r - rb, ps), ps), ps);
    i64 x = nt::mod(1 - static_cast<i128>(y) * rb, ps);
    // and x = 1, y = 0 mod c
    const i64 M = ps * c;
    auto crt = [&](i64 v_ps, i64 v_c) {
        i64 t = nt::mulmod(nt::mod(v_c - v_ps, c), nt::invmod(nt::mod(ps, c), c), c);
        return nt::mod(v_ps + static_cast<i128>(ps) * t, M);
    };
    if (c > 1) {
        x = crt(x, 1);
        y = crt(y, 0);
    }
    QElt alpha{x, y};
    QElt alpha_w = qmul(alpha, {0, 1}, D);
    Lattice L = lattice_hnf({alpha, alpha_w});
    const i64 f = c * ps;
    return lattice_to_form(intersect_order(L, f), D, f);
}

/// Class of the prime Pbar (conjugate of P = (p, w - r)) in Pic(O_c), c prime to p.
inline FormClass pbar_class(i64 D, i64 p, i64 c) {
    const i64 rb = nt::mod(D - split_root(D, p, 1), p);
    Lattice L = lattice_hnf({{p, 0}, {-rb, 1}});
    return lattice_to_form(intersect_order(L, c), D, c);
}

struct FiberData {
    std::vector<i64> labels;           ///< u in (Z/p^n)^x, ascending
    std::vector<FormClass> classes;    ///< class with label u at conductor c p^n
    FormClass lift;                    ///< chosen lift of A to conductor c p^n
    FormClass shift;                   ///< class of Pbar^{-n} in Pic(O_c), applied by the caller
};

/// The p^{n-1}(p-1) classes of conductor c p^n over the class A of conductor c.
/// Label u is sent to lift(A) * kappa(-u).
inline FiberData fiber_classes(const FormClass& A, i64 D, i64 p, i64 c, int n) {
    QuadField K = QuadField::make(D);
    if (!is_split(p, K)) fail(Errc::NotSplit, std::to_string(p) + " is not split in Q(sqrt(" + std::to_string(D) + "))");
    if (c == 1 && K.wK > 2) fail(Errc::UnitObstruction, "extra units in Q(sqrt(" + std::to_string(D) + ")) collapse the fiber count at conductor 1");
    if (std::gcd(c, p) != 1) fail(Errc::ConductorMismatch, "tame conductor must be prime to p");
    if (n < 1) fail(Errc::DomainError, "fiber level must be >= 1");
    const i64 pn = nt::ipow(p, n);
    const i64 F = c * pn;
    FiberData out;
    out.lift = lift_class(A, D, c, F);
    for (i64 u = 1; u < pn; ++u) {
        if (u % p == 0) continue;
        out.labels.push_back(u);
        out.classes.push_back(compose(out.lift, kernel_class(nt::mod(-u, pn), D, p, n, c)));
    }
    out.shift = form_pow(pbar_class(D, p, c), -n);
    return out;
}

/// Roots of w^2 - D w + (D^2 - D)/4 modulo a prime l.
inline std::vector<i64> roots_mod_prime(i64 D, i64 l) {
    std::vector<i64> r;
    const i64 c0 = nt::mod((static_cast<i128>(D) * D - D) / 4, l);
    for (i64 t = 0; t < l; ++t)
        if (nt::mod(static_cast<i128>(t) * t - static_cast<i128>(D) * t + c0, l) == 0) r.push_back(t);
    return r;
}

/// All integral ideals of the maximal order of norm n, in HNF.
inline std::vector<Lattice> ideals_of_norm(i64 D, i64 n, i64 bound = 1'000'000) {
    if (n < 1) fail(Errc::DomainError, "norm must be >= 1");
    if (n > bound) fail(Errc::BoundExceeded, "norm above enumeration bound");
    std::vector<Lattice> acc{Lattice{1, 0, 1}};
    for (auto [l, e] : nt::factorize(n)) {
        auto roots = roots_mod_prime(D, l);
        std::vector<Lattice> local;
        auto pw = [&](const Lattice& P, int k) {
            Lattice r{1, 0, 1};
            for (int i = 0; i < k; ++i) r = lattice_mul(r, P, D);
            return r;
        };
        const int kr = nt::kronecker(D, l);
        if (kr == 1) {
            Lattice P = lattice_hnf({{l, 0}, {-roots[0], 1}});
            Lattice Pb = lattice_hnf({{l, 0}, {-roots[1], 1}});
            for (int i = 0; i <= e; ++i) local.push_back(lattice_mul(pw(P, i), pw(Pb, e - i), D));
        } else if (kr == 0) {
            Lattice P = lattice_hnf({{l, 0}, {-roots[0], 1}});
            local.push_back(pw(P, e));
        } else if (e % 2 == 0) {
            local.push_back(Lattice{nt::ipow(l, e / 2), 0, nt::ipow(l, e / 2)});
        }
        std::vector<Lattice> next;
        for (const auto& a : acc)
            for (const auto& b : local) next.push_back(lattice_mul(a, b, D));
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

/// Norm of an ideal of the maximal order given in HNF.
inline i64 lattice_norm(const Lattice& L) { return L.A * L.C; }

}  // namespace anticyc
