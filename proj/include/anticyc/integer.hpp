#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"

namespace anticyc {

using i64 = std::int64_t;
using i128 = __int128;

namespace nt {

/// Least non-negative residue.
constexpr i64 mod(i64 a, i64 m) noexcept {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

constexpr i64 mod(i128 a, i64 m) noexcept {
    i128 r = a % m;
    return static_cast<i64>(r < 0 ? r + m : r);
}

constexpr i64 mulmod(i64 a, i64 b, i64 m) noexcept {
    return mod(static_cast<i128>(a) * b, m);
}

constexpr i64 powmod(i64 base, i64 e, i64 m) noexcept {
    i64 r = 1 % m;
    base = mod(base, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/// Exact power; throws BoundExceeded on int64 overflow.
inline i64 ipow(i64 base, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) fail(Errc::BoundExceeded, "integer power overflows int64");
    }
    return r;
}

/// p-adic valuation of a nonzero integer.
constexpr int vp(i64 n, i64 p) noexcept {
    if (n == 0) return 1 << 30;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Largest k with p^k <= x (x >= 1).
constexpr int floor_log(i64 p, i64 x) noexcept {
    int k = 0;
    i64 q = 1;
    while (q <= x / p) {
        q *= p;
        ++k;
    }
    return k;
}

/// Extended gcd: returns (g, u, v) with u*a + v*b = g >= 0.
constexpr std::tuple<i64, i64, i64> xgcd(i64 a, i64 b) noexcept {
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

inline i64 invmod(i64 a, i64 m) {
    auto [g, u, v] = xgcd(mod(a, m), m);
    (void)v;
    if (g != 1) fail(Errc::NonUnit, "element not invertible modulo " + std::to_string(m));
    return mod(u, m);
}

constexpr bool is_prime(i64 n) noexcept {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (i64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n < 0) n = -n;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> out;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        if (d * d != n) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Jacobi symbol (a|n) for odd n > 0.
constexpr int jacobi(i64 a, i64 n) noexcept {
    a = mod(a, n);
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

/// Kronecker symbol (D|n) for n >= 1.
constexpr int kronecker(i64 D, i64 n) noexcept {
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        i64 r = mod(D, 8);
        if (r == 3 || r == 5) result = -result;
    }
    if (n == 1) return result;
    return result * jacobi(D, n);
}

/// Smallest primitive root modulo an odd prime p.
inline i64 primitive_root(i64 p) {
    auto fac = factorize(p - 1);
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [q, e] : fac) {
            (void)e;
            if (powmod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    return 1;  // p == 2
}

/// Binomial coefficients C(i, j) mod m for 0 <= j <= i < n.
inline std::vector<std::vector<i64>> binomial_table(int n, i64 m) {
    std::vector<std::vector<i64>> c(n, std::vector<i64>(n, 0));
    for (int i = 0; i < n; ++i) {
        c[i][0] = 1 % m;
        for (int j = 1; j <= i; ++j) c[i][j] = mod(c[i - 1][j - 1] + (j < i ? c[i - 1][j] : 0), m);
    }
    return c;
}

/// v_p(n!) by Legendre's formula.
constexpr int vp_factorial(i64 n, i64 p) noexcept {
    int v = 0;
    while (n > 0) {
        n /= p;
        v += static_cast<int>(n);
    }
    return v;
}

}  // namespace nt
}  // namespace anticyc
