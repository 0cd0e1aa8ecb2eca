#pragma once

#include <string>
#include <vector>

#include "kissing/errors.hpp"
#include "kissing/rational.hpp"

namespace kissing {

/// Divisor power sum: sum of d^k over divisors d of n.
inline Integer sigma(unsigned k, unsigned long n) {
    if (n == 0) throw std::invalid_argument("sigma: n must be >= 1");
    Integer s = 0;
    for (unsigned long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        Integer t;
        mpz_ui_pow_ui(t.get_mpz_t(), d, k);
        s += t;
        const unsigned long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(t.get_mpz_t(), e, k);
            s += t;
        }
    }
    return s;
}

namespace detail {
// coefficients of prod_{m>=1} (1 - q^m)^24 up to degree `deg`, by truncated
// power-series multiplication in exact integers
inline std::vector<Integer> eta24_series(size_t deg) {
    std::vector<Integer> euler(deg + 1, 0);
    euler[0] = 1;
    for (size_t m = 1; m <= deg; ++m) {
        // multiply by (1 - q^m), highest coefficient first
        for (size_t j = deg; j >= m; --j) euler[j] -= euler[j - m];
    }
    std::vector<Integer> pow(deg + 1, 0);
    pow[0] = 1;
    auto mul = [&](const std::vector<Integer>& a, const std::vector<Integer>& b) {
        std::vector<Integer> c(deg + 1, 0);
        for (size_t i = 0; i <= deg; ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; i + j <= deg; ++j) {
                if (b[j] == 0) continue;
                c[i + j] += a[i] * b[j];
            }
        }
        return c;
    };
    std::vector<Integer> base = euler;
    unsigned e = 24;
    while (e) {
        if (e & 1) pow = mul(pow, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return pow;
}
} // namespace detail

/// n-th coefficient of the discriminant cusp form
/// Delta = q * prod (1-q^m)^24, computed from the product expansion.
inline Integer ramanujan_tau(unsigned long n) {
    if (n < 1) throw std::invalid_argument("ramanujan_tau: n must be >= 1");
    static thread_local std::vector<Integer> cache;
    if (cache.size() < n) cache = detail::eta24_series(n < 64 ? 64 : n);
    return cache[n - 1];
}

/// Shell sizes of the two closed-form lattices, indexed so that k counts
/// vectors of norm^2 2k:
///   E8    -> 240 sigma_3(k)
///   Leech -> (65520/691) (sigma_11(k) - tau(k))   (min norm^2 4 => k >= 2)
inline Integer theta_coefficient(const std::string& lattice_name, unsigned long k) {
    if (k == 0) return 1;
    if (lattice_name == "E8" || lattice_name == "e8") return 240 * sigma(3, k);
    if (lattice_name == "Leech" || lattice_name == "leech") {
        Integer t = 65520 * (sigma(11, k) - ramanujan_tau(k));
        if (t % 691 != 0)
            throw integrity_error("theta_coefficient: 691 does not divide 65520(sigma_11 - tau) at k=" +
                                  std::to_string(k));
        return t / 691;
    }
    throw data_error("theta_coefficient: no closed form for '" + lattice_name + "'");
}

} // namespace kissing
