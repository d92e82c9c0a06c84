// SPDX-License-Identifier: Apache-2.0
//
// Small exact rational type. Similarity scores are ratios of small integers;
// doing the bookkeeping exactly makes reports bit-reproducible and makes
// identity scores equal 1 with no epsilon anywhere.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace geoforge {

struct Frac {
    long long num = 0;
    long long den = 1;  // always > 0, gcd(num, den) == 1

    Frac() = default;
    Frac(long long n) : num(n), den(1) {}
    Frac(long long n, long long d) {
        if (d == 0) throw std::domain_error("fraction with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num = n;
        den = d;
    }

    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    friend Frac operator+(const Frac& a, const Frac& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den +
                     static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return reduce128(n, d);
    }
    friend Frac operator-(const Frac& a, const Frac& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den -
                     static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return reduce128(n, d);
    }
    friend Frac operator*(const Frac& a, const Frac& b) {
        __int128 n = static_cast<__int128>(a.num) * b.num;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return reduce128(n, d);
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.num == 0) throw std::domain_error("fraction division by zero");
        __int128 n = static_cast<__int128>(a.num) * b.den;
        __int128 d = static_cast<__int128>(a.den) * b.num;
        return reduce128(n, d);
    }
    Frac& operator+=(const Frac& o) { return *this = *this + o; }

    friend bool operator==(const Frac& a, const Frac& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }
    friend bool operator<(const Frac& a, const Frac& b) {
        return static_cast<__int128>(a.num) * b.den <
               static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Frac& a, const Frac& b) { return b < a; }
    friend bool operator<=(const Frac& a, const Frac& b) { return !(b < a); }
    friend bool operator>=(const Frac& a, const Frac& b) { return !(a < b); }

private:
    static Frac reduce128(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 LIMIT = 0x7fffffffffffffffLL;
        if (n > LIMIT || n < -LIMIT || d > LIMIT)
            throw std::overflow_error("fraction overflow");
        Frac f;
        f.num = static_cast<long long>(n);
        f.den = static_cast<long long>(d);
        return f;
    }
};

}  // namespace geoforge
