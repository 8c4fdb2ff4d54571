// Big-integer and exact-rational groundwork: integer roots, modular
// exponentiation, primality testing and a small-prime sieve.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnpair {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline Int ipow(const Int& base, std::uint64_t exp) {
    Int r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        exp >>= 1;
        if (exp) b *= b;
    }
    return r;
}

// floor of the k-th root
inline Int iroot(const Int& n, unsigned k) {
    if (n < 0) throw error("iroot: negative argument");
    if (n <= 1 || k == 1) return n;
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    Int hi = Int(1) << (bits / k + 1);
    Int lo = 0;
    while (lo < hi - 1) {
        Int mid = (lo + hi) >> 1;
        if (ipow(mid, k) <= n)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline Int isqrt(const Int& n) { return boost::multiprecision::sqrt(n); }

inline Int igcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int powmod(const Int& base, const Int& exp, const Int& mod) {
    return boost::multiprecision::powm(base, exp, mod);
}

// natural log of a positive big integer, good to ~1e-14 relative
inline double log_int(const Int& n) {
    if (n <= 0) throw error("log_int: nonpositive");
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n));
    if (bits < 63) return std::log(static_cast<double>(n.convert_to<std::uint64_t>()));
    Int top = n >> (bits - 62);
    return std::log(top.convert_to<double>()) + (bits - 62) * std::log(2.0);
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m > 1 ? 1 : 0;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

inline bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
    if (a % n == 0) return true;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

inline bool miller_rabin_big(const Int& n, const Int& a) {
    if (a % n == 0) return true;
    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    Int x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

// Deterministic for n < 2^64 (first-12-primes witness set); strong
// probable-prime test with the first 40 prime bases above that.
inline bool is_prime(const Int& n) {
    static constexpr std::uint64_t small[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                              31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                              73, 79, 83, 89, 97, 101, 103, 107, 109, 113,
                                              127, 131, 137, 139, 149, 151, 157, 163, 167, 173};
    if (n < 2) return false;
    for (std::uint64_t p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < Int(std::uint64_t(1) << 63) * 2) {
        std::uint64_t v = n.convert_to<std::uint64_t>();
        for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
            if (!detail::miller_rabin_u64(v, a)) return false;
        return true;
    }
    for (std::uint64_t a : small)
        if (!detail::miller_rabin_big(n, a)) return false;
    return true;
}

// primes <= limit, ascending
inline std::vector<std::uint64_t> primes_below(std::uint64_t limit) {
    std::vector<bool> sieve(limit + 1, true);
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    sieve[0] = sieve[1] = false;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (sieve[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) sieve[j] = false;
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

// Exact rational value of a decimal literal, scientific notation allowed
// ("16.178405", "8.4526e15").
inline Rat rat_from_decimal(const std::string& text) {
    std::string s = text;
    long long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        exp10 = std::stoll(s.substr(e + 1));
        s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    std::string digits = s;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long long>(s.size() - dot - 1);
    }
    std::size_t nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    Rat r{Int(digits)};
    if (exp10 > 0) r *= Rat(ipow(10, static_cast<std::uint64_t>(exp10)));
    if (exp10 < 0) r /= Rat(ipow(10, static_cast<std::uint64_t>(-exp10)));
    return neg ? -r : r;
}

// deterministic 64-bit mix, used to derive reproducible RNG streams
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace pnpair
