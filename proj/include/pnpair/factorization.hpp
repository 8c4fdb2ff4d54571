// Integer factorization with first-class partial results, plus the
// multiplicative functions (omega, W, radical, phi, mu) computed from
// complete factorizations only.
#pragma once

#include <pnpair/arith.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <utility>

namespace pnpair {

class incomplete_factorization : public error {
  public:
    using error::error;
};

struct FactorBudget {
    std::uint64_t trial_limit = 100000;      // trial division bound
    std::uint64_t rho_iterations = 4000000;  // per rho attempt
    unsigned rho_restarts = 16;              // attempts per composite
};

// Source of externally known factorizations, consulted before rho.
// The JSON-backed implementation lives in hint_store.hpp.
class FactorHintStore {
  public:
    virtual ~FactorHintStore() = default;
    // On success fills `out` with the prime power factorization of n.
    virtual bool lookup(const Int& n, std::map<Int, unsigned>& out) const = 0;
};

// A positive integer together with its known prime factorization.  When
// `complete()` the product of prime powers equals the value and every
// listed prime passed the primality test; otherwise exactly one residual
// composite cofactor is carried alongside the proven part.
class FactoredInteger {
  public:
    FactoredInteger() : value_(1) {}

    static FactoredInteger from_parts(Int value, std::vector<std::pair<Int, unsigned>> factors,
                                      std::optional<Int> residual = std::nullopt) {
        FactoredInteger f;
        f.value_ = std::move(value);
        f.factors_ = std::move(factors);
        f.residual_ = std::move(residual);
        std::sort(f.factors_.begin(), f.factors_.end());
        f.check();
        return f;
    }

    const Int& value() const { return value_; }
    const std::vector<std::pair<Int, unsigned>>& factors() const { return factors_; }
    const std::optional<Int>& residual() const { return residual_; }
    bool complete() const { return !residual_.has_value(); }

    bool divides_value(const Int& d) const { return d != 0 && value_ % d == 0; }

    unsigned omega() const {
        require_complete("omega");
        return static_cast<unsigned>(factors_.size());
    }

    // W = 2^omega, the number of squarefree divisors
    Int squarefree_divisor_count() const {
        require_complete("W");
        return Int(1) << factors_.size();
    }

    Int radical() const {
        require_complete("radical");
        Int r = 1;
        for (const auto& [p, e] : factors_) r *= p;
        return r;
    }

    Int euler_phi() const {
        require_complete("euler_phi");
        Int r = 1;
        for (const auto& [p, e] : factors_) r *= ipow(p, e - 1) * (p - 1);
        return r;
    }

    // phi(u)/u as an exact rational
    Rat theta() const {
        require_complete("theta");
        Rat r = 1;
        for (const auto& [p, e] : factors_) r *= Rat(p - 1, p);
        return r;
    }

    std::vector<Int> prime_list() const {
        require_complete("prime_list");
        std::vector<Int> out;
        out.reserve(factors_.size());
        for (const auto& [p, e] : factors_) out.push_back(p);
        return out;
    }

    // restriction to a subset of the primes (a squarefree divisor core)
    FactoredInteger restrict_to(const std::vector<Int>& primes) const {
        require_complete("restrict_to");
        std::vector<std::pair<Int, unsigned>> fs;
        Int v = 1;
        for (const auto& p : primes) {
            bool found = false;
            for (const auto& [q, e] : factors_)
                if (q == p) { found = true; break; }
            if (!found) throw error("restrict_to: prime does not divide value");
            fs.emplace_back(p, 1);
            v *= p;
        }
        return from_parts(v, std::move(fs));
    }

  private:
    void check() const {
        if (value_ < 1) throw error("FactoredInteger: value must be positive");
        Int prod = residual_ ? *residual_ : Int(1);
        Int last = 0;
        for (const auto& [p, e] : factors_) {
            if (p <= last) throw error("FactoredInteger: primes must be strictly increasing");
            if (e < 1) throw error("FactoredInteger: exponent must be positive");
            last = p;
            prod *= ipow(p, e);
        }
        if (prod != value_) throw error("FactoredInteger: factors do not multiply back to value");
    }

    void require_complete(const char* what) const {
        if (!complete())
            throw incomplete_factorization(std::string(what) +
                                           ": factorization incomplete, refusing to answer");
    }

    Int value_;
    std::vector<std::pair<Int, unsigned>> factors_;
    std::optional<Int> residual_;
};

// Moebius function of a completely factored integer.
inline int moebius(const FactoredInteger& f) {
    for (const auto& [p, e] : f.factors())
        if (e >= 2) return 0;
    return f.omega() % 2 == 0 ? 1 : -1;
}

namespace detail {

inline std::uint64_t brent_rho_u64(std::uint64_t n, std::uint64_t seed) {
    if (n % 2 == 0) return 2;
    std::uint64_t st = seed;
    for (unsigned attempt = 0; attempt < 64; ++attempt) {
        std::uint64_t y = splitmix64(st) % (n - 1) + 1;
        std::uint64_t c = splitmix64(st) % (n - 1) + 1;
        std::uint64_t m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1; k += m) {
                ys = y;
                std::uint64_t lim = std::min(m, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
    return 0;
}

inline Int brent_rho_big(const Int& n, std::uint64_t seed, std::uint64_t max_iters,
                         unsigned restarts) {
    if (n % 2 == 0) return 2;
    std::uint64_t st = seed;
    for (unsigned attempt = 0; attempt < restarts; ++attempt) {
        Int y = Int(splitmix64(st)) % (n - 1) + 1;
        Int c = Int(splitmix64(st)) % (n - 1) + 1;
        Int g = 1, q = 1, x = 0, ys = 0;
        std::uint64_t m = 128, r = 1, iters = 0;
        while (g == 1 && iters < max_iters) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1; k += m) {
                ys = y;
                std::uint64_t lim = std::min(m, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * iabs(x - y) % n;
                }
                g = igcd(q, n);
                iters += lim;
            }
            r <<= 1;
        }
        if (g == 1) continue; // budget exhausted on this attempt
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = igcd(iabs(x - ys), n);
            }
        }
        if (g != n) return g;
    }
    return 0;
}

} // namespace detail

namespace detail {
inline bool hint_lookup(const FactorHintStore* hints, const Int& n,
                        std::map<Int, unsigned>& out) {
    if (!hints) return false;
    std::map<Int, unsigned> local;
    if (!hints->lookup(n, local)) return false;
    for (const auto& [p, e] : local) out[p] += e;
    return true;
}
} // namespace detail

// Factor n >= 1.  Budget exhaustion yields a partial result (one residual
// composite), never a wrong one.  Deterministic for a fixed seed.
inline FactoredInteger factor(const Int& n, const FactorHintStore* hints = nullptr,
                              const FactorBudget& budget = {}, std::uint64_t seed = 1) {
    if (n < 1) throw error("factor: argument must be positive");
    std::map<Int, unsigned> found;
    std::vector<Int> pending;
    Int residual_product = 1;

    auto push = [&](const Int& v) {
        if (v > 1) pending.push_back(v);
    };
    push(n);

    // trial division once on the full value
    if (!pending.empty() && !detail::hint_lookup(hints, n, found)) {
        Int v = pending.back();
        pending.pop_back();
        static const std::vector<std::uint64_t> small = primes_below(100000);
        for (std::uint64_t p : small) {
            if (p > budget.trial_limit) break;
            if (Int(p) * p > v) break;
            while (v % p == 0) { ++found[Int(p)]; v /= p; }
        }
        if (budget.trial_limit > 100000 && v > 1) {
            for (std::uint64_t p = 100001; p <= budget.trial_limit; p += 2) {
                if (Int(p) * p > v) break;
                while (v % p == 0) { ++found[Int(p)]; v /= p; }
            }
        }
        push(v);
    } else {
        pending.clear();
    }

    while (!pending.empty()) {
        Int v = pending.back();
        pending.pop_back();
        if (v == 1) continue;
        if (is_prime(v)) { ++found[v]; continue; }
        if (detail::hint_lookup(hints, v, found)) continue;
        // perfect power
        {
            bool split = false;
            unsigned maxe = static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
            for (unsigned e = 2; e <= maxe && !split; ++e) {
                Int r = iroot(v, e);
                if (r > 1 && ipow(r, e) == v) {
                    for (unsigned i = 0; i < e; ++i) push(r);
                    split = true;
                }
            }
            if (split) continue;
        }
        Int g;
        if (v < Int(std::uint64_t(1) << 63) * 2) {
            std::uint64_t f = detail::brent_rho_u64(v.convert_to<std::uint64_t>(), seed);
            g = f;
        } else {
            g = detail::brent_rho_big(v, seed, budget.rho_iterations, budget.rho_restarts);
        }
        if (g == 0 || g == 1 || g == v) {
            residual_product *= v; // budget exhausted: record and move on
            continue;
        }
        push(g);
        push(v / g);
    }

    std::vector<std::pair<Int, unsigned>> fs(found.begin(), found.end());
    std::optional<Int> residual;
    if (residual_product > 1) residual = residual_product;
    return FactoredInteger::from_parts(n, std::move(fs), std::move(residual));
}

// ---- W-bound helpers ----------------------------------------------------

// Rational upper bound on 4515 * M^(1/8), rounded away from zero.
inline Rat w_bound_lemma51(const Int& M) {
    if (M < 1) throw error("w_bound_lemma51: M must be positive");
    const unsigned scale = 24;
    Int u = iroot(M << (8 * scale), 8); // floor(2^24 * M^(1/8))
    return Rat(4515 * (u + 1), Int(1) << scale);
}

// Exact test W(M) < 4515 * M^(1/8), both sides raised to the 8th power.
inline bool w_below_lemma51_bound(const FactoredInteger& f) {
    Int W = f.squarefree_divisor_count();
    return ipow(W, 8) < ipow(Int(4515), 8) * f.value();
}

// Applicability gate of the omega-threshold bound W(k) < k^(1/13).
inline bool w_bound_lemma54_applicable(const FactoredInteger& f) {
    return f.omega() >= 2828;
}

// ln k - 13 * omega * ln 2, the log-domain margin of the same bound.
inline double w_bound_lemma54_log_margin(const FactoredInteger& f) {
    double lnk = 0;
    for (const auto& [p, e] : f.factors()) lnk += e * log_int(p);
    if (f.residual()) lnk += log_int(*f.residual());
    return lnk - 13.0 * f.omega() * std::log(2.0);
}

} // namespace pnpair
