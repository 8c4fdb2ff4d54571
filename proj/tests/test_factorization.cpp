#include <doctest.h>

#include <pnpair/factorization.hpp>
#include <pnpair/hint_store.hpp>

#include <cstdio>
#include <random>

using namespace pnpair;

namespace {

// independent oracle: smallest-prime-factor sieve
std::vector<std::uint32_t> spf_table(std::uint32_t limit) {
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0)
            for (std::uint32_t j = i; j <= limit; j += i)
                if (spf[j] == 0) spf[j] = i;
    }
    return spf;
}

std::vector<std::pair<Int, unsigned>> oracle_factor(std::uint32_t n,
                                                    const std::vector<std::uint32_t>& spf) {
    std::vector<std::pair<Int, unsigned>> out;
    while (n > 1) {
        std::uint32_t p = spf[n];
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    return out;
}

} // namespace

TEST_CASE("factor matches sieve oracle up to 10^6") {
    const std::uint32_t limit = 1000000;
    auto spf = spf_table(limit);
    for (std::uint32_t n = 1; n <= limit; ++n) {
        auto f = factor(n);
        REQUIRE(f.complete());
        if (f.factors() != oracle_factor(n, spf)) {
            CAPTURE(n);
            REQUIRE(f.factors() == oracle_factor(n, spf));
        }
    }
}

TEST_CASE("factor examples") {
    auto f = factor(124);
    CHECK(f.complete());
    CHECK(f.factors() == std::vector<std::pair<Int, unsigned>>{{2, 2}, {31, 1}});
    CHECK(f.omega() == 2);
    CHECK(f.squarefree_divisor_count() == 4);

    auto one = factor(1);
    CHECK(one.complete());
    CHECK(one.factors().empty());
    CHECK(one.omega() == 0);
    CHECK(one.squarefree_divisor_count() == 1);
}

TEST_CASE("factor of 5^21-1 finds the large table primes") {
    Int n = ipow(5, 21) - 1;
    auto f = factor(n);
    REQUIRE(f.complete());
    auto primes = f.prime_list();
    // 229469719 is the product 31*19531*379 of sieve primes, not itself prime
    CHECK(std::find(primes.begin(), primes.end(), Int(519499)) != primes.end());
    CHECK(n % 229469719 == 0);
    CHECK_FALSE(is_prime(229469719));
    CHECK(f.factors() ==
          std::vector<std::pair<Int, unsigned>>{{2, 2}, {31, 1}, {379, 1}, {19531, 1}, {519499, 1}});
}

TEST_CASE("multiplicative functions") {
    CHECK(factor(4).euler_phi() == 2);
    CHECK(factor(4).theta() == Rat(1, 2));
    CHECK(moebius(factor(30)) == -1);
    CHECK(moebius(factor(12)) == 0);
    CHECK(moebius(factor(1)) == 1);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t a = rng() % 1000000000 + 1;
        std::uint64_t b = rng() % 1000000000 + 1;
        Int g = igcd(Int(a), Int(b));
        if (g != 1) continue;
        auto fa = factor(a), fb = factor(b), fab = factor(Int(a) * b);
        CHECK(fab.squarefree_divisor_count() ==
              fa.squarefree_divisor_count() * fb.squarefree_divisor_count());
    }
    for (int i = 0; i < 200; ++i) {
        std::uint64_t n = rng() % 100000000 + 1;
        auto f = factor(n);
        CHECK(f.value() % f.radical() == 0);
        // phi(n)/n == prod (1 - 1/p) in exact rationals
        Rat prod = 1;
        for (const auto& [p, e] : f.factors()) prod *= Rat(p - 1, p);
        CHECK(Rat(f.euler_phi(), f.value()) == prod);
    }
}

TEST_CASE("incomplete factorizations refuse multiplicative queries") {
    // a product of two 40-digit-ish primes is far beyond the rho budget here
    Int p1("100000000000000000000000000000000000133");
    Int p2("1000000000000000000000000000000000000003");
    FactorBudget tiny;
    tiny.rho_iterations = 1000;
    tiny.rho_restarts = 1;
    auto f = factor(p1 * p2, nullptr, tiny);
    REQUIRE_FALSE(f.complete());
    CHECK(f.residual().value() == p1 * p2);
    CHECK_THROWS_AS(f.omega(), incomplete_factorization);
    CHECK_THROWS_AS(f.squarefree_divisor_count(), incomplete_factorization);
    CHECK_THROWS_AS(f.euler_phi(), incomplete_factorization);
}

TEST_CASE("primality edge cases") {
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(Int("305175781")));                 // (5^13-1)/4
    CHECK_FALSE(is_prime(Int("3215031751")));          // strong pseudoprime to 2,3,5,7
    CHECK(is_prime(Int("170141183460469231731687303715884105727"))); // 2^127-1
}

TEST_CASE("w bound of lemma 5.1") {
    CHECK(w_bound_lemma51(1) >= 4515);
    CHECK(w_below_lemma51_bound(factor(1)));
    CHECK(w_below_lemma51_bound(factor(124)));
    CHECK(w_below_lemma51_bound(factor(ipow(5, 25) - 1)));
    // the rational bound really is an upper bound: bound^8 >= 4515^8 * M
    for (std::uint64_t M : {1ull, 2ull, 124ull, 1000000007ull}) {
        Rat b = w_bound_lemma51(M);
        Rat lhs = b;
        Rat pow8 = 1;
        for (int i = 0; i < 8; ++i) pow8 *= lhs;
        CHECK(pow8 >= Rat(ipow(4515, 8) * M));
    }
}

TEST_CASE("omega threshold of lemma 5.4") {
    auto primes = primes_below(26000);
    REQUIRE(primes.size() >= 2828);
    // primorials: product of the first 2827 / 2828 primes
    Int prim = 1;
    std::vector<std::pair<Int, unsigned>> fs;
    for (std::size_t i = 0; i < 2828; ++i) {
        prim *= primes[i];
        fs.emplace_back(primes[i], 1);
    }
    auto f2828 = FactoredInteger::from_parts(prim, fs);
    CHECK(w_bound_lemma54_applicable(f2828));
    CHECK(w_bound_lemma54_log_margin(f2828) > 0);

    fs.pop_back();
    prim /= primes[2827];
    auto f2827 = FactoredInteger::from_parts(prim, fs);
    CHECK_FALSE(w_bound_lemma54_applicable(f2827));
    CHECK(w_bound_lemma54_log_margin(f2827) < 0);

    CHECK_FALSE(w_bound_lemma54_applicable(factor(124)));
}

TEST_CASE("hint store round trip and validation") {
    JsonHintStore store;
    store.add(factor(Int("1220703124"))); // 5^13-1
    store.add(factor(124), "trial");
    std::string path = "hints_test_tmp.json";
    store.save_file(path);

    auto loaded = JsonHintStore::load_file(path);
    CHECK(loaded.size() == 2);
    std::map<Int, unsigned> out;
    CHECK(loaded.lookup(Int("1220703124"), out));
    CHECK(out.at(Int("305175781")) == 1);

    // a hinted factor() call uses the store instead of rho
    auto f = factor(Int("1220703124"), &loaded);
    CHECK(f.complete());
    CHECK(loaded.hits() >= 2);
    std::remove(path.c_str());

    // corrupt entries are rejected on load
    std::ofstream bad("hints_bad_tmp.json");
    bad << R"({"10": [["2",1],["6",1]]})"; // 6 is not prime
    bad.close();
    CHECK_THROWS_AS(JsonHintStore::load_file("hints_bad_tmp.json"), error);
    std::remove("hints_bad_tmp.json");
}
