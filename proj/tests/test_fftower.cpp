#include <doctest.h>

#include <pnpair/fqpoly.hpp>

using namespace pnpair;

TEST_CASE("tower construction determinism and basic shape") {
    auto t1 = FieldTower::build(5, 1, 3, 42);
    auto t2 = FieldTower::build(5, 1, 3, 42);
    CHECK(t1->ext_irreducible() == t2->ext_irreducible());
    CHECK(t1->q() == 5);
    CHECK(t1->q_pow_m() == 125);
    CHECK(t1->q_pow_m_minus_1().value() == 124);
    CHECK(t1->q_pow_m_minus_1().omega() == 2);

    auto t3 = FieldTower::build(5, 2, 5, 1); // F_25 < F_25^5
    CHECK(t3->q() == 25);
    CHECK(t3->q_pow_m() == ipow(25, 5));

    auto t4 = FieldTower::build(2, 1, 4, 1);
    CHECK(t4->q_pow_m() == 16);

    CHECK_THROWS_AS(FieldTower::build(6, 1, 3, 1), error);
}

TEST_CASE("field axioms on random elements") {
    auto t = FieldTower::build(5, 2, 3, 7);
    std::uint64_t st = 99;
    Int size = t->q_pow_m();
    for (int i = 0; i < 50; ++i) {
        auto a = t->from_index(Level::top, Int(splitmix64(st)) % size);
        auto b = t->from_index(Level::top, Int(splitmix64(st)) % size);
        auto c = t->from_index(Level::top, Int(splitmix64(st)) % size);
        CHECK(t->mul(a, t->add(b, c)) == t->add(t->mul(a, b), t->mul(a, c)));
        CHECK(t->mul(a, b) == t->mul(b, a));
        if (!a.is_zero()) {
            CHECK(t->mul(a, t->inv(a)) == t->one(Level::top));
            CHECK(t->pow(a, t->q_pow_m() - 1) == t->one(Level::top));
        }
    }
    CHECK_THROWS_AS(t->inv(t->zero(Level::top)), error);
    CHECK_THROWS_AS(t->inv(t->zero(Level::mid)), error);
}

TEST_CASE("trace facts on F_5^3 / F_5") {
    auto t = FieldTower::build(5, 1, 3, 1);
    // Tr(c) = 3c for c in the base field
    for (std::uint64_t c = 0; c < 5; ++c) {
        auto e = t->lift_to_top(t->from_base(Level::mid, c));
        auto tr = t->trace_top_to_mid(e);
        CHECK(tr == t->from_base(Level::mid, 3 * c % 5));
    }
    // Frobenius invariance and fiber sizes
    std::vector<int> fiber(5, 0);
    for (Int i = 0; i < 125; ++i) {
        auto a = t->from_index(Level::top, i);
        auto tr = t->trace_top_to_mid(a);
        CHECK(t->trace_top_to_mid(t->frobenius(a, 1)) == tr);
        fiber[static_cast<int>(tr.coeffs()[0])]++;
        CHECK(t->frobenius(a, 3) == a); // frobenius(., m) is the identity
    }
    for (int a = 0; a < 5; ++a) CHECK(fiber[a] == 25); // q^{m-1} each
}

TEST_CASE("polynomial factorization over F_5") {
    auto t = FieldTower::build(5, 1, 3, 1);
    auto x3m1 = FqPolynomial::x_pow_minus_one(t.get(), Level::mid, 3);
    auto f3 = factor_poly(x3m1);
    CHECK(f3.distinct_count() == 2); // (x-1)(x^2+x+1)
    CHECK(f3.squarefree_divisor_count() == 4);
    std::vector<int> degs;
    for (auto& [f, e] : f3.factors) { degs.push_back(f.degree()); CHECK(e == 1); }
    CHECK(degs == std::vector<int>{1, 2});

    auto f4 = factor_poly(FqPolynomial::x_pow_minus_one(t.get(), Level::mid, 4));
    CHECK(f4.distinct_count() == 4); // four linear factors: 4 | q-1
    CHECK(f4.squarefree_divisor_count() == 16);
    for (auto& [f, e] : f4.factors) CHECK(f.degree() == 1);

    auto f5 = factor_poly(FqPolynomial::x_pow_minus_one(t.get(), Level::mid, 5));
    CHECK(f5.distinct_count() == 1); // (x-1)^5 in characteristic 5
    CHECK(f5.factors[0].second == 5);
    CHECK(f5.factors[0].first.degree() == 1);
    CHECK(f5.radical().degree() == 1);
}

TEST_CASE("factor_poly re-multiplication on random polynomials") {
    for (unsigned k : {1u, 2u}) {
        auto t = FieldTower::build(5, k, 3, 3);
        std::uint64_t st = 1234 + k;
        for (int trial = 0; trial < 500; ++trial) {
            unsigned deg = 1 + splitmix64(st) % 12;
            auto g = detail::random_poly(t.get(), Level::mid, deg, st);
            if (g.degree() < 1) continue;
            auto fac = factor_poly(g, trial); // throws if re-multiplication fails
            unsigned degsum = 0;
            for (auto& [f, e] : fac.factors) degsum += f.degree() * e;
            CHECK(degsum == static_cast<unsigned>(g.degree()));
        }
    }
}

TEST_CASE("cyclotomic structure from cosets") {
    // (q=5^2, m=5) -> m'=1, single linear factor
    auto s1 = cyclotomic_structure(25, 5, 5);
    CHECK(s1 == std::vector<std::pair<unsigned, unsigned>>{{1, 1}});
    // (q=5, m=3): ord(5 mod 3) = 2 -> degrees {1:1, 2:1}
    auto s2 = cyclotomic_structure(5, 5, 3);
    CHECK(s2 == std::vector<std::pair<unsigned, unsigned>>{{1, 1}, {2, 1}});
    // (q=5^3, m=5) -> m'=1
    auto s3 = cyclotomic_structure(125, 5, 5);
    CHECK(s3 == std::vector<std::pair<unsigned, unsigned>>{{1, 1}});

    // degree-count totals: sum d*count = m' and consistency with factor_poly
    for (unsigned m : {3u, 4u, 6u, 9u, 12u}) {
        auto st = cyclotomic_structure(5, 5, m);
        unsigned mp = m;
        while (mp % 5 == 0) mp /= 5;
        unsigned total = 0;
        for (auto& [d, c] : st) total += d * c;
        CHECK(total == mp);

        auto t = FieldTower::build(5, 1, m, 1);
        auto fac = factor_xm_minus_one(t.get());
        std::map<unsigned, unsigned> from_poly;
        for (auto& [f, e] : fac.factors) from_poly[f.degree()]++;
        std::map<unsigned, unsigned> from_cosets(st.begin(), st.end());
        CHECK(from_poly == from_cosets);
    }
}

TEST_CASE("polynomial phi, moebius, theta") {
    auto t = FieldTower::build(5, 1, 3, 1);
    auto xm1 = factor_xm_minus_one(t.get());
    REQUIRE(xm1.factors.size() == 2);
    auto lin = xm1.factors[0].first;  // x-1
    auto quad = xm1.factors[1].first; // x^2+x+1

    auto fl = factor_poly(lin);
    auto fq = factor_poly(quad);
    CHECK(phi_q(fl) == 4);
    CHECK(phi_q(fq) == 24);
    auto prod = factor_poly(lin.mul(quad));
    CHECK(moebius_poly(prod) == 1);
    CHECK(moebius_poly(fl) == -1);
    CHECK(phi_q(prod) == 4 * 24); // multiplicative over coprime factors

    // Theta(g) = prod (1 - q^{-deg g_i}) for squarefree g
    CHECK(theta_poly(prod) == Rat(4, 5) * Rat(24, 25));
    CHECK(theta_poly(fl) == Rat(4, 5));

    // nonsquarefree: Phi_5((x-1)^2) = q^2 - q = 20, mu' = 0
    auto sq = factor_poly(lin.mul(lin));
    CHECK(phi_q(sq) == 20);
    CHECK(moebius_poly(sq) == 0);
}

TEST_CASE("module action and F_q order") {
    auto t = FieldTower::build(5, 1, 3, 1);
    auto xm1 = factor_xm_minus_one(t.get());

    // fq_order(0) = 1
    CHECK(fq_order(t->zero(Level::top), xm1).is_one());

    // nonzero alpha in F_q embedded at the top has order x-1
    for (std::uint64_t c = 1; c < 5; ++c) {
        auto a = t->lift_to_top(t->from_base(Level::mid, c));
        auto ord = fq_order(a, xm1);
        CHECK(ord.degree() == 1);
        CHECK(module_action(ord, a).is_zero());
    }

    // (x^3-1) o alpha = 0 always; order divides x^m-1 and annihilates
    std::uint64_t st = 5;
    for (int i = 0; i < 40; ++i) {
        auto a = t->from_index(Level::top, Int(splitmix64(st)) % 125);
        CHECK(module_action(xm1.poly, a).is_zero());
        auto ord = fq_order(a, xm1);
        CHECK(module_action(ord, a).is_zero());
        CHECK(xm1.poly.divisible_by(ord));
        // minimality: no proper divisor of ord annihilates
        auto of = factor_poly(ord);
        for (auto& [f, e] : of.factors) {
            auto smaller = ord.divmod(f).first;
            CHECK_FALSE(module_action(smaller, a).is_zero());
        }
    }
}

TEST_CASE("divisor enumeration") {
    auto t = FieldTower::build(5, 1, 3, 1);
    auto xm1 = factor_xm_minus_one(t.get());
    auto divs = all_divisors(xm1);
    CHECK(divs.size() == 4); // 1, x-1, x^2+x+1, x^3-1
    CHECK(divs[0].is_one());
    CHECK(divs[3] == xm1.poly.make_monic());
}
