// The freeness predicates (u-free, g-free, primitive, normal, prescribed
// inverse trace), rational functions with exceptionality classification,
// the exact counting function N_{f,a,n}(l1, l2, g) by exhaustive scan, and
// witness search.
#pragma once

#include <pnpair/fqpoly.hpp>

#include <optional>

namespace pnpair {

// ---- context ----------------------------------------------------------------

// Shared per-field state for freeness work: the tower, the factored
// x^m - 1, and (for small fields) index tables that make the predicates O(1).
class FreenessContext {
  public:
    static constexpr std::size_t kTinyLimit = std::size_t(1) << 16;

    explicit FreenessContext(std::shared_ptr<const FieldTower> tower, std::uint64_t seed = 1)
        : tower_(std::move(tower)), xm1_(factor_xm_minus_one(tower_.get(), seed)) {
        if (!tower_->q_pow_m_minus_1().complete())
            throw incomplete_factorization("FreenessContext: q^m-1 not fully factored");
        if (tower_->q_pow_m() <= kTinyLimit) build_tables();
    }

    const FieldTower& tower() const { return *tower_; }
    std::shared_ptr<const FieldTower> tower_ptr() const { return tower_; }
    const PolyFactorization& xm1() const { return xm1_; }
    const FactoredInteger& group_order() const { return tower_->q_pow_m_minus_1(); }
    bool has_tables() const { return !dlog_.empty(); }

    // discrete log of the element with this index; -1 for zero (tiny fields)
    const Int& dlog_of_index(const Int& idx) const {
        return dlog_.at(idx.convert_to<std::size_t>());
    }
    const FFElement& generator() const { return *gen_; }

    // exponent vector of fq_order(element #idx) over the factors of x^m-1
    const std::vector<std::uint8_t>& order_exponents_of_index(std::size_t idx) const {
        return ordexp_.at(idx);
    }

  private:
    void build_tables() {
        const FieldTower& t = *tower_;
        std::size_t Q = tower_->q_pow_m().convert_to<std::size_t>();
        const Int order = tower_->q_pow_m() - 1;
        dlog_.assign(Q, Int(-1));
        for (Int gi = 1; gi < Int(Q); ++gi) {
            FFElement g = t.from_index(Level::top, gi);
            bool prim = true;
            for (const auto& [p, e] : tower_->q_pow_m_minus_1().factors())
                if (t.pow(g, order / p) == t.one(Level::top)) { prim = false; break; }
            if (prim) {
                gen_ = std::make_unique<FFElement>(g);
                break;
            }
        }
        FFElement cur = t.one(Level::top);
        for (Int i = 0; i < order; ++i) {
            dlog_[cur.index().convert_to<std::size_t>()] = i;
            cur = t.mul(cur, *gen_);
        }
        ordexp_.assign(Q, {});
        for (std::size_t i = 0; i < Q; ++i) {
            FFElement a = t.from_index(Level::top, Int(i));
            auto ord = fq_order(a, xm1_);
            std::vector<std::uint8_t> oe;
            oe.reserve(xm1_.factors.size());
            for (const auto& [f, e] : xm1_.factors) {
                unsigned cnt = 0;
                auto rem = ord;
                while (rem.divisible_by(f)) {
                    rem = rem.divmod(f).first;
                    ++cnt;
                }
                oe.push_back(static_cast<std::uint8_t>(cnt));
            }
            ordexp_[i] = std::move(oe);
        }
    }

    std::shared_ptr<const FieldTower> tower_;
    PolyFactorization xm1_;
    std::vector<Int> dlog_;                          // index -> dlog (or -1 for zero)
    std::vector<std::vector<std::uint8_t>> ordexp_;  // index -> order exponent vector
    std::unique_ptr<FFElement> gen_;
};

// ---- predicates ---------------------------------------------------------------

// alpha is u-free iff no prime divisor d of u has alpha a d-th power,
// i.e. alpha^((q^m-1)/d) != 1 for every prime d | u.
inline bool is_u_free(const FFElement& alpha, const FactoredInteger& u,
                      const FreenessContext& ctx) {
    const FieldTower& t = ctx.tower();
    t.require(alpha, Level::top);
    if (alpha.is_zero()) throw error("is_u_free: alpha must be nonzero");
    const Int& Q = ctx.group_order().value();
    if (!u.complete()) throw incomplete_factorization("is_u_free: u not fully factored");
    if (Q % u.value() != 0) throw error("is_u_free: u does not divide q^m-1");
    if (ctx.has_tables()) {
        const Int& t0 = ctx.dlog_of_index(alpha.index());
        for (const auto& [p, e] : u.factors())
            if (t0 % p == 0) return false;
        return true;
    }
    for (const auto& [p, e] : u.factors())
        if (t.pow(alpha, Q / p) == t.one(Level::top)) return false;
    return true;
}

inline bool is_primitive(const FFElement& alpha, const FreenessContext& ctx) {
    return !alpha.is_zero() && is_u_free(alpha, ctx.group_order(), ctx);
}

// alpha is g-free iff gcd((x^m-1)/fq_order(alpha), g) = 1.
inline bool is_g_free(const FFElement& alpha, const PolyFactorization& g,
                      const FreenessContext& ctx) {
    const auto& xm1 = ctx.xm1();
    if (!xm1.poly.make_monic().divisible_by(g.poly.make_monic()))
        throw error("is_g_free: g does not divide x^m-1");
    if (ctx.has_tables()) {
        const auto& oe = ctx.order_exponents_of_index(alpha.index().convert_to<std::size_t>());
        for (const auto& [f, e] : g.factors) {
            for (std::size_t i = 0; i < xm1.factors.size(); ++i) {
                if (xm1.factors[i].first == f) {
                    if (oe[i] < xm1.factors[i].second) return false;
                    break;
                }
            }
        }
        return true;
    }
    auto ord = fq_order(alpha, xm1);
    auto cofactor = xm1.poly.make_monic().divmod(ord).first;
    for (const auto& [f, e] : g.factors)
        if (cofactor.divisible_by(f)) return false;
    return true;
}

inline bool is_normal(const FFElement& alpha, const FreenessContext& ctx) {
    return is_g_free(alpha, ctx.xm1(), ctx);
}

// independent oracle: the Frobenius conjugates form an F_q-basis
inline bool is_normal_by_matrix_rank(const FFElement& alpha, const FreenessContext& ctx) {
    const FieldTower& t = ctx.tower();
    unsigned m = t.m();
    std::vector<std::vector<FFElement>> rows;
    FFElement f = alpha;
    for (unsigned i = 0; i < m; ++i) {
        if (i > 0) f = t.frobenius(f, 1);
        rows.push_back(t.top_coeff_vector(f));
    }
    unsigned rank = 0;
    for (unsigned col = 0; col < m && rank < m; ++col) {
        unsigned pivot = rank;
        while (pivot < m && rows[pivot][col].is_zero()) ++pivot;
        if (pivot == m) continue;
        std::swap(rows[pivot], rows[rank]);
        FFElement inv = t.inv(rows[rank][col]);
        for (unsigned r = 0; r < m; ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            FFElement c = t.mul(rows[r][col], inv);
            for (unsigned cc = 0; cc < m; ++cc)
                rows[r][cc] = t.sub(rows[r][cc], t.mul(c, rows[rank][cc]));
        }
        ++rank;
    }
    return rank == m;
}

inline bool trace_inverse_is(const FFElement& alpha, const FFElement& a,
                             const FreenessContext& ctx) {
    const FieldTower& t = ctx.tower();
    if (alpha.is_zero()) throw error("trace_inverse_is: alpha must be nonzero");
    t.require(a, Level::mid);
    return t.trace_top_to_mid(t.inv(alpha)) == a;
}

// ---- rational functions --------------------------------------------------------

// f = f1/f2 over the top field, f1 and f2 coprime, f2 monic.
class RationalFunction {
  public:
    RationalFunction(FqPolynomial f1, FqPolynomial f2) : f1_(std::move(f1)), f2_(std::move(f2)) {
        if (f2_.is_zero()) throw error("RationalFunction: zero denominator");
        if (f1_.is_zero()) throw error("RationalFunction: zero numerator");
        const FieldTower* t = f1_.tower();
        // divide both by the leading coefficient of f2
        FFElement li = t->inv(f2_.leading());
        f1_ = f1_.scale(li);
        f2_ = f2_.scale(li);
        if (f1_.gcd(f2_).degree() != 0) throw error("RationalFunction: f1, f2 not coprime");
    }

    const FqPolynomial& numerator() const { return f1_; }
    const FqPolynomial& denominator() const { return f2_; }
    const FieldTower* tower() const { return f1_.tower(); }
    unsigned degree_sum() const {
        return static_cast<unsigned>(f1_.degree()) + static_cast<unsigned>(f2_.degree());
    }

    bool operator==(const RationalFunction& o) const { return f1_ == o.f1_ && f2_ == o.f2_; }

    // evaluation; caller must exclude poles
    FFElement eval(const FFElement& at) const {
        const FieldTower* t = at.tower();
        FFElement den = f2_.eval(at);
        if (den.is_zero()) throw error("RationalFunction::eval at a pole");
        return t->mul(f1_.eval(at), t->inv(den));
    }

  private:
    FqPolynomial f1_, f2_;
};

// the set U = {zeros and poles of f} union {0}
struct ExclusionSet {
    std::vector<Int> indices; // sorted element indices

    bool contains(const Int& idx) const {
        return std::binary_search(indices.begin(), indices.end(), idx);
    }
    std::size_t size() const { return indices.size(); }
};

inline ExclusionSet exclusion_set(const RationalFunction& f, std::uint64_t seed = 1) {
    const FieldTower* t = f.tower();
    ExclusionSet u;
    u.indices.push_back(0);
    auto add_roots = [&](const FqPolynomial& poly) {
        if (poly.degree() < 1) return;
        for (const auto& [fac, e] : factor_poly(poly, seed).factors) {
            if (fac.degree() != 1) continue;
            // root of x + c is -c
            FFElement root = t->neg(fac.coeff(0));
            Int idx = root.index();
            if (!std::binary_search(u.indices.begin(), u.indices.end(), idx)) {
                u.indices.push_back(idx);
                std::sort(u.indices.begin(), u.indices.end());
            }
        }
    };
    add_roots(f.numerator());
    add_roots(f.denominator());
    return u;
}

// ---- exceptionality --------------------------------------------------------------

struct ExceptionalityVerdict {
    bool exceptional;
    std::string reason;
};

// f is exceptional when (a) f = x^i with gcd(i, q^m-1) != 1, or (b) the gcd e
// of the signed exponents of the non-x irreducible factors of f1/f2 shares a
// divisor d > 1 with q^m-1 (then f = c x^i g^d).
inline ExceptionalityVerdict classify_exceptional(const RationalFunction& f,
                                                  const FactoredInteger& q_pow_m_minus_1,
                                                  std::uint64_t seed = 1) {
    const FieldTower* t = f.tower();
    const Int& Q = q_pow_m_minus_1.value();
    auto xpoly = FqPolynomial::x(t, Level::top);

    auto fac1 = factor_poly(f.numerator(), seed);
    auto fac2 = factor_poly(f.denominator(), seed);

    long long xexp = 0;
    Int e = 0; // gcd of signed exponents of non-x factors
    FFElement unit = f.numerator().leading();
    bool has_non_x = false;
    for (const auto& [fac, k] : fac1.factors) {
        if (fac == xpoly)
            xexp += k;
        else {
            e = igcd(e, Int(k));
            has_non_x = true;
        }
    }
    for (const auto& [fac, k] : fac2.factors) {
        if (fac == xpoly)
            xexp -= k;
        else {
            e = igcd(e, Int(k));
            has_non_x = true;
        }
    }

    if (!has_non_x) {
        // f = c * x^i; rule (a) applies to the pure power x^i
        if (unit == t->one(Level::top)) {
            Int g = igcd(Int(xexp < 0 ? -xexp : xexp), Q);
            if (xexp != 0 && g != 1)
                return {true, "pure power x^" + std::to_string(xexp) + " with gcd(i, q^m-1) = " +
                                  g.str()};
            if (xexp == 0) return {true, "constant function"};
        }
        return {false, "monomial with trivial exponent gcd"};
    }
    Int g = igcd(e, Q);
    if (g > 1)
        return {true, "f = c x^i g^d with d | " + g.str() + " dividing q^m-1"};
    return {false, "exponent gcd coprime to q^m-1"};
}

// ---- enumeration / sampling of S_{q,m}(n) ------------------------------------------

struct SampleSpec {
    bool exhaustive = true;
    std::size_t count = 0;      // for sampling
    std::uint64_t seed = 1;
    std::size_t exhaustive_cap = 1u << 22;
};

// Emits coprime-normalized non-exceptional rational functions of degree sum
// exactly n, each equivalence class (f1, f2) once in exhaustive mode.
inline std::vector<RationalFunction> enumerate_or_sample_S(const FreenessContext& ctx, unsigned n,
                                                           const SampleSpec& spec) {
    const FieldTower* t = &ctx.tower();
    const Int Qm = t->q_pow_m();
    std::vector<RationalFunction> out;

    auto try_emit = [&](FqPolynomial f1, FqPolynomial f2) {
        if (f1.is_zero()) return;
        if (f1.gcd(f2).degree() != 0) return;
        RationalFunction f(std::move(f1), std::move(f2));
        if (f.degree_sum() != n) return;
        if (classify_exceptional(f, ctx.group_order(), spec.seed).exceptional) return;
        out.push_back(std::move(f));
    };

    if (spec.exhaustive) {
        // candidate space size: sum over splits of q^(d1+1)-ish * q^d2
        Rat space = 0;
        for (unsigned d1 = 0; d1 <= n; ++d1) space += Rat(ipow(Qm, d1 + 1) * ipow(Qm, n - d1));
        if (space > Rat(spec.exhaustive_cap))
            throw error("enumerate_or_sample_S: candidate space exceeds cap, use sampling");
        for (unsigned d1 = 0; d1 <= n; ++d1) {
            unsigned d2 = n - d1;
            // monic f2 of degree exactly d2: q^d2 choices
            for (Int i2 = 0; i2 < ipow(Qm, d2); ++i2) {
                std::vector<FFElement> c2;
                Int rem = i2;
                for (unsigned j = 0; j < d2; ++j) {
                    c2.push_back(t->from_index(Level::top, rem % Qm));
                    rem /= Qm;
                }
                c2.push_back(t->one(Level::top));
                FqPolynomial f2(t, Level::top, c2);
                // f1 of degree exactly d1, any nonzero leading coefficient
                for (Int i1 = 0; i1 < ipow(Qm, d1 + 1); ++i1) {
                    std::vector<FFElement> c1;
                    Int rem1 = i1;
                    for (unsigned j = 0; j <= d1; ++j) {
                        c1.push_back(t->from_index(Level::top, rem1 % Qm));
                        rem1 /= Qm;
                    }
                    if (c1.back().is_zero()) continue;
                    try_emit(FqPolynomial(t, Level::top, c1), f2);
                }
            }
        }
    } else {
        std::uint64_t st = spec.seed ^ 0x5a3c9e1fULL;
        std::size_t guard = 0;
        while (out.size() < spec.count && guard++ < spec.count * 1000 + 1000) {
            unsigned d1 = static_cast<unsigned>(splitmix64(st) % (n + 1));
            unsigned d2 = n - d1;
            std::vector<FFElement> c1, c2;
            for (unsigned j = 0; j <= d1; ++j)
                c1.push_back(t->from_index(Level::top, Int(splitmix64(st)) % Qm));
            if (c1.back().is_zero()) continue;
            for (unsigned j = 0; j < d2; ++j)
                c2.push_back(t->from_index(Level::top, Int(splitmix64(st)) % Qm));
            c2.push_back(t->one(Level::top));
            try_emit(FqPolynomial(t, Level::top, c1), FqPolynomial(t, Level::top, c2));
        }
        if (out.size() < spec.count)
            throw error("enumerate_or_sample_S: sampling failed to reach requested count");
    }
    return out;
}

// ---- counting ---------------------------------------------------------------------

struct CountQuery {
    FactoredInteger l1, l2;      // divisors of q^m-1, fully factored
    PolyFactorization g;         // monic divisor of x^m-1, factored
    FFElement a;                 // prescribed value of Tr(alpha^{-1}) in F_q
    bool want_witness = false;
    std::size_t scan_cap = std::size_t(1) << 24;
};

struct CountResult {
    Int count = 0;
    std::optional<FFElement> witness; // lowest-index qualifying alpha
};

// Exact count of alpha in F_{q^m} \ U with alpha l1-free and g-free,
// f(alpha) l2-free, and Tr(alpha^{-1}) = a, by exhaustive scan.
inline CountResult count_N(const RationalFunction& f, const CountQuery& q,
                           const FreenessContext& ctx) {
    const FieldTower& t = ctx.tower();
    const Int Qm = t.q_pow_m();
    if (Qm > Int(q.scan_cap)) throw error("count_N: field exceeds scan budget");
    auto U = exclusion_set(f);
    CountResult res;
    const Int total = Qm;
    for (Int i = 0; i < total; ++i) {
        if (U.contains(i)) continue;
        FFElement alpha = t.from_index(Level::top, i);
        if (!trace_inverse_is(alpha, q.a, ctx)) continue;
        if (!is_u_free(alpha, q.l1, ctx)) continue;
        if (!is_g_free(alpha, q.g, ctx)) continue;
        FFElement v = f.eval(alpha);
        if (v.is_zero()) continue; // cannot happen off U, kept as a guard
        if (!is_u_free(v, q.l2, ctx)) continue;
        res.count += 1;
        if (q.want_witness && !res.witness) res.witness = alpha;
    }
    return res;
}

// ---- existence ---------------------------------------------------------------------

struct ExistsOptions {
    std::size_t scan_cap = std::size_t(1) << 24; // complete-scan budget for a "no"
    std::size_t search_cap = 0;                  // 0: scan everything; else early cap
};

struct ExistsResult {
    enum class Verdict { yes, no, inconclusive };
    Verdict verdict;
    std::optional<FFElement> witness;
    Int scanned = 0;
};

// Witness verification through independent routes: multiplicative order by
// order-stripping, normality by matrix rank, trace by direct conjugate sum.
inline bool verify_witness(const FFElement& alpha, const RationalFunction& f, const FFElement& a,
                           const FreenessContext& ctx) {
    const FieldTower& t = ctx.tower();
    if (alpha.is_zero()) return false;
    auto mult_order_full = [&](const FFElement& x) {
        Int o = ctx.group_order().value();
        for (const auto& [p, e] : ctx.group_order().factors()) {
            for (unsigned i = 0; i < e; ++i) {
                if (t.pow(x, o / p) == t.one(Level::top))
                    o /= p;
                else
                    break;
            }
        }
        return o;
    };
    if (mult_order_full(alpha) != ctx.group_order().value()) return false;
    if (!is_normal_by_matrix_rank(alpha, ctx)) return false;
    FFElement v = f.eval(alpha);
    if (v.is_zero() || mult_order_full(v) != ctx.group_order().value()) return false;
    // direct conjugate sum of alpha^{-1}
    FFElement inv = t.inv(alpha), s = inv, fr = inv;
    for (unsigned i = 1; i < t.m(); ++i) {
        fr = t.frobenius(fr, 1);
        s = t.add(s, fr);
    }
    return s == t.lift_to_top(a);
}

// Search for alpha primitive normal with f(alpha) primitive and
// Tr(alpha^{-1}) = a.  "no" is returned only after a complete scan.
inline ExistsResult exists_pair(const RationalFunction& f, const FFElement& a,
                                const FreenessContext& ctx, const ExistsOptions& opt = {}) {
    const FieldTower& t = ctx.tower();
    const Int Qm = t.q_pow_m();
    auto U = exclusion_set(f);
    const auto& Q = ctx.group_order();
    const auto& xm1 = ctx.xm1();
    ExistsResult res{ExistsResult::Verdict::no, std::nullopt, 0};
    Int limit = Qm;
    bool complete = true;
    if (opt.search_cap && Qm > Int(opt.search_cap)) {
        limit = Int(opt.search_cap);
        complete = false;
    }
    if (Qm > Int(opt.scan_cap) && !opt.search_cap)
        throw error("exists_pair: field exceeds scan budget; set a search cap");
    for (Int i = 0; i < limit; ++i) {
        res.scanned = i + 1;
        if (U.contains(i)) continue;
        FFElement alpha = t.from_index(Level::top, i);
        if (!trace_inverse_is(alpha, a, ctx)) continue;
        if (!is_u_free(alpha, Q, ctx)) continue;
        if (!is_g_free(alpha, xm1, ctx)) continue;
        FFElement v = f.eval(alpha);
        if (v.is_zero() || !is_u_free(v, Q, ctx)) continue;
        if (!verify_witness(alpha, f, a, ctx))
            throw error("exists_pair: witness failed independent re-verification");
        res.verdict = ExistsResult::Verdict::yes;
        res.witness = alpha;
        return res;
    }
    res.verdict = complete ? ExistsResult::Verdict::no : ExistsResult::Verdict::inconclusive;
    return res;
}

} // namespace pnpair
