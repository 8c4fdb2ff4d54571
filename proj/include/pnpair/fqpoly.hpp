// Polynomials over a tower level: arithmetic, factorization (squarefree
// decomposition, distinct-degree, equal-degree splitting), the cyclotomic
// coset structure of x^m - 1, the F_q[x]-module action on the top field,
// and the polynomial analogues Phi_q, mu', Theta.
#pragma once

#include <pnpair/fftower.hpp>

#include <map>

namespace pnpair {

class FqPolynomial {
  public:
    FqPolynomial() = default;
    FqPolynomial(const FieldTower* t, Level lvl, std::vector<FFElement> coeffs)
        : tower_(t), level_(lvl), coeffs_(std::move(coeffs)) {
        normalize();
    }

    static FqPolynomial zero(const FieldTower* t, Level lvl) { return {t, lvl, {}}; }
    static FqPolynomial one(const FieldTower* t, Level lvl) { return {t, lvl, {t->one(lvl)}}; }
    static FqPolynomial x(const FieldTower* t, Level lvl) {
        return {t, lvl, {t->zero(lvl), t->one(lvl)}};
    }
    static FqPolynomial from_base_coeffs(const FieldTower* t, Level lvl,
                                         const std::vector<std::int64_t>& cs) {
        std::vector<FFElement> v;
        v.reserve(cs.size());
        for (auto c : cs) {
            std::int64_t r = c % static_cast<std::int64_t>(t->p());
            if (r < 0) r += t->p();
            v.push_back(t->from_base(lvl, static_cast<std::uint64_t>(r)));
        }
        return {t, lvl, std::move(v)};
    }
    // x^m - 1 at the given level
    static FqPolynomial x_pow_minus_one(const FieldTower* t, Level lvl, unsigned m) {
        std::vector<FFElement> v(m + 1, t->zero(lvl));
        v[0] = t->neg(t->one(lvl));
        v[m] = t->one(lvl);
        return {t, lvl, std::move(v)};
    }

    const FieldTower* tower() const { return tower_; }
    Level level() const { return level_; }
    const std::vector<FFElement>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return degree() == 0 && coeffs_[0] == tower_->one(level_); }
    bool is_monic() const {
        return !is_zero() && coeffs_.back() == tower_->one(level_);
    }
    const FFElement& leading() const { return coeffs_.back(); }
    FFElement coeff(unsigned i) const {
        return i < coeffs_.size() ? coeffs_[i] : tower_->zero(level_);
    }

    bool operator==(const FqPolynomial& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const FqPolynomial& o) const { return !(*this == o); }
    // degree then lexicographic coefficient index, for canonical ordering
    bool operator<(const FqPolynomial& o) const {
        if (degree() != o.degree()) return degree() < o.degree();
        for (int i = degree(); i >= 0; --i) {
            Int a = coeffs_[i].index(), b = o.coeffs_[i].index();
            if (a != b) return a < b;
        }
        return false;
    }

    FqPolynomial add(const FqPolynomial& o) const {
        auto c = coeffs_;
        if (o.coeffs_.size() > c.size()) c.resize(o.coeffs_.size(), tower_->zero(level_));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] = tower_->add(c[i], o.coeffs_[i]);
        return {tower_, level_, std::move(c)};
    }
    FqPolynomial sub(const FqPolynomial& o) const {
        auto c = coeffs_;
        if (o.coeffs_.size() > c.size()) c.resize(o.coeffs_.size(), tower_->zero(level_));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] = tower_->sub(c[i], o.coeffs_[i]);
        return {tower_, level_, std::move(c)};
    }
    FqPolynomial mul(const FqPolynomial& o) const {
        if (is_zero() || o.is_zero()) return zero(tower_, level_);
        std::vector<FFElement> c(coeffs_.size() + o.coeffs_.size() - 1, tower_->zero(level_));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                c[i + j] = tower_->add(c[i + j], tower_->mul(coeffs_[i], o.coeffs_[j]));
        }
        return {tower_, level_, std::move(c)};
    }
    FqPolynomial scale(const FFElement& s) const {
        auto c = coeffs_;
        for (auto& e : c) e = tower_->mul(e, s);
        return {tower_, level_, std::move(c)};
    }
    std::pair<FqPolynomial, FqPolynomial> divmod(const FqPolynomial& d) const {
        if (d.is_zero()) throw error("polynomial division by zero");
        FqPolynomial r = *this;
        FFElement li = tower_->inv(d.leading());
        std::vector<FFElement> q;
        if (r.degree() >= d.degree()) q.assign(r.degree() - d.degree() + 1, tower_->zero(level_));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            FFElement c = tower_->mul(r.leading(), li);
            int shift = r.degree() - d.degree();
            q[shift] = c;
            auto rc = r.coeffs_;
            for (int j = 0; j <= d.degree(); ++j)
                rc[shift + j] = tower_->sub(rc[shift + j], tower_->mul(c, d.coeffs_[j]));
            r = {tower_, level_, std::move(rc)};
        }
        return {FqPolynomial{tower_, level_, std::move(q)}, r};
    }
    FqPolynomial mod(const FqPolynomial& d) const { return divmod(d).second; }
    FqPolynomial make_monic() const {
        if (is_zero()) return *this;
        return scale(tower_->inv(leading()));
    }
    FqPolynomial gcd(const FqPolynomial& o) const {
        FqPolynomial a = *this, b = o;
        while (!b.is_zero()) {
            auto r = a.mod(b);
            a = std::move(b);
            b = std::move(r);
        }
        return a.make_monic();
    }
    FqPolynomial derivative() const {
        if (degree() < 1) return zero(tower_, level_);
        std::vector<FFElement> c;
        c.reserve(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            FFElement s = tower_->from_base(level_, static_cast<std::uint64_t>(i % tower_->p()));
            c.push_back(tower_->mul(coeffs_[i], s));
        }
        return {tower_, level_, std::move(c)};
    }
    FqPolynomial pow_mod(Int e, const FqPolynomial& modulus) const {
        FqPolynomial r = one(tower_, level_), b = this->mod(modulus);
        while (e > 0) {
            if ((e & 1) != 0) r = r.mul(b).mod(modulus);
            e >>= 1;
            if (e > 0) b = b.mul(b).mod(modulus);
        }
        return r;
    }
    FFElement eval(const FFElement& at) const {
        if (is_zero()) return at.tower()->zero(at.level());
        const FieldTower* t = at.tower();
        FFElement acc = lift_coeff(coeffs_.back(), at.level());
        for (int i = degree() - 1; i >= 0; --i)
            acc = t->add(t->mul(acc, at), lift_coeff(coeffs_[i], at.level()));
        return acc;
    }
    // true when d divides this exactly
    bool divisible_by(const FqPolynomial& d) const { return mod(d).is_zero(); }

  private:
    FFElement lift_coeff(const FFElement& c, Level target) const {
        if (c.level() == target) return c;
        if (c.level() == Level::mid && target == Level::top) return tower_->lift_to_top(c);
        throw error("eval: coefficient level does not match argument level");
    }
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
    const FieldTower* tower_ = nullptr;
    Level level_ = Level::mid;
    std::vector<FFElement> coeffs_;
};

// ---- factorization ---------------------------------------------------------

struct PolyFactorization {
    FqPolynomial poly;
    std::vector<std::pair<FqPolynomial, unsigned>> factors; // irreducible, exponent

    unsigned distinct_count() const { return static_cast<unsigned>(factors.size()); } // Omega_q
    Int squarefree_divisor_count() const { return Int(1) << factors.size(); }          // W
    FqPolynomial radical() const {
        auto r = FqPolynomial::one(poly.tower(), poly.level());
        for (const auto& [f, e] : factors) r = r.mul(f);
        return r;
    }
    bool is_squarefree() const {
        for (const auto& [f, e] : factors)
            if (e > 1) return false;
        return true;
    }
};

namespace detail {

inline FqPolynomial random_poly(const FieldTower* t, Level lvl, unsigned max_deg,
                                std::uint64_t& st) {
    std::vector<FFElement> cs;
    cs.reserve(max_deg + 1);
    Int sz = t->level_size(lvl);
    for (unsigned i = 0; i <= max_deg; ++i) {
        Int idx = Int(splitmix64(st)) % sz;
        cs.push_back(t->from_index(lvl, idx));
    }
    return {t, lvl, std::move(cs)};
}

// p-th root of a polynomial whose derivative vanishes: g(x) = h(x^p)^? ...
// every coefficient index is a multiple of p; take p-th roots of coefficients.
inline FqPolynomial poly_pth_root(const FqPolynomial& g) {
    const FieldTower* t = g.tower();
    std::uint64_t p = t->p();
    Int sz = t->level_size(g.level());
    std::vector<FFElement> cs;
    for (int i = 0; i <= g.degree(); i += static_cast<int>(p)) {
        // c^(size/p) is the p-th root in a field of size p^r
        cs.push_back(t->pow(g.coeff(i), sz / p));
    }
    return {t, g.level(), std::move(cs)};
}

inline void squarefree_decompose(const FqPolynomial& g, unsigned mult,
                                 std::map<unsigned, FqPolynomial>& out) {
    // Yun-style decomposition with the char-p x^p collapse handled recursively
    const FieldTower* t = g.tower();
    std::uint64_t p = t->p();
    FqPolynomial d = g.derivative();
    if (d.is_zero()) {
        squarefree_decompose(poly_pth_root(g), mult * static_cast<unsigned>(p), out);
        return;
    }
    FqPolynomial c = g.gcd(d);   // product of repeated parts
    FqPolynomial w = g.divmod(c).first;
    unsigned i = 1;
    while (!w.is_one()) {
        FqPolynomial y = w.gcd(c);
        FqPolynomial fac = w.divmod(y).first;
        if (fac.degree() > 0) {
            auto [it, fresh] = out.try_emplace(i * mult, fac.make_monic());
            if (!fresh) it->second = it->second.mul(fac.make_monic());
        }
        w = std::move(y);
        c = c.divmod(w).first;
        ++i;
    }
    if (!c.is_one()) squarefree_decompose(poly_pth_root(c), mult * static_cast<unsigned>(p), out);
}

// distinct-degree: g squarefree monic -> list of (product of deg-d factors, d)
inline std::vector<std::pair<FqPolynomial, unsigned>> distinct_degree(const FqPolynomial& g) {
    const FieldTower* t = g.tower();
    Int Q = t->level_size(g.level());
    std::vector<std::pair<FqPolynomial, unsigned>> out;
    FqPolynomial rest = g;
    FqPolynomial xq = FqPolynomial::x(t, g.level()); // x^{Q^d} mod rest, updated per d
    unsigned d = 0;
    while (rest.degree() > 0) {
        ++d;
        if (2 * d > static_cast<unsigned>(rest.degree())) {
            out.emplace_back(rest, static_cast<unsigned>(rest.degree()));
            break;
        }
        xq = xq.pow_mod(Q, rest);
        FqPolynomial diff = xq.sub(FqPolynomial::x(t, g.level()));
        FqPolynomial f = rest.gcd(diff);
        if (f.degree() > 0) {
            out.emplace_back(f, d);
            rest = rest.divmod(f).first;
            xq = xq.mod(rest);
        }
    }
    return out;
}

// equal-degree splitting (Cantor-Zassenhaus; trace construction in char 2)
inline void equal_degree(const FqPolynomial& g, unsigned d, std::uint64_t& st,
                         std::vector<FqPolynomial>& out) {
    const FieldTower* t = g.tower();
    if (g.degree() == static_cast<int>(d)) {
        out.push_back(g.make_monic());
        return;
    }
    Int Q = t->level_size(g.level());
    FqPolynomial splitter = FqPolynomial::zero(t, g.level());
    while (true) {
        FqPolynomial h = random_poly(t, g.level(), static_cast<unsigned>(g.degree()) - 1, st);
        if (h.degree() < 1) continue;
        FqPolynomial w;
        if (t->p() == 2) {
            // trace map sum_{i<r*d} h^(2^i) where Q^d = 2^(r*d)
            unsigned bits = 0;
            Int tmp = Q;
            while (tmp > 1) { tmp >>= 1; ++bits; }
            FqPolynomial acc = h.mod(g), term = h.mod(g);
            for (unsigned i = 1; i < bits * d; ++i) {
                term = term.mul(term).mod(g);
                acc = acc.add(term);
            }
            w = std::move(acc);
        } else {
            Int e = (ipow(Q, d) - 1) / 2;
            w = h.pow_mod(e, g).sub(FqPolynomial::one(t, g.level()));
        }
        FqPolynomial f = g.gcd(w);
        if (f.degree() > 0 && f.degree() < g.degree()) {
            equal_degree(f, d, st, out);
            equal_degree(g.divmod(f).first, d, st, out);
            return;
        }
    }
}

} // namespace detail

// Full factorization into monic irreducibles; verified by re-multiplication.
// Deterministic for fixed seed.
inline PolyFactorization factor_poly(const FqPolynomial& g, std::uint64_t seed = 1) {
    if (g.is_zero()) throw error("factor_poly: zero polynomial");
    const FieldTower* t = g.tower();
    PolyFactorization out;
    out.poly = g;
    if (g.degree() == 0) return out;
    std::map<unsigned, FqPolynomial> sf;
    detail::squarefree_decompose(g.make_monic(), 1, sf);
    std::uint64_t st = seed ^ 0xfacfacfacULL;
    std::vector<std::pair<FqPolynomial, unsigned>> factors;
    for (const auto& [mult, part] : sf) {
        for (const auto& [prod, d] : detail::distinct_degree(part)) {
            std::vector<FqPolynomial> irr;
            detail::equal_degree(prod, d, st, irr);
            for (auto& f : irr) factors.emplace_back(std::move(f), mult);
        }
    }
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.factors = std::move(factors);
    // re-multiplication identity
    FqPolynomial check = FqPolynomial::one(t, g.level()).scale(g.leading());
    for (const auto& [f, e] : out.factors)
        for (unsigned i = 0; i < e; ++i) check = check.mul(f);
    if (check != g) throw error("factor_poly: re-multiplication check failed");
    return out;
}

// ---- cyclotomic structure ---------------------------------------------------

// Degrees of the irreducible factors of x^{m'} - 1 over F_q, where
// m = m' * p^j with p not dividing m', computed from q-cyclotomic cosets
// mod m'.  Returns (degree, count) pairs, ascending by degree.
inline std::vector<std::pair<unsigned, unsigned>> cyclotomic_structure(const Int& q,
                                                                       std::uint64_t p,
                                                                       unsigned m) {
    unsigned mp = m;
    while (mp % p == 0) mp /= static_cast<unsigned>(p);
    std::uint64_t qr = (q % mp).convert_to<std::uint64_t>();
    std::vector<bool> seen(mp, false);
    std::map<unsigned, unsigned> counts;
    for (unsigned c = 0; c < mp; ++c) {
        if (seen[c]) continue;
        unsigned len = 0;
        std::uint64_t x = c;
        while (!seen[x]) {
            seen[x] = true;
            ++len;
            x = x * qr % mp;
        }
        ++counts[len];
    }
    return {counts.begin(), counts.end()};
}

// ---- polynomial multiplicative functions -----------------------------------

// order of the unit group of F_q[x]/(g)
inline Int phi_q(const PolyFactorization& g) {
    const FieldTower* t = g.poly.tower();
    Int Q = t->level_size(g.poly.level());
    Int r = 1;
    for (const auto& [f, e] : g.factors) {
        Int qd = ipow(Q, static_cast<unsigned>(f.degree()));
        r *= ipow(qd, e - 1) * (qd - 1);
    }
    return r;
}

inline int moebius_poly(const PolyFactorization& g) {
    for (const auto& [f, e] : g.factors)
        if (e > 1) return 0;
    return g.factors.size() % 2 == 0 ? 1 : -1;
}

// Theta(g) = Phi_q(g) / q^deg(g), exact
inline Rat theta_poly(const PolyFactorization& g) {
    const FieldTower* t = g.poly.tower();
    Int Q = t->level_size(g.poly.level());
    return Rat(phi_q(g), ipow(Q, static_cast<unsigned>(g.poly.degree())));
}

// all monic divisors (products of factor powers), ascending by degree
inline std::vector<FqPolynomial> all_divisors(const PolyFactorization& g) {
    const FieldTower* t = g.poly.tower();
    std::vector<FqPolynomial> out = {FqPolynomial::one(t, g.poly.level())};
    for (const auto& [f, e] : g.factors) {
        std::vector<FqPolynomial> next;
        FqPolynomial fp = FqPolynomial::one(t, g.poly.level());
        for (unsigned i = 0; i <= e; ++i) {
            for (const auto& d : out) next.push_back(d.mul(fp));
            if (i < e) fp = fp.mul(f);
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- module action and F_q order --------------------------------------------

// h o alpha = sum h_i alpha^{q^i} for h over F_q, alpha in the top field
inline FFElement module_action(const FqPolynomial& h, const FFElement& alpha) {
    const FieldTower* t = alpha.tower();
    t->require(alpha, Level::top);
    FFElement acc = t->zero(Level::top);
    FFElement frob = alpha;
    for (int i = 0; i <= h.degree(); ++i) {
        if (i > 0) frob = t->frobenius(frob, 1);
        const FFElement& ci = h.coeff(static_cast<unsigned>(i));
        if (!ci.is_zero()) acc = t->add(acc, t->mul(t->lift_to_top(ci), frob));
    }
    return acc;
}

// Factorization of x^m - 1 over F_q for a tower (cache per call site).
inline PolyFactorization factor_xm_minus_one(const FieldTower* t, std::uint64_t seed = 1) {
    return factor_poly(FqPolynomial::x_pow_minus_one(t, Level::mid, t->m()), seed);
}

// least-degree monic annihilator of alpha under the module action
inline FqPolynomial fq_order(const FFElement& alpha, const PolyFactorization& xm1) {
    const FieldTower* t = alpha.tower();
    FqPolynomial ord = xm1.poly.make_monic();
    for (const auto& [f, e] : xm1.factors) {
        for (unsigned i = 0; i < e; ++i) {
            FqPolynomial cand = ord.divmod(f).first;
            if (module_action(cand, alpha).is_zero())
                ord = std::move(cand);
            else
                break;
        }
    }
    return ord;
}

} // namespace pnpair
