// Three-level finite field tower F_p < F_q (q = p^k) < F_{q^m}.
//
// Elements are dense coefficient vectors over the next-lower level,
// flattened to base-field digits: a mid element holds k digits, a top
// element m*k digits.  Defining polynomials are found by seeded search
// and verified irreducible, so a tower is deterministic in (p, k, m, seed).
#pragma once

#include <pnpair/factorization.hpp>

#include <cassert>
#include <memory>
#include <numeric>
#include <span>

namespace pnpair {

enum class Level { base, mid, top };

class FieldTower;

// An element of one level of a tower.  Always in canonical reduced form.
class FFElement {
  public:
    FFElement() : tower_(nullptr), level_(Level::base) {}
    FFElement(const FieldTower* t, Level lvl, std::vector<std::uint64_t> coeffs)
        : tower_(t), level_(lvl), coeffs_(std::move(coeffs)) {}

    const FieldTower* tower() const { return tower_; }
    Level level() const { return level_; }
    const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (auto c : coeffs_)
            if (c) return false;
        return true;
    }
    bool operator==(const FFElement& o) const {
        return level_ == o.level_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const FFElement& o) const { return !(*this == o); }

    // lexicographic rank of the digit vector, little-endian base p
    Int index() const;

  private:
    friend class FieldTower;
    const FieldTower* tower_;
    Level level_;
    std::vector<std::uint64_t> coeffs_;
};

class FieldTower {
  public:
    // Deterministic construction for a fixed seed.  p must be prime,
    // k, m >= 1 (the campaign layer additionally requires m >= 3).
    static std::shared_ptr<const FieldTower> build(std::uint64_t p, unsigned k, unsigned m,
                                                   std::uint64_t seed = 1,
                                                   const FactorHintStore* hints = nullptr,
                                                   const FactorBudget& budget = {});

    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    unsigned m() const { return m_; }
    const Int& q() const { return q_; }
    const Int& q_pow_m() const { return qm_; }
    const FactoredInteger& q_pow_m_minus_1() const { return qm1_; }
    const std::vector<std::uint64_t>& base_irreducible() const { return base_irr_; }
    const std::vector<std::vector<std::uint64_t>>& ext_irreducible() const { return ext_irr_; }

    unsigned digits(Level lvl) const {
        switch (lvl) {
            case Level::base: return 1;
            case Level::mid: return k_;
            default: return m_ * k_;
        }
    }

    // ---- element construction -------------------------------------------
    FFElement zero(Level lvl) const { return {this, lvl, std::vector<std::uint64_t>(digits(lvl), 0)}; }
    FFElement one(Level lvl) const {
        auto e = zero(lvl);
        e.coeffs_[0] = 1;
        return e;
    }
    FFElement from_base(Level lvl, std::uint64_t c) const {
        auto e = zero(lvl);
        e.coeffs_[0] = c % p_;
        return e;
    }
    FFElement from_index(Level lvl, Int idx) const {
        auto e = zero(lvl);
        for (unsigned i = 0; i < digits(lvl) && idx != 0; ++i) {
            e.coeffs_[i] = (idx % p_).convert_to<std::uint64_t>();
            idx /= p_;
        }
        if (idx != 0) throw error("from_index: index out of range");
        return e;
    }
    // embed a mid element into the top level (constant coefficient)
    FFElement lift_to_top(const FFElement& a) const {
        require(a, Level::mid);
        auto e = zero(Level::top);
        std::copy(a.coeffs_.begin(), a.coeffs_.end(), e.coeffs_.begin());
        return e;
    }
    // the mid-level coefficient vector of a top element
    std::vector<FFElement> top_coeff_vector(const FFElement& a) const {
        require(a, Level::top);
        std::vector<FFElement> out;
        out.reserve(m_);
        for (unsigned i = 0; i < m_; ++i)
            out.push_back({this, Level::mid,
                           {a.coeffs_.begin() + i * k_, a.coeffs_.begin() + (i + 1) * k_}});
        return out;
    }
    FFElement top_from_coeffs(const std::vector<FFElement>& cs) const {
        if (cs.size() > m_) throw error("top_from_coeffs: too many coefficients");
        auto e = zero(Level::top);
        for (unsigned i = 0; i < cs.size(); ++i) {
            require(cs[i], Level::mid);
            std::copy(cs[i].coeffs_.begin(), cs[i].coeffs_.end(), e.coeffs_.begin() + i * k_);
        }
        return e;
    }

    Int level_size(Level lvl) const {
        switch (lvl) {
            case Level::base: return Int(p_);
            case Level::mid: return q_;
            default: return qm_;
        }
    }

    // ---- arithmetic -------------------------------------------------------
    FFElement add(const FFElement& a, const FFElement& b) const {
        require_same(a, b);
        auto c = a.coeffs_;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_add(c[i], b.coeffs_[i]);
        return {this, a.level_, std::move(c)};
    }
    FFElement sub(const FFElement& a, const FFElement& b) const {
        require_same(a, b);
        auto c = a.coeffs_;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_sub(c[i], b.coeffs_[i]);
        return {this, a.level_, std::move(c)};
    }
    FFElement neg(const FFElement& a) const {
        auto c = a.coeffs_;
        for (auto& x : c) x = x ? p_ - x : 0;
        return {this, a.level_, std::move(c)};
    }

    FFElement mul(const FFElement& a, const FFElement& b) const {
        require_same(a, b);
        switch (a.level_) {
            case Level::base:
                return {this, a.level_, {mod_mul(a.coeffs_[0], b.coeffs_[0])}};
            case Level::mid: {
                auto c = mid_mul(a.coeffs_, b.coeffs_);
                return {this, a.level_, std::move(c)};
            }
            default: {
                auto c = top_mul(a.coeffs_, b.coeffs_);
                return {this, a.level_, std::move(c)};
            }
        }
    }

    FFElement inv(const FFElement& a) const;
    FFElement pow(const FFElement& a, Int e) const;

    // a^(q^i), the i-th Frobenius power over F_q (top level)
    FFElement frobenius(const FFElement& a, unsigned i) const {
        require(a, Level::top);
        return pow(a, powmod_exponent(i));
    }

    FFElement trace_top_to_mid(const FFElement& a) const {
        require(a, Level::top);
        FFElement s = a, f = a;
        for (unsigned i = 1; i < m_; ++i) {
            f = frobenius(f, 1);
            s = add(s, f);
        }
        auto cs = top_coeff_vector(s);
        for (unsigned i = 1; i < m_; ++i)
            if (!cs[i].is_zero()) throw error("trace did not land in F_q");
        return cs[0];
    }

    FFElement trace_mid_to_base(const FFElement& a) const {
        require(a, Level::mid);
        FFElement s = a, f = a;
        for (unsigned i = 1; i < k_; ++i) {
            f = mid_frobenius(f);
            s = add(s, f);
        }
        for (unsigned i = 1; i < k_; ++i)
            if (s.coeffs_[i]) throw error("trace did not land in F_p");
        return {this, Level::base, {s.coeffs_[0]}};
    }

    std::uint64_t trace_top_to_base(const FFElement& a) const {
        return trace_mid_to_base(trace_top_to_mid(a)).coeffs()[0];
    }

    // a^p at mid level
    FFElement mid_frobenius(const FFElement& a) const {
        require(a, Level::mid);
        return pow(a, Int(p_));
    }

    // multiplicative generator of the mid field (least index), lazily found
    const FFElement& mid_generator() const;

    void require(const FFElement& a, Level lvl) const {
        if (a.tower_ != this || a.level_ != lvl) throw error("element/tower level mismatch");
    }

    bool ext_poly_irreducible() const;

    // ---- modular digit helpers -------------------------------------------
    std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) const { return detail::mulmod_u64(a, b, p_); }
    std::uint64_t mod_inv(std::uint64_t a) const {
        return detail::powmod_u64(a, p_ - 2, p_);
    }

  private:
    FieldTower() = default;

    void require_same(const FFElement& a, const FFElement& b) const {
        if (a.tower_ != this || b.tower_ != this || a.level_ != b.level_)
            throw error("element/tower level mismatch");
        if (a.coeffs_.size() != b.coeffs_.size()) throw error("malformed element");
    }

    Int powmod_exponent(unsigned i) const { return ipow(q_, i); }

    // polynomial arithmetic on raw digit vectors over F_p, reduced mod base_irr_
    std::vector<std::uint64_t> mid_mul(const std::vector<std::uint64_t>& a,
                                       const std::vector<std::uint64_t>& b) const {
        std::vector<std::uint64_t> prod(2 * k_ - 1, 0);
        for (unsigned i = 0; i < k_; ++i) {
            if (!a[i]) continue;
            for (unsigned j = 0; j < k_; ++j)
                prod[i + j] = (prod[i + j] + detail::mulmod_u64(a[i], b[j], p_)) % p_;
        }
        // reduce by the monic base irreducible
        for (int d = static_cast<int>(prod.size()) - 1; d >= static_cast<int>(k_); --d) {
            std::uint64_t c = prod[d];
            if (!c) continue;
            prod[d] = 0;
            for (unsigned j = 0; j < k_; ++j)
                prod[d - k_ + j] = mod_sub(prod[d - k_ + j], mod_mul(c, base_irr_[j]));
        }
        prod.resize(k_);
        return prod;
    }

    // schoolbook multiply of top elements (vectors of m mid elements)
    std::vector<std::uint64_t> top_mul(const std::vector<std::uint64_t>& a,
                                       const std::vector<std::uint64_t>& b) const {
        std::vector<std::vector<std::uint64_t>> prod(2 * m_ - 1, std::vector<std::uint64_t>(k_, 0));
        auto blk = [this](const std::vector<std::uint64_t>& v, unsigned i) {
            return std::vector<std::uint64_t>(v.begin() + i * k_, v.begin() + (i + 1) * k_);
        };
        for (unsigned i = 0; i < m_; ++i) {
            auto ai = blk(a, i);
            bool zero = std::all_of(ai.begin(), ai.end(), [](std::uint64_t x) { return !x; });
            if (zero) continue;
            for (unsigned j = 0; j < m_; ++j) {
                auto t = mid_mul(ai, blk(b, j));
                for (unsigned d = 0; d < k_; ++d) prod[i + j][d] = mod_add(prod[i + j][d], t[d]);
            }
        }
        for (int d = static_cast<int>(prod.size()) - 1; d >= static_cast<int>(m_); --d) {
            auto c = prod[d];
            bool zero = std::all_of(c.begin(), c.end(), [](std::uint64_t x) { return !x; });
            if (zero) continue;
            std::fill(prod[d].begin(), prod[d].end(), 0);
            for (unsigned j = 0; j < m_; ++j) {
                auto t = mid_mul(c, ext_irr_[j]);
                for (unsigned dd = 0; dd < k_; ++dd)
                    prod[d - m_ + j][dd] = mod_sub(prod[d - m_ + j][dd], t[dd]);
            }
        }
        std::vector<std::uint64_t> out(m_ * k_);
        for (unsigned i = 0; i < m_; ++i)
            std::copy(prod[i].begin(), prod[i].end(), out.begin() + i * k_);
        return out;
    }

    std::uint64_t p_ = 0;
    unsigned k_ = 0, m_ = 0;
    Int q_, qm_;
    FactoredInteger qm1_;
    std::vector<std::uint64_t> base_irr_;              // monic deg-k, coeffs 0..k-1 (x^k implied)
    std::vector<std::vector<std::uint64_t>> ext_irr_;  // monic deg-m over F_q, coeffs 0..m-1
    mutable std::unique_ptr<FFElement> generator_;     // lazily computed
};

inline Int FFElement::index() const {
    if (!tower_) return 0;
    Int idx = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) idx = idx * tower_->p() + *it;
    return idx;
}

// ---- inverse and powering ------------------------------------------------

namespace detail {

// extended euclid over F_p polynomials given as digit vectors (lowest first)
struct FpPolyOps {
    std::uint64_t p;
    using Poly = std::vector<std::uint64_t>;

    static int deg(const Poly& a) {
        for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
            if (a[i]) return i;
        return -1;
    }
    Poly trim(Poly a) const {
        a.resize(deg(a) + 1);
        return a;
    }
    Poly mul(const Poly& a, const Poly& b) const {
        if (deg(a) < 0 || deg(b) < 0) return {};
        Poly c(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                c[i + j] = (c[i + j] + mulmod_u64(a[i], b[j], p)) % p;
        }
        return trim(c);
    }
    Poly sub(Poly a, const Poly& b) const {
        if (b.size() > a.size()) a.resize(b.size(), 0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
        return trim(a);
    }
    std::pair<Poly, Poly> divmod(Poly a, const Poly& b) const {
        int db = deg(b);
        if (db < 0) throw error("poly division by zero");
        std::uint64_t lead_inv = powmod_u64(b[db], p - 2, p);
        Poly q;
        int da = deg(a);
        if (da >= db) q.assign(da - db + 1, 0);
        while ((da = deg(a)) >= db) {
            std::uint64_t c = mulmod_u64(a[da], lead_inv, p);
            q[da - db] = c;
            for (int j = 0; j <= db; ++j)
                a[da - db + j] = (a[da - db + j] + p - mulmod_u64(c, b[j], p)) % p;
        }
        return {trim(q), trim(a)};
    }
    // inverse of a modulo f (f monic of degree >= 1)
    Poly invmod(const Poly& a, const Poly& f) const {
        Poly r0 = f, r1 = trim(a), s0 = {}, s1 = {1};
        if (deg(r1) < 0) throw error("inverse of zero");
        while (deg(r1) > 0) {
            auto [q, r2] = divmod(r0, r1);
            Poly s2 = sub(s0, mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (deg(r1) < 0) throw error("inverse of zero (not coprime)");
        std::uint64_t c = powmod_u64(r1[0], p - 2, p);
        Poly out(s1.size());
        for (std::size_t i = 0; i < s1.size(); ++i) out[i] = mulmod_u64(s1[i], c, p);
        return trim(out);
    }
};

} // namespace detail

inline FFElement FieldTower::inv(const FFElement& a) const {
    if (a.tower_ != this) throw error("element/tower mismatch");
    if (a.is_zero()) throw error("inversion of zero");
    switch (a.level_) {
        case Level::base:
            return {this, a.level_, {mod_inv(a.coeffs_[0])}};
        case Level::mid: {
            detail::FpPolyOps ops{p_};
            auto f = base_irr_;
            f.push_back(1); // monic x^k term
            auto r = ops.invmod(a.coeffs_, f);
            r.resize(k_, 0);
            return {this, a.level_, std::move(r)};
        }
        default: {
            // euclid over F_q[z] modulo the ext irreducible
            auto cv = top_coeff_vector(a);
            std::vector<FFElement> r0, r1 = cv, s0, s1 = {one(Level::mid)};
            r0.reserve(m_ + 1);
            for (unsigned i = 0; i < m_; ++i)
                r0.push_back(FFElement{this, Level::mid, ext_irr_[i]});
            r0.push_back(one(Level::mid));
            auto degf = [](const std::vector<FFElement>& v) {
                for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
                    if (!v[i].is_zero()) return i;
                return -1;
            };
            auto polysub = [&](std::vector<FFElement> x, const std::vector<FFElement>& y) {
                if (y.size() > x.size()) x.resize(y.size(), zero(Level::mid));
                for (std::size_t i = 0; i < y.size(); ++i) x[i] = sub(x[i], y[i]);
                x.resize(degf(x) + 1, zero(Level::mid));
                return x;
            };
            auto polymulq = [&](const std::vector<FFElement>& x, const std::vector<FFElement>& y) {
                int dx = degf(x), dy = degf(y);
                if (dx < 0 || dy < 0) return std::vector<FFElement>{};
                std::vector<FFElement> c(dx + dy + 1, zero(Level::mid));
                for (int i = 0; i <= dx; ++i) {
                    if (x[i].is_zero()) continue;
                    for (int j = 0; j <= dy; ++j) c[i + j] = add(c[i + j], mul(x[i], y[j]));
                }
                return c;
            };
            auto divmodq = [&](std::vector<FFElement> x, const std::vector<FFElement>& y) {
                int dy = degf(y);
                FFElement li = inv(y[dy]);
                std::vector<FFElement> qout;
                int dx = degf(x);
                if (dx >= dy) qout.assign(dx - dy + 1, zero(Level::mid));
                while ((dx = degf(x)) >= dy) {
                    FFElement c = mul(x[dx], li);
                    qout[dx - dy] = c;
                    for (int j = 0; j <= dy; ++j)
                        x[dx - dy + j] = sub(x[dx - dy + j], mul(c, y[j]));
                    x.resize(degf(x) + 1, zero(Level::mid));
                }
                return std::pair{qout, x};
            };
            if (degf(r1) < 0) throw error("inversion of zero");
            while (degf(r1) > 0) {
                auto [qd, r2] = divmodq(r0, r1);
                auto s2 = polysub(s0, polymulq(qd, s1));
                r0 = std::move(r1);
                r1 = std::move(r2);
                s0 = std::move(s1);
                s1 = std::move(s2);
            }
            FFElement c = inv(r1[0]);
            std::vector<FFElement> out;
            out.reserve(s1.size());
            for (auto& e : s1) out.push_back(mul(e, c));
            return top_from_coeffs(out);
        }
    }
}

inline FFElement FieldTower::pow(const FFElement& a, Int e) const {
    if (a.tower_ != this) throw error("element/tower mismatch");
    Int order = level_size(a.level_) - 1;
    if (e < 0) {
        e = -e;
        e %= order;
        return pow(inv(a), e);
    }
    if (!a.is_zero() && e >= order) e %= order;
    FFElement r = one(a.level_), b = a;
    while (e > 0) {
        if ((e & 1) != 0) r = mul(r, b);
        e >>= 1;
        if (e > 0) b = mul(b, b);
    }
    return r;
}

// ---- construction ---------------------------------------------------------

namespace detail {

// x^(p^j) mod f over F_p via repeated p-th powers, for the Rabin test
inline bool fp_poly_irreducible(const std::vector<std::uint64_t>& fcoeffs, unsigned degree,
                                std::uint64_t p) {
    FpPolyOps ops{p};
    FpPolyOps::Poly f = fcoeffs;
    f.resize(degree, 0);
    f.push_back(1);
    auto mulmodf = [&](const FpPolyOps::Poly& a, const FpPolyOps::Poly& b) {
        return ops.divmod(ops.mul(a, b), f).second;
    };
    auto powp = [&](FpPolyOps::Poly a, std::uint64_t e) {
        FpPolyOps::Poly r = {1};
        while (e) {
            if (e & 1) r = mulmodf(r, a);
            e >>= 1;
            if (e) a = mulmodf(a, a);
        }
        return r;
    };
    FpPolyOps::Poly x = {0, 1};
    if (degree == 1) return true;
    // phi_j = x^(p^j) mod f
    std::vector<FpPolyOps::Poly> phi(degree + 1);
    phi[0] = x;
    for (unsigned j = 1; j <= degree; ++j) phi[j] = powp(phi[j - 1], p);
    if (ops.trim(ops.sub(phi[degree], x)) != FpPolyOps::Poly{}) return false;
    for (unsigned t = 2; t <= degree; ++t) {
        if (degree % t) continue;
        bool prime = true;
        for (unsigned d = 2; d * d <= t; ++d)
            if (t % d == 0) { prime = false; break; }
        if (!prime) continue;
        auto diff = ops.trim(ops.sub(phi[degree / t], x));
        // gcd(f, diff) must be 1
        FpPolyOps::Poly a = f, b = diff;
        while (FpPolyOps::deg(b) >= 0) {
            auto r = ops.divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        if (FpPolyOps::deg(a) != 0) return false;
    }
    return true;
}

} // namespace detail

inline std::shared_ptr<const FieldTower> FieldTower::build(std::uint64_t p, unsigned k, unsigned m,
                                                           std::uint64_t seed,
                                                           const FactorHintStore* hints,
                                                           const FactorBudget& budget) {
    if (!is_prime(Int(p))) throw error("build_tower: p is not prime");
    if (k < 1 || m < 1) throw error("build_tower: k and m must be >= 1");
    auto tower = std::shared_ptr<FieldTower>(new FieldTower());
    FieldTower& t = *tower;
    t.p_ = p;
    t.k_ = k;
    t.m_ = m;
    t.q_ = ipow(Int(p), k);
    t.qm_ = ipow(t.q_, m);
    t.qm1_ = factor(t.qm_ - 1, hints, budget, seed);

    // base irreducible: seeded search over monic degree-k polynomials
    std::uint64_t st = seed ^ 0x5eedbeefULL;
    if (k == 1) {
        t.base_irr_ = {0}; // x - 0: F_q == F_p, reduction is trivial
    } else {
        while (true) {
            std::vector<std::uint64_t> cand(k);
            for (auto& c : cand) c = splitmix64(st) % p;
            if (cand[0] == 0) cand[0] = 1; // avoid the root 0
            if (detail::fp_poly_irreducible(cand, k, p)) {
                t.base_irr_ = cand;
                break;
            }
        }
    }

    // ext irreducible: seeded search over monic degree-m polynomials over F_q
    if (m == 1) {
        t.ext_irr_ = {std::vector<std::uint64_t>(k, 0)};
    } else {
        while (true) {
            std::vector<std::vector<std::uint64_t>> cand(m, std::vector<std::uint64_t>(k, 0));
            for (auto& c : cand)
                for (auto& d : c) d = splitmix64(st) % p;
            bool czero = std::all_of(cand[0].begin(), cand[0].end(),
                                     [](std::uint64_t x) { return !x; });
            if (czero) cand[0][0] = 1;
            t.ext_irr_ = cand;
            // Rabin test over F_q using tower arithmetic on a probe basis:
            // build a scratch "poly over mid" irreducibility check
            if (t.ext_poly_irreducible()) break;
        }
    }
    return tower;
}

// Rabin irreducibility of the candidate ext polynomial over F_q; uses only
// mid-level arithmetic, which is available once the base irreducible is set.
inline bool FieldTower::ext_poly_irreducible() const {
    using MPoly = std::vector<FFElement>; // coeffs lowest first, over mid level
    const unsigned n = m_;
    MPoly f;
    f.reserve(n + 1);
    for (unsigned i = 0; i < n; ++i) f.push_back(FFElement{this, Level::mid, ext_irr_[i]});
    f.push_back(one(Level::mid));

    auto degf = [](const MPoly& v) {
        for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
            if (!v[i].is_zero()) return i;
        return -1;
    };
    auto rem = [&](MPoly x) {
        int dy = degf(f);
        int dx;
        while ((dx = degf(x)) >= dy) {
            FFElement c = x[dx]; // f monic
            for (int j = 0; j <= dy; ++j)
                x[dx - dy + j] = sub(x[dx - dy + j], mul(c, f[j]));
            x.resize(degf(x) + 1, zero(Level::mid));
        }
        return x;
    };
    auto mulm = [&](const MPoly& x, const MPoly& y) {
        int dx = degf(x), dy = degf(y);
        if (dx < 0 || dy < 0) return MPoly{};
        MPoly c(dx + dy + 1, zero(Level::mid));
        for (int i = 0; i <= dx; ++i) {
            if (x[i].is_zero()) continue;
            for (int j = 0; j <= dy; ++j) c[i + j] = add(c[i + j], mul(x[i], y[j]));
        }
        return rem(std::move(c));
    };
    auto powq = [&](MPoly a, Int e) {
        MPoly r = {one(Level::mid)};
        while (e > 0) {
            if ((e & 1) != 0) r = mulm(r, a);
            e >>= 1;
            if (e > 0) a = mulm(a, a);
        }
        return r;
    };
    auto equal = [&](const MPoly& a, const MPoly& b) {
        int da = degf(a), db = degf(b);
        if (da != db) return false;
        for (int i = 0; i <= da; ++i)
            if (a[i] != b[i]) return false;
        return true;
    };
    auto polygcd_is_const = [&](MPoly a, MPoly b) {
        while (degf(b) >= 0) {
            // a mod b with b not necessarily monic
            int db = degf(b);
            FFElement li = inv(b[db]);
            int da;
            while ((da = degf(a)) >= db) {
                FFElement c = mul(a[da], li);
                for (int j = 0; j <= db; ++j) a[da - db + j] = sub(a[da - db + j], mul(c, b[j]));
                a.resize(degf(a) + 1, zero(Level::mid));
            }
            std::swap(a, b);
        }
        return degf(a) == 0;
    };

    if (n == 1) return true;
    MPoly x = {zero(Level::mid), one(Level::mid)};
    std::vector<MPoly> phi(n + 1);
    phi[0] = x;
    for (unsigned j = 1; j <= n; ++j) phi[j] = powq(phi[j - 1], q_);
    if (!equal(phi[n], x)) return false;
    for (unsigned t = 2; t <= n; ++t) {
        if (n % t) continue;
        bool prime = true;
        for (unsigned d = 2; d * d <= t; ++d)
            if (t % d == 0) { prime = false; break; }
        if (!prime) continue;
        MPoly diff = phi[n / t];
        if (diff.size() < 2) diff.resize(2, zero(Level::mid));
        diff[1] = sub(diff[1], one(Level::mid));
        diff.resize(degf(diff) + 1, zero(Level::mid));
        if (degf(diff) < 0) return false;
        if (!polygcd_is_const(f, diff)) return false;
    }
    return true;
}

// least-index multiplicative generator of F_q
inline const FFElement& FieldTower::mid_generator() const {
    if (!generator_) {
        if (!qm1_.complete() && m_ == 1)
            throw incomplete_factorization("mid_generator: group order not fully factored");
        FactoredInteger qm1 = m_ == 1 ? qm1_ : factor(q_ - 1);
        Int order = q_ - 1;
        for (Int idx = 2; idx < q_; ++idx) {
            FFElement g = from_index(Level::mid, idx);
            bool ok = true;
            for (const auto& [pr, e] : qm1.factors()) {
                if (pow(g, order / pr) == one(Level::mid)) { ok = false; break; }
            }
            if (ok) {
                generator_ = std::make_unique<FFElement>(g);
                break;
            }
        }
        if (!generator_) throw error("no generator found (is q prime-power sized?)");
    }
    return *generator_;
}

} // namespace pnpair
