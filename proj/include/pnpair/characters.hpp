// Multiplicative and additive characters on tiny fields (q^m <= 2^12),
// the characteristic functions rho_u / tau_a / kappa_g, the inner sums
// chi_{f,a}(d1, d2, h) of the counting-function expansion, and empirical
// checks of the two Weil-type bounds.
#pragma once

#include <pnpair/freeness.hpp>

#include <complex>

namespace pnpair {

using Complex = std::complex<double>;

// all divisors of a completely factored integer, ascending
inline std::vector<Int> all_integer_divisors(const FactoredInteger& f) {
    std::vector<Int> out = {1};
    for (const auto& [p, e] : f.factors()) {
        std::vector<Int> next;
        Int pk = 1;
        for (unsigned i = 0; i <= e; ++i) {
            for (const auto& d : out) next.push_back(d * pk);
            pk *= p;
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Int> squarefree_integer_divisors(const FactoredInteger& f) {
    std::vector<Int> out = {1};
    for (const auto& [p, e] : f.factors()) {
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

class CharacterOracle {
  public:
    static constexpr std::size_t kFieldLimit = std::size_t(1) << 12;

    explicit CharacterOracle(std::shared_ptr<const FreenessContext> ctx) : ctx_(std::move(ctx)) {
        const FieldTower& t = tower();
        if (t.q_pow_m() > Int(kFieldLimit))
            throw error("CharacterOracle: field too large for dlog tables");
        if (!ctx_->has_tables()) throw error("CharacterOracle: context lacks tables");
        Qm_ = t.q_pow_m().convert_to<std::size_t>();
        Q_ = Qm_ - 1;
        q_ = t.q().convert_to<std::size_t>();
        p_ = t.p();

        // roots of unity: e(2 pi i k / Q) and e(2 pi i k / p)
        rootQ_.resize(Q_);
        for (std::size_t k = 0; k < Q_; ++k)
            rootQ_[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(Q_));
        rootp_.resize(p_);
        for (std::size_t k = 0; k < p_; ++k)
            rootp_[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(p_));

        // element tables
        dlog_.assign(Qm_, 0);
        exp_.assign(Q_, 0);
        abstrace_.assign(Qm_, 0);
        for (std::size_t i = 0; i < Qm_; ++i) {
            FFElement e = t.from_index(Level::top, Int(i));
            Int dl = ctx_->dlog_of_index(Int(i));
            dlog_[i] = dl < 0 ? SIZE_MAX : dl.convert_to<std::size_t>();
            if (dl >= 0) exp_[dl.convert_to<std::size_t>()] = i;
            abstrace_[i] = t.trace_top_to_base(e);
        }
        // mid-level absolute trace, for the canonical character of F_q
        midtrace_.assign(q_, 0);
        for (std::size_t i = 0; i < q_; ++i)
            midtrace_[i] =
                t.trace_mid_to_base(t.from_index(Level::mid, Int(i))).coeffs()[0];

        // F_q-order of every additive shift
        build_additive_orders();
    }

    const FreenessContext& ctx() const { return *ctx_; }
    const FieldTower& tower() const { return ctx_->tower(); }
    std::size_t group_order() const { return Q_; }

    // ---- single characters ------------------------------------------------

    // multiplicative character with index j: chi_j(g^t) = e(2 pi i j t / Q)
    Complex chi(std::size_t j, std::size_t elem_idx) const {
        if (dlog_[elem_idx] == SIZE_MAX) return j % Q_ == 0 ? 1.0 : 0.0; // extension rule
        return rootQ_[j * dlog_[elem_idx] % Q_];
    }
    std::size_t chi_order(std::size_t j) const { return Q_ / std::gcd(j % Q_, Q_); }

    // canonical additive character of the top field
    Complex psi_hat0(std::size_t elem_idx) const { return rootp_[abstrace_[elem_idx]]; }
    // additive character with shift v: psi_v(x) = psi_hat0(v x)
    Complex psi_shift(std::size_t v_idx, std::size_t elem_idx) const {
        return psi_hat0(mul_idx(v_idx, elem_idx));
    }
    // canonical additive character of the mid field F_q
    Complex psi0_mid(std::size_t mid_idx) const { return rootp_[midtrace_[mid_idx]]; }

    // multiplicative characters of exact order d (indices j), d | Q
    std::vector<std::size_t> mult_characters_of_order(const Int& d) const {
        std::size_t dv = d.convert_to<std::size_t>();
        if (dv == 0 || Q_ % dv != 0) throw error("character order must divide q^m-1");
        std::vector<std::size_t> out;
        std::size_t step = Q_ / dv;
        for (std::size_t t = 0; t < dv; ++t)
            if (std::gcd(t, dv) == 1) out.push_back(t == 0 && dv == 1 ? 0 : t * step);
        if (dv == 1) out = {0};
        return out;
    }

    // additive shifts whose character has F_q-order h
    std::vector<std::size_t> additive_shifts_of_order(const FqPolynomial& h) const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < Qm_; ++v)
            if (divisor_poly(add_order_[v]) == h) out.push_back(v);
        return out;
    }
    // F_q-order of the shift-v character, as a monic divisor of x^m-1
    const FqPolynomial& additive_order_of_shift(std::size_t v) const {
        return divisor_poly(add_order_[v]);
    }

    // ---- characteristic functions ------------------------------------------

    // rho_u(alpha) ~ 1 iff alpha is u-free (Lemma 2.1 form)
    Complex rho_u(std::size_t elem_idx, const FactoredInteger& u) const {
        Rat theta = u.theta();
        Complex acc = 0;
        for (const Int& d : squarefree_integer_divisors(u)) {
            auto fd = factor(d);
            double mu = moebius(fd);
            double phi = fd.euler_phi().convert_to<double>();
            Complex inner = 0;
            for (std::size_t j : mult_characters_of_order(d)) inner += chi(j, elem_idx);
            acc += mu / phi * inner;
        }
        return acc * theta.convert_to<double>();
    }

    // tau_a(alpha) ~ 1 iff Tr_{top->mid}(alpha) = a
    Complex tau_a(std::size_t elem_idx, std::size_t a_mid_idx) const {
        Complex acc = 0;
        const FieldTower& t = tower();
        for (std::size_t u = 0; u < q_; ++u) {
            // psi_hat0(u * alpha) * psi0(-u a), with u ranging over F_q
            std::size_t ualpha = mul_mid_top(u, elem_idx);
            std::size_t ua = mid_mul_idx(u, a_mid_idx);
            std::size_t nua = mid_neg_idx(ua);
            acc += psi_hat0(ualpha) * psi0_mid(nua);
        }
        return acc / static_cast<double>(q_);
    }

    // kappa_g(alpha) ~ 1 iff alpha is g-free
    Complex kappa_g(std::size_t elem_idx, const PolyFactorization& g) const {
        double theta = theta_poly(g).convert_to<double>();
        Complex acc = 0;
        // squarefree divisors h of g: subsets of distinct irreducible factors
        std::size_t n = g.factors.size();
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            FqPolynomial h = FqPolynomial::one(g.poly.tower(), g.poly.level());
            int bits = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t(1) << i)) { h = h.mul(g.factors[i].first); ++bits; }
            double mu = bits % 2 == 0 ? 1.0 : -1.0;
            auto hf = factor_poly(h);
            double phi = phi_q(hf).convert_to<double>();
            Complex inner = 0;
            for (std::size_t v : additive_shifts_of_order(h)) inner += psi_shift(v, elem_idx);
            acc += mu / phi * inner;
        }
        return acc * theta;
    }

    // ---- expansion inner sums -------------------------------------------------

    // chi_{f,a} for one concrete character triple (chi_{j1}, chi_{j2}, psi_v):
    //   sum_{u in F_q} psi0(-a u) sum_{alpha not in U}
    //     chi_{j1}(alpha) chi_{j2}(f(alpha)) psi_v(alpha) psi_hat0(u alpha^{-1})
    Complex chi_fa(const RationalFunction& f, std::size_t a_mid_idx, std::size_t j1,
                   std::size_t j2, std::size_t v_idx) const {
        prepare_f(f, a_mid_idx);
        Complex acc = 0;
        for (const auto& e : feval_) {
            Complex c1 = j1 % Q_ == 0 ? 1.0 : rootQ_[j1 * e.dlog_alpha % Q_];
            Complex c2 = j2 % Q_ == 0 ? 1.0 : rootQ_[j2 * e.dlog_falpha % Q_];
            acc += c1 * c2 * psi_hat0(mul_idx(v_idx, e.alpha)) * e.usum;
        }
        return acc;
    }

    // N_{f,a,n}(l1, l2, g) reconstructed from the full character expansion
    double reconstruct_N(const RationalFunction& f, std::size_t a_mid_idx,
                         const FactoredInteger& l1, const FactoredInteger& l2,
                         const PolyFactorization& g) const {
        prepare_f(f, a_mid_idx);
        Complex acc = 0;
        auto d1s = squarefree_integer_divisors(l1);
        auto d2s = squarefree_integer_divisors(l2);
        std::size_t n = g.factors.size();
        for (const Int& d1 : d1s) {
            auto f1 = factor(d1);
            double w1 = static_cast<double>(moebius(f1)) / f1.euler_phi().convert_to<double>();
            auto js1 = mult_characters_of_order(d1);
            for (const Int& d2 : d2s) {
                auto f2 = factor(d2);
                double w2 = static_cast<double>(moebius(f2)) / f2.euler_phi().convert_to<double>();
                auto js2 = mult_characters_of_order(d2);
                for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
                    FqPolynomial h = FqPolynomial::one(g.poly.tower(), g.poly.level());
                    int bits = 0;
                    for (std::size_t i = 0; i < n; ++i)
                        if (mask & (std::size_t(1) << i)) {
                            h = h.mul(g.factors[i].first);
                            ++bits;
                        }
                    auto hf = factor_poly(h);
                    double w3 = (bits % 2 == 0 ? 1.0 : -1.0) / phi_q(hf).convert_to<double>();
                    auto vs = additive_shifts_of_order(h);
                    Complex inner = 0;
                    for (std::size_t j1 : js1)
                        for (std::size_t j2 : js2)
                            for (std::size_t v : vs) inner += chi_fa(f, a_mid_idx, j1, j2, v);
                    acc += w1 * w2 * w3 * inner;
                }
            }
        }
        double lead = (l1.theta() * l2.theta() * theta_poly(g)).convert_to<double>() /
                      static_cast<double>(q_);
        Complex out = acc * lead;
        return out.real();
    }

    // ---- Weil bound checks -------------------------------------------------------

    struct WeilCheck {
        bool applicable;
        double abs_sum;
        double bound;
        bool ok;
        std::string note;
    };

    // |sum_{alpha in F_q (mid), f defined} chi(f(alpha))| <= (d sum_j deg f_j - 1) sqrt(q)
    // where the tower's top field is F_{q^d}, chi a character of the top field,
    // applicable unless prod_{i<d} f(x^{q^i}) is an ord(chi)-th power.
    WeilCheck weil_mult_check(const RationalFunction& f, std::size_t j) const {
        const FieldTower& t = tower();
        unsigned d = t.m();
        std::size_t r = chi_order(j);
        if (r == 1) return {false, 0, 0, true, "trivial character: every f is a first power"};
        if (!product_precondition_holds(f, r))
            return {false, 0, 0, true, "prod f(x^{q^i}) is an ord(chi)-th power"};
        Complex acc = 0;
        for (std::size_t i = 0; i < q_; ++i) {
            FFElement alpha = t.lift_to_top(t.from_index(Level::mid, Int(i)));
            FFElement den = f.denominator().eval(alpha);
            if (den.is_zero()) continue;
            FFElement num = f.numerator().eval(alpha);
            if (num.is_zero()) continue;
            FFElement val = t.mul(num, t.inv(den));
            acc += chi(j, val.index().convert_to<std::size_t>());
        }
        unsigned degsum = distinct_factor_degree_sum(f);
        double bound = (static_cast<double>(d) * degsum - 1.0) * std::sqrt(static_cast<double>(q_));
        double s = std::abs(acc);
        return {true, s, bound, s <= bound + 1e-9, ""};
    }

    // |sum chi(f(alpha)) psi(g(alpha))| <= (D1+D2+D3+D4-1) q^{m/2}, g = vx + u/x
    WeilCheck weil_mixed_check(const RationalFunction& f, const FFElement& v, const FFElement& u,
                               std::size_t j, std::size_t psi_shift_idx) const {
        const FieldTower& t = tower();
        if (v.is_zero() && u.is_zero())
            return {false, 0, 0, true, "g = 0 is of the form r(x)^{q^m} - r(x)"};
        Complex acc = 0;
        for (std::size_t i = 0; i < Qm_; ++i) {
            FFElement alpha = t.from_index(Level::top, Int(i));
            // g(alpha) = v alpha + u alpha^{-1}: pole at 0 when u != 0
            if (alpha.is_zero() && !u.is_zero()) continue;
            FFElement den = f.denominator().eval(alpha);
            if (den.is_zero()) continue;
            FFElement num = f.numerator().eval(alpha);
            if (num.is_zero()) continue;
            FFElement fval = t.mul(num, t.inv(den));
            FFElement gval = t.mul(v, alpha);
            if (!alpha.is_zero()) gval = t.add(gval, t.mul(u, t.inv(alpha)));
            acc += chi(j, fval.index().convert_to<std::size_t>()) *
                   psi_shift(psi_shift_idx, gval.index().convert_to<std::size_t>());
        }
        unsigned D1 = distinct_factor_degree_sum(f);
        unsigned D2 = v.is_zero() ? 0 : 2 - 1; // deg(vx + u/x) = deg num - deg den
        if (!v.is_zero() && u.is_zero()) D2 = 1;
        unsigned D3 = u.is_zero() ? 0 : 1;     // denominator x
        unsigned D4 = 0;
        if (!u.is_zero()) {
            // x counts unless it already divides f's numerator or denominator
            auto xp = FqPolynomial::x(f.tower(), Level::top);
            bool xin = f.numerator().divisible_by(xp) || f.denominator().divisible_by(xp);
            D4 = xin ? 0 : 1;
        }
        double bound = (static_cast<double>(D1) + D2 + D3 + D4 - 1.0) *
                       std::pow(static_cast<double>(Qm_), 0.5);
        double s = std::abs(acc);
        return {true, s, bound, s <= bound + 1e-9, ""};
    }

    // index arithmetic helpers (public: the tests exercise them)
    std::size_t mul_idx(std::size_t a_idx, std::size_t b_idx) const {
        if (dlog_[a_idx] == SIZE_MAX || dlog_[b_idx] == SIZE_MAX) return 0; // zero element
        return exp_[(dlog_[a_idx] + dlog_[b_idx]) % Q_];
    }

  private:
    static constexpr double kPi = 3.14159265358979323846;

    void build_additive_orders() {
        const FieldTower& t = tower();
        const auto& xm1 = ctx_->xm1();
        divisors_ = all_divisors(xm1);
        add_order_.assign(Qm_, 0);
        for (std::size_t vi = 0; vi < Qm_; ++vi) {
            FFElement v = t.from_index(Level::top, Int(vi));
            for (std::size_t di = 0; di < divisors_.size(); ++di) {
                if (hstar_apply(divisors_[di], v).is_zero()) {
                    add_order_[vi] = di;
                    break;
                }
            }
        }
    }

    // w = sum_i h_i v^{q^{m-i}}; psi_v o h equals psi_w
    FFElement hstar_apply(const FqPolynomial& h, const FFElement& v) const {
        const FieldTower& t = tower();
        FFElement acc = t.zero(Level::top);
        for (int i = 0; i <= h.degree(); ++i) {
            const FFElement& ci = h.coeff(static_cast<unsigned>(i));
            if (ci.is_zero()) continue;
            FFElement conj = t.frobenius(v, (t.m() - static_cast<unsigned>(i) % t.m())
                                                % t.m());
            acc = t.add(acc, t.mul(t.lift_to_top(ci), conj));
        }
        return acc;
    }

    const FqPolynomial& divisor_poly(std::size_t id) const { return divisors_[id]; }

    std::size_t mul_mid_top(std::size_t mid_idx, std::size_t top_idx) const {
        const FieldTower& t = tower();
        FFElement u = t.lift_to_top(t.from_index(Level::mid, Int(mid_idx)));
        return mul_idx(u.index().convert_to<std::size_t>(), top_idx);
    }
    std::size_t mid_mul_idx(std::size_t a, std::size_t b) const {
        const FieldTower& t = tower();
        return t.mul(t.from_index(Level::mid, Int(a)), t.from_index(Level::mid, Int(b)))
            .index()
            .convert_to<std::size_t>();
    }
    std::size_t mid_neg_idx(std::size_t a) const {
        const FieldTower& t = tower();
        return t.neg(t.from_index(Level::mid, Int(a))).index().convert_to<std::size_t>();
    }

    unsigned distinct_factor_degree_sum(const RationalFunction& f) const {
        unsigned s = 0;
        for (const auto& [fac, e] : factor_poly(f.numerator()).factors) s += fac.degree();
        for (const auto& [fac, e] : factor_poly(f.denominator()).factors) s += fac.degree();
        return s;
    }

    // prod_{i<d} f(x^{q^i}) != h(x)^r, decided from the factorization over the
    // top field: all exponents divisible by r and the unit an r-th power.
    bool product_precondition_holds(const RationalFunction& f, std::size_t r) const {
        const FieldTower& t = tower();
        unsigned d = t.m();
        auto subst = [&](const FqPolynomial& poly, const Int& e) {
            // poly(x^e)
            std::vector<FFElement> cs(static_cast<std::size_t>(poly.degree()) *
                                              e.convert_to<std::size_t>() +
                                          1,
                                      t.zero(Level::top));
            for (int i = 0; i <= poly.degree(); ++i)
                cs[static_cast<std::size_t>(i) * e.convert_to<std::size_t>()] =
                    poly.coeff(static_cast<unsigned>(i));
            return FqPolynomial(&t, Level::top, cs);
        };
        FqPolynomial num = FqPolynomial::one(&t, Level::top);
        FqPolynomial den = FqPolynomial::one(&t, Level::top);
        Int qe = 1;
        for (unsigned i = 0; i < d; ++i) {
            num = num.mul(subst(f.numerator(), qe));
            den = den.mul(subst(f.denominator(), qe));
            qe *= t.q();
        }
        auto common = num.gcd(den);
        num = num.divmod(common).first;
        den = den.divmod(common).first;
        Int eg = 0;
        FFElement unit = t.one(Level::top);
        for (const auto& [fac, k] : factor_poly(num).factors) eg = igcd(eg, Int(k));
        for (const auto& [fac, k] : factor_poly(den).factors) eg = igcd(eg, Int(k));
        unit = t.mul(num.leading(), t.inv(den.leading()));
        if (eg % r != 0) return true; // not an r-th power: precondition holds
        // unit must be an r-th power: dlog divisible by gcd(r, Q)
        std::size_t ui = unit.index().convert_to<std::size_t>();
        std::size_t g = std::gcd(r, Q_);
        if (dlog_[ui] % g != 0) return true;
        return false;
    }

    struct FEval {
        std::size_t alpha;
        std::size_t dlog_alpha;
        std::size_t dlog_falpha;
        Complex usum; // sum_u psi_hat0(u alpha^{-1) psi0(-u a)
    };

    void prepare_f(const RationalFunction& f, std::size_t a_mid_idx) const {
        if (prepared_f_ && *prepared_f_ == f && prepared_a_ == a_mid_idx) return;
        const FieldTower& t = tower();
        feval_.clear();
        auto U = exclusion_set(f);
        for (std::size_t i = 0; i < Qm_; ++i) {
            if (U.contains(Int(i))) continue;
            FFElement alpha = t.from_index(Level::top, Int(i));
            FFElement val = f.eval(alpha);
            FEval e;
            e.alpha = i;
            e.dlog_alpha = dlog_[i];
            e.dlog_falpha = dlog_[val.index().convert_to<std::size_t>()];
            // u-sum over F_q with alpha^{-1} fixed
            FFElement ainv = t.inv(alpha);
            std::size_t ainv_idx = ainv.index().convert_to<std::size_t>();
            Complex us = 0;
            for (std::size_t u = 0; u < q_; ++u) {
                std::size_t ualpha = mul_mid_top(u, ainv_idx);
                std::size_t ua = mid_mul_idx(u, a_mid_idx);
                us += psi_hat0(ualpha) * psi0_mid(mid_neg_idx(ua));
            }
            e.usum = us;
            feval_.push_back(e);
        }
        prepared_f_ = f;
        prepared_a_ = a_mid_idx;
    }

    std::shared_ptr<const FreenessContext> ctx_;
    std::size_t Qm_ = 0, Q_ = 0, q_ = 0;
    std::uint64_t p_ = 0;
    std::vector<Complex> rootQ_, rootp_;
    std::vector<std::size_t> dlog_, exp_;
    std::vector<std::uint64_t> abstrace_;
    std::vector<std::uint64_t> midtrace_;
    std::vector<FqPolynomial> divisors_;
    std::vector<std::size_t> add_order_;

    mutable std::optional<RationalFunction> prepared_f_;
    mutable std::size_t prepared_a_ = SIZE_MAX;
    mutable std::vector<FEval> feval_;
};

} // namespace pnpair
