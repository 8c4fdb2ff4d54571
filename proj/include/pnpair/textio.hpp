// Text formats for polynomials and rational functions.
//
// A polynomial is either a comma-separated list of integer coefficients,
// lowest degree first ("4,0,1" = x^2 + 4), or a symbolic expression in x
// where the letter b denotes the configured primitive element of F_q
// ("x^2+b^3*x+b").  A rational function is "f1 / f2".
#pragma once

#include <pnpair/freeness.hpp>

#include <cctype>

namespace pnpair {

namespace detail {

struct PolyParser {
    const FieldTower* t;
    Level lvl;
    FFElement beta; // value of the symbol b
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::uint64_t parse_uint() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw error("polynomial parse: expected a number at offset " + std::to_string(pos));
        std::uint64_t v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return v;
    }

    // factor := UINT | b [^ UINT] | x [^ UINT]
    // term   := factor (* factor)*
    // poly   := [+-] term ([+-] term)*
    FqPolynomial parse() {
        std::vector<FFElement> acc(1, t->zero(lvl));
        bool first = true;
        while (true) {
            skip_ws();
            if (pos >= s.size()) break;
            int sign = 1;
            if (eat('+')) {
            } else if (eat('-')) {
                sign = -1;
            } else if (!first) {
                throw error("polynomial parse: expected + or - at offset " + std::to_string(pos));
            }
            first = false;
            auto [coef, deg] = parse_term();
            if (sign < 0) coef = t->neg(coef);
            if (acc.size() <= deg) acc.resize(deg + 1, t->zero(lvl));
            acc[deg] = t->add(acc[deg], coef);
        }
        return {t, lvl, acc};
    }

    std::pair<FFElement, std::size_t> parse_term() {
        FFElement coef = t->one(lvl);
        std::size_t deg = 0;
        bool more = true;
        bool any = false;
        while (more) {
            skip_ws();
            if (pos >= s.size()) break;
            char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::uint64_t v = parse_uint();
                coef = t->mul(coef, scalar(v));
                any = true;
            } else if (c == 'b' || c == 'B') {
                ++pos;
                std::uint64_t e = eat('^') ? parse_uint() : 1;
                coef = t->mul(coef, t->pow(beta, Int(e)));
                any = true;
            } else if (c == 'x' || c == 'X') {
                ++pos;
                std::uint64_t e = eat('^') ? parse_uint() : 1;
                deg += e;
                any = true;
            } else {
                throw error(std::string("polynomial parse: unexpected character '") + c + "'");
            }
            more = eat('*');
            if (!more) {
                skip_ws();
                // implicit products like "b^3x" are also accepted
                if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X' || s[pos] == 'b' ||
                                       s[pos] == 'B' ||
                                       std::isdigit(static_cast<unsigned char>(s[pos]))))
                    more = true;
            }
        }
        if (!any) throw error("polynomial parse: empty term");
        return {coef, deg};
    }

    FFElement scalar(std::uint64_t v) const {
        // an integer names the element with this index (base-p digits)
        Int q = t->level_size(lvl);
        return t->from_index(lvl, Int(v) % q);
    }
};

} // namespace detail

// Parse either coefficient-list or symbolic form.  beta is the value the
// symbol b stands for (pass the tower's mid generator when in doubt).
inline FqPolynomial parse_polynomial(const FieldTower* t, Level lvl, std::string_view text,
                                     const FFElement& beta_in) {
    FFElement beta = beta_in;
    if (lvl == Level::top && beta.level() == Level::mid) beta = t->lift_to_top(beta);
    if (text.find(',') != std::string_view::npos) {
        std::vector<FFElement> cs;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t comma = text.find(',', start);
            std::string tok(text.substr(start, comma == std::string_view::npos ? comma
                                                                               : comma - start));
            bool neg = false;
            std::size_t i = 0;
            while (i < tok.size() && std::isspace(static_cast<unsigned char>(tok[i]))) ++i;
            if (i < tok.size() && (tok[i] == '-' || tok[i] == '+')) neg = tok[i++] == '-';
            Int v = 0;
            bool digits = false;
            for (; i < tok.size(); ++i) {
                if (std::isdigit(static_cast<unsigned char>(tok[i]))) {
                    v = v * 10 + (tok[i] - '0');
                    digits = true;
                } else if (!std::isspace(static_cast<unsigned char>(tok[i]))) {
                    throw error("polynomial parse: bad coefficient token '" + tok + "'");
                }
            }
            if (!digits) throw error("polynomial parse: bad coefficient token '" + tok + "'");
            Int q = t->level_size(lvl);
            v %= q;
            FFElement e = t->from_index(lvl, v);
            cs.push_back(neg ? t->neg(e) : e);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return {t, lvl, cs};
    }
    detail::PolyParser p{t, lvl, beta, text};
    return p.parse();
}

inline FqPolynomial parse_polynomial(const FieldTower* t, Level lvl, std::string_view text) {
    return parse_polynomial(t, lvl, text, t->one(lvl));
}

// "f1 / f2"; a missing denominator means f2 = 1
inline RationalFunction parse_rational_function(const FieldTower* t, std::string_view text,
                                                const FFElement& beta) {
    auto slash = text.find('/');
    FqPolynomial f1 = parse_polynomial(t, Level::top, text.substr(0, slash), beta);
    FqPolynomial f2 = slash == std::string_view::npos
                          ? FqPolynomial::one(t, Level::top)
                          : parse_polynomial(t, Level::top, text.substr(slash + 1), beta);
    return {std::move(f1), std::move(f2)};
}

// render with integer indices as coefficients, lowest first
inline std::string format_polynomial(const FqPolynomial& g) {
    if (g.is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= g.degree(); ++i) {
        if (i) out += ",";
        out += g.coeff(static_cast<unsigned>(i)).index().str();
    }
    return out;
}

} // namespace pnpair
