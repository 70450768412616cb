#include "kirby/laurent.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "kirby/errors.hpp"

namespace kirby {

long long monomial_degree(const Monomial& m) {
    long long d = 0;
    for (const auto& [name, e] : m) d += e;
    return d;
}

bool monomial_less(const Monomial& a, const Monomial& b) {
    long long da = monomial_degree(a), db = monomial_degree(b);
    if (da != db) return da < db;
    // Walk both exponent maps in variable-name order; a missing variable has
    // exponent 0. The first variable whose exponents differ decides.
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        std::string name;
        Exp ea = 0, eb = 0;
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            name = ia->first;
            ea = ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            name = ib->first;
            eb = ib->second;
            ++ib;
        } else {
            ea = ia->second;
            eb = ib->second;
            ++ia;
            ++ib;
        }
        if (ea != eb) return ea < eb;
    }
    return false;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out = a;
    for (const auto& [name, e] : b) {
        Exp ne = (out.count(name) ? out[name] : 0) + e;
        if (ne == 0)
            out.erase(name);
        else
            out[name] = ne;
    }
    return out;
}

Monomial monomial_inverse(const Monomial& a) {
    Monomial out;
    for (const auto& [name, e] : a) out[name] = -e;
    return out;
}

LaurentPoly LaurentPoly::constant(Int c) { return monomial(Monomial{}, std::move(c)); }

LaurentPoly LaurentPoly::variable(const std::string& name, Exp exponent) {
    Monomial m;
    if (exponent != 0) m[name] = exponent;
    return monomial(std::move(m), 1);
}

LaurentPoly LaurentPoly::monomial(Monomial m, Int coeff) {
    LaurentPoly p;
    if (coeff != 0) p.terms_.emplace(std::move(m), std::move(coeff));
    return p;
}

bool LaurentPoly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second == 1;
}

Int LaurentPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Int(0) : it->second;
}

void LaurentPoly::add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
    LaurentPoly out = *this;
    out += rhs;
    return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& rhs) const {
    LaurentPoly out = *this;
    out -= rhs;
    return out;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
    LaurentPoly out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : rhs.terms_) out.add_term(monomial_mul(ma, mb), ca * cb);
    return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
    *this = *this * rhs;
    return *this;
}

LaurentPoly LaurentPoly::pow(unsigned long long e) const {
    LaurentPoly acc = constant(1);
    LaurentPoly base = *this;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

LaurentPoly LaurentPoly::substitute(const std::string& var, const LaurentPoly& value) const {
    // The inverse of `value` is needed only if `var` occurs with a negative
    // exponent; compute it lazily and only for ring units.
    std::optional<LaurentPoly> value_inv;
    auto inverse_of_value = [&]() -> const LaurentPoly& {
        if (!value_inv) {
            if (value.terms_.size() != 1)
                throw UnsupportedError(
                    "substitute: negative exponent of '" + var +
                    "' requires a unit (single-term, coefficient +-1) substitution value");
            const auto& [m, c] = *value.terms_.begin();
            if (c != 1 && c != -1)
                throw UnsupportedError(
                    "substitute: negative exponent of '" + var +
                    "' requires coefficient +-1 in the substitution value");
            value_inv = monomial(monomial_inverse(m), c);
        }
        return *value_inv;
    };

    LaurentPoly out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(var);
        if (it == m.end()) {
            out.add_term(m, c);
            continue;
        }
        Exp e = it->second;
        Monomial rest = m;
        rest.erase(var);
        LaurentPoly factor = (e > 0) ? value.pow(static_cast<unsigned long long>(e))
                                     : inverse_of_value().pow(static_cast<unsigned long long>(-e));
        out += monomial(std::move(rest), c) * factor;
    }
    return out;
}

LaurentPoly LaurentPoly::invert_vars() const {
    LaurentPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(monomial_inverse(m), c);
    return out;
}

std::optional<std::pair<Exp, Exp>> LaurentPoly::exponent_range(const std::string& var) const {
    bool occurs = false;
    std::optional<std::pair<Exp, Exp>> range;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(var);
        Exp e = (it == m.end()) ? 0 : it->second;
        occurs = occurs || it != m.end();
        if (!range) {
            range = {e, e};
        } else {
            range->first = std::min(range->first, e);
            range->second = std::max(range->second, e);
        }
    }
    return occurs ? range : std::nullopt;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Int a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool need_coeff = (a != 1) || m.empty();
        if (need_coeff) os << a;
        bool need_star = need_coeff;
        for (const auto& [name, e] : m) {
            if (need_star) os << "*";
            need_star = true;
            os << name;
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

struct Token {
    enum Kind { Integer, Ident, Plus, Minus, Star, Caret, End } kind;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) return {Token::End, ""};
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return {Token::Integer, s_.substr(start, pos_ - start)};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            return {Token::Ident, s_.substr(start, pos_ - start)};
        }
        ++pos_;
        switch (c) {
            case '+': return {Token::Plus, "+"};
            case '-': return {Token::Minus, "-"};
            case '*': return {Token::Star, "*"};
            case '^': return {Token::Caret, "^"};
            default: throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
        }
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

class PolyParser {
public:
    explicit PolyParser(const std::string& s) : lex_(s) { advance(); }

    LaurentPoly parse() {
        LaurentPoly acc;
        int sign = 1;
        if (cur_.kind == Token::Plus) {
            advance();
        } else if (cur_.kind == Token::Minus) {
            sign = -1;
            advance();
        }
        acc += parse_term(sign);
        while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
            int s = (cur_.kind == Token::Plus) ? 1 : -1;
            advance();
            acc += parse_term(s);
        }
        if (cur_.kind != Token::End) throw ParseError("trailing input in polynomial: '" + cur_.text + "'");
        return acc;
    }

private:
    void advance() { cur_ = lex_.next(); }

    Exp parse_exponent() {
        int sign = 1;
        if (cur_.kind == Token::Minus) {
            sign = -1;
            advance();
        }
        if (cur_.kind != Token::Integer) throw ParseError("expected integer exponent after '^'");
        Exp e;
        try {
            e = std::stoll(cur_.text);
        } catch (const std::logic_error&) {
            throw ParseError("exponent out of range: " + cur_.text);
        }
        advance();
        return sign * e;
    }

    // factor := INTEGER | IDENT ('^' exponent)?
    LaurentPoly parse_factor() {
        if (cur_.kind == Token::Integer) {
            Int c(cur_.text);
            advance();
            return LaurentPoly::constant(c);
        }
        if (cur_.kind == Token::Ident) {
            std::string name = cur_.text;
            advance();
            Exp e = 1;
            if (cur_.kind == Token::Caret) {
                advance();
                e = parse_exponent();
            }
            return LaurentPoly::variable(name, e);
        }
        throw ParseError("expected a coefficient or variable, got '" + cur_.text + "'");
    }

    LaurentPoly parse_term(int sign) {
        LaurentPoly acc = parse_factor();
        for (;;) {
            if (cur_.kind == Token::Star) {
                advance();
                acc *= parse_factor();
            } else if (cur_.kind == Token::Integer || cur_.kind == Token::Ident) {
                // implicit product, e.g. "2t" or "t u"
                acc *= parse_factor();
            } else {
                break;
            }
        }
        return sign < 0 ? -acc : acc;
    }

    Lexer lex_;
    Token cur_{Token::End, ""};
};

} // namespace

LaurentPoly LaurentPoly::parse(const std::string& text) { return PolyParser(text).parse(); }

} // namespace kirby
