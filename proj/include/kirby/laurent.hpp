#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "kirby/ints.hpp"

namespace kirby {

// Multivariate Laurent monomial: variable name -> exponent. Zero exponents
// are never stored, so equality of maps is equality of monomials.
using Exp = long long;
using Monomial = std::map<std::string, Exp>;

long long monomial_degree(const Monomial& m);
// Graded lexicographic order: total degree first, then variable-by-variable
// in name order (missing variable counts as exponent 0).
bool monomial_less(const Monomial& a, const Monomial& b);
Monomial monomial_mul(const Monomial& a, const Monomial& b);
Monomial monomial_inverse(const Monomial& a);

struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(b, a); }
};

// Exact Laurent polynomial over Z in any number of variables. Terms are kept
// in descending graded-lex order, which fixes both iteration order and the
// printed form — reports built on this type are byte-stable.
class LaurentPoly {
public:
    using TermMap = std::map<Monomial, Int, MonomialGreater>;

    LaurentPoly() = default;

    static LaurentPoly constant(Int c);
    static LaurentPoly variable(const std::string& name, Exp exponent = 1);
    static LaurentPoly monomial(Monomial m, Int coeff);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    const TermMap& terms() const { return terms_; }
    Int coeff(const Monomial& m) const;

    bool operator==(const LaurentPoly&) const = default;

    LaurentPoly& operator+=(const LaurentPoly& rhs);
    LaurentPoly& operator-=(const LaurentPoly& rhs);
    LaurentPoly operator+(const LaurentPoly& rhs) const;
    LaurentPoly operator-(const LaurentPoly& rhs) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly& rhs) const;
    LaurentPoly& operator*=(const LaurentPoly& rhs);
    LaurentPoly pow(unsigned long long e) const;

    // Replace every occurrence of `var` by `value`. Negative exponents of
    // `var` require `value` to be a unit of the Laurent ring (a single term
    // with coefficient +-1); otherwise UnsupportedError is thrown.
    LaurentPoly substitute(const std::string& var, const LaurentPoly& value) const;

    // p(x_1, ..., x_n) -> p(x_1^-1, ..., x_n^-1).
    LaurentPoly invert_vars() const;
    bool is_symmetric() const { return *this == invert_vars(); }

    // Smallest and largest exponent of `var` over ALL terms (a term without
    // the variable counts as exponent 0); nullopt if the variable occurs in
    // no term at all.
    std::optional<std::pair<Exp, Exp>> exponent_range(const std::string& var) const;

    // Canonical text form, e.g. "2*t^2 - 3*t + 2 - 3*t^-1 + 2*t^-2", "0".
    std::string to_string() const;
    // Inverse of to_string; also accepts implicit products like "2t".
    static LaurentPoly parse(const std::string& text);

private:
    void add_term(const Monomial& m, const Int& c);
    TermMap terms_;
};

} // namespace kirby
