#pragma once

// Exact arithmetic over Q, Q[y^{+-1}], Q[y^{+-1}, t^{+-1}] and the fraction
// field Q(y, t).

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "flowtree/errors.hpp"

namespace flowtree {

using BigRat = mpq_class;

BigRat make_rat(long num, long den = 1);
int sign(const BigRat& x);
std::string to_string(const BigRat& x);
bool is_integer(const BigRat& x);

/// Laurent polynomial in y with rational coefficients.
class LaurentPoly {
public:
    using TermMap = std::map<int, BigRat>;

    LaurentPoly() = default;
    LaurentPoly(const BigRat& c);  // NOLINT: constants convert implicitly
    LaurentPoly(long c) : LaurentPoly(BigRat(c)) {}

    static LaurentPoly monomial(int exp, const BigRat& c = 1);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    BigRat coeff(int exp) const;
    BigRat eval(const BigRat& y) const;

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    LaurentPoly& operator*=(const BigRat& c);

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(LaurentPoly a, const BigRat& c) { return a *= c; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

    std::string to_string() const;

private:
    void add_term(int exp, const BigRat& c);
    TermMap terms_;
};

/// Laurent polynomial in (y, t). Terms are keyed by (y-exponent, t-exponent).
class BiLaurent {
public:
    using Exp = std::pair<int, int>;
    using TermMap = std::map<Exp, BigRat>;

    BiLaurent() = default;
    BiLaurent(const BigRat& c);  // NOLINT
    BiLaurent(long c) : BiLaurent(BigRat(c)) {}
    BiLaurent(const LaurentPoly& p);  // NOLINT

    static BiLaurent monomial(int yexp, int texp, const BigRat& c = 1);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    BigRat coeff(int yexp, int texp) const;

    /// f(y^k, t^k).
    BiLaurent substitute_power(int k) const;
    /// Multiply by y^dy t^dt.
    BiLaurent shifted(int dy, int dt) const;
    bool has_integer_coeffs() const;

    BiLaurent operator-() const;
    BiLaurent& operator+=(const BiLaurent& o);
    BiLaurent& operator-=(const BiLaurent& o);
    BiLaurent& operator*=(const BiLaurent& o);
    BiLaurent& operator*=(const BigRat& c);

    friend BiLaurent operator+(BiLaurent a, const BiLaurent& b) { return a += b; }
    friend BiLaurent operator-(BiLaurent a, const BiLaurent& b) { return a -= b; }
    friend BiLaurent operator*(const BiLaurent& a, const BiLaurent& b);
    friend BiLaurent operator*(BiLaurent a, const BigRat& c) { return a *= c; }
    friend bool operator==(const BiLaurent& a, const BiLaurent& b) { return a.terms_ == b.terms_; }

    std::string to_string() const;

private:
    void add_term(const Exp& e, const BigRat& c);
    TermMap terms_;
};

/// Element of Q(y, t) stored as numer/denom.
///
/// Normal form: the lexicographically smallest term of the denominator is
/// y^0 t^0 with coefficient 1.  When the denominator involves y only, common
/// univariate factors of numerator and denominator are cancelled as well,
/// which makes the representation unique in that case.  Equality always goes
/// through cross-multiplication.
class RatFunc {
public:
    RatFunc() : den_(1) {}
    RatFunc(const BiLaurent& p) : num_(p), den_(1) {}  // NOLINT
    RatFunc(const LaurentPoly& p) : num_(p), den_(1) {}  // NOLINT
    RatFunc(const BigRat& c) : num_(c), den_(1) {}  // NOLINT
    RatFunc(long c) : num_(c), den_(1) {}  // NOLINT
    RatFunc(BiLaurent num, BiLaurent den);

    const BiLaurent& numer() const { return num_; }
    const BiLaurent& denom() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }

    RatFunc operator-() const;
    RatFunc inverse() const;
    RatFunc& operator+=(const RatFunc& o);
    RatFunc& operator-=(const RatFunc& o);
    RatFunc& operator*=(const RatFunc& o);
    RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }

    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
    friend bool operator==(const RatFunc& a, const RatFunc& b);

    /// f(y^k, t^k).
    RatFunc substitute_power(int k) const;

    std::string to_string() const;

private:
    void normalize();
    BiLaurent num_;
    BiLaurent den_;
};

/// kappa(x) = (-1)^x (y^x - y^-x) / (y - y^-1).
LaurentPoly kappa(std::int64_t x);

/// Parse the canonical rendering (and the obvious generalizations: products,
/// quotients, parentheses) into a rational function.
RatFunc parse_ratfunc(const std::string& text);
BiLaurent parse_polynomial(const std::string& text);

}  // namespace flowtree
