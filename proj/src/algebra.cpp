#include "flowtree/algebra.hpp"

#include <cctype>
#include <cstdlib>

namespace flowtree {

BigRat make_rat(long num, long den) {
    if (den == 0) throw Error(ErrorKind::ZeroDivision, "zero denominator");
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

int sign(const BigRat& x) { return sgn(x); }

std::string to_string(const BigRat& x) { return x.get_str(); }

bool is_integer(const BigRat& x) { return x.get_den() == 1; }

namespace {

// Shared renderer: terms arrive sorted by (y, t).
struct RenderTerm {
    int yexp;
    int texp;
    const BigRat* coeff;
};

std::string render_var(char name, int exp) {
    if (exp == 0) return {};
    if (exp == 1) return std::string(1, name);
    return std::string(1, name) + "^" + std::to_string(exp);
}

std::string render(const std::vector<RenderTerm>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& term : terms) {
        std::string mono = render_var('y', term.yexp);
        std::string tpart = render_var('t', term.texp);
        if (!tpart.empty()) mono = mono.empty() ? tpart : mono + "*" + tpart;
        bool neg = sign(*term.coeff) < 0;
        BigRat mag = abs(*term.coeff);
        std::string body;
        if (mono.empty())
            body = to_string(mag);
        else if (mag == 1)
            body = mono;
        else
            body = to_string(mag) + "*" + mono;
        if (first)
            out += neg ? "-" + body : body;
        else
            out += (neg ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(const BigRat& c) {
    if (c != 0) terms_.emplace(0, c);
}

LaurentPoly LaurentPoly::monomial(int exp, const BigRat& c) {
    LaurentPoly p;
    p.add_term(exp, c);
    return p;
}

BigRat LaurentPoly::coeff(int exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? BigRat(0) : it->second;
}

BigRat LaurentPoly::eval(const BigRat& y) const {
    if (y == 0 && !terms_.empty() && terms_.begin()->first < 0)
        throw Error(ErrorKind::ZeroDivision, "negative power of y evaluated at 0");
    BigRat sum = 0;
    for (const auto& [e, c] : terms_) {
        BigRat p = 1;
        BigRat base = e < 0 ? BigRat(1 / y) : y;
        for (int i = 0; i < std::abs(e); ++i) p *= base;
        sum += c * p;
    }
    return sum;
}

void LaurentPoly::add_term(int exp, const BigRat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(exp, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly& LaurentPoly::operator*=(const BigRat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

std::string LaurentPoly::to_string() const {
    std::vector<RenderTerm> ts;
    for (const auto& [e, c] : terms_) ts.push_back({e, 0, &c});
    return render(ts);
}

// ------------------------------------------------------------------ BiLaurent

BiLaurent::BiLaurent(const BigRat& c) {
    if (c != 0) terms_.emplace(Exp{0, 0}, c);
}

BiLaurent::BiLaurent(const LaurentPoly& p) {
    for (const auto& [e, c] : p.terms()) terms_.emplace(Exp{e, 0}, c);
}

BiLaurent BiLaurent::monomial(int yexp, int texp, const BigRat& c) {
    BiLaurent p;
    p.add_term({yexp, texp}, c);
    return p;
}

bool BiLaurent::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == Exp{0, 0} && terms_.begin()->second == 1;
}

BigRat BiLaurent::coeff(int yexp, int texp) const {
    auto it = terms_.find({yexp, texp});
    return it == terms_.end() ? BigRat(0) : it->second;
}

BiLaurent BiLaurent::substitute_power(int k) const {
    if (k < 1) throw Error(ErrorKind::InvalidInput, "substitute_power needs k >= 1");
    BiLaurent r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(Exp{e.first * k, e.second * k}, c);
    return r;
}

BiLaurent BiLaurent::shifted(int dy, int dt) const {
    BiLaurent r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(Exp{e.first + dy, e.second + dt}, c);
    return r;
}

bool BiLaurent::has_integer_coeffs() const {
    for (const auto& [e, c] : terms_)
        if (!is_integer(c)) return false;
    return true;
}

void BiLaurent::add_term(const Exp& e, const BigRat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

BiLaurent BiLaurent::operator-() const {
    BiLaurent r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

BiLaurent& BiLaurent::operator+=(const BiLaurent& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

BiLaurent& BiLaurent::operator-=(const BiLaurent& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

BiLaurent operator*(const BiLaurent& a, const BiLaurent& b) {
    BiLaurent r;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            r.add_term({ea.first + eb.first, ea.second + eb.second}, ca * cb);
    return r;
}

BiLaurent& BiLaurent::operator*=(const BiLaurent& o) { return *this = *this * o; }

BiLaurent& BiLaurent::operator*=(const BigRat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

std::string BiLaurent::to_string() const {
    std::vector<RenderTerm> ts;
    for (const auto& [e, c] : terms_) ts.push_back({e.first, e.second, &c});
    return render(ts);
}

// -------------------------------------------------------------------- RatFunc

namespace {

// Dense univariate polynomial, coefficient i belongs to x^i.
using UPoly = std::vector<BigRat>;

void trim(UPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

// Quotient and remainder of a by b (b nonzero).
std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
    trim(a);
    UPoly q;
    int db = degree(b);
    if (degree(a) < db) return {q, a};
    q.assign(a.size() - b.size() + 1, BigRat(0));
    while (!a.empty() && degree(a) >= db) {
        int shift = degree(a) - db;
        BigRat f = a.back() / b.back();
        q[shift] = f;
        for (int i = 0; i <= db; ++i) a[i + shift] -= f * b[i];
        trim(a);
    }
    trim(q);
    return {q, a};
}

UPoly monic_gcd(UPoly a, UPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        BigRat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

// Views a BiLaurent in one variable (var 0 = y, 1 = t) with coefficients that
// are Laurent in the other variable: other exponent -> dense poly after a shift
// by the minimal exponent in `var`.
struct Slices {
    std::map<int, UPoly> polys;
    std::map<int, int> shifts;
};

Slices slice(const BiLaurent& p, int var) {
    Slices s;
    std::map<int, std::map<int, BigRat>> grouped;
    for (const auto& [e, c] : p.terms()) {
        int main_exp = var == 0 ? e.first : e.second;
        int other = var == 0 ? e.second : e.first;
        grouped[other][main_exp] = c;
    }
    for (const auto& [other, row] : grouped) {
        int lo = row.begin()->first;
        int hi = row.rbegin()->first;
        UPoly poly(hi - lo + 1, BigRat(0));
        for (const auto& [e, c] : row) poly[e - lo] = c;
        s.polys[other] = std::move(poly);
        s.shifts[other] = lo;
    }
    return s;
}

BiLaurent unslice(const std::map<int, UPoly>& polys, const std::map<int, int>& shifts, int var) {
    BiLaurent out;
    for (const auto& [other, poly] : polys) {
        int lo = shifts.at(other);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (poly[i] == 0) continue;
            int main_exp = lo + static_cast<int>(i);
            out += var == 0 ? BiLaurent::monomial(main_exp, other, poly[i])
                            : BiLaurent::monomial(other, main_exp, poly[i]);
        }
    }
    return out;
}

// Scales num/den so that den's smallest term is 1 * y^0 t^0.
void monomial_normalize(BiLaurent& num, BiLaurent& den) {
    const auto& [e, c] = *den.terms().begin();
    int dy = -e.first;
    int dt = -e.second;
    BigRat inv = 1 / c;
    num = num.shifted(dy, dt) * inv;
    den = den.shifted(dy, dt) * inv;
}

}  // namespace

RatFunc::RatFunc(BiLaurent num, BiLaurent den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorKind::ZeroDivision, "division by the zero function");
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = BiLaurent(1);
        return;
    }
    if (den_.is_one()) return;
    monomial_normalize(num_, den_);
    if (den_.is_one()) return;

    // Univariate cancellation when the denominator lives in one variable.
    int var = -1;
    bool y_only = true;
    bool t_only = true;
    for (const auto& [e, c] : den_.terms()) {
        if (e.second != 0) y_only = false;
        if (e.first != 0) t_only = false;
    }
    if (y_only)
        var = 0;
    else if (t_only)
        var = 1;
    if (var < 0) return;

    Slices ds = slice(den_, var);
    UPoly d = ds.polys.begin()->second;
    Slices ns = slice(num_, var);
    UPoly g = d;
    for (const auto& [other, poly] : ns.polys) {
        g = monic_gcd(g, poly);
        if (degree(g) == 0) return;
    }
    for (auto& [other, poly] : ns.polys) poly = divmod(poly, g).first;
    ds.polys.begin()->second = divmod(d, g).first;
    num_ = unslice(ns.polys, ns.shifts, var);
    den_ = unslice(ds.polys, ds.shifts, var);
    monomial_normalize(num_, den_);
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFunc RatFunc::inverse() const {
    if (num_.is_zero()) throw Error(ErrorKind::ZeroDivision, "inverse of the zero function");
    return RatFunc(den_, num_);
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    normalize();
    return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
    if (is_zero()) return *this;
    if (o.is_zero()) return *this = RatFunc();
    num_ *= o.num_;
    if (!o.den_.is_one()) den_ *= o.den_;
    normalize();
    return *this;
}

bool operator==(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return a.num_ * b.den_ == b.num_ * a.den_;
}

RatFunc RatFunc::substitute_power(int k) const {
    return RatFunc(num_.substitute_power(k), den_.substitute_power(k));
}

std::string RatFunc::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---------------------------------------------------------------------- kappa

LaurentPoly kappa(std::int64_t x) {
    LaurentPoly r;
    if (x == 0) return r;
    std::int64_t n = x < 0 ? -x : x;
    BigRat c = ((n % 2 == 0) ? 1 : -1) * (x < 0 ? -1 : 1);
    for (std::int64_t j = 0; j < n; ++j) r += LaurentPoly::monomial(static_cast<int>(n - 1 - 2 * j), c);
    return r;
}

// --------------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    RatFunc parse() {
        RatFunc v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::InvalidInput,
                    "cannot parse polynomial \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc expr() {
        skip();
        RatFunc v;
        bool neg = accept('-');
        if (!neg) accept('+');
        v = term();
        if (neg) v = -v;
        for (;;) {
            if (accept('+'))
                v += term();
            else if (accept('-'))
                v -= term();
            else
                return v;
        }
    }

    RatFunc term() {
        RatFunc v = unary();
        for (;;) {
            if (accept('*'))
                v *= unary();
            else if (accept('/'))
                v /= unary();
            else
                return v;
        }
    }

    RatFunc unary() {
        if (accept('-')) return -unary();
        return power();
    }

    long exponent() {
        skip();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            neg = s_[pos_] == '-';
            ++pos_;
        }
        std::string digits = read_digits();
        if (digits.empty()) fail("expected exponent");
        if (digits.size() > 6) fail("exponent too large");
        long e = std::stol(digits);
        return neg ? -e : e;
    }

    std::string read_digits() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    RatFunc power() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == 'y' || c == 't') {
            ++pos_;
            long e = accept('^') ? exponent() : 1;
            return c == 'y' ? RatFunc(BiLaurent::monomial(static_cast<int>(e), 0))
                            : RatFunc(BiLaurent::monomial(0, static_cast<int>(e)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits = read_digits();
            return RatFunc(BigRat(mpz_class(digits)));
        }
        if (accept('(')) {
            RatFunc v = expr();
            if (!accept(')')) fail("expected ')'");
            if (accept('^')) {
                long e = exponent();
                RatFunc base = e < 0 ? v.inverse() : v;
                RatFunc out(1);
                for (long i = 0; i < std::labs(e); ++i) out *= base;
                return out;
            }
            return v;
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(const std::string& text) { return Parser(text).parse(); }

BiLaurent parse_polynomial(const std::string& text) {
    RatFunc f = parse_ratfunc(text);
    if (!f.is_polynomial())
        throw Error(ErrorKind::InvalidInput, "expected a Laurent polynomial, got " + f.to_string());
    return f.numer();
}

}  // namespace flowtree
