#include <doctest.h>

#include "flowtree/algebra.hpp"
#include "flowtree/rng.hpp"

using namespace flowtree;

namespace {

BigRat power(const BigRat& x, int e) {
    BigRat out = 1;
    BigRat base = e < 0 ? BigRat(1 / x) : x;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) out *= base;
    return out;
}

BigRat eval2(const BiLaurent& p, const BigRat& y, const BigRat& t) {
    BigRat s = 0;
    for (const auto& [e, c] : p.terms()) s += c * power(y, e.first) * power(t, e.second);
    return s;
}

BigRat eval2(const RatFunc& f, const BigRat& y, const BigRat& t) {
    return eval2(f.numer(), y, t) / eval2(f.denom(), y, t);
}

BiLaurent random_bi(CounterRng& rng, int terms, bool with_t) {
    BiLaurent p;
    for (int i = 0; i < terms; ++i)
        p += BiLaurent::monomial(static_cast<int>(rng.uniform(-3, 3)), with_t ? static_cast<int>(rng.uniform(-1, 2)) : 0,
                                 make_rat(static_cast<long>(rng.uniform(-5, 5)), static_cast<long>(rng.uniform(1, 3))));
    return p;
}

const std::vector<std::pair<BigRat, BigRat>> kPoints = {
    {make_rat(2), make_rat(3)}, {make_rat(-3, 2), make_rat(5, 7)}, {make_rat(7, 3), make_rat(-2)}};

}  // namespace

TEST_CASE("kappa values") {
    CHECK(kappa(0).is_zero());
    CHECK(kappa(1) == LaurentPoly(-1));
    CHECK(kappa(2) == LaurentPoly::monomial(-1) + LaurentPoly::monomial(1));
    CHECK(kappa(3) == -(LaurentPoly::monomial(-2) + LaurentPoly(1) + LaurentPoly::monomial(2)));
    for (int x = -20; x <= 20; ++x) {
        CHECK(kappa(-x) == -kappa(x));
        long expected = (x % 2 == 0 ? 1 : -1) * x;
        CHECK(kappa(x).eval(1) == BigRat(expected));
        // (y - 1/y) kappa(x) = (-1)^x (y^x - y^-x), checked at a point
        BigRat y = make_rat(3, 2);
        BigRat lhs = (y - 1 / y) * kappa(x).eval(y);
        BigRat rhs = (x % 2 == 0 ? 1 : -1) * (power(y, x) - power(y, -x));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Laurent arithmetic agrees with evaluation") {
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        BiLaurent p = random_bi(rng, 4, true), q = random_bi(rng, 3, true);
        for (const auto& [y, t] : kPoints) {
            CHECK(eval2(p * q, y, t) == eval2(p, y, t) * eval2(q, y, t));
            CHECK(eval2(p + q, y, t) == eval2(p, y, t) + eval2(q, y, t));
            CHECK(eval2(p - q, y, t) == eval2(p, y, t) - eval2(q, y, t));
            CHECK(eval2(p.substitute_power(3), y, t) == eval2(p, power(y, 3), power(t, 3)));
        }
    }
    CHECK_THROWS_AS(BiLaurent(1).substitute_power(0), Error);
}

TEST_CASE("rational functions") {
    CounterRng rng(12, 0);
    for (int trial = 0; trial < 40; ++trial) {
        bool with_t = trial % 2 == 1;
        BiLaurent a = random_bi(rng, 3, with_t), b = random_bi(rng, 3, with_t);
        BiLaurent c = random_bi(rng, 2, with_t), d = random_bi(rng, 2, with_t);
        if (b.is_zero() || d.is_zero() || c.is_zero()) continue;
        bool defined = true;
        for (const auto& [y, t] : kPoints)
            defined &= eval2(b, y, t) != 0 && eval2(d, y, t) != 0 && eval2(c, y, t) != 0;
        if (!defined) continue;
        RatFunc f(a, b), g(c, d);
        for (const auto& [y, t] : kPoints) {
            CHECK(eval2(f + g, y, t) == eval2(f, y, t) + eval2(g, y, t));
            CHECK(eval2(f * g, y, t) == eval2(f, y, t) * eval2(g, y, t));
            CHECK(eval2(f / g, y, t) == eval2(f, y, t) / eval2(g, y, t));
        }
        CHECK((f - f).is_zero());
        CHECK(f * g / g == f);
        CHECK(parse_ratfunc(f.to_string()) == f);
    }
}

TEST_CASE("normal form cancels univariate factors") {
    BiLaurent y = BiLaurent::monomial(1, 0);
    RatFunc f(y * y - BiLaurent(1), y - BiLaurent(1));
    CHECK(f.is_polynomial());
    CHECK(f.numer() == y + BiLaurent(1));
    RatFunc g(BiLaurent::monomial(3, 0, 2), BiLaurent::monomial(1, 0, 4));
    CHECK(g.is_polynomial());
    CHECK(g.to_string() == "1/2*y^2");
    CHECK(RatFunc(y, y + BiLaurent(1)) == RatFunc(y * y, y * y + y));
    CHECK_FALSE(RatFunc(y, y + BiLaurent(1)) == RatFunc(y, y + BiLaurent(2)));
    CHECK_THROWS_AS(RatFunc().inverse(), Error);
}

TEST_CASE("canonical rendering") {
    CHECK(BiLaurent().to_string() == "0");
    CHECK(BiLaurent(1).to_string() == "1");
    CHECK(BiLaurent(-1).to_string() == "-1");
    CHECK(BiLaurent::monomial(2, 1, 2).to_string() == "2*y^2*t");
    CHECK(BiLaurent::monomial(-1, 0).to_string() == "y^-1");
    CHECK((-(BiLaurent::monomial(-1, 0) + BiLaurent::monomial(1, 0))).to_string() == "-y^-1 - y");
    CHECK((BiLaurent::monomial(0, 3) + BiLaurent::monomial(0, 0) + BiLaurent::monomial(-2, 1, make_rat(-3, 4)))
              .to_string() == "-3/4*y^-2*t + 1 + t^3");
    CHECK(kappa(2).to_string() == "y^-1 + y");
    CHECK(RatFunc(BiLaurent::monomial(1, 0), BiLaurent(1) + BiLaurent::monomial(2, 0)).to_string() == "(y)/(1 + y^2)");
}

TEST_CASE("parsing") {
    CHECK(parse_polynomial("2*y^2*t - y^-1 + 3") ==
          BiLaurent::monomial(2, 1, 2) - BiLaurent::monomial(-1, 0) + BiLaurent(3));
    CHECK(parse_polynomial("(y + 1)^2") ==
          BiLaurent::monomial(2, 0) + BiLaurent::monomial(1, 0, 2) + BiLaurent(1));
    CHECK(parse_polynomial("y^-2 + 1 + y^2") == parse_polynomial("y^2+1+y^-2"));
    CHECK(parse_ratfunc("(y^2 - 1)/(y - 1)") == RatFunc(parse_polynomial("y + 1")));
    CHECK(parse_ratfunc("1/2") == RatFunc(make_rat(1, 2)));
    CHECK_THROWS_AS(parse_polynomial("1/(1 + y)"), Error);
    CHECK_THROWS_AS(parse_ratfunc("y^"), Error);
    CHECK_THROWS_AS(parse_ratfunc("x + 1"), Error);
    CHECK_THROWS_AS(parse_ratfunc("(y"), Error);
    CHECK_THROWS_AS(parse_ratfunc("1/(y - y)"), Error);
    CHECK_THROWS_AS(parse_ratfunc(""), Error);
}
