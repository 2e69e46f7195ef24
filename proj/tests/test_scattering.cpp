#include <doctest.h>

#include "flowtree/checks.hpp"
#include "flowtree/scattering.hpp"

using namespace flowtree;

namespace {

// Quantum torus x^a x^b = (-y)^<a,b> x^(a+b), truncated above a total degree.
// z^n = x^n / (y - y^-1) embeds the kappa-bracket algebra as commutators.
using Assoc = std::map<DimVec, RatFunc>;

RatFunc twist(std::int64_t k) {
    return RatFunc(BiLaurent::monomial(static_cast<int>(k), 0, BigRat(k % 2 == 0 ? 1 : -1)));
}

void add_to(Assoc& acc, const DimVec& n, const RatFunc& c) {
    RatFunc v = acc[n] + c;
    if (v.is_zero())
        acc.erase(n);
    else
        acc[n] = v;
}

Assoc mul(const Assoc& a, const Assoc& b, const IntMatrix& form, int bound) {
    Assoc out;
    for (const auto& [m, c] : a)
        for (const auto& [n, d] : b) {
            DimVec s(m.size());
            for (std::size_t i = 0; i < m.size(); ++i) s[i] = m[i] + n[i];
            if (degree(s) > bound) continue;
            add_to(out, s, c * d * twist(pair(form, m, n)));
        }
    return out;
}

Assoc scaled(const Assoc& a, const RatFunc& c) {
    Assoc out;
    for (const auto& [n, v] : a) add_to(out, n, v * c);
    return out;
}

Assoc sum(const Assoc& a, const Assoc& b) {
    Assoc out = a;
    for (const auto& [n, v] : b) add_to(out, n, v);
    return out;
}

Assoc exp_series(const Assoc& x, const IntMatrix& form, int bound, std::size_t rank) {
    Assoc out{{DimVec(rank, 0), RatFunc(1)}};
    Assoc power = out;
    for (int k = 1; k <= bound; ++k) {
        power = scaled(mul(power, x, form, bound), RatFunc(make_rat(1, k)));
        out = sum(out, power);
    }
    return out;
}

Assoc log_series(const Assoc& one_plus_u, const IntMatrix& form, int bound, std::size_t rank) {
    Assoc u = one_plus_u;
    add_to(u, DimVec(rank, 0), RatFunc(-1));
    Assoc out, power{{DimVec(rank, 0), RatFunc(1)}};
    for (int k = 1; k <= bound; ++k) {
        power = mul(power, u, form, bound);
        out = sum(out, scaled(power, RatFunc(make_rat(k % 2 ? 1 : -1, k))));
    }
    return out;
}

RatFunc y_minus_inv() { return RatFunc(BiLaurent::monomial(1, 0) - BiLaurent::monomial(-1, 0)); }

Assoc to_assoc(const GradedLieElt& e) {
    Assoc out;
    for (const auto& [n, c] : e.terms()) add_to(out, n, c / y_minus_inv());
    return out;
}

GradedLieElt from_assoc(const Assoc& a) {
    GradedLieElt out;
    for (const auto& [n, c] : a) out.add_term(n, c * y_minus_inv());
    return out;
}

GradedLieElt random_element(CounterRng& rng, std::size_t rank, int bound, int terms) {
    GradedLieElt e;
    for (int k = 0; k < terms; ++k) {
        DimVec n(rank, 0);
        while (degree(n) == 0 || degree(n) > bound)
            for (auto& x : n) x = rng.uniform(0, 2);
        BiLaurent c = BiLaurent::monomial(static_cast<int>(rng.uniform(-2, 2)), 0,
                                          BigRat(static_cast<long>(rng.uniform(-3, 3))));
        if (!c.is_zero()) e.add_term(n, RatFunc(c));
    }
    return e;
}

const IntMatrix kRank3{{0, 2, -1}, {-2, 0, 3}, {1, -3, 0}};

}  // namespace

TEST_CASE("kappa bracket") {
    LieAlgebra alg{IntMatrix{{0, 2}, {-2, 0}}, 4, false};
    auto a = GradedLieElt::monomial({1, 0}, RatFunc(1));
    auto b = GradedLieElt::monomial({0, 1}, RatFunc(1));
    CHECK(lie_bracket(alg, a, b) == GradedLieElt::monomial({1, 1}, RatFunc(kappa(2))));
    CHECK(lie_bracket(alg, b, a) == GradedLieElt::monomial({1, 1}, RatFunc(-kappa(2))));
    CHECK(lie_bracket(alg, a, a).is_zero());
    // truncation drops everything above the bound
    LieAlgebra small{IntMatrix{{0, 2}, {-2, 0}}, 1, false};
    CHECK(lie_bracket(small, a, b).is_zero());
    // h-mode keeps only {0,1}-vectors
    LieAlgebra h{kRank3, 3, true};
    auto e1 = GradedLieElt::monomial({1, 0, 0}, RatFunc(1));
    auto e12 = GradedLieElt::monomial({1, 1, 0}, RatFunc(1));
    CHECK(lie_bracket(h, e1, e12).is_zero());
    CHECK(h.admissible({1, 0, 1}));
    CHECK_FALSE(h.admissible({2, 0, 1}));
}

TEST_CASE("Jacobi identity") {
    CounterRng rng(31, 0);
    for (int trial = 0; trial < 50; ++trial) {
        bool rank3 = trial % 2 == 1;
        LieAlgebra alg{rank3 ? kRank3 : IntMatrix{{0, 3}, {-3, 0}}, 6, false};
        std::size_t n = rank3 ? 3 : 2;
        auto x = random_element(rng, n, 3, 3), y = random_element(rng, n, 3, 3), z = random_element(rng, n, 3, 3);
        GradedLieElt j = lie_bracket(alg, x, lie_bracket(alg, y, z)) + lie_bracket(alg, y, lie_bracket(alg, z, x)) +
                         lie_bracket(alg, z, lie_bracket(alg, x, y));
        CHECK(j.is_zero());
    }
}

TEST_CASE("brackets are commutators in the quantum torus") {
    CounterRng rng(32, 0);
    for (int trial = 0; trial < 20; ++trial) {
        LieAlgebra alg{kRank3, 5, false};
        auto x = random_element(rng, 3, 2, 3), y = random_element(rng, 3, 2, 3);
        Assoc ax = to_assoc(x), ay = to_assoc(y);
        Assoc comm = sum(mul(ax, ay, alg.form, 5), scaled(mul(ay, ax, alg.form, 5), RatFunc(-1)));
        CHECK(from_assoc(comm) == lie_bracket(alg, x, y));
    }
}

TEST_CASE("BCH against exp and log in the quantum torus") {
    CounterRng rng(33, 0);
    for (int trial = 0; trial < 12; ++trial) {
        bool rank3 = trial % 3 == 2;
        IntMatrix form = rank3 ? kRank3 : IntMatrix{{0, 2}, {-2, 0}};
        std::size_t n = rank3 ? 3 : 2;
        int bound = rank3 ? 4 : 6;
        LieAlgebra alg{form, bound, false};
        auto a = random_element(rng, n, 2, 3), b = random_element(rng, n, 2, 3);
        Assoc product = mul(exp_series(to_assoc(a), form, bound, n), exp_series(to_assoc(b), form, bound, n), form, bound);
        GradedLieElt expected = from_assoc(log_series(product, form, bound, n));
        CHECK(bch_log_product(alg, a, b) == expected);
    }
    LieAlgebra alg{IntMatrix{{0, 1}, {-1, 0}}, 3, false};
    auto a = GradedLieElt::monomial({1, 0}, RatFunc(1));
    CHECK(bch_log_product(alg, a, {}) == a);
    CHECK(path_ordered_product(alg, {{a, 1}, {a, -1}}).is_zero());
    CHECK_THROWS_AS(path_ordered_product(alg, {{a, 0}}), Error);
}

TEST_CASE("pentagon") {
    AttractorTable table;
    table.acyclic_default = true;
    Rank2Diagram diag = reconstruct_rank2(euler_skew(Quiver::kronecker(1)), initial_from_table(table, 4), 4);
    CHECK(loop_product(diag).is_zero());
    std::vector<std::string> lines = rank2_lines(diag);
    // the scattered half carries the two initial directions and one new ray
    std::vector<std::string> primitive_lines;
    for (const auto& l : lines)
        if (l.ends_with(" : 1")) primitive_lines.push_back(l);
    CHECK(primitive_lines == std::vector<std::string>{"ray 1,0 : 1", "ray 1,1 : 1", "ray 0,1 : 1"});
    CHECK(dt_from_rank2(diag, {1, 1}, Covector{1, -1}) == RatFunc(1));
    CHECK(dt_from_rank2(diag, {1, 1}, Covector{-1, 1}).is_zero());
    CHECK(dt_from_rank2(diag, {2, 2}, Covector{1, -1}) == multicover_factor(2));
}

TEST_CASE("reconstruction does not depend on processing order") {
    AttractorTable table;
    table.acyclic_default = true;
    for (int m : {2, 3}) {
        IntMatrix form = euler_skew(Quiver::kronecker(m));
        auto init = initial_from_table(table, 5);
        auto base = rank2_lines(reconstruct_rank2(form, init, 5));
        for (std::uint64_t seed : {5ULL, 77ULL}) CHECK(rank2_lines(reconstruct_rank2(form, init, 5, seed)) == base);
    }
}

TEST_CASE("oracle agrees with flow trees for either orientation") {
    AttractorTable table;
    table.acyclic_default = true;
    for (const char* text : {"vertices 2\narrow 1 2 2\n", "vertices 2\narrow 2 1 2\n", "vertices 2\n",
                             "vertices 2\narrow 1 2 3\narrow 2 1 1\n"}) {
        Quiver q = parse_quiver(text);
        Rank2Diagram diag = reconstruct_rank2(euler_skew(q), initial_from_table(table, 5), 5);
        for (std::int64_t a = 0; a <= 5; ++a)
            for (std::int64_t b = 0; a + b <= 5; ++b) {
                if (a + b == 0) continue;
                for (long side : {1L, -1L}) {
                    Covector theta{side * b, -side * a};
                    CHECK(assemble_dt(q, {a, b}, theta, table) == dt_from_rank2(diag, {a, b}, theta));
                }
            }
    }
}

TEST_CASE("oracle input validation") {
    IntMatrix form = euler_skew(Quiver::kronecker(2));
    std::map<DimVec, GradedLieElt> bad{{{2, 0}, GradedLieElt::monomial({2, 0}, RatFunc(1))}};
    CHECK_THROWS_AS(reconstruct_rank2(form, bad, 3), Error);
    std::map<DimVec, GradedLieElt> high{{{1, 0}, GradedLieElt::monomial({4, 0}, RatFunc(1))}};
    try {
        reconstruct_rank2(form, high, 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegreeExceeded);
    }
    Rank2Diagram diag = reconstruct_rank2(form, {}, 3);
    CHECK(diag.rays.empty());
    CHECK_THROWS_AS(dt_from_rank2(diag, {3, 1}, Covector{1, -3}), Error);
    CHECK_THROWS_AS(dt_from_rank2(diag, {1, 1}, Covector{1, 1}), Error);
}

TEST_CASE("joint consistency") {
    int with_joints = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        QuiverInstance inst = random_instance(seed, 3, 4);
        JointReport report = check_joint_consistency(inst.aux, seed);
        CHECK_MESSAGE(report.passed, report.locus);
        with_joints += report.joints > 0;
    }
    CHECK(with_joints > 0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        QuiverInstance inst = random_instance(seed + 100, 4, 4);
        CHECK(check_joint_consistency(inst.aux, seed).passed);
        JointCheckOptions corrupt;
        corrupt.corrupt = true;
        JointReport bad = check_joint_consistency(inst.aux, seed, corrupt);
        CHECK_FALSE(bad.passed);
        CHECK_FALSE(bad.locus.empty());
    }
}
