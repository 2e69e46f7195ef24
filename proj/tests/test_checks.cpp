#include <doctest.h>

#include "flowtree/checks.hpp"

using namespace flowtree;

TEST_CASE("random instances") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        int r = 2 + static_cast<int>(seed % 4);
        QuiverInstance inst = random_instance(seed, r, 4);
        CHECK(inst.aux.r == r);
        DimVec total(inst.quiver.vertex_count, 0);
        for (const auto& g : inst.gammas)
            for (std::size_t i = 0; i < g.size(); ++i) total[i] += g[i];
        CHECK(evaluate(inst.theta, total) == 0);
        CHECK(is_gamma_generic(inst.theta, total));
        CHECK(is_J_eta_generic(inst.aux.alpha, inst.aux, inst.aux.all()));
        bool nonzero = false;
        for (const auto& row : inst.aux.eta)
            for (auto v : row) {
                CHECK(v <= 4);
                CHECK(v >= -4);
                nonzero |= v != 0;
            }
        CHECK(nonzero);
        QuiverInstance again = random_instance(seed, r, 4);
        CHECK(again.gammas == inst.gammas);
        CHECK(again.theta == inst.theta);
    }
}

TEST_CASE("suites pass on small parameters") {
    auto p = check_perturbation(4, 5, 1, 3, {PerturbationMode::Omega, PerturbationMode::Beta});
    CHECK_MESSAGE(p.passed, p.locus);
    CHECK(p.cases == 30);
    auto j = check_joints(3, 5, 2);
    CHECK_MESSAGE(j.passed, j.locus);
    auto m = check_multicover(5, 3);
    CHECK_MESSAGE(m.passed, m.locus);
    auto o = check_oracle(2, 4, {});
    CHECK_MESSAGE(o.passed, o.locus);
    CHECK(o.cases == 28);
}

TEST_CASE("corrupted joint data is caught") {
    auto j = check_joints(3, 3, 2, true);
    CHECK_FALSE(j.passed);
    CHECK(j.locus.find("trial=0") == 0);
}
