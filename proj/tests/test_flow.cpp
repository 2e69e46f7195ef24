#include <doctest.h>

#include "flowtree/checks.hpp"
#include "flowtree/flow.hpp"

using namespace flowtree;

namespace {

AuxLattice a2(long t1, long t2) { return build_aux(Quiver::kronecker(1), {{1, 0}, {0, 1}}, Covector{t1, t2}); }

// Third route: explicit loop over the eta-filtered enumeration.
LaurentPoly by_explicit_trees(const AuxLattice& aux, const Covector& x, const OmegaForm& form) {
    LaurentPoly sum;
    for (const auto& t : filter_eta(enumerate_trees(aux.all()), aux)) sum += evaluate_tree(t, aux, x, form);
    return sum;
}

}  // namespace

TEST_CASE("A2 by hand") {
    CHECK(flow_tree_scalar(a2(1, -1)) == LaurentPoly(1));
    CHECK(flow_tree_scalar(a2(-1, 1)).is_zero());
    FlowOptions beta;
    beta.mode = PerturbationMode::Beta;
    CHECK(flow_tree_scalar(a2(1, -1), beta) == LaurentPoly(1));
    CHECK(flow_tree_scalar(a2(-1, 1), beta).is_zero());
}

TEST_CASE("single leaf") {
    AuxLattice aux = make_aux({{0}}, Covector{0});
    CHECK(flow_tree_scalar(aux) == LaurentPoly(1));
    CHECK(evaluate_tree(DecoratedTree::leaf_only(0), aux, aux.alpha, OmegaForm::from_integer(aux.eta)) ==
          LaurentPoly(1));
}

TEST_CASE("eta-orthogonal classes give zero") {
    AuxLattice aux = make_aux({{0, 0}, {0, 0}}, Covector{1, -1});
    CHECK(flow_tree_scalar(aux).is_zero());
}

TEST_CASE("non-generic alpha is rejected") {
    AuxLattice aux = make_aux({{0, 1, 1}, {-1, 0, 1}, {-1, -1, 0}}, Covector{0, 1, -1});
    CHECK_THROWS_AS(flow_tree_scalar(aux), Error);
    try {
        flow_tree_scalar(aux);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotGenericAlpha);
    }
}

TEST_CASE("recursion matches tree-by-tree evaluation") {
    CounterRng rng(21, 0);
    for (int trial = 0; trial < 40; ++trial) {
        int r = static_cast<int>(rng.uniform(2, 5));
        QuiverInstance inst = random_instance(rng.next(), r, 4);
        const AuxLattice& aux = inst.aux;
        ScalarContext ctx{&aux};

        OmegaForm omega = sample_omega(aux, trial);
        LaurentPoly rec = flow_tree_map(aux, ctx, aux.alpha, omega);
        CHECK(rec == flow_tree_scalar_by_trees(aux, aux.alpha, omega, 1));
        CHECK(rec == flow_tree_scalar_by_trees(aux, aux.alpha, omega, 4));
        CHECK(rec == by_explicit_trees(aux, aux.alpha, omega));

        Covector beta = sample_beta(aux, trial);
        OmegaForm eta = OmegaForm::from_integer(aux.eta);
        LaurentPoly rec_beta = flow_tree_map(aux, ctx, beta, eta);
        CHECK(rec_beta == by_explicit_trees(aux, beta, eta));
        CHECK(rec_beta == rec);

        CHECK(flow_tree_map(aux, AbelianContext{}, aux.alpha, omega).is_zero());
    }
}

TEST_CASE("child relabeling invariance") {
    CounterRng rng(22, 0);
    for (int trial = 0; trial < 40; ++trial) {
        QuiverInstance inst = random_instance(rng.next(), static_cast<int>(rng.uniform(2, 5)), 4);
        const AuxLattice& aux = inst.aux;
        OmegaForm omega = sample_omega(aux, trial);
        for (const auto& t : enumerate_trees(aux.all())) {
            FlowAssignment base = run_flow(t, aux.alpha, omega);
            ChildLabeling swap(t.edge_count());
            for (std::size_t v = 0; v < swap.size(); ++v) swap[v] = rng.uniform(0, 1) == 1;
            FlowAssignment other = run_flow(t, aux.alpha, omega, swap);
            CHECK(other.root == base.root);
            for (int v : t.interior_nodes()) CHECK(other.theta[v] == base.theta[v]);
            // signs are only guaranteed nondegenerate on T^eta
            if (!passes_eta_filter(t, aux)) continue;
            SignTable eps = epsilon_signs(t, base, omega);
            LaurentPoly prod = tree_product(t, eps, aux);
            SignTable eps_other = epsilon_signs(t, other, omega, swap);
            // swapping v' and v'' flips epsilon and kappa together
            for (int v : t.interior_nodes()) CHECK(eps_other[v] == (swap[v] ? -eps[v] : eps[v]));
            CHECK(tree_product(t, eps_other, aux, swap) == prod);
        }
    }
}

TEST_CASE("seed independence") {
    CounterRng rng(23, 0);
    for (int trial = 0; trial < 10; ++trial) {
        QuiverInstance inst = random_instance(rng.next(), 4, 4);
        FlowOptions opts;
        LaurentPoly first = flow_tree_scalar(inst.aux, opts);
        for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
            opts.seed = seed;
            opts.mode = PerturbationMode::Omega;
            CHECK(flow_tree_scalar(inst.aux, opts) == first);
            opts.mode = PerturbationMode::Beta;
            CHECK(flow_tree_scalar(inst.aux, opts) == first);
        }
    }
}
