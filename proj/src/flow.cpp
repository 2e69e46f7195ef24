#include "flowtree/flow.hpp"

#include "flowtree/parallel.hpp"

namespace flowtree {

namespace {

// (v', v'') for an interior node under the labeling.
std::pair<int, int> children(const DecoratedTree& t, int v, const ChildLabeling& labeling) {
    const auto& n = t.node(v);
    bool flip = !labeling.empty() && labeling[v];
    return flip ? std::pair{n.right, n.left} : std::pair{n.left, n.right};
}

const Covector& parent_theta(const DecoratedTree& t, const FlowAssignment& fa, int v) {
    int p = t.node(v).parent;
    return p < 0 ? fa.root : fa.theta[p];
}

}  // namespace

FlowAssignment run_flow(const DecoratedTree& t, const Covector& alpha, const OmegaForm& omega,
                        const ChildLabeling& labeling) {
    FlowAssignment fa;
    fa.root = alpha;
    fa.theta.resize(t.nodes().size());
    // canonical storage is preorder, so parents precede children
    for (int v = 0; v < static_cast<int>(t.nodes().size()); ++v) {
        if (t.node(v).is_leaf()) continue;
        auto [c1, c2] = children(t, v, labeling);
        (void)c2;
        fa.theta[v] = flow_step(parent_theta(t, fa, v), t.node(v).charge, t.node(c1).charge, omega);
    }
    return fa;
}

SignTable epsilon_signs(const DecoratedTree& t, const FlowAssignment& fa, const OmegaForm& omega,
                        const ChildLabeling& labeling) {
    SignTable eps(t.nodes().size(), 0);
    for (int v = 0; v < static_cast<int>(t.nodes().size()); ++v) {
        if (t.node(v).is_leaf()) continue;
        auto [c1, c2] = children(t, v, labeling);
        int s_theta = sign(evaluate(parent_theta(t, fa, v), t.node(c1).charge));
        int s_form = sign(omega.pair(t.node(c1).charge, t.node(c2).charge));
        if (s_theta == 0 || s_form == 0) throw Error(ErrorKind::ZeroSignArgument, "zero argument to sgn in epsilon");
        eps[v] = -(s_theta + s_form) / 2;
    }
    return eps;
}

LaurentPoly tree_product(const DecoratedTree& t, const SignTable& signs, const AuxLattice& aux,
                         const ChildLabeling& labeling) {
    LaurentPoly prod(1);
    for (int v = 0; v < static_cast<int>(t.nodes().size()); ++v) {
        if (t.node(v).is_leaf()) continue;
        if (signs[v] == 0) return {};
        auto [c1, c2] = children(t, v, labeling);
        prod = prod * kappa(aux.eta_pair(t.node(c1).charge, t.node(c2).charge)) * BigRat(signs[v]);
        if (prod.is_zero()) return prod;
    }
    return prod;
}

LaurentPoly evaluate_tree(const DecoratedTree& t, const AuxLattice& aux, const Covector& x, const OmegaForm& form) {
    if (t.node(0).is_leaf()) return LaurentPoly(1);
    // Vertices with eta-orthogonal children give kappa(0) = 0, and below them
    // the flow need not be defined, so detect those first.
    for (int v : t.interior_nodes())
        if (aux.eta_pair(t.node(t.node(v).left).charge, t.node(t.node(v).right).charge) == 0) return {};
    FlowAssignment fa = run_flow(t, x, form);
    SignTable eps = epsilon_signs(t, fa, form);
    return tree_product(t, eps, aux);
}

LaurentPoly flow_tree_scalar(const AuxLattice& aux, const FlowOptions& opts) {
    if (!is_J_eta_generic(aux.alpha, aux, aux.all()))
        throw Error(ErrorKind::NotGenericAlpha, "alpha is not (I,eta)-generic");
    if (aux.r == 1) return LaurentPoly(1);
    ScalarContext ctx{&aux};
    if (opts.mode == PerturbationMode::Omega) {
        OmegaForm omega = sample_omega(aux, opts.seed, opts.sampler);
        return flow_tree_map(aux, ctx, aux.alpha, omega);
    }
    Covector beta = sample_beta(aux, opts.seed, opts.sampler);
    return flow_tree_map(aux, ctx, beta, OmegaForm::from_integer(aux.eta));
}

LaurentPoly flow_tree_scalar_by_trees(const AuxLattice& aux, const Covector& x, const OmegaForm& form,
                                      unsigned threads) {
    TreeEnumerator trees(aux.all());
    constexpr std::uint64_t chunk = 256;
    std::uint64_t chunks = (trees.size() + chunk - 1) / chunk;
    std::vector<LaurentPoly> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        LaurentPoly acc;
        std::uint64_t end = std::min<std::uint64_t>(trees.size(), (c + 1) * chunk);
        for (std::uint64_t i = c * chunk; i < end; ++i) {
            DecoratedTree t = trees.at(i);
            if (!passes_eta_filter(t, aux)) continue;
            acc += evaluate_tree(t, aux, x, form);
        }
        partial[c] = std::move(acc);
    });
    LaurentPoly total;
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace flowtree
