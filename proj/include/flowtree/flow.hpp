#pragma once

// Discrete attractor flow on decorated trees, epsilon signs, and the flow
// tree formula over an arbitrary graded bracket.

#include <concepts>
#include <cstdint>
#include <vector>

#include "flowtree/algebra.hpp"
#include "flowtree/lattice.hpp"
#include "flowtree/trees.hpp"

namespace flowtree {

/// theta at the root and at each interior node (empty vectors at leaves).
struct FlowAssignment {
    Covector root;
    std::vector<Covector> theta;
};

/// epsilon per node; meaningful at interior nodes only.
using SignTable = std::vector<int>;

/// Optional per-node flag choosing the right child as v' instead of the left.
using ChildLabeling = std::vector<bool>;

FlowAssignment run_flow(const DecoratedTree& t, const Covector& alpha, const OmegaForm& omega,
                        const ChildLabeling& labeling = {});
SignTable epsilon_signs(const DecoratedTree& t, const FlowAssignment& fa, const OmegaForm& omega,
                        const ChildLabeling& labeling = {});
/// prod over interior v of eps_v * kappa(eta(e_v', e_v'')).
LaurentPoly tree_product(const DecoratedTree& t, const SignTable& signs, const AuxLattice& aux,
                         const ChildLabeling& labeling = {});

/// Flow, signs and product for one tree; 1 for the one-leaf tree.
LaurentPoly evaluate_tree(const DecoratedTree& t, const AuxLattice& aux, const Covector& x, const OmegaForm& form);

enum class PerturbationMode { Omega, Beta };

struct FlowOptions {
    PerturbationMode mode = PerturbationMode::Omega;
    std::uint64_t seed = 0;
    SamplerConfig sampler;
};

/// A graded bracket on values attached to {0,1}-vectors. The bracket of
/// values graded e_A, e_B must vanish when eta(e_A, e_B) = 0; the recursion
/// below relies on this to skip such splits.
template <class C>
concept BracketContext = requires(const C& c, typename C::Value& acc, const typename C::Value& v, IndexSet s, int i,
                                  int eps) {
    { c.input(i) } -> std::convertible_to<typename C::Value>;
    { c.zero() } -> std::convertible_to<typename C::Value>;
    { c.is_zero(v) } -> std::convertible_to<bool>;
    { c.bracket(v, v, s, s) } -> std::convertible_to<typename C::Value>;
    { c.add_scaled(acc, v, eps) } -> std::same_as<void>;
};

/// [a, b] = kappa(eta(e_A, e_B)) * a * b on Laurent polynomials, inputs 1.
struct ScalarContext {
    using Value = LaurentPoly;
    const AuxLattice* aux;

    Value input(int) const { return LaurentPoly(1); }
    Value zero() const { return {}; }
    bool is_zero(const Value& v) const { return v.is_zero(); }
    Value bracket(const Value& a, const Value& b, IndexSet sa, IndexSet sb) const {
        return kappa(aux->eta_pair(sa, sb)) * a * b;
    }
    void add_scaled(Value& acc, const Value& v, int eps) const { acc += v * BigRat(eps); }
};

/// Bracket identically zero.
struct AbelianContext {
    using Value = LaurentPoly;
    Value input(int) const { return LaurentPoly(1); }
    Value zero() const { return {}; }
    bool is_zero(const Value& v) const { return v.is_zero(); }
    Value bracket(const Value&, const Value&, IndexSet, IndexSet) const { return {}; }
    void add_scaled(Value& acc, const Value& v, int eps) const { acc += v * BigRat(eps); }
};

namespace detail {

template <BracketContext C>
typename C::Value flow_sum_below(const AuxLattice& aux, const C& ctx, IndexSet j, const Covector& theta_parent,
                                 const OmegaForm& form) {
    using V = typename C::Value;
    V sum = ctx.zero();
    IndexSet low = j & (~j + 1);
    IndexSet rest = j & ~low;
    for (IndexSet s = (rest - 1) & rest;; s = (s - 1) & rest) {
        IndexSet a = low | s;
        IndexSet b = j & ~a;
        if (b != 0 && aux.eta_pair(a, b) != 0) {
            int s_theta = sign(evaluate(theta_parent, a));
            int s_form = sign(form.pair(a, b));
            if (s_theta == 0 || s_form == 0)
                throw Error(ErrorKind::ZeroSignArgument, "zero argument to sgn in epsilon");
            int eps = -(s_theta + s_form) / 2;
            if (eps != 0) {
                Covector theta = flow_step(theta_parent, j, a, form);
                V va = set_size(a) == 1 ? V(ctx.input(lowest_index(a))) : flow_sum_below(aux, ctx, a, theta, form);
                if (!ctx.is_zero(va)) {
                    V vb = set_size(b) == 1 ? V(ctx.input(lowest_index(b))) : flow_sum_below(aux, ctx, b, theta, form);
                    if (!ctx.is_zero(vb)) ctx.add_scaled(sum, ctx.bracket(va, vb, a, b), eps);
                }
            }
        }
        if (s == 0) break;
    }
    return sum;
}

}  // namespace detail

/// Sum over trees T on J with nonzero top eta-pairing of the bracket
/// composition with epsilon coefficients, flowing from x with `form`.
/// Trees are grouped by their top splits and evaluated recursively; a split
/// with epsilon = 0 discards every tree through it.
template <BracketContext C>
typename C::Value flow_tree_map(const AuxLattice& aux, const C& ctx, IndexSet j, const Covector& x,
                                const OmegaForm& form) {
    if (j == 0) throw Error(ErrorKind::InvalidInput, "empty leaf set");
    if (set_size(j) == 1) return ctx.input(lowest_index(j));
    return detail::flow_sum_below(aux, ctx, j, x, form);
}

template <BracketContext C>
typename C::Value flow_tree_map(const AuxLattice& aux, const C& ctx, const Covector& x, const OmegaForm& form) {
    return flow_tree_map(aux, ctx, aux.all(), x, form);
}

/// Flow tree formula F for the aux data with a sampled perturbation.
LaurentPoly flow_tree_scalar(const AuxLattice& aux, const FlowOptions& opts = {});

/// The same sum computed tree by tree over the enumeration of T_I^eta, with
/// per-tree work spread over `threads` workers (0 = default).
LaurentPoly flow_tree_scalar_by_trees(const AuxLattice& aux, const Covector& x, const OmegaForm& form,
                                      unsigned threads = 0);

}  // namespace flowtree
