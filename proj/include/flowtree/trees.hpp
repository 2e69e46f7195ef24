#pragma once

// J-decorated unordered binary rooted trees.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flowtree/lattice.hpp"

namespace flowtree {

/// Node 0 is the child of the root; the root itself carries no node. Interior
/// nodes store their children with the one holding the smallest leaf first.
class DecoratedTree {
public:
    struct Node {
        int left = -1;
        int right = -1;
        int parent = -1;  // -1 for node 0, whose parent is the root
        int leaf = -1;    // leaf index in {0..r-1}, or -1
        IndexSet charge = 0;
        bool is_leaf() const { return leaf >= 0; }
    };

    static DecoratedTree leaf_only(int index);

    /// Builds the tree obtained from the one-leaf tree on the smallest element
    /// of `leaves` by inserting the k-th further element on the edge above
    /// node choices[k-1] (0 <= choices[k-1] < 2k - 1). The insertion happens
    /// in node-creation order; the result is canonicalized afterwards.
    static DecoratedTree from_insertions(const std::vector<int>& leaves, const std::vector<int>& choices);

    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(int v) const { return nodes_[v]; }
    int vertex_count() const { return static_cast<int>(nodes_.size()) + 1; }  // with the root
    int edge_count() const { return static_cast<int>(nodes_.size()); }
    IndexSet leaf_set() const { return nodes_[0].charge; }
    std::vector<int> interior_nodes() const;

    /// Canonical brace encoding with 1-based leaf labels, e.g. {{1,{2,3}}}.
    std::string encode() const;

    friend bool operator==(const DecoratedTree& a, const DecoratedTree& b) { return a.encode() == b.encode(); }

private:
    void canonicalize();
    std::vector<Node> nodes_;
};

/// e_v as the subset of leaves below v.
IndexSet charge(const DecoratedTree& t, int v);

/// (2n - 3)!! for n >= 2, 1 for n = 1.
std::uint64_t tree_count(int n);

/// Lazy enumeration of all trees on J, one per isomorphism class.
class TreeEnumerator {
public:
    explicit TreeEnumerator(IndexSet j);

    std::uint64_t size() const { return total_; }
    DecoratedTree at(std::uint64_t index) const;
    std::optional<DecoratedTree> next();

private:
    std::vector<int> leaves_;
    std::uint64_t total_ = 0;
    std::uint64_t cursor_ = 0;
};

std::vector<DecoratedTree> enumerate_trees(IndexSet j);

/// Membership in T_J^eta: the children of the root's child have nonzero
/// eta-pairing. The one-leaf tree always qualifies.
bool passes_eta_filter(const DecoratedTree& t, const AuxLattice& aux);
std::vector<DecoratedTree> filter_eta(const std::vector<DecoratedTree>& trees, const AuxLattice& aux);

}  // namespace flowtree
