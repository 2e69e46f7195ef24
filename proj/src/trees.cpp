#include "flowtree/trees.hpp"

#include <algorithm>

namespace flowtree {

DecoratedTree DecoratedTree::leaf_only(int index) {
    DecoratedTree t;
    Node n;
    n.leaf = index;
    n.charge = IndexSet{1} << index;
    t.nodes_.push_back(n);
    return t;
}

DecoratedTree DecoratedTree::from_insertions(const std::vector<int>& leaves, const std::vector<int>& choices) {
    if (leaves.empty()) throw Error(ErrorKind::InvalidInput, "empty leaf set");
    if (choices.size() + 1 != leaves.size()) throw Error(ErrorKind::InvalidInput, "wrong number of insertion choices");
    // Build with an explicit top pointer; node order = creation order.
    std::vector<Node> nodes;
    int top = 0;
    Node first;
    first.leaf = leaves[0];
    nodes.push_back(first);
    for (std::size_t k = 1; k < leaves.size(); ++k) {
        int edge = choices[k - 1];
        if (edge < 0 || edge >= static_cast<int>(nodes.size()))
            throw Error(ErrorKind::InvalidInput, "insertion choice out of range");
        int below = edge;
        int above = nodes[below].parent;
        int fresh_leaf = static_cast<int>(nodes.size());
        Node leaf;
        leaf.leaf = leaves[k];
        nodes.push_back(leaf);
        int mid = static_cast<int>(nodes.size());
        Node inner;
        inner.left = below;
        inner.right = fresh_leaf;
        inner.parent = above;
        nodes.push_back(inner);
        nodes[fresh_leaf].parent = mid;
        nodes[below].parent = mid;
        if (above < 0) {
            top = mid;
        } else if (nodes[above].left == below) {
            nodes[above].left = mid;
        } else {
            nodes[above].right = mid;
        }
    }
    // Re-root so that node 0 is the top, then canonicalize.
    DecoratedTree t;
    std::function<int(int, int)> copy = [&](int src, int parent) {
        int id = static_cast<int>(t.nodes_.size());
        t.nodes_.push_back(Node{});
        t.nodes_[id].parent = parent;
        t.nodes_[id].leaf = nodes[src].leaf;
        if (nodes[src].leaf >= 0) {
            t.nodes_[id].charge = IndexSet{1} << nodes[src].leaf;
        } else {
            int l = copy(nodes[src].left, id);
            int r = copy(nodes[src].right, id);
            t.nodes_[id].left = l;
            t.nodes_[id].right = r;
            t.nodes_[id].charge = t.nodes_[l].charge | t.nodes_[r].charge;
        }
        return id;
    };
    copy(top, -1);
    t.canonicalize();
    return t;
}

void DecoratedTree::canonicalize() {
    std::vector<Node> out;
    out.reserve(nodes_.size());
    std::function<int(int, int)> visit = [&](int src, int parent) {
        int id = static_cast<int>(out.size());
        out.push_back(nodes_[src]);
        out[id].parent = parent;
        if (!nodes_[src].is_leaf()) {
            int a = nodes_[src].left;
            int b = nodes_[src].right;
            if (lowest_index(nodes_[b].charge) < lowest_index(nodes_[a].charge)) std::swap(a, b);
            int l = visit(a, id);
            int r = visit(b, id);
            out[id].left = l;
            out[id].right = r;
        }
        return id;
    };
    visit(0, -1);
    nodes_ = std::move(out);
}

std::vector<int> DecoratedTree::interior_nodes() const {
    std::vector<int> v;
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
        if (!nodes_[i].is_leaf()) v.push_back(i);
    return v;
}

std::string DecoratedTree::encode() const {
    std::function<std::string(int)> enc = [&](int v) -> std::string {
        const Node& n = nodes_[v];
        if (n.is_leaf()) return std::to_string(n.leaf + 1);
        return "{" + enc(n.left) + "," + enc(n.right) + "}";
    };
    return "{" + enc(0) + "}";
}

IndexSet charge(const DecoratedTree& t, int v) { return t.node(v).charge; }

std::uint64_t tree_count(int n) {
    std::uint64_t c = 1;
    for (int k = 3; k <= 2 * n - 3; k += 2) c *= static_cast<std::uint64_t>(k);
    return c;
}

TreeEnumerator::TreeEnumerator(IndexSet j) {
    if (j == 0) throw Error(ErrorKind::InvalidInput, "empty leaf set");
    for (IndexSet s = j; s; s &= s - 1) leaves_.push_back(lowest_index(s));
    total_ = tree_count(static_cast<int>(leaves_.size()));
}

DecoratedTree TreeEnumerator::at(std::uint64_t index) const {
    if (index >= total_) throw Error(ErrorKind::InvalidInput, "tree index out of range");
    // mixed radix: the k-th insertion has 2k - 1 edge choices
    std::vector<int> choices(leaves_.size() - 1);
    for (std::size_t k = 1; k < leaves_.size(); ++k) {
        std::uint64_t radix = 2 * k - 1;
        choices[k - 1] = static_cast<int>(index % radix);
        index /= radix;
    }
    return DecoratedTree::from_insertions(leaves_, choices);
}

std::optional<DecoratedTree> TreeEnumerator::next() {
    if (cursor_ >= total_) return std::nullopt;
    return at(cursor_++);
}

std::vector<DecoratedTree> enumerate_trees(IndexSet j) {
    TreeEnumerator e(j);
    std::vector<DecoratedTree> out;
    out.reserve(e.size());
    while (auto t = e.next()) out.push_back(std::move(*t));
    return out;
}

bool passes_eta_filter(const DecoratedTree& t, const AuxLattice& aux) {
    const auto& top = t.node(0);
    if (top.is_leaf()) return true;
    return aux.eta_pair(t.node(top.left).charge, t.node(top.right).charge) != 0;
}

std::vector<DecoratedTree> filter_eta(const std::vector<DecoratedTree>& trees, const AuxLattice& aux) {
    std::vector<DecoratedTree> out;
    for (const auto& t : trees)
        if (passes_eta_filter(t, aux)) out.push_back(t);
    return out;
}

}  // namespace flowtree
