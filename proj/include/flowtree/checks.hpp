#pragma once

// Randomized property suites shared by the command-line driver and the
// acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include "flowtree/dt.hpp"
#include "flowtree/lattice.hpp"
#include "flowtree/rng.hpp"

namespace flowtree {

struct QuiverInstance {
    Quiver quiver;
    std::vector<DimVec> gammas;
    Covector theta;
    AuxLattice aux;
};

/// Random quiver data with r dimension vectors, gamma-generic theta on the
/// wall of their sum, |eta entries| <= eta_bound and at least one nonzero
/// eta entry. Dimension vectors repeat with some probability so that alpha
/// has vanishing sub-sums.
QuiverInstance random_instance(std::uint64_t seed, int r, int eta_bound);

struct CheckReport {
    bool passed = true;
    int cases = 0;
    std::string locus;  // first failure, machine-readable key=value pairs
};

/// flow_tree_scalar agrees across `seeds` seeds in the given modes (both
/// modes are compared against each other as well when `modes` has two).
CheckReport check_perturbation(int r_max, int trials, std::uint64_t seed, int seeds,
                               const std::vector<PerturbationMode>& modes, int eta_bound = 4);
CheckReport check_joints(int r, int trials, std::uint64_t seed, bool corrupt = false);
CheckReport check_multicover(int trials, std::uint64_t seed, int max_entry = 4);
/// assemble_dt against the rank-2 diagram for the Kronecker-m quiver, every
/// class of total dimension <= max_dim and both half-lines of its wall.
CheckReport check_oracle(int m, int max_dim, const DtOptions& opts);

}  // namespace flowtree
