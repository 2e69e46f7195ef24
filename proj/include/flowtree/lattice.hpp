#pragma once

// Quivers, dimension vectors, the auxiliary lattice spanned by e_1..e_r and
// the genericity predicates and samplers for perturbations of its forms.

#include <cstdint>
#include <string>
#include <vector>

#include "flowtree/algebra.hpp"

namespace flowtree {

using DimVec = std::vector<std::int64_t>;
using Covector = std::vector<BigRat>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Subset of {0..r-1} as a bitmask; e_J is the {0,1}-vector with support J.
using IndexSet = std::uint32_t;

constexpr int kMaxLeaves = 16;

inline IndexSet full_set(int r) { return r >= 32 ? ~IndexSet{0} : (IndexSet{1} << r) - 1; }
inline int set_size(IndexSet s) { return __builtin_popcount(s); }
inline int lowest_index(IndexSet s) { return __builtin_ctz(s); }

struct Quiver {
    int vertex_count = 0;
    IntMatrix arrows;  // arrows[i][j] = number of arrows i -> j

    static Quiver kronecker(int m);
};

Quiver parse_quiver(const std::string& text);
DimVec parse_dimvec(const std::string& text);
Covector parse_covector(const std::string& text);
std::string format_dimvec(const DimVec& v);

/// <g, g'> = sum_{i,j} (a_ij - a_ji) g_i g'_j.
IntMatrix euler_skew(const Quiver& q);
std::int64_t pair(const IntMatrix& form, const DimVec& a, const DimVec& b);
BigRat evaluate(const Covector& theta, const DimVec& gamma);

struct AuxLattice {
    int r = 0;
    std::vector<DimVec> gammas;
    IntMatrix eta;
    Covector alpha;

    IndexSet all() const { return full_set(r); }
    std::int64_t eta_pair(IndexSet a, IndexSet b) const;
};

AuxLattice build_aux(const Quiver& q, const std::vector<DimVec>& gammas, const Covector& theta);
/// Aux data given directly by (eta, alpha); validates shape and alpha(e_I) = 0.
AuxLattice make_aux(const IntMatrix& eta, const Covector& alpha);

BigRat evaluate(const Covector& x, IndexSet s);

/// Rational skew form on the auxiliary lattice.
class OmegaForm {
public:
    OmegaForm() = default;
    explicit OmegaForm(std::vector<std::vector<BigRat>> entries);
    static OmegaForm from_integer(const IntMatrix& m);

    int size() const { return static_cast<int>(entries_.size()); }
    const BigRat& at(int i, int j) const { return entries_[i][j]; }
    BigRat pair(IndexSet a, IndexSet b) const;
    /// iota_{e_a} omega = omega(e_a, -).
    Covector iota(IndexSet a) const;

private:
    std::vector<std::vector<BigRat>> entries_;
};

/// theta_v = theta_p - theta_p(e_a) / omega(e_j, e_a) * iota_{e_j} omega, where
/// a is one child of the vertex with charge e_j.
Covector flow_step(const Covector& theta_parent, IndexSet j, IndexSet a, const OmegaForm& form);

bool is_gamma_generic(const Covector& theta, const DimVec& gamma);
/// alpha(e_J) = 0 and alpha(e_J') != 0 for every strict J' in J with
/// eta(e_J, e_J') != 0.
bool is_J_eta_generic(const Covector& alpha, const AuxLattice& aux, IndexSet j);

/// Pairs of nonzero {0,1}-vectors with eta-pairing nonzero get omega-pairing
/// of the same sign.
bool in_U_eta(const OmegaForm& omega, const AuxLattice& aux);
/// omega(e_A, e_B) != 0 for all disjoint nonempty A, B inside J.
bool in_U_J(const OmegaForm& omega, IndexSet j);

/// Runs the discrete flow from x over every tree on I whose top split has
/// nonzero eta-pairing and reports whether every vertex has nonzero
/// arguments for the epsilon signs. With `skip_eta_zero`, subtrees below an
/// eta-orthogonal split are not visited (they contribute kappa(0) = 0).
bool flow_nondegenerate(const AuxLattice& aux, const Covector& x, const OmegaForm& form, bool skip_eta_zero);

struct SamplerConfig {
    int budget = 1000;
    int first_exponent = 8;
    int max_exponent = 64;
};

OmegaForm sample_omega(const AuxLattice& aux, std::uint64_t seed, const SamplerConfig& cfg = {});
Covector sample_beta(const AuxLattice& aux, std::uint64_t seed, const SamplerConfig& cfg = {});

}  // namespace flowtree
