#pragma once

// Graded nilpotent Lie algebras with the kappa bracket, BCH products, the
// rank-2 scattering diagram used as an independent oracle, and the joint
// consistency check for flow tree maps.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowtree/algebra.hpp"
#include "flowtree/dt.hpp"
#include "flowtree/flow.hpp"
#include "flowtree/lattice.hpp"

namespace flowtree {

/// Truncated algebra: [z^a, z^b] = kappa(<a, b>) z^{a+b}, dropping every
/// term of total degree above `degree_bound`. In h-mode the support is
/// restricted to {0,1}-vectors and products leaving that set vanish.
struct LieAlgebra {
    IntMatrix form;
    int degree_bound = 0;
    bool h_mode = false;

    bool admissible(const DimVec& n) const;
};

std::int64_t degree(const DimVec& n);

class GradedLieElt {
public:
    using Terms = std::map<DimVec, RatFunc>;

    GradedLieElt() = default;
    static GradedLieElt monomial(const DimVec& n, const RatFunc& c);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    RatFunc coeff(const DimVec& n) const;
    void add_term(const DimVec& n, const RatFunc& c);
    GradedLieElt degree_part(std::int64_t d) const;

    GradedLieElt operator-() const;
    GradedLieElt& operator+=(const GradedLieElt& o);
    GradedLieElt& operator-=(const GradedLieElt& o);
    GradedLieElt& operator*=(const RatFunc& c);
    friend GradedLieElt operator+(GradedLieElt a, const GradedLieElt& b) { return a += b; }
    friend GradedLieElt operator-(GradedLieElt a, const GradedLieElt& b) { return a -= b; }
    friend GradedLieElt operator*(GradedLieElt a, const RatFunc& c) { return a *= c; }
    friend bool operator==(const GradedLieElt& a, const GradedLieElt& b) { return (a - b).is_zero(); }

    std::string to_string() const;

private:
    Terms terms_;
};

GradedLieElt lie_bracket(const LieAlgebra& alg, const GradedLieElt& a, const GradedLieElt& b);

/// log(exp(a) exp(b)) through the Dynkin series, finite by truncation.
GradedLieElt bch_log_product(const LieAlgebra& alg, const GradedLieElt& a, const GradedLieElt& b);

/// log(exp(e_k phi_k) ... exp(e_1 phi_1)) for crossings listed first to last.
GradedLieElt path_ordered_product(const LieAlgebra& alg, const std::vector<std::pair<GradedLieElt, int>>& crossings);

/// The two half-lines of n^perp in the plane of stability parameters: the
/// one pointing along (-b, a) and the one along (b, -a), for n = (a, b).
enum class Half { UpperLeft, LowerRight };

struct Ray {
    DimVec normal;  // primitive
    Half half;
    GradedLieElt element;
};

struct Rank2Diagram {
    IntMatrix form;
    int degree_bound = 0;
    std::vector<Ray> rays;  // nonzero walls only

    const Ray* find(const DimVec& normal, Half half) const;
    /// Half-lines containing the attractor points <n, ->; they carry the
    /// initial data. The other half carries the scattered walls.
    Half attractor_half() const;
};

/// Consistent completion of the initial walls. `initial` maps primitive
/// normals to elements supported on their multiples. A nonzero shuffle seed
/// permutes internal processing orders.
Rank2Diagram reconstruct_rank2(const IntMatrix& form, const std::map<DimVec, GradedLieElt>& initial, int degree_bound,
                               std::uint64_t shuffle_seed = 0);

/// Log of the loop product around the origin: attractor half from M+ to M-,
/// then the other half back.
GradedLieElt loop_product(const Rank2Diagram& diag);

/// Initial walls Omega-bar*_n z^n for all classes of degree <= D.
std::map<DimVec, GradedLieElt> initial_from_table(const AttractorTable& table, int degree_bound);

/// Coefficient of z^gamma on the wall containing theta.
RatFunc dt_from_rank2(const Rank2Diagram& diag, const DimVec& gamma, const Covector& theta);

/// One line per class on the scattered half, sorted by angle then degree:
/// "ray a,b : <value>".
std::vector<std::string> rank2_lines(const Rank2Diagram& diag);

struct JointCheckOptions {
    SamplerConfig sampler;
    bool corrupt = false;  // perturbs the wall value at alpha (negative control)
};

struct JointReport {
    bool passed = true;
    int joints = 0;
    std::string locus;  // empty on success
};

JointReport check_joint_consistency(const AuxLattice& aux, std::uint64_t seed, const JointCheckOptions& opts = {});

}  // namespace flowtree
