#pragma once

// Rational DT invariants assembled from attractor invariants with the flow
// tree formula, and the multicover transformation in both directions.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "flowtree/algebra.hpp"
#include "flowtree/flow.hpp"
#include "flowtree/lattice.hpp"

namespace flowtree {

/// Integer attractor invariants Omega*_gamma(y, t).
struct AttractorTable {
    std::map<DimVec, BiLaurent> values;
    bool acyclic_default = false;

    /// Explicit entries win over the acyclic default.
    BiLaurent omega_star(const DimVec& gamma) const;
    /// Sum over gamma = k gamma' of the multicover terms.
    RatFunc omega_bar_star(const DimVec& gamma) const;
};

AttractorTable parse_attractor_table(const std::string& text);

struct Decomposition {
    std::vector<DimVec> parts;  // lexicographically nonincreasing
    BigRat aut;                 // prod of multiplicity factorials
};

/// Every multiset of nonzero vectors in N^+ summing to gamma. With `allowed`,
/// only parts for which it returns true are used.
std::vector<Decomposition> enumerate_decompositions(const DimVec& gamma,
                                                    const std::function<bool(const DimVec&)>& allowed = {});

/// (1/k) (y - y^-1) / (y^k - y^-k).
RatFunc multicover_factor(int k);

std::map<DimVec, RatFunc> rational_from_integer(const std::map<DimVec, BiLaurent>& table);
/// Inverse transform; throws NotPolynomial unless every value is a Laurent
/// polynomial with integer coefficients.
std::map<DimVec, BiLaurent> integer_from_rational(const std::map<DimVec, RatFunc>& table);

/// Memo of F values keyed by (r, eta, sign vector of alpha on all e_J).
class FCache {
public:
    virtual ~FCache() = default;
    virtual std::optional<LaurentPoly> get(const std::string& key) = 0;
    virtual void put(const std::string& key, const LaurentPoly& value) = 0;
};

class MemoryFCache : public FCache {
public:
    std::optional<LaurentPoly> get(const std::string& key) override;
    void put(const std::string& key, const LaurentPoly& value) override;
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, LaurentPoly> entries_;
};

std::string f_cache_key(const AuxLattice& aux);

struct DtOptions {
    FlowOptions flow;
    FCache* cache = nullptr;
    unsigned threads = 0;
};

/// F through the cache, if any.
LaurentPoly flow_tree_value(const AuxLattice& aux, const DtOptions& opts);

RatFunc assemble_dt(const Quiver& q, const DimVec& gamma, const Covector& theta, const AttractorTable& table,
                    const DtOptions& opts = {});

}  // namespace flowtree
