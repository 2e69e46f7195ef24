#include "flowtree/dt.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "flowtree/parallel.hpp"

namespace flowtree {

namespace {

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::int64_t content_gcd(const DimVec& v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

DimVec divided(const DimVec& v, std::int64_t k) {
    DimVec out(v);
    for (auto& x : out) x /= k;
    return out;
}

bool is_unit_vector(const DimVec& v) {
    int ones = 0;
    for (auto x : v) {
        if (x == 1)
            ++ones;
        else if (x != 0)
            return false;
    }
    return ones == 1;
}

void check_class(const DimVec& gamma, const std::string& what) {
    bool nonzero = false;
    for (auto x : gamma) {
        if (x < 0) throw Error(ErrorKind::InvalidInput, what + " " + format_dimvec(gamma) + " has a negative entry");
        nonzero |= x != 0;
    }
    if (!nonzero) throw Error(ErrorKind::InvalidInput, what + " is zero");
}

}  // namespace

BiLaurent AttractorTable::omega_star(const DimVec& gamma) const {
    auto it = values.find(gamma);
    if (it != values.end()) return it->second;
    if (acyclic_default && is_unit_vector(gamma)) return BiLaurent(1);
    return {};
}

RatFunc AttractorTable::omega_bar_star(const DimVec& gamma) const {
    std::int64_t g = content_gcd(gamma);
    RatFunc sum;
    for (std::int64_t k = 1; k <= g; ++k) {
        if (g % k) continue;
        BiLaurent base = omega_star(divided(gamma, k));
        if (base.is_zero()) continue;
        sum += multicover_factor(static_cast<int>(k)) * RatFunc(base.substitute_power(static_cast<int>(k)));
    }
    return sum;
}

AttractorTable parse_attractor_table(const std::string& text) {
    AttractorTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim_copy(line);
        if (line.empty()) continue;
        std::string where = "attractor line " + std::to_string(lineno);
        std::istringstream words(line);
        std::string w1, w2, extra;
        words >> w1 >> w2;
        if (w1 == "default") {
            if (w2 != "acyclic" || (words >> extra))
                throw Error(ErrorKind::InvalidInput, where + ": only 'default acyclic' is supported");
            table.acyclic_default = true;
            continue;
        }
        auto semi = line.find(';');
        if (semi == std::string::npos) throw Error(ErrorKind::InvalidInput, where + ": expected 'gamma = ... ; omega_star = ...'");
        std::map<std::string, std::string> fields;
        for (const auto& part : {line.substr(0, semi), line.substr(semi + 1)}) {
            auto eq = part.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::InvalidInput, where + ": missing '='");
            fields[trim_copy(part.substr(0, eq))] = trim_copy(part.substr(eq + 1));
        }
        if (!fields.count("gamma") || !fields.count("omega_star"))
            throw Error(ErrorKind::InvalidInput, where + ": expected fields gamma and omega_star");
        DimVec gamma = parse_dimvec(fields["gamma"]);
        check_class(gamma, where + ": gamma");
        if (dim == 0) dim = gamma.size();
        if (gamma.size() != dim) throw Error(ErrorKind::InvalidInput, where + ": inconsistent dimension");
        if (table.values.count(gamma)) throw Error(ErrorKind::InvalidInput, where + ": duplicate gamma");
        table.values[gamma] = parse_polynomial(fields["omega_star"]);
    }
    return table;
}

std::vector<Decomposition> enumerate_decompositions(const DimVec& gamma,
                                                    const std::function<bool(const DimVec&)>& allowed) {
    check_class(gamma, "gamma");
    std::size_t n = gamma.size();
    std::vector<DimVec> candidates;
    DimVec sub(n, 0);
    for (;;) {
        std::size_t k = 0;
        while (k < n && sub[k] == gamma[k]) sub[k++] = 0;
        if (k == n) break;
        ++sub[k];
        if (!allowed || allowed(sub)) candidates.push_back(sub);
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<>());

    std::vector<Decomposition> out;
    std::vector<DimVec> parts;
    std::function<void(const DimVec&, std::size_t)> rec = [&](const DimVec& remaining, std::size_t from) {
        if (std::all_of(remaining.begin(), remaining.end(), [](auto x) { return x == 0; })) {
            Decomposition d;
            d.parts = parts;
            d.aut = 1;
            std::size_t run = 1;
            for (std::size_t i = 1; i <= parts.size(); ++i) {
                if (i < parts.size() && parts[i] == parts[i - 1]) {
                    ++run;
                } else {
                    for (std::size_t f = 2; f <= run; ++f) d.aut *= static_cast<long>(f);
                    run = 1;
                }
            }
            out.push_back(std::move(d));
            return;
        }
        for (std::size_t c = from; c < candidates.size(); ++c) {
            const DimVec& p = candidates[c];
            bool fits = true;
            for (std::size_t i = 0; i < n && fits; ++i) fits = p[i] <= remaining[i];
            if (!fits) continue;
            DimVec next(remaining);
            for (std::size_t i = 0; i < n; ++i) next[i] -= p[i];
            parts.push_back(p);
            rec(next, c);
            parts.pop_back();
        }
    };
    rec(gamma, 0);
    return out;
}

RatFunc multicover_factor(int k) {
    if (k < 1) throw Error(ErrorKind::InvalidInput, "multicover factor needs k >= 1");
    BiLaurent num = (BiLaurent::monomial(1, 0) - BiLaurent::monomial(-1, 0)) * make_rat(1, k);
    BiLaurent den = BiLaurent::monomial(k, 0) - BiLaurent::monomial(-k, 0);
    return RatFunc(num, den);
}

std::map<DimVec, RatFunc> rational_from_integer(const std::map<DimVec, BiLaurent>& table) {
    std::map<DimVec, RatFunc> out;
    for (const auto& [gamma, value] : table) {
        (void)value;
        std::int64_t g = content_gcd(gamma);
        RatFunc sum;
        for (std::int64_t k = 1; k <= g; ++k) {
            if (g % k) continue;
            auto it = table.find(divided(gamma, k));
            if (it == table.end() || it->second.is_zero()) continue;
            sum += multicover_factor(static_cast<int>(k)) * RatFunc(it->second.substitute_power(static_cast<int>(k)));
        }
        out[gamma] = sum;
    }
    return out;
}

std::map<DimVec, BiLaurent> integer_from_rational(const std::map<DimVec, RatFunc>& table) {
    std::map<DimVec, RatFunc> memo;
    std::function<RatFunc(const DimVec&)> omega = [&](const DimVec& gamma) -> RatFunc {
        auto m = memo.find(gamma);
        if (m != memo.end()) return m->second;
        auto it = table.find(gamma);
        RatFunc value = it == table.end() ? RatFunc() : it->second;
        std::int64_t g = content_gcd(gamma);
        for (std::int64_t k = 2; k <= g; ++k) {
            if (g % k) continue;
            RatFunc lower = omega(divided(gamma, k));
            if (lower.is_zero()) continue;
            value -= multicover_factor(static_cast<int>(k)) * lower.substitute_power(static_cast<int>(k));
        }
        memo[gamma] = value;
        return value;
    };
    std::map<DimVec, BiLaurent> out;
    for (const auto& [gamma, value] : table) {
        (void)value;
        RatFunc w = omega(gamma);
        if (!w.is_polynomial())
            throw Error(ErrorKind::NotPolynomial, "Omega(" + format_dimvec(gamma) + ") = " + w.to_string());
        if (!w.numer().has_integer_coeffs())
            throw Error(ErrorKind::NotPolynomial,
                        "Omega(" + format_dimvec(gamma) + ") = " + w.to_string() + " has non-integer coefficients");
        out[gamma] = w.numer();
    }
    return out;
}

std::optional<LaurentPoly> MemoryFCache::get(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void MemoryFCache::put(const std::string& key, const LaurentPoly& value) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.emplace(key, value);
}

std::size_t MemoryFCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

std::string f_cache_key(const AuxLattice& aux) {
    std::string key = "r=" + std::to_string(aux.r) + ";eta=";
    for (int i = 0; i < aux.r; ++i)
        for (int j = 0; j < aux.r; ++j) {
            if (i || j) key += ',';
            key += std::to_string(aux.eta[i][j]);
        }
    key += ";signs=";
    for (IndexSet s = 1; s <= aux.all(); ++s) {
        int sg = sign(evaluate(aux.alpha, s));
        key += sg > 0 ? '+' : sg < 0 ? '-' : '0';
    }
    return key;
}

LaurentPoly flow_tree_value(const AuxLattice& aux, const DtOptions& opts) {
    if (!opts.cache) return flow_tree_scalar(aux, opts.flow);
    std::string key = f_cache_key(aux);
    if (auto hit = opts.cache->get(key)) return *hit;
    LaurentPoly value = flow_tree_scalar(aux, opts.flow);
    opts.cache->put(key, value);
    return value;
}

RatFunc assemble_dt(const Quiver& q, const DimVec& gamma, const Covector& theta, const AttractorTable& table,
                    const DtOptions& opts) {
    if (static_cast<int>(gamma.size()) != q.vertex_count)
        throw Error(ErrorKind::InvalidInput, "gamma has the wrong length");
    if (static_cast<int>(theta.size()) != q.vertex_count)
        throw Error(ErrorKind::InvalidInput, "theta has the wrong length");
    check_class(gamma, "gamma");
    if (evaluate(theta, gamma) != 0) throw Error(ErrorKind::NotOnWall, "theta(" + format_dimvec(gamma) + ") != 0");
    if (!is_gamma_generic(theta, gamma)) throw Error(ErrorKind::NotGenericTheta, "theta is not gamma-generic");

    std::map<DimVec, RatFunc> bar_star;
    auto allowed = [&](const DimVec& p) {
        RatFunc v = table.omega_bar_star(p);
        if (v.is_zero()) return false;
        bar_star.emplace(p, std::move(v));
        return true;
    };
    std::vector<Decomposition> decomps = enumerate_decompositions(gamma, allowed);
    for (const auto& d : decomps)
        if (static_cast<int>(d.parts.size()) > kMaxLeaves)
            throw Error(ErrorKind::InvalidInput, "decomposition with more than " + std::to_string(kMaxLeaves) + " parts");

    std::vector<RatFunc> terms(decomps.size());
    parallel_for(decomps.size(), opts.threads, [&](std::size_t i) {
        const Decomposition& d = decomps[i];
        AuxLattice aux = build_aux(q, d.parts, theta);
        LaurentPoly f = flow_tree_value(aux, opts);
        if (f.is_zero()) return;
        BigRat inv_aut = 1 / d.aut;
        RatFunc term(f * inv_aut);
        for (const auto& p : d.parts) term *= bar_star.at(p);
        terms[i] = std::move(term);
    });
    RatFunc total;
    for (const auto& t : terms) total += t;
    return total;
}

}  // namespace flowtree
