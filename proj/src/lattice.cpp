#include "flowtree/lattice.hpp"

#include <sstream>

#include "flowtree/rng.hpp"

namespace flowtree {

namespace {

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(trim_copy(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim_copy(cur));
    return out;
}

std::int64_t parse_int(const std::string& tok, const std::string& context) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "expected an integer in " + context + ", got '" + tok + "'");
    }
}

}  // namespace

Quiver Quiver::kronecker(int m) {
    Quiver q;
    q.vertex_count = 2;
    q.arrows = {{0, m}, {0, 0}};
    return q;
}

Quiver parse_quiver(const std::string& text) {
    Quiver q;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        std::string where = "quiver line " + std::to_string(lineno);
        std::vector<std::string> args;
        for (std::string a; ls >> a;) args.push_back(a);
        if (word == "vertices") {
            if (args.size() != 1) throw Error(ErrorKind::InvalidInput, where + ": expected 'vertices <k>'");
            if (q.vertex_count != 0) throw Error(ErrorKind::InvalidInput, where + ": vertices declared twice");
            auto k = parse_int(args[0], where);
            if (k < 1 || k > 64) throw Error(ErrorKind::InvalidInput, where + ": vertex count out of range");
            q.vertex_count = static_cast<int>(k);
            q.arrows.assign(k, std::vector<std::int64_t>(k, 0));
        } else if (word == "arrow") {
            if (q.vertex_count == 0) throw Error(ErrorKind::InvalidInput, where + ": arrow before vertices");
            if (args.size() != 3) throw Error(ErrorKind::InvalidInput, where + ": expected 'arrow <i> <j> <count>'");
            auto i = parse_int(args[0], where);
            auto j = parse_int(args[1], where);
            auto c = parse_int(args[2], where);
            if (i < 1 || i > q.vertex_count || j < 1 || j > q.vertex_count)
                throw Error(ErrorKind::InvalidInput, where + ": vertex index out of range");
            if (c < 0) throw Error(ErrorKind::InvalidInput, where + ": negative arrow count");
            q.arrows[i - 1][j - 1] += c;
        } else {
            throw Error(ErrorKind::InvalidInput, where + ": unknown statement '" + word + "'");
        }
    }
    if (q.vertex_count == 0) throw Error(ErrorKind::InvalidInput, "quiver file declares no vertices");
    return q;
}

DimVec parse_dimvec(const std::string& text) {
    DimVec v;
    for (const auto& tok : split_commas(text)) v.push_back(parse_int(tok, "dimension vector '" + text + "'"));
    return v;
}

Covector parse_covector(const std::string& text) {
    Covector v;
    for (const auto& tok : split_commas(text)) {
        BigRat x;
        try {
            if (tok.empty() || x.set_str(tok, 10) != 0) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "expected a rational in '" + text + "', got '" + tok + "'");
        }
        if (x.get_den() == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + text + "'");
        x.canonicalize();
        v.push_back(x);
    }
    return v;
}

std::string format_dimvec(const DimVec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

IntMatrix euler_skew(const Quiver& q) {
    int n = q.vertex_count;
    IntMatrix m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = q.arrows[i][j] - q.arrows[j][i];
    return m;
}

std::int64_t pair(const IntMatrix& form, const DimVec& a, const DimVec& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) s += form[i][j] * a[i] * b[j];
    }
    return s;
}

BigRat evaluate(const Covector& theta, const DimVec& gamma) {
    if (theta.size() != gamma.size())
        throw Error(ErrorKind::InvalidInput, "covector and dimension vector have different lengths");
    BigRat s = 0;
    for (std::size_t i = 0; i < gamma.size(); ++i) s += theta[i] * gamma[i];
    return s;
}

BigRat evaluate(const Covector& x, IndexSet s) {
    BigRat v = 0;
    for (; s; s &= s - 1) v += x[lowest_index(s)];
    return v;
}

std::int64_t AuxLattice::eta_pair(IndexSet a, IndexSet b) const {
    std::int64_t s = 0;
    for (IndexSet x = a; x; x &= x - 1)
        for (IndexSet y = b; y; y &= y - 1) s += eta[lowest_index(x)][lowest_index(y)];
    return s;
}

AuxLattice build_aux(const Quiver& q, const std::vector<DimVec>& gammas, const Covector& theta) {
    if (gammas.empty()) throw Error(ErrorKind::InvalidInput, "no dimension vectors given");
    if (static_cast<int>(gammas.size()) > kMaxLeaves) throw Error(ErrorKind::InvalidInput, "too many dimension vectors");
    if (static_cast<int>(theta.size()) != q.vertex_count)
        throw Error(ErrorKind::InvalidInput, "theta has the wrong length");
    DimVec total(q.vertex_count, 0);
    for (const auto& g : gammas) {
        if (static_cast<int>(g.size()) != q.vertex_count)
            throw Error(ErrorKind::InvalidInput, "dimension vector " + format_dimvec(g) + " has the wrong length");
        bool nonzero = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < 0) throw Error(ErrorKind::InvalidInput, "negative entry in " + format_dimvec(g));
            nonzero |= g[i] != 0;
            total[i] += g[i];
        }
        if (!nonzero) throw Error(ErrorKind::InvalidInput, "zero dimension vector");
    }
    if (evaluate(theta, total) != 0)
        throw Error(ErrorKind::NotOnWall, "theta(" + format_dimvec(total) + ") != 0");
    IntMatrix skew = euler_skew(q);
    AuxLattice aux;
    aux.r = static_cast<int>(gammas.size());
    aux.gammas = gammas;
    aux.eta.assign(aux.r, std::vector<std::int64_t>(aux.r, 0));
    for (int i = 0; i < aux.r; ++i) {
        for (int j = 0; j < aux.r; ++j) aux.eta[i][j] = pair(skew, gammas[i], gammas[j]);
        aux.alpha.push_back(evaluate(theta, gammas[i]));
    }
    return aux;
}

AuxLattice make_aux(const IntMatrix& eta, const Covector& alpha) {
    int r = static_cast<int>(alpha.size());
    if (r < 1 || r > kMaxLeaves) throw Error(ErrorKind::InvalidInput, "aux rank out of range");
    if (static_cast<int>(eta.size()) != r) throw Error(ErrorKind::InvalidInput, "eta has the wrong size");
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(eta[i].size()) != r) throw Error(ErrorKind::InvalidInput, "eta is not square");
        for (int j = 0; j < r; ++j)
            if (eta[i][j] != -eta[j][i]) throw Error(ErrorKind::InvalidInput, "eta is not skew-symmetric");
    }
    AuxLattice aux;
    aux.r = r;
    aux.eta = eta;
    aux.alpha = alpha;
    if (evaluate(alpha, aux.all()) != 0) throw Error(ErrorKind::NotOnWall, "alpha(e_I) != 0");
    return aux;
}

OmegaForm::OmegaForm(std::vector<std::vector<BigRat>> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].size() != entries_.size()) throw Error(ErrorKind::InvalidInput, "form is not square");
        for (std::size_t j = 0; j < entries_.size(); ++j)
            if (entries_[i][j] != -entries_[j][i]) throw Error(ErrorKind::InvalidInput, "form is not skew-symmetric");
    }
}

OmegaForm OmegaForm::from_integer(const IntMatrix& m) {
    std::vector<std::vector<BigRat>> e(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (auto v : m[i]) e[i].emplace_back(static_cast<long>(v));
    return OmegaForm(std::move(e));
}

BigRat OmegaForm::pair(IndexSet a, IndexSet b) const {
    BigRat s = 0;
    for (IndexSet x = a; x; x &= x - 1) {
        const auto& row = entries_[lowest_index(x)];
        for (IndexSet y = b; y; y &= y - 1) s += row[lowest_index(y)];
    }
    return s;
}

Covector OmegaForm::iota(IndexSet a) const {
    Covector out(entries_.size(), BigRat(0));
    for (IndexSet x = a; x; x &= x - 1) {
        const auto& row = entries_[lowest_index(x)];
        for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
    }
    return out;
}

Covector flow_step(const Covector& theta_parent, IndexSet j, IndexSet a, const OmegaForm& form) {
    BigRat denom = form.pair(j, a);
    if (denom == 0) throw Error(ErrorKind::DivisionByZeroPairing, "omega(e_v, e_v') = 0");
    BigRat f = evaluate(theta_parent, a) / denom;
    Covector out = theta_parent;
    Covector dir = form.iota(j);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= f * dir[i];
    return out;
}

bool is_gamma_generic(const Covector& theta, const DimVec& gamma) {
    std::size_t n = gamma.size();
    DimVec sub(n, 0);
    // odometer over 0 <= sub <= gamma
    for (;;) {
        std::size_t k = 0;
        while (k < n && sub[k] == gamma[k]) sub[k++] = 0;
        if (k == n) return true;
        ++sub[k];
        bool collinear = true;
        for (std::size_t i = 0; i < n && collinear; ++i)
            for (std::size_t j = i + 1; j < n && collinear; ++j)
                if (sub[i] * gamma[j] != sub[j] * gamma[i]) collinear = false;
        if (!collinear && evaluate(theta, sub) == 0) return false;
    }
}

bool is_J_eta_generic(const Covector& alpha, const AuxLattice& aux, IndexSet j) {
    if (evaluate(alpha, j) != 0) return false;
    for (IndexSet s = (j - 1) & j; s; s = (s - 1) & j)
        if (aux.eta_pair(j, s) != 0 && evaluate(alpha, s) == 0) return false;
    return true;
}

namespace {

// All pairings between subsets of {0..r-1}, filled incrementally.
template <class T, class Entry>
std::vector<T> pairing_table(int r, Entry entry) {
    std::size_t n = std::size_t{1} << r;
    std::vector<T> rows(n * r, T(0));
    for (IndexSet a = 1; a < n; ++a) {
        IndexSet rest = a & (a - 1);
        int lo = lowest_index(a);
        for (int j = 0; j < r; ++j) rows[a * r + j] = rows[rest * r + j] + entry(lo, j);
    }
    std::vector<T> table(n * n, T(0));
    for (IndexSet a = 1; a < n; ++a)
        for (IndexSet b = 1; b < n; ++b)
            table[a * n + b] = table[a * n + (b & (b - 1))] + rows[a * r + lowest_index(b)];
    return table;
}

constexpr int kMaxTableRank = 10;

}  // namespace

bool in_U_eta(const OmegaForm& omega, const AuxLattice& aux) {
    int r = aux.r;
    if (r > kMaxTableRank) throw Error(ErrorKind::InvalidInput, "rank too large for the U^eta check");
    std::size_t n = std::size_t{1} << r;
    auto eta = pairing_table<std::int64_t>(r, [&](int i, int j) { return aux.eta[i][j]; });
    auto om = pairing_table<BigRat>(r, [&](int i, int j) { return omega.at(i, j); });
    for (std::size_t k = 0; k < n * n; ++k) {
        if (eta[k] == 0) continue;
        if (sign(om[k]) != (eta[k] > 0 ? 1 : -1)) return false;
    }
    return true;
}

bool in_U_J(const OmegaForm& omega, IndexSet j) {
    for (IndexSet a = j; a; a = (a - 1) & j) {
        IndexSet rest = j & ~a;
        for (IndexSet b = rest; b; b = (b - 1) & rest)
            if (omega.pair(a, b) == 0) return false;
    }
    return true;
}

namespace {

bool nondegenerate_below(const AuxLattice& aux, IndexSet j, const Covector& theta_parent, const OmegaForm& form,
                         bool top, bool skip_eta_zero) {
    IndexSet low = j & (~j + 1);
    IndexSet rest = j & ~low;
    // a ranges over proper subsets containing the lowest element of j
    for (IndexSet s = (rest - 1) & rest;; s = (s - 1) & rest) {
        IndexSet a = low | s;
        IndexSet b = j & ~a;
        if (b != 0) {
            bool eta_zero = aux.eta_pair(a, b) == 0;
            if (!(eta_zero && (top || skip_eta_zero))) {
                if (evaluate(theta_parent, a) == 0) return false;
                if (form.pair(a, b) == 0) return false;
                Covector theta = flow_step(theta_parent, j, a, form);
                if (set_size(a) > 1 && !nondegenerate_below(aux, a, theta, form, false, skip_eta_zero)) return false;
                if (set_size(b) > 1 && !nondegenerate_below(aux, b, theta, form, false, skip_eta_zero)) return false;
            }
        }
        if (s == 0) break;
    }
    return true;
}

BigRat random_unit(CounterRng& rng) {
    constexpr std::int64_t scale = std::int64_t{1} << 16;
    return make_rat(static_cast<long>(rng.uniform(-scale, scale)), static_cast<long>(scale));
}

BigRat power_of_two_inverse(int k) {
    mpz_class den = 1;
    den <<= k;
    return BigRat(mpz_class(1), den);
}

}  // namespace

bool flow_nondegenerate(const AuxLattice& aux, const Covector& x, const OmegaForm& form, bool skip_eta_zero) {
    if (aux.r < 2) return true;
    return nondegenerate_below(aux, aux.all(), x, form, true, skip_eta_zero);
}

OmegaForm sample_omega(const AuxLattice& aux, std::uint64_t seed, const SamplerConfig& cfg) {
    if (!is_J_eta_generic(aux.alpha, aux, aux.all()))
        throw Error(ErrorKind::NotGenericAlpha, "alpha is not (I,eta)-generic");
    int r = aux.r;
    for (int attempt = 0; attempt < cfg.budget; ++attempt) {
        CounterRng rng(seed, static_cast<std::uint64_t>(attempt));
        std::vector<std::vector<BigRat>> noise(r, std::vector<BigRat>(r, BigRat(0)));
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                noise[i][j] = random_unit(rng);
                noise[j][i] = -noise[i][j];
            }
        for (int k = cfg.first_exponent; k <= cfg.max_exponent; ++k) {
            BigRat eps = power_of_two_inverse(k);
            std::vector<std::vector<BigRat>> e(r, std::vector<BigRat>(r));
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) e[i][j] = BigRat(static_cast<long>(aux.eta[i][j])) + eps * noise[i][j];
            OmegaForm omega(std::move(e));
            if (!in_U_eta(omega, aux)) continue;
            if (in_U_J(omega, aux.all()) && flow_nondegenerate(aux, aux.alpha, omega, false)) return omega;
            break;
        }
    }
    throw Error(ErrorKind::Timeout, "no admissible omega within " + std::to_string(cfg.budget) + " samples");
}

Covector sample_beta(const AuxLattice& aux, std::uint64_t seed, const SamplerConfig& cfg) {
    if (!is_J_eta_generic(aux.alpha, aux, aux.all()))
        throw Error(ErrorKind::NotGenericAlpha, "alpha is not (I,eta)-generic");
    int r = aux.r;
    IndexSet all = aux.all();
    OmegaForm eta_form = OmegaForm::from_integer(aux.eta);
    for (int attempt = 0; attempt < cfg.budget; ++attempt) {
        CounterRng rng(seed, static_cast<std::uint64_t>(attempt) | (std::uint64_t{1} << 63));
        Covector delta(r, BigRat(0));
        for (int i = 0; i + 1 < r; ++i) {
            delta[i] = random_unit(rng);
            delta[r - 1] -= delta[i];
        }
        for (int k = cfg.first_exponent; k <= cfg.max_exponent; ++k) {
            BigRat eps = power_of_two_inverse(k);
            Covector beta(r);
            for (int i = 0; i < r; ++i) beta[i] = aux.alpha[i] + eps * delta[i];
            bool same_signs = true;
            for (IndexSet s = 1; s <= all && same_signs; ++s) {
                int sa = sign(evaluate(aux.alpha, s));
                if (sa != 0 && sign(evaluate(beta, s)) != sa) same_signs = false;
            }
            if (!same_signs) continue;
            if (is_J_eta_generic(beta, aux, all) && flow_nondegenerate(aux, beta, eta_form, true)) return beta;
            break;
        }
    }
    throw Error(ErrorKind::Timeout, "no admissible beta within " + std::to_string(cfg.budget) + " samples");
}

}  // namespace flowtree
