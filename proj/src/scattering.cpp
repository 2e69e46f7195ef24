#include "flowtree/scattering.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>

#include "flowtree/rng.hpp"

namespace flowtree {

std::int64_t degree(const DimVec& n) {
    std::int64_t d = 0;
    for (auto x : n) d += x;
    return d;
}

bool LieAlgebra::admissible(const DimVec& n) const {
    for (auto x : n) {
        if (x < 0) return false;
        if (h_mode && x > 1) return false;
    }
    return degree(n) <= degree_bound;
}

// ---------------------------------------------------------------- GradedLieElt

GradedLieElt GradedLieElt::monomial(const DimVec& n, const RatFunc& c) {
    GradedLieElt e;
    e.add_term(n, c);
    return e;
}

RatFunc GradedLieElt::coeff(const DimVec& n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? RatFunc() : it->second;
}

void GradedLieElt::add_term(const DimVec& n, const RatFunc& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(n, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GradedLieElt GradedLieElt::degree_part(std::int64_t d) const {
    GradedLieElt out;
    for (const auto& [n, c] : terms_)
        if (degree(n) == d) out.terms_.emplace(n, c);
    return out;
}

GradedLieElt GradedLieElt::operator-() const {
    GradedLieElt out = *this;
    for (auto& [n, c] : out.terms_) c = -c;
    return out;
}

GradedLieElt& GradedLieElt::operator+=(const GradedLieElt& o) {
    for (const auto& [n, c] : o.terms_) add_term(n, c);
    return *this;
}

GradedLieElt& GradedLieElt::operator-=(const GradedLieElt& o) {
    for (const auto& [n, c] : o.terms_) add_term(n, -c);
    return *this;
}

GradedLieElt& GradedLieElt::operator*=(const RatFunc& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [n, v] : terms_) v *= c;
    return *this;
}

std::string GradedLieElt::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [n, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")*z^(" + format_dimvec(n) + ")";
    }
    return out;
}

GradedLieElt lie_bracket(const LieAlgebra& alg, const GradedLieElt& a, const GradedLieElt& b) {
    GradedLieElt out;
    for (const auto& [p, cp] : a.terms()) {
        std::int64_t dp = degree(p);
        for (const auto& [q, cq] : b.terms()) {
            if (dp + degree(q) > alg.degree_bound) continue;
            std::int64_t k = pair(alg.form, p, q);
            if (k == 0) continue;
            DimVec s(p);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] += q[i];
            if (!alg.admissible(s)) continue;
            out.add_term(s, RatFunc(kappa(k)) * cp * cq);
        }
    }
    return out;
}

// ------------------------------------------------------------------------ BCH

namespace {

// Word over {a, b}: bit i set means letter b at position i (0 = leftmost).
using WordKey = std::pair<int, std::uint32_t>;
using DynkinTable = std::map<WordKey, BigRat>;

void dynkin_blocks(int max_len, int len, std::uint32_t bits, int blocks, const BigRat& fact, DynkinTable& table) {
    for (int r = 0; len + r <= max_len; ++r) {
        for (int s = 0; len + r + s <= max_len; ++s) {
            if (r + s == 0) continue;
            int m = len + r + s;
            std::uint32_t w = bits;
            for (int i = 0; i < s; ++i) w |= std::uint32_t{1} << (len + r + i);
            BigRat f = fact;
            for (int i = 2; i <= r; ++i) f *= i;
            for (int i = 2; i <= s; ++i) f *= i;
            int n = blocks + 1;
            BigRat c = BigRat(n % 2 == 1 ? 1 : -1) / (BigRat(n) * BigRat(m) * f);
            table[{m, w}] += c;
            dynkin_blocks(max_len, m, w, n, f, table);
        }
    }
}

const DynkinTable& dynkin_table(int max_len) {
    static std::mutex mu;
    static std::map<int, DynkinTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(max_len);
    if (it != cache.end()) return it->second;
    DynkinTable t;
    dynkin_blocks(max_len, 0, 0, 0, BigRat(1), t);
    for (auto i = t.begin(); i != t.end();) {
        bool dead = i->second == 0;
        int m = i->first.first;
        std::uint32_t w = i->first.second;
        // right-nested brackets ending in [x, x] vanish
        if (m >= 2 && (((w >> (m - 1)) & 1) == ((w >> (m - 2)) & 1))) dead = true;
        i = dead ? t.erase(i) : std::next(i);
    }
    return cache.emplace(max_len, std::move(t)).first->second;
}

std::int64_t min_degree(const GradedLieElt& e) {
    std::int64_t d = -1;
    for (const auto& [n, c] : e.terms()) d = d < 0 ? degree(n) : std::min(d, degree(n));
    return d;
}

}  // namespace

GradedLieElt bch_log_product(const LieAlgebra& alg, const GradedLieElt& a, const GradedLieElt& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::int64_t lo = std::min(min_degree(a), min_degree(b));
    if (lo < 1) throw Error(ErrorKind::InvalidInput, "BCH needs elements of positive degree");
    int max_len = static_cast<int>(alg.degree_bound / lo);
    if (max_len > 24) throw Error(ErrorKind::InvalidInput, "degree bound too large for BCH");
    if (max_len < 1) return {};
    const DynkinTable& table = dynkin_table(max_len);

    std::map<WordKey, GradedLieElt> suffix;  // keyed like words, read right to left
    std::function<const GradedLieElt&(int, std::uint32_t)> nested = [&](int m, std::uint32_t w) -> const GradedLieElt& {
        auto it = suffix.find({m, w});
        if (it != suffix.end()) return it->second;
        const GradedLieElt& head = (w & 1) ? b : a;
        GradedLieElt value = m == 1 ? head : lie_bracket(alg, head, nested(m - 1, w >> 1));
        return suffix.emplace(WordKey{m, w}, std::move(value)).first->second;
    };

    GradedLieElt out;
    for (const auto& [word, c] : table) {
        const GradedLieElt& v = nested(word.first, word.second);
        if (!v.is_zero()) out += v * RatFunc(c);
    }
    return out;
}

GradedLieElt path_ordered_product(const LieAlgebra& alg, const std::vector<std::pair<GradedLieElt, int>>& crossings) {
    GradedLieElt acc;
    for (const auto& [phi, eps] : crossings) {
        if (eps != 1 && eps != -1) throw Error(ErrorKind::InvalidInput, "crossing sign must be +1 or -1");
        GradedLieElt step = eps == 1 ? phi : -phi;
        acc = bch_log_product(alg, step, acc);
    }
    return acc;
}

// --------------------------------------------------------------------- rank 2

namespace {

std::int64_t gcd2(const DimVec& n) { return std::gcd(n[0], n[1]); }

DimVec primitive(const DimVec& n) {
    std::int64_t g = gcd2(n);
    return {n[0] / g, n[1] / g};
}

// Strict order by slope n[1]/n[0], from (1,0) to (0,1).
bool slope_less(const DimVec& p, const DimVec& q) { return p[1] * q[0] < q[1] * p[0]; }

// Order in which a path from the positive to the negative quadrant crosses
// the half-lines.
std::vector<DimVec> crossing_order(const std::vector<DimVec>& normals, Half half) {
    std::vector<DimVec> v = normals;
    std::sort(v.begin(), v.end(), slope_less);
    if (half == Half::LowerRight) std::reverse(v.begin(), v.end());
    return v;
}

std::vector<DimVec> primitive_normals(int degree_bound) {
    std::vector<DimVec> out;
    for (std::int64_t a = 0; a <= degree_bound; ++a)
        for (std::int64_t b = 0; a + b <= degree_bound; ++b)
            if (a + b > 0 && std::gcd(a, b) == 1) out.push_back({a, b});
    return out;
}

void check_rank2_form(const IntMatrix& form) {
    if (form.size() != 2 || form[0].size() != 2 || form[1].size() != 2)
        throw Error(ErrorKind::InvalidInput, "rank-2 diagrams need a 2x2 form");
    if (form[0][0] != 0 || form[1][1] != 0 || form[0][1] != -form[1][0])
        throw Error(ErrorKind::InvalidInput, "form is not skew-symmetric");
}

GradedLieElt truncated(const GradedLieElt& e, std::int64_t d) {
    GradedLieElt out;
    for (const auto& [n, c] : e.terms())
        if (degree(n) <= d) out.add_term(n, c);
    return out;
}

std::vector<std::pair<GradedLieElt, int>> crossings_for(const std::map<DimVec, GradedLieElt>& walls,
                                                        const std::vector<DimVec>& order, int eps) {
    std::vector<std::pair<GradedLieElt, int>> out;
    for (const auto& n : order) {
        auto it = walls.find(n);
        if (it != walls.end() && !it->second.is_zero()) out.emplace_back(it->second, eps);
    }
    return out;
}

}  // namespace

const Ray* Rank2Diagram::find(const DimVec& normal, Half half) const {
    for (const auto& r : rays)
        if (r.normal == normal && r.half == half) return &r;
    return nullptr;
}

Half Rank2Diagram::attractor_half() const { return form[0][1] >= 0 ? Half::UpperLeft : Half::LowerRight; }

Rank2Diagram reconstruct_rank2(const IntMatrix& form, const std::map<DimVec, GradedLieElt>& initial, int degree_bound,
                               std::uint64_t shuffle_seed) {
    check_rank2_form(form);
    if (degree_bound < 1) throw Error(ErrorKind::InvalidInput, "degree bound must be positive");
    for (const auto& [n, elt] : initial) {
        if (n.size() != 2 || n[0] < 0 || n[1] < 0 || degree(n) == 0 || gcd2(n) != 1)
            throw Error(ErrorKind::InvalidInput, "initial wall normal " + format_dimvec(n) + " is not primitive");
        for (const auto& [m, c] : elt.terms()) {
            if (m.size() != 2 || primitive(m) != n || m[0] < 0 || m[1] < 0)
                throw Error(ErrorKind::InvalidInput, "initial wall term off its ray");
            if (degree(m) > degree_bound) throw Error(ErrorKind::DegreeExceeded, "initial data above the degree bound");
        }
    }

    Rank2Diagram diag;
    diag.form = form;
    diag.degree_bound = degree_bound;
    Half attr = diag.attractor_half();
    Half other = attr == Half::UpperLeft ? Half::LowerRight : Half::UpperLeft;

    std::vector<DimVec> normals = primitive_normals(degree_bound);
    CounterRng rng(shuffle_seed, 0x5eed);
    auto maybe_shuffle = [&](std::vector<DimVec>& v) {
        if (shuffle_seed == 0) return;
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform(0, i - 1))]);
    };
    maybe_shuffle(normals);

    std::map<DimVec, GradedLieElt> solved;
    if (form[0][1] == 0) {
        solved = initial;
    } else {
        LieAlgebra full{form, degree_bound, false};
        GradedLieElt log_psi = path_ordered_product(full, crossings_for(initial, crossing_order(normals, attr), 1));
        std::vector<DimVec> order = crossing_order(normals, other);
        for (int d = 1; d <= degree_bound; ++d) {
            LieAlgebra alg{form, d, false};
            GradedLieElt current = path_ordered_product(alg, crossings_for(solved, order, 1));
            GradedLieElt diff = truncated(log_psi, d) - current;
            std::vector<DimVec> classes;
            for (const auto& [n, c] : diff.terms()) {
                if (degree(n) < d) throw Error(ErrorKind::ConsistencyFailure, "lower degree mismatch during reconstruction");
                classes.push_back(n);
            }
            maybe_shuffle(classes);
            for (const auto& n : classes) solved[primitive(n)].add_term(n, diff.coeff(n));
        }
    }

    std::vector<DimVec> sorted = normals;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& n : sorted) {
        auto it = initial.find(n);
        if (it != initial.end() && !it->second.is_zero()) diag.rays.push_back({n, attr, it->second});
        auto jt = solved.find(n);
        if (jt != solved.end() && !jt->second.is_zero()) diag.rays.push_back({n, other, jt->second});
    }
    if (!loop_product(diag).is_zero())
        throw Error(ErrorKind::ConsistencyFailure, "loop product around the origin is not the identity");
    return diag;
}

GradedLieElt loop_product(const Rank2Diagram& diag) {
    Half attr = diag.attractor_half();
    Half other = attr == Half::UpperLeft ? Half::LowerRight : Half::UpperLeft;
    std::map<DimVec, GradedLieElt> first, second;
    std::vector<DimVec> normals;
    for (const auto& r : diag.rays) {
        (r.half == attr ? first : second)[r.normal] = r.element;
        normals.push_back(r.normal);
    }
    std::sort(normals.begin(), normals.end());
    normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
    auto crossings = crossings_for(first, crossing_order(normals, attr), 1);
    std::vector<DimVec> back = crossing_order(normals, other);
    std::reverse(back.begin(), back.end());
    for (auto& c : crossings_for(second, back, -1)) crossings.push_back(std::move(c));
    return path_ordered_product(LieAlgebra{diag.form, diag.degree_bound, false}, crossings);
}

std::map<DimVec, GradedLieElt> initial_from_table(const AttractorTable& table, int degree_bound) {
    std::map<DimVec, GradedLieElt> out;
    for (std::int64_t a = 0; a <= degree_bound; ++a)
        for (std::int64_t b = 0; a + b <= degree_bound; ++b) {
            if (a + b == 0) continue;
            DimVec n{a, b};
            RatFunc v = table.omega_bar_star(n);
            if (!v.is_zero()) out[primitive(n)].add_term(n, v);
        }
    return out;
}

RatFunc dt_from_rank2(const Rank2Diagram& diag, const DimVec& gamma, const Covector& theta) {
    if (gamma.size() != 2 || theta.size() != 2) throw Error(ErrorKind::InvalidInput, "rank-2 classes only");
    if (gamma[0] < 0 || gamma[1] < 0 || degree(gamma) == 0)
        throw Error(ErrorKind::InvalidInput, "gamma must be a nonzero nonnegative class");
    if (degree(gamma) > diag.degree_bound)
        throw Error(ErrorKind::DegreeExceeded, "class " + format_dimvec(gamma) + " is above the degree bound");
    if (evaluate(theta, gamma) != 0) throw Error(ErrorKind::NotOnWall, "theta(gamma) != 0");
    if (theta[0] == 0 && theta[1] == 0) throw Error(ErrorKind::NotGenericTheta, "theta = 0 lies on every wall");
    DimVec n = primitive(gamma);
    // theta = lambda * (-b, a); the sign of lambda picks the half-line
    int lambda = n[1] != 0 ? -sign(theta[0]) : sign(theta[1]);
    Half half = lambda > 0 ? Half::UpperLeft : Half::LowerRight;
    const Ray* ray = diag.find(n, half);
    return ray ? ray->element.coeff(gamma) : RatFunc();
}

std::vector<std::string> rank2_lines(const Rank2Diagram& diag) {
    Half scattered = diag.attractor_half() == Half::UpperLeft ? Half::LowerRight : Half::UpperLeft;
    std::vector<std::pair<DimVec, const RatFunc*>> entries;
    for (const auto& r : diag.rays)
        if (r.half == scattered)
            for (const auto& [n, c] : r.element.terms()) entries.emplace_back(n, &c);
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
        if (slope_less(x.first, y.first)) return true;
        if (slope_less(y.first, x.first)) return false;
        return degree(x.first) < degree(y.first);
    });
    std::vector<std::string> lines;
    for (const auto& [n, c] : entries) lines.push_back("ray " + format_dimvec(n) + " : " + c->to_string());
    return lines;
}

// -------------------------------------------------------------- joint checks

namespace {

struct HContext {
    using Value = GradedLieElt;
    const LieAlgebra* alg;
    const std::vector<RatFunc>* inputs;
    int r;

    Value input(int i) const {
        DimVec e(r, 0);
        e[i] = 1;
        return GradedLieElt::monomial(e, (*inputs)[i]);
    }
    Value zero() const { return {}; }
    bool is_zero(const Value& v) const { return v.is_zero(); }
    Value bracket(const Value& a, const Value& b, IndexSet, IndexSet) const { return lie_bracket(*alg, a, b); }
    void add_scaled(Value& acc, const Value& v, int eps) const { acc += v * RatFunc(static_cast<long>(eps)); }
};

static_assert(BracketContext<HContext>);

std::string set_label(IndexSet s) {
    std::string out;
    for (; s; s &= s - 1) out += std::to_string(lowest_index(s) + 1);
    return out;
}

Covector along(const Covector& x, const Covector& dir, const BigRat& t) {
    Covector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * dir[i];
    return out;
}

}  // namespace

JointReport check_joint_consistency(const AuxLattice& aux, std::uint64_t seed, const JointCheckOptions& opts) {
    JointReport report;
    int r = aux.r;
    if (r > 6) throw Error(ErrorKind::InvalidInput, "joint checks support r <= 6");
    IndexSet all = aux.all();
    OmegaForm omega = sample_omega(aux, seed, opts.sampler);

    CounterRng rng(seed, 0x6a6f696e74ULL);
    std::vector<RatFunc> inputs;
    for (int i = 0; i < r; ++i) {
        std::int64_t c = rng.uniform(1, 3) * (rng.uniform(0, 1) ? 1 : -1);
        BiLaurent p = BiLaurent::monomial(static_cast<int>(rng.uniform(-2, 2)), 0, BigRat(static_cast<long>(c)));
        p += BiLaurent::monomial(static_cast<int>(rng.uniform(-2, 2)), static_cast<int>(rng.uniform(0, 1)),
                                 BigRat(static_cast<long>(rng.uniform(-2, 2))));
        if (p.is_zero()) p = BiLaurent(1);
        inputs.emplace_back(p);
    }
    LieAlgebra alg{aux.eta, r, true};
    HContext ctx{&alg, &inputs, r};

    Covector dir = omega.iota(all);
    std::map<BigRat, std::vector<std::pair<IndexSet, IndexSet>>> joints;
    if (r >= 2) {
        IndexSet low = all & (~all + 1);
        IndexSet rest = all & ~low;
        for (IndexSet s = (rest - 1) & rest;; s = (s - 1) & rest) {
            IndexSet a = low | s;
            IndexSet b = all & ~a;
            if (aux.eta_pair(a, b) != 0) {
                BigRat slope = evaluate(dir, a);
                if (slope == 0) throw Error(ErrorKind::DivisionByZeroPairing, "omega(e_I, e_J) = 0");
                BigRat t = -evaluate(aux.alpha, a) / slope;
                if (t > 0) joints[t].emplace_back(a, b);
            }
            if (s == 0) break;
        }
    }
    report.joints = static_cast<int>(joints.size());

    auto wall_value = [&](const Covector& y) { return flow_tree_map(aux, ctx, y, omega); };
    // Wall value on the open segment (lo, hi) of the half-line, hi empty for
    // the unbounded one. Tries a few interior points in case one is degenerate.
    auto segment_value = [&](const BigRat& lo, const std::optional<BigRat>& hi) {
        for (int k = 1; k <= 8; ++k) {
            BigRat t = hi ? BigRat(lo + (*hi - lo) * make_rat(k, 2 * (k + 1))) : BigRat(lo + k);
            try {
                return wall_value(along(aux.alpha, dir, t));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ZeroSignArgument && e.kind() != ErrorKind::DivisionByZeroPairing) throw;
            }
        }
        throw Error(ErrorKind::Timeout, "no nondegenerate point on a segment of the half-line");
    };

    GradedLieElt at_alpha = wall_value(aux.alpha);
    if (opts.corrupt) {
        DimVec e(r, 1);
        at_alpha.add_term(e, RatFunc(1));
    }

    GradedLieElt previous = at_alpha;
    GradedLieElt telescoped;
    int index = 0;
    for (auto it = joints.begin(); it != joints.end(); ++it, ++index) {
        const BigRat& t = it->first;
        Covector x = along(aux.alpha, dir, t);
        std::string where = "joint=" + std::to_string(index + 1) + ";t=" + to_string(t);

        // no partition of I into three or more parts on which x vanishes
        std::vector<IndexSet> zero_sets;
        for (IndexSet s = 1; s < all; ++s)
            if (evaluate(x, s) == 0) zero_sets.push_back(s);
        for (IndexSet s1 : zero_sets)
            for (IndexSet s2 : zero_sets)
                if ((s1 & s2) == 0 && (s1 | s2) != all) {
                    report.passed = false;
                    report.locus = where + ";kind=triple;parts=" + set_label(s1) + "|" + set_label(s2);
                    return report;
                }

        GradedLieElt g;
        for (const auto& [a, b] : it->second) {
            GradedLieElt phi_a = flow_tree_map(aux, ctx, a, x, omega);
            GradedLieElt phi_b = flow_tree_map(aux, ctx, b, x, omega);
            int s = sign(omega.pair(a, b));
            g += lie_bracket(alg, phi_a, phi_b) * RatFunc(static_cast<long>(-s));
        }
        auto next = std::next(it);
        GradedLieElt after = segment_value(t, next == joints.end() ? std::nullopt : std::optional<BigRat>(next->first));
        if (!(previous - after == g)) {
            report.passed = false;
            std::string splits;
            for (const auto& [a, b] : it->second) splits += (splits.empty() ? "" : ",") + set_label(a) + "|" + set_label(b);
            report.locus = where + ";kind=difference;splits=" + splits;
            return report;
        }
        telescoped += g;
        previous = after;
    }
    if (!previous.is_zero()) {
        report.passed = false;
        report.locus = "kind=beyond_last_joint;value=" + previous.to_string();
        return report;
    }
    if (!(telescoped == at_alpha)) {
        report.passed = false;
        report.locus = "kind=telescoped_sum";
        return report;
    }
    return report;
}

}  // namespace flowtree
