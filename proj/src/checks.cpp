#include "flowtree/checks.hpp"

#include "flowtree/flow.hpp"
#include "flowtree/scattering.hpp"

namespace flowtree {

QuiverInstance random_instance(std::uint64_t seed, int r, int eta_bound) {
    if (r < 1 || r > kMaxLeaves) throw Error(ErrorKind::InvalidInput, "instance rank out of range");
    for (std::uint64_t attempt = 0; attempt < 100000; ++attempt) {
        CounterRng rng(seed, attempt);
        QuiverInstance inst;
        int n = static_cast<int>(rng.uniform(2, 3));
        inst.quiver.vertex_count = n;
        inst.quiver.arrows.assign(n, std::vector<std::int64_t>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && rng.uniform(0, 2) == 0) inst.quiver.arrows[i][j] = rng.uniform(1, 2);
        for (int k = 0; k < r; ++k) {
            if (k > 0 && rng.uniform(0, 2) == 0) {
                inst.gammas.push_back(inst.gammas[static_cast<std::size_t>(rng.uniform(0, k - 1))]);
                continue;
            }
            DimVec g(n, 0);
            while (std::all_of(g.begin(), g.end(), [](auto x) { return x == 0; }))
                for (auto& x : g) x = rng.uniform(0, 2);
            inst.gammas.push_back(g);
        }
        DimVec total(n, 0);
        for (const auto& g : inst.gammas)
            for (int i = 0; i < n; ++i) total[i] += g[i];
        // theta = u |total|^2 - (u . total) total lies on the wall of total
        std::int64_t norm = 0, dot = 0;
        DimVec u(n);
        for (int i = 0; i < n; ++i) {
            u[i] = rng.uniform(-3, 3);
            norm += total[i] * total[i];
            dot += u[i] * total[i];
        }
        inst.theta.assign(n, BigRat(0));
        bool zero = true;
        for (int i = 0; i < n; ++i) {
            inst.theta[i] = static_cast<long>(u[i] * norm - dot * total[i]);
            zero &= inst.theta[i] == 0;
        }
        if (zero || !is_gamma_generic(inst.theta, total)) continue;
        inst.aux = build_aux(inst.quiver, inst.gammas, inst.theta);
        bool bounded = true, nontrivial = false;
        for (const auto& row : inst.aux.eta)
            for (auto v : row) {
                bounded &= (v <= eta_bound && v >= -eta_bound);
                nontrivial |= v != 0;
            }
        if (!bounded || (r > 1 && !nontrivial)) continue;
        return inst;
    }
    throw Error(ErrorKind::Timeout, "could not draw a random instance");
}

namespace {

std::string mode_name(PerturbationMode m) { return m == PerturbationMode::Omega ? "omega" : "beta"; }

}  // namespace

CheckReport check_perturbation(int r_max, int trials, std::uint64_t seed, int seeds,
                               const std::vector<PerturbationMode>& modes, int eta_bound) {
    CheckReport report;
    CounterRng pick(seed, 0x7065727475726231ULL);
    for (int t = 0; t < trials; ++t) {
        int r = static_cast<int>(pick.uniform(2, r_max));
        QuiverInstance inst = random_instance(pick.next(), r, eta_bound);
        std::string reference;
        for (auto mode : modes)
            for (int s = 0; s < seeds; ++s) {
                FlowOptions opts;
                opts.mode = mode;
                opts.seed = seed * 1000003 + static_cast<std::uint64_t>(s);
                std::string value = flow_tree_scalar(inst.aux, opts).to_string();
                ++report.cases;
                if (reference.empty()) {
                    reference = value;
                } else if (value != reference) {
                    report.passed = false;
                    report.locus = "trial=" + std::to_string(t) + ";r=" + std::to_string(r) + ";mode=" +
                                   mode_name(mode) + ";seed_index=" + std::to_string(s) + ";expected=" + reference +
                                   ";got=" + value;
                    return report;
                }
            }
    }
    return report;
}

CheckReport check_joints(int r, int trials, std::uint64_t seed, bool corrupt) {
    CheckReport report;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        QuiverInstance inst = random_instance(s, r, 4);
        JointCheckOptions opts;
        opts.corrupt = corrupt;
        JointReport jr = check_joint_consistency(inst.aux, s, opts);
        ++report.cases;
        if (!jr.passed) {
            report.passed = false;
            report.locus = "trial=" + std::to_string(t) + ";seed=" + std::to_string(s) + ";" + jr.locus;
            return report;
        }
    }
    return report;
}

CheckReport check_multicover(int trials, std::uint64_t seed, int max_entry) {
    CheckReport report;
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, static_cast<std::uint64_t>(t) + 0x6d63ULL);
        std::map<DimVec, BiLaurent> table;
        for (std::int64_t a = 0; a <= max_entry; ++a)
            for (std::int64_t b = 0; b <= max_entry; ++b) {
                if (a + b == 0) continue;
                BiLaurent v;
                int terms = static_cast<int>(rng.uniform(0, 3));
                for (int k = 0; k < terms; ++k)
                    v += BiLaurent::monomial(static_cast<int>(rng.uniform(-3, 3)), static_cast<int>(rng.uniform(0, 2)),
                                             BigRat(static_cast<long>(rng.uniform(-4, 4))));
                table[{a, b}] = v;
            }
        auto back = integer_from_rational(rational_from_integer(table));
        ++report.cases;
        for (const auto& [g, v] : table) {
            if (!(back.at(g) == v)) {
                report.passed = false;
                report.locus = "trial=" + std::to_string(t) + ";gamma=" + format_dimvec(g) + ";expected=" +
                               v.to_string() + ";got=" + back.at(g).to_string();
                return report;
            }
        }
    }
    return report;
}

CheckReport check_oracle(int m, int max_dim, const DtOptions& opts) {
    CheckReport report;
    Quiver q = Quiver::kronecker(m);
    AttractorTable table;
    table.acyclic_default = true;
    Rank2Diagram diag = reconstruct_rank2(euler_skew(q), initial_from_table(table, max_dim), max_dim);
    for (std::int64_t a = 0; a <= max_dim; ++a)
        for (std::int64_t b = 0; a + b <= max_dim; ++b) {
            if (a + b == 0) continue;
            DimVec gamma{a, b};
            for (int side : {1, -1}) {
                Covector theta{BigRat(static_cast<long>(side * b)), BigRat(static_cast<long>(-side * a))};
                RatFunc flow = assemble_dt(q, gamma, theta, table, opts);
                RatFunc oracle = dt_from_rank2(diag, gamma, theta);
                ++report.cases;
                if (!(flow == oracle)) {
                    report.passed = false;
                    report.locus = "m=" + std::to_string(m) + ";gamma=" + format_dimvec(gamma) + ";theta=" +
                                   to_string(theta[0]) + "," + to_string(theta[1]) + ";flow=" + flow.to_string() +
                                   ";oracle=" + oracle.to_string();
                    return report;
                }
            }
        }
    return report;
}

}  // namespace flowtree
