// Acceptance run: one line per criterion with its timing and limit.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "flowtree/checks.hpp"
#include "flowtree/flow.hpp"
#include "flowtree/scattering.hpp"
#include "flowtree/trees.hpp"

using namespace flowtree;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

Outcome tree_counts() {
    const std::uint64_t expected[] = {1, 1, 3, 15, 105, 945, 10395, 135135};
    for (int r = 1; r <= 8; ++r) {
        TreeEnumerator e(full_set(r));
        std::uint64_t n = 0;
        while (e.next()) ++n;
        if (n != expected[r - 1] || tree_count(r) != expected[r - 1])
            return fail("r=" + std::to_string(r) + " count=" + std::to_string(n));
    }
    return {true, "r=1..8"};
}

Outcome relabeling() {
    CounterRng rng(2024, 2);
    int trees = 0, products = 0;
    for (int trial = 0; trial < 100; ++trial) {
        QuiverInstance inst = random_instance(rng.next(), static_cast<int>(rng.uniform(2, 5)), 4);
        const AuxLattice& aux = inst.aux;
        OmegaForm omega = sample_omega(aux, static_cast<std::uint64_t>(trial));
        for (const auto& t : enumerate_trees(aux.all())) {
            FlowAssignment base = run_flow(t, aux.alpha, omega);
            ChildLabeling swap(t.edge_count());
            for (std::size_t v = 0; v < swap.size(); ++v) swap[v] = rng.uniform(0, 1) == 1;
            FlowAssignment other = run_flow(t, aux.alpha, omega, swap);
            for (int v : t.interior_nodes())
                if (!(other.theta[v] == base.theta[v])) return fail("trial=" + std::to_string(trial) + " flow differs");
            ++trees;
            // epsilon needs nonzero sign arguments, which sampling guarantees on T^eta
            if (!passes_eta_filter(t, aux)) continue;
            LaurentPoly prod = tree_product(t, epsilon_signs(t, base, omega), aux);
            if (!(tree_product(t, epsilon_signs(t, other, omega, swap), aux, swap) == prod))
                return fail("trial=" + std::to_string(trial) + " product differs on " + t.encode());
            ++products;
        }
    }
    return {true, "100 instances, " + std::to_string(trees) + " flows, " + std::to_string(products) + " products"};
}

Outcome from_report(const CheckReport& r) {
    if (!r.passed) return fail(r.locus);
    return {true, std::to_string(r.cases) + " cases"};
}

Outcome oracle() {
    int cases = 0;
    for (int m = 1; m <= 3; ++m) {
        CheckReport r = check_oracle(m, 6, {});
        if (!r.passed) return fail(r.locus);
        cases += r.cases;
    }
    return {true, "m=1..3, " + std::to_string(cases) + " cases"};
}

Outcome wall_crossing() {
    Quiver q = Quiver::kronecker(1);
    AttractorTable table;
    table.acyclic_default = true;
    RatFunc plus = assemble_dt(q, {1, 1}, Covector{1, -1}, table);
    RatFunc minus = assemble_dt(q, {1, 1}, Covector{-1, 1}, table);
    if (!(plus == RatFunc(1)) || !minus.is_zero()) return fail("values " + plus.to_string() + ", " + minus.to_string());
    RatFunc jump = plus - minus;
    RatFunc k = RatFunc(kappa(1)) * table.omega_bar_star({1, 0}) * table.omega_bar_star({0, 1});
    if (!(jump == k || jump == -k)) return fail("jump " + jump.to_string());
    return {true, "jump = " + jump.to_string()};
}

Outcome joints() {
    CheckReport r3 = check_joints(3, 20, 0);
    if (!r3.passed) return fail("r=3 " + r3.locus);
    CheckReport r4 = check_joints(4, 10, 0);
    if (!r4.passed) return fail("r=4 " + r4.locus);
    CheckReport bad = check_joints(3, 5, 0, true);
    if (bad.passed) return fail("corrupted data passed");
    return {true, "30 seeds; corruption caught at " + bad.locus};
}

GradedLieElt random_element(CounterRng& rng, std::size_t rank) {
    GradedLieElt e;
    for (int k = 0; k < 3; ++k) {
        DimVec n(rank, 0);
        while (degree(n) == 0 || degree(n) > 3)
            for (auto& x : n) x = rng.uniform(0, 2);
        BiLaurent c = BiLaurent::monomial(static_cast<int>(rng.uniform(-2, 2)), 0,
                                          BigRat(static_cast<long>(rng.uniform(-3, 3))));
        if (!c.is_zero()) e.add_term(n, RatFunc(c));
    }
    return e;
}

Outcome algebra() {
    for (int x = -20; x <= 20; ++x) {
        if (!(kappa(-x) == -kappa(x))) return fail("kappa not odd at " + std::to_string(x));
        if (kappa(x).eval(1) != BigRat((x % 2 == 0 ? 1 : -1) * x)) return fail("kappa(1) at " + std::to_string(x));
    }
    CounterRng rng(2024, 9);
    const IntMatrix forms[] = {{{0, 3}, {-3, 0}}, {{0, 2, -1}, {-2, 0, 3}, {1, -3, 0}}};
    for (int trial = 0; trial < 50; ++trial) {
        const IntMatrix& form = forms[trial % 2];
        LieAlgebra alg{form, 6, false};
        auto a = random_element(rng, form.size()), b = random_element(rng, form.size()),
             c = random_element(rng, form.size());
        GradedLieElt j = lie_bracket(alg, a, lie_bracket(alg, b, c)) + lie_bracket(alg, b, lie_bracket(alg, c, a)) +
                         lie_bracket(alg, c, lie_bracket(alg, a, b));
        if (!j.is_zero()) return fail("Jacobi fails on triple " + std::to_string(trial));
    }
    return {true, "x=-20..20, 50 triples"};
}

bool capture(const std::string& cmd, std::string& out) {
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return false;
    char buf[4096];
    std::size_t n;
    out.clear();
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

Outcome determinism() {
    const std::vector<std::string> commands = {
        "trees 4",
        "F --m 3 --gammas 1,0 1,0 0,1 0,1 --theta 1,-1",
        "F --m 2 --gammas 1,0 0,1 1,1 --theta 1,-1 --mode beta --seed 5",
        "dt --m 3 --gamma 3,3 --theta 1,-1",
        "--format lines dt --m 2 --gamma 4,3 --theta 3,-4",
        "oracle rank2 --m 3 --degree 6",
        "check perturbation --r 4 --trials 5",
        "check joints --r 3 --trials 5",
        "check multicover --trials 10",
        "check oracle --m 2 --max-dim 5",
    };
    const std::string bin = FLOWTREE_CLI;
    for (const auto& c : commands) {
        std::string a, b, single;
        if (!capture(bin + " " + c, a)) return fail("'" + c + "' failed: " + a);
        capture(bin + " " + c, b);
        capture("FLOWTREE_THREADS=1 " + bin + " " + c, single);
        if (a != b || a != single) return fail("'" + c + "' output differs between runs");
    }
    return {true, std::to_string(commands.size()) + " commands"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit;
        std::function<Outcome()> run;
    };
    const std::vector<PerturbationMode> omega_only{PerturbationMode::Omega};
    const std::vector<PerturbationMode> both{PerturbationMode::Omega, PerturbationMode::Beta};
    const std::vector<Criterion> criteria = {
        {1, "tree counts", 5, tree_counts},
        {2, "flow well-definedness", 10, relabeling},
        {3, "perturbation independence", 30, [&] { return from_report(check_perturbation(4, 25, 3, 5, omega_only)); }},
        {4, "omega and beta modes agree", 30, [&] { return from_report(check_perturbation(4, 25, 3, 5, both)); }},
        {5, "rank-2 oracle agreement", 60, oracle},
        {6, "primitive wall-crossing", 1, wall_crossing},
        {7, "joint consistency", 60, joints},
        {8, "multicover round trip", 5, [] { return from_report(check_multicover(50, 8)); }},
        {9, "algebra invariants", 5, algebra},
        {10, "CLI determinism", 30, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = o.pass && secs <= c.limit;
        if (o.pass && !ok) o.detail += "; over time limit";
        failures += !ok;
        char line[256];
        std::snprintf(line, sizeof line, "criterion %2d  %-4s  %7.3fs / %4.0fs  %s: ", c.id, ok ? "PASS" : "FAIL", secs,
                      c.limit, c.name);
        std::cout << line << o.detail << std::endl;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
