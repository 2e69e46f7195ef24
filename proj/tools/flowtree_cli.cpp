#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "flowtree/checks.hpp"
#include "flowtree/dt.hpp"
#include "flowtree/flow.hpp"
#include "flowtree/parallel.hpp"
#include "flowtree/scattering.hpp"
#include "flowtree/trees.hpp"

using namespace flowtree;

namespace {

namespace fs = std::filesystem;

enum Exit { kPass = 0, kInternal = 1, kInvalid = 2, kGenericity = 3 };

struct RunConfig {
    std::uint64_t seed = 0;
    int budget = 1000;
    std::string cache_path;
    std::string format = "text";
    unsigned threads = 0;
};

// One file per key; the first line repeats the key so hash collisions and
// truncated writes read as misses.
class DiskFCache : public FCache {
public:
    explicit DiskFCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    std::optional<LaurentPoly> get(const std::string& key) override {
        if (auto hit = memory_.get(key)) return hit;
        std::ifstream in(file_for(key));
        std::string stored_key, value;
        if (!in || !std::getline(in, stored_key) || !std::getline(in, value) || stored_key != key) return std::nullopt;
        try {
            RatFunc parsed = parse_ratfunc(value);
            if (!parsed.is_polynomial()) return std::nullopt;
            LaurentPoly out;
            for (const auto& [e, c] : parsed.numer().terms()) {
                if (e.second != 0) return std::nullopt;
                out += LaurentPoly::monomial(e.first, c);
            }
            memory_.put(key, out);
            return out;
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    void put(const std::string& key, const LaurentPoly& value) override {
        memory_.put(key, value);
        fs::path target = file_for(key);
        fs::path tmp = target;
        tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << key << '\n' << value.to_string() << '\n';
            if (!out) return;
        }
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) fs::remove(tmp, ec);
    }

private:
    fs::path file_for(const std::string& key) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : key) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char name[32];
        std::snprintf(name, sizeof name, "F-%016llx.txt", static_cast<unsigned long long>(h));
        return dir_ / name;
    }

    fs::path dir_;
    MemoryFCache memory_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Printer {
public:
    explicit Printer(const std::string& format) : lines_(format == "lines") {}
    // text: "<key> <sep> <value>"; lines: "<key>\t<value>"
    void field(const std::string& key, const std::string& value, const std::string& sep = " = ") {
        if (lines_)
            out_ << key << '\t' << value << '\n';
        else
            out_ << key << sep << value << '\n';
    }
    void bare(const std::string& key, const std::string& value) {
        if (lines_)
            out_ << key << '\t' << value << '\n';
        else
            out_ << value << '\n';
    }
    void flush() { std::cout << out_.str() << std::flush; }

private:
    bool lines_;
    std::ostringstream out_;
};

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput:
        case ErrorKind::NotOnWall:
        case ErrorKind::DegreeExceeded:
            return kInvalid;
        case ErrorKind::NotGenericTheta:
        case ErrorKind::NotGenericAlpha:
        case ErrorKind::Timeout:
        case ErrorKind::DivisionByZeroPairing:
        case ErrorKind::ZeroSignArgument:
            return kGenericity;
        default:
            return kInternal;
    }
}

PerturbationMode parse_mode(const std::string& s) {
    if (s == "omega") return PerturbationMode::Omega;
    if (s == "beta") return PerturbationMode::Beta;
    throw Error(ErrorKind::InvalidInput, "mode must be omega or beta");
}

struct QuiverSource {
    std::string file;
    int m = 0;

    void add(CLI::App* cmd) {
        auto* f = cmd->add_option("--quiver", file, "quiver file");
        auto* k = cmd->add_option("--m", m, "Kronecker quiver with m arrows");
        f->excludes(k);
    }
    Quiver load() const {
        if (!file.empty()) return parse_quiver(read_file(file));
        if (m > 0) return Quiver::kronecker(m);
        throw Error(ErrorKind::InvalidInput, "need --quiver FILE or --m M");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Refined DT invariants of quivers from flow trees"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "perturbation seed");
    app.add_option("--budget", cfg.budget, "resample budget")->check(CLI::PositiveNumber);
    app.add_option("--cache", cfg.cache_path, "directory for the F-cache");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "lines"}));
    app.add_option("--threads", cfg.threads, "worker threads (0 = automatic)");

    int tree_r = 0;
    auto* trees = app.add_subcommand("trees", "list decorated trees with r leaves");
    trees->add_option("r", tree_r)->required()->check(CLI::Range(1, 10));

    QuiverSource f_quiver;
    std::vector<std::string> f_gammas;
    std::string f_theta, f_mode = "omega";
    auto* fcmd = app.add_subcommand("F", "flow tree scalar for a list of classes");
    f_quiver.add(fcmd);
    fcmd->add_option("--gammas", f_gammas, "classes gamma_1 .. gamma_r")->required();
    fcmd->add_option("--theta", f_theta)->required();
    fcmd->add_option("--mode", f_mode)->check(CLI::IsMember({"omega", "beta"}));

    QuiverSource d_quiver;
    std::string d_gamma, d_theta, d_attractor, d_mode = "omega";
    auto* dcmd = app.add_subcommand("dt", "rational and integer DT invariants");
    d_quiver.add(dcmd);
    dcmd->add_option("--gamma", d_gamma)->required();
    dcmd->add_option("--theta", d_theta)->required();
    dcmd->add_option("--attractor", d_attractor, "attractor table (default: acyclic)");
    dcmd->add_option("--mode", d_mode)->check(CLI::IsMember({"omega", "beta"}));

    auto* oracle = app.add_subcommand("oracle", "independent oracles");
    oracle->require_subcommand(1);
    QuiverSource o_quiver;
    std::string o_attractor;
    int o_degree = 0;
    auto* rank2 = oracle->add_subcommand("rank2", "rank-2 scattering diagram");
    o_quiver.add(rank2);
    rank2->add_option("--attractor", o_attractor);
    rank2->add_option("--degree", o_degree)->required()->check(CLI::Range(1, 64));

    auto* check = app.add_subcommand("check", "randomized property suites");
    check->require_subcommand(1);
    int c_r = 3, c_trials = 5, c_seeds = 5, c_m = 2, c_max_dim = 6;
    bool c_corrupt = false;
    auto* c_pert = check->add_subcommand("perturbation");
    c_pert->add_option("--r", c_r)->check(CLI::Range(2, 6));
    c_pert->add_option("--trials", c_trials)->check(CLI::PositiveNumber);
    c_pert->add_option("--seeds", c_seeds)->check(CLI::PositiveNumber);
    auto* c_joint = check->add_subcommand("joints");
    c_joint->add_option("--r", c_r)->check(CLI::Range(2, 6));
    c_joint->add_option("--trials", c_trials)->check(CLI::PositiveNumber);
    c_joint->add_flag("--corrupt", c_corrupt, "negative control");
    auto* c_multi = check->add_subcommand("multicover");
    c_multi->add_option("--trials", c_trials)->check(CLI::PositiveNumber);
    auto* c_oracle = check->add_subcommand("oracle");
    c_oracle->add_option("--m", c_m)->check(CLI::Range(1, 8));
    c_oracle->add_option("--max-dim", c_max_dim)->check(CLI::Range(1, 12));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kInvalid;
    }

    Printer out(cfg.format);
    try {
        if (cfg.threads) set_default_threads(cfg.threads);
        std::unique_ptr<FCache> cache;
        if (!cfg.cache_path.empty()) cache = std::make_unique<DiskFCache>(cfg.cache_path);
        SamplerConfig sampler;
        sampler.budget = cfg.budget;

        if (*trees) {
            auto list = enumerate_trees(full_set(tree_r));
            out.field("count", std::to_string(list.size()), " ");
            for (const auto& t : list) out.bare("tree", t.encode());
        } else if (*fcmd) {
            Quiver q = f_quiver.load();
            std::vector<DimVec> gammas;
            for (const auto& g : f_gammas) gammas.push_back(parse_dimvec(g));
            AuxLattice aux = build_aux(q, gammas, parse_covector(f_theta));
            DtOptions opts;
            opts.flow.mode = parse_mode(f_mode);
            opts.flow.seed = cfg.seed;
            opts.flow.sampler = sampler;
            opts.cache = cache.get();
            out.bare("F", flow_tree_value(aux, opts).to_string());
        } else if (*dcmd) {
            Quiver q = d_quiver.load();
            DimVec gamma = parse_dimvec(d_gamma);
            Covector theta = parse_covector(d_theta);
            AttractorTable table;
            if (d_attractor.empty())
                table.acyclic_default = true;
            else
                table = parse_attractor_table(read_file(d_attractor));
            DtOptions opts;
            opts.flow.mode = parse_mode(d_mode);
            opts.flow.seed = cfg.seed;
            opts.flow.sampler = sampler;
            opts.cache = cache.get();
            // Omega needs the rational values at every gamma / k as well
            std::map<DimVec, RatFunc> rational;
            std::int64_t g = 0;
            for (auto x : gamma) g = std::gcd(g, x);
            for (std::int64_t k = 1; k <= g; ++k) {
                if (g % k) continue;
                DimVec part(gamma);
                for (auto& x : part) x /= k;
                rational[part] = assemble_dt(q, part, theta, table, opts);
            }
            out.field("Omega_bar", rational.at(gamma).to_string());
            try {
                out.field("Omega", integer_from_rational(rational).at(gamma).to_string());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NotPolynomial) throw;
                std::cerr << "warning: " << e.what() << '\n';
            }
        } else if (*oracle) {
            Quiver q = o_quiver.load();
            if (q.vertex_count != 2) throw Error(ErrorKind::InvalidInput, "rank-2 oracle needs a quiver with two vertices");
            AttractorTable table;
            if (o_attractor.empty())
                table.acyclic_default = true;
            else
                table = parse_attractor_table(read_file(o_attractor));
            Rank2Diagram diag = reconstruct_rank2(euler_skew(q), initial_from_table(table, o_degree), o_degree);
            for (const auto& line : rank2_lines(diag)) {
                // "ray a,b : value"
                auto colon = line.find(" : ");
                out.field(line.substr(0, colon), line.substr(colon + 3), " : ");
            }
        } else if (*check) {
            CheckReport report;
            std::string kind;
            if (*c_pert) {
                kind = "perturbation";
                report = check_perturbation(c_r, c_trials, cfg.seed, c_seeds,
                                            {PerturbationMode::Omega, PerturbationMode::Beta});
            } else if (*c_joint) {
                kind = "joints";
                report = check_joints(c_r, c_trials, cfg.seed, c_corrupt);
            } else if (*c_multi) {
                kind = "multicover";
                report = check_multicover(c_trials, cfg.seed);
            } else {
                kind = "oracle";
                DtOptions opts;
                opts.flow.seed = cfg.seed;
                opts.flow.sampler = sampler;
                opts.cache = cache.get();
                report = check_oracle(c_m, c_max_dim, opts);
            }
            if (report.passed) {
                out.field("check " + kind, "pass cases=" + std::to_string(report.cases), " : ");
            } else {
                out.field("check " + kind, "FAIL " + report.locus, " : ");
                out.flush();
                return kInternal;
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    out.flush();
    return kPass;
}
