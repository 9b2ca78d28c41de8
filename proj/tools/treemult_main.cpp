// treemult: conditioned Bienayme-Galton-Watson tree sampling, multiplicity
// statistics, bound constants and Monte Carlo experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "treemult/experiments.hpp"
#include "treemult/multiplicity.hpp"
#include "treemult/oracle.hpp"
#include "treemult/sampler.hpp"
#include "treemult/tree_io.hpp"

namespace {

using namespace treemult;

// Output sink: path or "-" for stdout.
struct Sink {
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") {
            out = &std::cout;
            return;
        }
        file = std::make_unique<std::ofstream>(path);
        if (!*file) throw IoError("cannot open output file: " + path);
        out = file.get();
    }
    std::ostream& stream() { return *out; }
    std::ostream* out = nullptr;
    std::unique_ptr<std::ofstream> file;
};

int cmd_sample(const std::string& family, std::size_t size, std::uint64_t seed, std::size_t count,
               const std::string& output, std::uint64_t budget) {
    OffspringDistribution d = OffspringDistribution::parse(family);
    SamplerOptions opts;
    opts.attempt_budget = budget;
    Sink sink(output);
    for (std::size_t i = 0; i < count; ++i) {
        RandomSource rng = RandomSource::derived(seed, i);
        write_tree(sink.stream(), sample_conditioned(d, size, rng, opts));
    }
    return 0;
}

struct StatSelection {
    bool s = true, m = true, mf = true, l = true, aut = true;
};

StatSelection parse_stats(const std::string& spec) {
    if (spec.empty()) return {};
    StatSelection sel{false, false, false, false, false};
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        std::string u;
        for (char c : tok)
            if (!std::isspace(static_cast<unsigned char>(c)))
                u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (u == "S")
            sel.s = true;
        else if (u == "M")
            sel.m = true;
        else if (u == "MF")
            sel.mf = true;
        else if (u == "L")
            sel.l = true;
        else if (u == "AUT")
            sel.aut = true;
        else if (!u.empty())
            throw ValidationError("unknown stat '" + tok + "' (expected S, M, MF, L, AUT)");
    }
    return sel;
}

int cmd_analyze(const std::string& input, const std::string& stats, const std::string& format,
                const std::string& output) {
    StatSelection sel = parse_stats(stats);
    std::vector<RootedTree> trees = read_trees_file(input);
    Sink sink(output);
    std::ostream& out = sink.stream();
    const bool csv = format == "csv";
    if (csv) {
        out << "n";
        if (sel.s) out << ",S,witness_S";
        if (sel.m) out << ",M,witness_M";
        if (sel.mf) out << ",MF,witness_MF";
        if (sel.l) out << ",L,witness_L";
        if (sel.aut) out << ",aut_order";
        out << '\n';
    }
    for (const auto& t : trees) {
        MultiplicityReport rep = analyze_tree(t);
        std::string aut;
        if (sel.aut) aut = aut_order(to_free(t)).str();
        if (csv) {
            out << t.n();
            if (sel.s) out << ',' << rep.S << ',' << rep.witness_S;
            if (sel.m) out << ',' << rep.M << ',' << rep.witness_M;
            if (sel.mf) out << ',' << rep.MF << ',' << rep.witness_MF;
            if (sel.l) out << ',' << rep.L << ',' << rep.witness_L;
            if (sel.aut) out << ',' << aut;
            out << '\n';
        } else {
            nlohmann::json j;
            j["n"] = t.n();
            nlohmann::json w;
            if (sel.s) {
                j["S"] = rep.S;
                w["S"] = rep.witness_S;
            }
            if (sel.m) {
                j["M"] = rep.M;
                w["M"] = rep.witness_M;
            }
            if (sel.mf) {
                j["MF"] = rep.MF;
                w["MF"] = rep.witness_MF;
            }
            if (sel.l) {
                j["L"] = rep.L;
                w["L"] = rep.witness_L;
            }
            j["witnesses"] = std::move(w);
            if (sel.aut) j["aut_order"] = aut;
            out << j.dump() << '\n';
        }
    }
    return 0;
}

int cmd_constants(const std::string& family, const std::vector<double>& alphas,
                  const std::string& format, const std::string& output) {
    OffspringDistribution d = OffspringDistribution::parse(family);
    BoundConstants b = bound_constants(d);
    Sink sink(output);
    std::ostream& out = sink.stream();
    out.precision(15);
    if (format == "json") {
        nlohmann::json j;
        j["family"] = d.name();
        j["distribution"] = d.distribution_label();
        j["variance"] = d.variance();
        j["span"] = d.span();
        j["finite_two_exp"] = d.finite_two_exp();
        j["shannon_bits"] = shannon_entropy(d);
        j["renyi2_bits"] = renyi_entropy(d, 2.0);
        j["min_entropy_bits"] = min_entropy(d);
        j["gamma"] = gamma_constant(d);
        j["lower_coeff"] = b.lower_coeff;
        if (b.upper_coeff)
            j["upper_coeff"] = *b.upper_coeff;
        else
            j["upper_coeff"] = nullptr;
        for (double a : alphas) j["renyi_" + std::to_string(a)] = renyi_entropy(d, a);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "family:          " << d.name() << '\n';
    out << "distribution:    " << d.distribution_label() << '\n';
    out << "mean:            1\n";
    out << "variance:        " << d.variance() << '\n';
    out << "span:            " << d.span() << '\n';
    out << "finite_two_exp:  " << (d.finite_two_exp() ? "true" : "false") << '\n';
    out << "H (Shannon):     " << shannon_entropy(d) << " bits\n";
    out << "H2 (Renyi):      " << renyi_entropy(d, 2.0) << " bits\n";
    out << "H_inf:           " << min_entropy(d) << " bits\n";
    for (double a : alphas) out << "H_" << a << ":            " << renyi_entropy(d, a) << " bits\n";
    out << "gamma:           " << gamma_constant(d) << '\n';
    out << "lower bound:     " << b.lower_coeff << " * log2(n)\n";
    if (b.upper_coeff)
        out << "upper bound:     " << *b.upper_coeff << " * log2(n)\n";
    else
        out << "upper bound:     n/a (E{2^xi} is infinite)\n";
    return 0;
}

int cmd_table1(unsigned t, unsigned d, const std::string& format, const std::string& output) {
    auto rows = table1(t, d);
    Sink sink(output);
    if (format == "csv")
        write_table1_csv(rows, sink.stream());
    else if (format == "json")
        write_table1_json(rows, sink.stream());
    else
        write_table1_text(rows, sink.stream());
    return 0;
}

int cmd_experiment(const std::string& config_path, std::size_t workers_override, bool log) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (workers_override > 0) cfg.workers = workers_override;
    ExperimentResult result = run_experiment(cfg);
    if (log)
        for (const auto& row : result.rows)
            std::cerr << row.family << " n=" << row.n << " took " << row.runtime_seconds << "s\n";
    Sink sink(cfg.output);
    if (cfg.format == OutputFormat::Json)
        write_json(result, sink.stream());
    else
        write_csv(result, sink.stream());
    return 0;
}

int cmd_leafdeg(const std::vector<std::string>& families, const std::vector<std::size_t>& sizes,
                std::size_t trials, std::uint64_t seed, std::size_t depth,
                const std::string& output, std::size_t workers) {
    ExperimentConfig cfg;
    cfg.families = families;
    cfg.sizes = sizes;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.workers = workers;
    if (depth != static_cast<std::size_t>(-1)) cfg.kesten_depth = depth;
    auto rows = leaf_degree_experiment(cfg);
    Sink sink(output);
    write_leafdeg_csv(rows, sink.stream());
    return 0;
}

int cmd_oracle_enumerate(std::size_t size, bool count_only, const std::string& output) {
    auto e = oracle::enumerate_ordered_trees(size);
    Sink sink(output);
    if (count_only) {
        sink.stream() << e.items.size() << '\n';
        return 0;
    }
    write_trees(sink.stream(), e.items);
    return 0;
}

int cmd_oracle_classes(const std::string& input, const std::string& relation,
                       const std::string& output) {
    std::vector<RootedTree> trees = read_trees_file(input);
    Sink sink(output);
    for (const auto& t : trees) {
        NodeClassification cls;
        if (relation == "identical")
            cls = oracle::identical_classes_bruteforce(t);
        else if (relation == "rooted")
            cls = oracle::rooted_orbits_bruteforce(t);
        else if (relation == "free")
            cls = oracle::free_orbits_bruteforce(to_free(t));
        else
            throw ValidationError("relation must be identical, rooted or free");
        std::ostream& out = sink.stream();
        for (std::size_t v = 0; v < cls.class_of.size(); ++v)
            out << (v ? " " : "") << cls.class_of[v];
        out << '\n';
    }
    return 0;
}

int cmd_oracle_prob(const std::string& family, const std::string& input,
                    const std::string& output) {
    OffspringDistribution d = OffspringDistribution::parse(family);
    std::vector<RootedTree> trees = read_trees_file(input);
    Sink sink(output);
    sink.stream().precision(17);
    for (const auto& t : trees)
        sink.stream() << oracle::conditioned_probability(d, t) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conditioned Bienayme-Galton-Watson trees: sampling, multiplicity statistics "
                 "and bound-constant experiments"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "sample conditioned trees");
    std::string family = "full-binary";
    std::size_t size = 0, count = 1;
    std::uint64_t seed = 0, budget = SamplerOptions{}.attempt_budget;
    std::string output = "-";
    sample->add_option("--family", family, "offspring family, e.g. full-binary, t-ary:3")
        ->required();
    sample->add_option("--size", size, "tree size n")->required();
    sample->add_option("--seed", seed, "master seed");
    sample->add_option("--count", count, "number of trees");
    sample->add_option("--output", output, "output file ('-' = stdout)");
    sample->add_option("--attempt-budget", budget, "elementary draw cap per tree");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "multiplicity statistics for trees in a file");
    std::string input, stats, an_format = "jsonl";
    analyze->add_option("--input", input, "tree file")->required();
    analyze->add_option("--stats", stats, "comma list of S,M,MF,L,AUT (default: all)");
    analyze->add_option("--format", an_format, "jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    analyze->add_option("--output", output, "output file ('-' = stdout)");

    // constants
    auto* constants = app.add_subcommand("constants", "entropies and bound constants of a family");
    std::vector<double> alphas;
    std::string c_format = "text";
    constants->add_option("--family", family, "offspring family")->required();
    constants->add_option("--alpha", alphas, "extra Renyi orders to print");
    constants->add_option("--format", c_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    constants->add_option("--output", output, "output file ('-' = stdout)");

    // table1
    auto* tbl = app.add_subcommand("table1", "constants table for the seven built-in families");
    unsigned t_param = 3, d_param = 3;
    std::string t_format = "text";
    tbl->add_option("--t", t_param, "parameter for the t-ary row (default 3)")
        ->check(CLI::Range(2u, 1000u));
    tbl->add_option("--d", d_param, "parameter for the binomial row (default 3)")
        ->check(CLI::Range(2u, 64u));
    tbl->add_option("--format", t_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    tbl->add_option("--output", output, "output file ('-' = stdout)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo multiplicity experiment");
    std::string config_path;
    std::size_t workers = 0;
    bool log = false;
    exp->add_option("--config", config_path, "flat key-value config file")->required();
    exp->add_option("--workers", workers, "override worker count");
    exp->add_flag("--log", log, "print per-row runtimes to stderr");

    // leafdeg
    auto* leafdeg = app.add_subcommand("leafdeg", "maximal leaf-degree observations");
    std::vector<std::string> ld_families;
    std::vector<std::size_t> ld_sizes;
    std::size_t ld_trials = 100, ld_depth = static_cast<std::size_t>(-1), ld_workers = 1;
    leafdeg->add_option("--family", ld_families, "offspring family (repeatable)")->required();
    leafdeg->add_option("--sizes", ld_sizes, "tree sizes")->required()->delimiter(',');
    leafdeg->add_option("--trials", ld_trials, "trials per (family, size)");
    leafdeg->add_option("--seed", seed, "master seed");
    leafdeg->add_option("--depth", ld_depth, "Kesten depth (default ceil(n^(1/3))+1)");
    leafdeg->add_option("--workers", ld_workers, "worker count");
    leafdeg->add_option("--output", output, "output file ('-' = stdout)");

    // oracle (hidden debugging interface)
    auto* orc = app.add_subcommand("oracle", "brute-force reference implementations");
    orc->group("");
    auto* orc_enum = orc->add_subcommand("enumerate", "all ordered trees of a size");
    std::size_t orc_size = 4;
    bool count_only = false;
    orc_enum->add_option("--size", orc_size, "tree size (1..12)")->required();
    orc_enum->add_flag("--count-only", count_only, "print only the count");
    orc_enum->add_option("--output", output, "output file ('-' = stdout)");
    auto* orc_cls = orc->add_subcommand("classes", "brute-force node classifications");
    std::string relation = "identical";
    orc_cls->add_option("--input", input, "tree file")->required();
    orc_cls->add_option("--relation", relation, "identical, rooted or free");
    orc_cls->add_option("--output", output, "output file ('-' = stdout)");
    auto* orc_prob = orc->add_subcommand("prob", "unnormalized BGW weights of trees");
    orc_prob->add_option("--family", family, "offspring family")->required();
    orc_prob->add_option("--input", input, "tree file")->required();
    orc_prob->add_option("--output", output, "output file ('-' = stdout)");
    orc->require_subcommand(1);

    try {
        app.parse(argc, argv);
        if (sample->parsed()) return cmd_sample(family, size, seed, count, output, budget);
        if (analyze->parsed()) return cmd_analyze(input, stats, an_format, output);
        if (constants->parsed()) return cmd_constants(family, alphas, c_format, output);
        if (tbl->parsed()) return cmd_table1(t_param, d_param, t_format, output);
        if (exp->parsed()) return cmd_experiment(config_path, workers, log);
        if (leafdeg->parsed())
            return cmd_leafdeg(ld_families, ld_sizes, ld_trials, seed, ld_depth, output,
                               ld_workers);
        if (orc->parsed()) {
            if (orc_enum->parsed()) return cmd_oracle_enumerate(orc_size, count_only, output);
            if (orc_cls->parsed()) return cmd_oracle_classes(input, relation, output);
            if (orc_prob->parsed()) return cmd_oracle_prob(family, input, output);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const InfeasibleSize& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
