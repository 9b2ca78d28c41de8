#include "treemult/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "treemult/multiplicity.hpp"

namespace treemult {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "families") {
                cfg.families = split_list(value);
            } else if (key == "sizes") {
                cfg.sizes.clear();
                for (const auto& tok : split_list(value)) cfg.sizes.push_back(std::stoull(tok));
            } else if (key == "trials") {
                cfg.trials = std::stoull(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "epsilon") {
                cfg.epsilon = std::stod(value);
            } else if (key == "kesten_depth") {
                cfg.kesten_depth = std::stoull(value);
            } else if (key == "output") {
                cfg.output = value;
            } else if (key == "format") {
                if (value == "csv")
                    cfg.format = OutputFormat::Csv;
                else if (value == "json")
                    cfg.format = OutputFormat::Json;
                else
                    throw ValidationError("format must be csv or json, got '" + value + "'");
            } else if (key == "workers") {
                cfg.workers = std::stoull(value);
            } else if (key == "attempt_budget") {
                cfg.sampler.attempt_budget = std::stoull(value);
            } else {
                throw ValidationError("unknown config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": value out of range for '" + key +
                          "'");
        }
    }
    return cfg;
}

void ExperimentConfig::validate() const {
    if (families.empty()) throw ValidationError("config has no families");
    if (sizes.empty()) throw ValidationError("config has no sizes");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must be in (0,1)");
    for (const auto& fam : families) {
        OffspringDistribution d = OffspringDistribution::parse(fam);
        for (std::size_t n : sizes)
            if (n == 0 || (n - 1) % d.span() != 0) throw InfeasibleSize(n, d.span(), d.name());
    }
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream os;
    os << "families=";
    for (std::size_t i = 0; i < families.size(); ++i) os << (i ? "," : "") << families[i];
    os << ";sizes=";
    for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? "," : "") << sizes[i];
    os << ";trials=" << trials << ";seed=" << seed << ";epsilon=" << fmt("%.17g", epsilon);
    os << ";kesten_depth=";
    if (kesten_depth)
        os << *kesten_depth;
    else
        os << "default";
    return os.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical_string()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

SampleStats stats_of(std::vector<std::uint32_t> values) {
    SampleStats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (std::uint32_t v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    s.min = values.front();
    s.max = values.back();
    auto rank = [&](double q) {
        std::size_t r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
        return values[r == 0 ? 0 : r - 1];
    };
    s.p50 = rank(0.5);
    s.p90 = rank(0.9);
    return s;
}

struct TrialOutcome {
    std::uint32_t S = 0, M = 0, MF = 0, L = 0;
};

// Parallel map over the trial indices; outcomes land in per-trial slots so
// aggregation never depends on scheduling.
template <typename Fn>
void for_each_trial(std::size_t trials, std::size_t workers, Fn&& fn) {
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < trials; t += workers) fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<OffspringDistribution> dists;
    dists.reserve(cfg.families.size());
    for (const auto& fam : cfg.families) dists.push_back(OffspringDistribution::parse(fam));
    std::vector<std::size_t> sizes = cfg.sizes;
    std::sort(sizes.begin(), sizes.end());

    ExperimentResult result;
    result.config_hash = cfg.config_hash();
    result.seed = cfg.seed;
    result.epsilon = cfg.epsilon;

    for (std::size_t fi = 0; fi < dists.size(); ++fi) {
        const OffspringDistribution& d = dists[fi];
        BoundConstants bounds = bound_constants(d);
        double gamma = gamma_constant(d);
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            const std::size_t n = sizes[si];
            auto start = std::chrono::steady_clock::now();
            std::vector<TrialOutcome> outcomes(cfg.trials);
            for_each_trial(cfg.trials, cfg.workers, [&](std::size_t t) {
                std::uint64_t stream = (fi * sizes.size() + si) * cfg.trials + t;
                RandomSource rng = RandomSource::derived(cfg.seed, stream);
                RootedTree tree = sample_conditioned(d, n, rng, cfg.sampler);
                MultiplicityReport rep = analyze_tree(tree);
                outcomes[t] = {rep.S, rep.M, rep.MF, rep.L};
            });

            ExperimentRow row;
            row.family = d.name();
            row.n = n;
            row.trials = cfg.trials;
            std::vector<std::uint32_t> vs(cfg.trials), vm(cfg.trials), vf(cfg.trials),
                vl(cfg.trials);
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                vs[t] = outcomes[t].S;
                vm[t] = outcomes[t].M;
                vf[t] = outcomes[t].MF;
                vl[t] = outcomes[t].L;
            }
            row.S = stats_of(vs);
            row.M = stats_of(vm);
            row.MF = stats_of(vf);
            row.L = stats_of(vl);
            row.lower_coeff = bounds.lower_coeff;
            row.upper_coeff = bounds.upper_coeff;
            const double log2n = std::log2(static_cast<double>(n));
            row.ratio_lower = row.S.mean * std::log2(1.0 / gamma) / log2n;
            if (bounds.upper_coeff)
                row.ratio_upper = row.S.mean / (*bounds.upper_coeff * log2n);
            double lo = (1.0 - cfg.epsilon) * bounds.lower_coeff * log2n;
            double hi = bounds.upper_coeff
                            ? (1.0 + cfg.epsilon) * *bounds.upper_coeff * log2n
                            : std::numeric_limits<double>::infinity();
            std::size_t in_band = 0;
            for (std::uint32_t s : vs) in_band += (s >= lo && s <= hi);
            row.in_band_fraction = static_cast<double>(in_band) / static_cast<double>(cfg.trials);
            row.runtime_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_stats_csv(std::ostream& out, const SampleStats& s) {
    out << fmt("%.6f", s.mean) << ',' << s.min << ',' << s.p50 << ',' << s.p90 << ',' << s.max;
}

}  // namespace

void write_csv(const ExperimentResult& r, std::ostream& out) {
    out << "family,n,trials,seed,epsilon,config_hash,"
           "S_mean,S_min,S_p50,S_p90,S_max,"
           "M_mean,M_min,M_p50,M_p90,M_max,"
           "MF_mean,MF_min,MF_p50,MF_p90,MF_max,"
           "L_mean,L_min,L_p50,L_p90,L_max,"
           "lower_coeff,upper_coeff,ratio_lower,ratio_upper,in_band_fraction\n";
    for (const auto& row : r.rows) {
        out << row.family << ',' << row.n << ',' << row.trials << ',' << r.seed << ','
            << fmt("%.17g", r.epsilon) << ',' << hash_hex(r.config_hash) << ',';
        write_stats_csv(out, row.S);
        out << ',';
        write_stats_csv(out, row.M);
        out << ',';
        write_stats_csv(out, row.MF);
        out << ',';
        write_stats_csv(out, row.L);
        out << ',' << fmt("%.12g", row.lower_coeff) << ',';
        out << (row.upper_coeff ? fmt("%.12g", *row.upper_coeff) : "n/a") << ',';
        out << fmt("%.6f", row.ratio_lower) << ',';
        out << (row.ratio_upper ? fmt("%.6f", *row.ratio_upper) : "n/a") << ',';
        out << fmt("%.6f", row.in_band_fraction) << '\n';
    }
}

void write_json(const ExperimentResult& r, std::ostream& out) {
    nlohmann::json j;
    j["config_hash"] = hash_hex(r.config_hash);
    j["seed"] = r.seed;
    j["epsilon"] = r.epsilon;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json jr;
        jr["family"] = row.family;
        jr["n"] = row.n;
        jr["trials"] = row.trials;
        jr["config_hash"] = hash_hex(r.config_hash);
        auto put = [&](const char* key, const SampleStats& s) {
            jr[key] = {{"mean", s.mean}, {"min", s.min}, {"p50", s.p50}, {"p90", s.p90},
                       {"max", s.max}};
        };
        put("S", row.S);
        put("M", row.M);
        put("MF", row.MF);
        put("L", row.L);
        jr["lower_coeff"] = row.lower_coeff;
        if (row.upper_coeff)
            jr["upper_coeff"] = *row.upper_coeff;
        else
            jr["upper_coeff"] = nullptr;
        jr["ratio_lower"] = row.ratio_lower;
        if (row.ratio_upper)
            jr["ratio_upper"] = *row.ratio_upper;
        else
            jr["ratio_upper"] = nullptr;
        jr["in_band_fraction"] = row.in_band_fraction;
        j["rows"].push_back(std::move(jr));
    }
    out << j.dump(2) << '\n';
}

namespace {

// Exact rational sum of p_i^2 for binomial(d,1/d), for the H2 display
// string: sum_i C(d,i)^2 (d-1)^(2(d-i)) / d^(2d).
std::string binomial_h2_exact(unsigned d) {
    BigInt den = 1;
    for (unsigned i = 0; i < 2 * d; ++i) den *= d;
    BigInt num = 0;
    BigInt c = 1;  // C(d,i)
    for (unsigned i = 0; i <= d; ++i) {
        BigInt pw = 1;
        for (unsigned j = 0; j < 2 * (d - i); ++j) pw *= (d - 1);
        num += c * c * pw;
        c = c * (d - i) / (i + 1);
    }
    return "log2(" + den.str() + "/" + num.str() + ")";
}

Table1Row make_row(const OffspringDistribution& d, std::string gamma_exact, std::string h2_exact,
                   std::string lower_exact, std::string upper_exact) {
    Table1Row row;
    row.family = d.name();
    row.label = d.display_label();
    row.dist = d.distribution_label();
    row.gamma = gamma_constant(d);
    row.gamma_exact = std::move(gamma_exact);
    BoundConstants b = bound_constants(d);
    row.lower_coeff = b.lower_coeff;
    row.lower_exact = std::move(lower_exact);
    if (d.finite_two_exp()) {
        row.h2 = renyi_entropy(d, 2.0);
        row.upper_coeff = b.upper_coeff;
    }
    row.h2_exact = std::move(h2_exact);
    row.upper_exact = std::move(upper_exact);
    return row;
}

}  // namespace

std::vector<Table1Row> table1(unsigned t, unsigned d) {
    std::vector<Table1Row> rows;
    rows.push_back(make_row(OffspringDistribution::full_binary(), "1/16", "1", "1/4", "2"));
    {
        std::string ts = std::to_string(t);
        std::string tm1 = std::to_string(t - 1);
        rows.push_back(make_row(
            OffspringDistribution::t_ary(t),
            "(" + tm1 + "/" + ts + ")^" + ts + "*(1/" + ts + ")^(" + ts + "/" + tm1 + ")",
            "log2(" + std::to_string(t * t) + "/" + std::to_string((t - 1) * (t - 1) + 1) + ")",
            "1/log2(1/gamma)", "2/H2"));
    }
    rows.push_back(make_row(OffspringDistribution::cayley(), "1/(4*e^4)",
                            "2*log2(e)-log2(I0(2))", "1/(2+4*log2(e))",
                            "2/(2*log2(e)-log2(I0(2)))"));
    rows.push_back(
        make_row(OffspringDistribution::catalan(), "1/256", "log2(8/3)", "1/8", "2/log2(8/3)"));
    {
        std::string ds = std::to_string(d);
        std::string dm1 = std::to_string(d - 1);
        rows.push_back(make_row(OffspringDistribution::binomial(d),
                                "(1/4)*(" + dm1 + "/" + ds + ")^" + std::to_string(4 * d - 2),
                                binomial_h2_exact(d), "1/log2(1/gamma)", "2/H2"));
    }
    rows.push_back(
        make_row(OffspringDistribution::motzkin(), "1/81", "log2(3)", "1/log2(81)", "2/log2(3)"));
    rows.push_back(make_row(OffspringDistribution::geometric_half(), "1/256", "-", "1/8", "-"));
    return rows;
}

void write_table1_text(const std::vector<Table1Row>& rows, std::ostream& out) {
    out << "family           distribution         gamma            H2               lower_coeff      upper_coeff\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-16s %-20s %-16.10g %-16s %-16.10g %s\n", r.family.c_str(),
                      r.dist.c_str(), r.gamma, r.h2 ? fmt("%.10g", *r.h2).c_str() : "-",
                      r.lower_coeff, r.upper_coeff ? fmt("%.10g", *r.upper_coeff).c_str() : "-");
        out << buf;
    }
    out << "\nexact forms:\n";
    for (const auto& r : rows) {
        out << "  " << r.family << ": gamma = " << r.gamma_exact << ", H2 = " << r.h2_exact
            << ", lower = " << r.lower_exact << "*log2(n), upper = "
            << (r.upper_coeff ? r.upper_exact + "*log2(n)" : std::string("-")) << '\n';
    }
}

void write_table1_csv(const std::vector<Table1Row>& rows, std::ostream& out) {
    out << "family,label,distribution,gamma,gamma_exact,H2,H2_exact,lower_coeff,lower_exact,"
           "upper_coeff,upper_exact\n";
    for (const auto& r : rows) {
        out << r.family << ',' << r.label << ',' << '"' << r.dist << '"' << ','
            << fmt("%.17g", r.gamma) << ',' << '"' << r.gamma_exact << '"' << ','
            << (r.h2 ? fmt("%.17g", *r.h2) : "-") << ',' << '"' << r.h2_exact << '"' << ','
            << fmt("%.17g", r.lower_coeff) << ',' << '"' << r.lower_exact << '"' << ','
            << (r.upper_coeff ? fmt("%.17g", *r.upper_coeff) : "-") << ',' << '"' << r.upper_exact
            << '"' << '\n';
    }
}

void write_table1_json(const std::vector<Table1Row>& rows, std::ostream& out) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json jr;
        jr["family"] = r.family;
        jr["label"] = r.label;
        jr["distribution"] = r.dist;
        jr["gamma"] = r.gamma;
        jr["gamma_exact"] = r.gamma_exact;
        if (r.h2)
            jr["H2"] = *r.h2;
        else
            jr["H2"] = nullptr;
        jr["H2_exact"] = r.h2_exact;
        jr["lower_coeff"] = r.lower_coeff;
        jr["lower_exact"] = r.lower_exact;
        if (r.upper_coeff)
            jr["upper_coeff"] = *r.upper_coeff;
        else
            jr["upper_coeff"] = nullptr;
        jr["upper_exact"] = r.upper_exact;
        j.push_back(std::move(jr));
    }
    out << j.dump(2) << '\n';
}

std::size_t default_kesten_depth(std::size_t n) {
    std::size_t k = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
    while (k * k * k < n) ++k;                      // ceil for perfect-cube drift
    while (k > 1 && (k - 1) * (k - 1) * (k - 1) >= n) --k;
    return k + 1;
}

std::vector<LeafDegreeRow> leaf_degree_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<OffspringDistribution> dists;
    for (const auto& fam : cfg.families) dists.push_back(OffspringDistribution::parse(fam));
    std::vector<std::size_t> sizes = cfg.sizes;
    std::sort(sizes.begin(), sizes.end());

    std::vector<LeafDegreeRow> rows;
    const std::size_t stream_block = dists.size() * sizes.size() * cfg.trials;
    for (std::size_t fi = 0; fi < dists.size(); ++fi) {
        const OffspringDistribution& d = dists[fi];
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            const std::size_t n = sizes[si];
            LeafDegreeRow row;
            row.family = d.name();
            row.n = n;
            row.trials = cfg.trials;
            row.depth = cfg.kesten_depth ? *cfg.kesten_depth : default_kesten_depth(n);

            std::vector<std::uint32_t> ls(cfg.trials), sls(cfg.trials);
            for_each_trial(cfg.trials, cfg.workers, [&](std::size_t t) {
                std::uint64_t base = (fi * sizes.size() + si) * cfg.trials + t;
                RandomSource rng = RandomSource::derived(cfg.seed, base);
                ls[t] = max_leaf_degree(sample_conditioned(d, n, rng, cfg.sampler));
                RandomSource krng = RandomSource::derived(cfg.seed, stream_block + base);
                KestenTree kt = sample_kesten_truncated(d, row.depth, krng);
                std::uint32_t best = 0;
                for (std::uint32_t v : kt.spine) {
                    std::uint32_t count = 0;
                    for (std::uint32_t c : kt.tree.children(v))
                        count += (kt.tree.degree(c) == 0);
                    best = std::max(best, count);
                }
                sls[t] = best;
            });
            row.L = stats_of(ls);
            row.l_over_ln_n = n > 1 ? row.L.mean / std::log(static_cast<double>(n)) : 0.0;
            row.spine_L = stats_of(sls);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_leafdeg_csv(const std::vector<LeafDegreeRow>& rows, std::ostream& out) {
    out << "family,n,trials,depth,L_mean,L_min,L_p50,L_p90,L_max,L_over_ln_n,"
           "spineL_mean,spineL_min,spineL_p50,spineL_p90,spineL_max\n";
    for (const auto& r : rows) {
        out << r.family << ',' << r.n << ',' << r.trials << ',' << r.depth << ',';
        write_stats_csv(out, r.L);
        out << ',' << fmt("%.6f", r.l_over_ln_n) << ',';
        write_stats_csv(out, r.spine_L);
        out << '\n';
    }
}

}  // namespace treemult
