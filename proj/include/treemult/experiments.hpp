#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "treemult/offspring.hpp"
#include "treemult/sampler.hpp"

namespace treemult {

enum class OutputFormat { Csv, Json };

// Monte Carlo experiment configuration. Loadable from a flat key-value file
// (keys: families, sizes, trials, seed, epsilon, kesten_depth, output,
// format, workers; '#' comments).
struct ExperimentConfig {
    std::vector<std::string> families;
    std::vector<std::size_t> sizes;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double epsilon = 0.5;
    // Kesten truncation depth; defaults to ceil(n^(1/3)) + 1 per size.
    std::optional<std::size_t> kesten_depth;
    std::string output = "-";  // "-" = stdout
    OutputFormat format = OutputFormat::Csv;
    std::size_t workers = 1;
    SamplerOptions sampler;

    static ExperimentConfig from_file(const std::string& path);

    // Checks trials >= 1, epsilon in (0,1), and that every size is feasible
    // for every family's span. Throws ValidationError / InfeasibleSize.
    void validate() const;

    std::string canonical_string() const;
    std::uint64_t config_hash() const;  // FNV-1a over canonical_string()
};

struct SampleStats {
    double mean = 0.0;
    std::uint32_t min = 0, max = 0, p50 = 0, p90 = 0;  // nearest-rank quantiles
};

struct ExperimentRow {
    std::string family;
    std::size_t n = 0;
    std::size_t trials = 0;
    SampleStats S, M, MF, L;
    double lower_coeff = 0.0;
    std::optional<double> upper_coeff;  // absent when E{2^xi} = inf
    double ratio_lower = 0.0;           // mean(S) * log2(1/gamma) / log2 n
    std::optional<double> ratio_upper;  // mean(S) * H2 / (2 log2 n)
    double in_band_fraction = 0.0;
    double runtime_seconds = 0.0;  // informational; excluded from output
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;  // sorted by (family order, size order)
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
};

// Runs trials x families x sizes conditioned-tree analyses with
// deterministically derived per-trial streams; parallel across trials only.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Canonical serializations; byte-identical across reruns of the same config
// (volatile fields such as runtime are deliberately left out).
void write_csv(const ExperimentResult& r, std::ostream& out);
void write_json(const ExperimentResult& r, std::ostream& out);

// The seven-row constants table: gamma, H2, and the bound coefficients per
// family, numeric plus exact-form strings. t and d pick the parameterized
// rows.
struct Table1Row {
    std::string family, label, dist;
    double gamma = 0.0;
    std::string gamma_exact;
    std::optional<double> h2;  // absent where the table shows a dash
    std::string h2_exact;
    double lower_coeff = 0.0;
    std::string lower_exact;
    std::optional<double> upper_coeff;
    std::string upper_exact;
};
std::vector<Table1Row> table1(unsigned t = 3, unsigned d = 3);
void write_table1_text(const std::vector<Table1Row>& rows, std::ostream& out);
void write_table1_csv(const std::vector<Table1Row>& rows, std::ostream& out);
void write_table1_json(const std::vector<Table1Row>& rows, std::ostream& out);

// Observational maximal-leaf-degree runs: conditioned-tree L_n plus spine
// leaf-degree maxima on Kesten truncations.
struct LeafDegreeRow {
    std::string family;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t depth = 0;  // Kesten truncation depth used
    SampleStats L;
    double l_over_ln_n = 0.0;  // mean L / ln n
    SampleStats spine_L;
};

std::size_t default_kesten_depth(std::size_t n);  // ceil(n^(1/3)) + 1

std::vector<LeafDegreeRow> leaf_degree_experiment(const ExperimentConfig& cfg);
void write_leafdeg_csv(const std::vector<LeafDegreeRow>& rows, std::ostream& out);

}  // namespace treemult
