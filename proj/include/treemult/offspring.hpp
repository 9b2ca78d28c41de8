#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treemult/errors.hpp"

namespace treemult {

enum class Family {
    FullBinary,     // p0 = p2 = 1/2
    TAry,           // p0 = 1-1/t, pt = 1/t
    Cayley,         // Poisson(1): p_i = 1/(e i!)
    Binomial,       // binomial(d, 1/d); d = 2 is the catalan family
    Motzkin,        // p0 = p1 = p2 = 1/3
    GeometricHalf,  // p_i = 2^-(i+1); planted plane trees
    Custom,         // explicit finite pmf
};

// A critical offspring distribution: mean exactly 1, variance in (0, inf).
// Immutable after construction; safe to share across threads.
class OffspringDistribution {
public:
    static OffspringDistribution full_binary();
    static OffspringDistribution t_ary(unsigned t);  // t >= 2
    static OffspringDistribution cayley();
    static OffspringDistribution binomial(unsigned d);  // d >= 2
    static OffspringDistribution catalan() { return binomial(2); }
    static OffspringDistribution motzkin();
    static OffspringDistribution geometric_half();

    // Explicit finite pmf, index = child count. Throws ValidationError with a
    // message naming the violated constraint.
    static OffspringDistribution custom(std::vector<double> pmf);

    // Text file with one "i p_i" pair per line; '#' starts a comment.
    static OffspringDistribution custom_from_file(const std::string& path);

    // CLI-style spec: "full-binary", "t-ary:3", "cayley", "binomial:4",
    // "catalan", "motzkin", "geometric-half" (alias "planted-plane"),
    // "custom:FILE".
    static OffspringDistribution parse(const std::string& spec);

    Family family() const { return family_; }
    unsigned param() const { return param_; }  // t or d; 0 for the rest
    std::string name() const;                  // canonical spec string
    std::string display_label() const;         // family name used in tables
    std::string distribution_label() const;    // e.g. "uniform{0,2}"

    double pmf(std::uint64_t i) const;
    bool finite_support() const;
    // Largest i with p_i > 0 (finite-support families only).
    std::uint64_t max_support() const;
    double mean() const { return 1.0; }  // enforced at construction
    double variance() const { return variance_; }
    unsigned span() const { return span_; }
    bool finite_two_exp() const { return finite_two_exp_; }

    // sup over j >= i of p_{j+1}/p_j; < 1 eventually for the infinite
    // built-ins, which is what certifies the series cutoffs below.
    double ratio_bound(std::uint64_t i) const;

    // Inverse-CDF sampling tables. values are the support points in
    // increasing order, cum the running probability totals with the residual
    // mass assigned to the last entry (cum.back() == 1).
    const std::vector<std::uint32_t>& table_values() const { return table_values_; }
    const std::vector<double>& table_cum() const { return table_cum_; }
    // Same, for the size-biased law P{zeta = i} = i p_i.
    const std::vector<std::uint32_t>& sizebiased_values() const { return sb_values_; }
    const std::vector<double>& sizebiased_cum() const { return sb_cum_; }

private:
    OffspringDistribution() = default;
    void finalize();  // checks invariants, computes span/variance/tables

    Family family_ = Family::Custom;
    unsigned param_ = 0;
    std::vector<double> finite_pmf_;  // empty for infinite-support families
    double variance_ = 0.0;
    unsigned span_ = 1;
    bool finite_two_exp_ = true;
    std::vector<std::uint32_t> table_values_;
    std::vector<double> table_cum_;
    std::vector<std::uint32_t> sb_values_;
    std::vector<double> sb_cum_;
};

// Sum of p_i^k for real k > 1, with absolute error < 1e-13 certified by a
// geometric tail majorant for the infinite-support families.
double power_sum(const OffspringDistribution& d, double k);

// Renyi entropy of order alpha > 1, in bits.
double renyi_entropy(const OffspringDistribution& d, double alpha);

// Shannon entropy in bits.
double shannon_entropy(const OffspringDistribution& d);

// log2(1/p_max).
double min_entropy(const OffspringDistribution& d);

// gamma = max over k >= 2 of p0^k * p_k^(k/(k-1)).
double gamma_constant(const OffspringDistribution& d);

struct BoundConstants {
    double lower_coeff;                 // 1 / log2(1/gamma)
    std::optional<double> upper_coeff;  // 2 / H2, absent when E{2^xi} = inf
};

// Coefficients of the logarithmic multiplicity bounds,
// lower_coeff * log2 n <= S_n <= upper_coeff * log2 n.
BoundConstants bound_constants(const OffspringDistribution& d);

}  // namespace treemult
