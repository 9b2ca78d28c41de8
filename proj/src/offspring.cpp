#include "treemult/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace treemult {

namespace {

constexpr double kSeriesTol = 1e-13;   // certified absolute error for series
constexpr double kInvariantTol = 1e-12;

// p_{i+1} from p_i for the infinite-support families.
double next_p(Family f, std::uint64_t i, double p) {
    switch (f) {
        case Family::Cayley: return p / static_cast<double>(i + 1);
        case Family::GeometricHalf: return p * 0.5;
        default: return 0.0;
    }
}

}  // namespace

OffspringDistribution OffspringDistribution::full_binary() {
    OffspringDistribution d;
    d.family_ = Family::FullBinary;
    d.finite_pmf_ = {0.5, 0.0, 0.5};
    d.finalize();
    return d;
}

OffspringDistribution OffspringDistribution::t_ary(unsigned t) {
    if (t < 2) throw ValidationError("t-ary family requires t >= 2, got t = " + std::to_string(t));
    OffspringDistribution d;
    d.family_ = Family::TAry;
    d.param_ = t;
    d.finite_pmf_.assign(t + 1, 0.0);
    d.finite_pmf_[0] = 1.0 - 1.0 / t;
    d.finite_pmf_[t] = 1.0 / t;
    d.finalize();
    return d;
}

OffspringDistribution OffspringDistribution::cayley() {
    OffspringDistribution d;
    d.family_ = Family::Cayley;
    d.finalize();
    return d;
}

OffspringDistribution OffspringDistribution::binomial(unsigned dd) {
    if (dd < 2)
        throw ValidationError("binomial family requires d >= 2, got d = " + std::to_string(dd));
    OffspringDistribution d;
    d.family_ = Family::Binomial;
    d.param_ = dd;
    // p_i = C(d,i) (1/d)^i (1-1/d)^(d-i), built by the stable ratio recurrence.
    d.finite_pmf_.assign(dd + 1, 0.0);
    double p = std::pow(1.0 - 1.0 / dd, static_cast<double>(dd));
    for (unsigned i = 0; i <= dd; ++i) {
        d.finite_pmf_[i] = p;
        if (i < dd) p *= static_cast<double>(dd - i) / (static_cast<double>(i + 1) * (dd - 1.0));
    }
    d.finalize();
    return d;
}

OffspringDistribution OffspringDistribution::motzkin() {
    OffspringDistribution d;
    d.family_ = Family::Motzkin;
    d.finite_pmf_ = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    d.finalize();
    return d;
}

OffspringDistribution OffspringDistribution::geometric_half() {
    OffspringDistribution d;
    d.family_ = Family::GeometricHalf;
    d.finite_two_exp_ = false;  // E{2^xi} = sum 1/2 diverges
    d.finalize();
    return d;
}

OffspringDistribution OffspringDistribution::custom(std::vector<double> pmf) {
    OffspringDistribution d;
    d.family_ = Family::Custom;
    d.finite_pmf_ = std::move(pmf);
    d.finalize();
    return d;
}

double OffspringDistribution::pmf(std::uint64_t i) const {
    switch (family_) {
        case Family::Cayley:
            // 1/(e i!)
            return std::exp(-1.0 - std::lgamma(static_cast<double>(i) + 1.0));
        case Family::GeometricHalf:
            if (i >= 1074) return 0.0;
            return std::ldexp(1.0, -static_cast<int>(i + 1));
        default:
            return i < finite_pmf_.size() ? finite_pmf_[i] : 0.0;
    }
}

bool OffspringDistribution::finite_support() const {
    return family_ != Family::Cayley && family_ != Family::GeometricHalf;
}

std::uint64_t OffspringDistribution::max_support() const {
    if (!finite_support()) throw Error("max_support is defined for finite-support families only");
    std::uint64_t last = 0;
    for (std::size_t i = 0; i < finite_pmf_.size(); ++i)
        if (finite_pmf_[i] > 0.0) last = i;
    return last;
}

double OffspringDistribution::ratio_bound(std::uint64_t i) const {
    switch (family_) {
        case Family::Cayley:
            return i == 0 ? 1.0 : 1.0 / static_cast<double>(i + 1);
        case Family::GeometricHalf:
            return 0.5;
        default: {
            // Finite support: exact sup of successive ratios from index i on.
            double sup = 0.0;
            for (std::size_t j = i; j + 1 < finite_pmf_.size(); ++j) {
                if (finite_pmf_[j] == 0.0)
                    return finite_pmf_[j + 1] > 0.0 ? std::numeric_limits<double>::infinity()
                                                    : sup;
                sup = std::max(sup, finite_pmf_[j + 1] / finite_pmf_[j]);
            }
            return sup;
        }
    }
}

void OffspringDistribution::finalize() {
    if (finite_support()) {
        if (finite_pmf_.empty()) throw ValidationError("pmf is empty");
        double sum = 0.0, mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < finite_pmf_.size(); ++i) {
            double p = finite_pmf_[i];
            if (p < 0.0)
                throw ValidationError("p_" + std::to_string(i) + " = " + std::to_string(p) +
                                      " is negative (probabilities must be >= 0)");
            sum += p;
            mean += static_cast<double>(i) * p;
            m2 += static_cast<double>(i) * static_cast<double>(i) * p;
        }
        if (std::abs(sum - 1.0) > kInvariantTol) {
            std::ostringstream os;
            os.precision(17);
            os << "pmf sums to " << sum << " (must equal 1 within 1e-12)";
            throw ValidationError(os.str());
        }
        if (std::abs(mean - 1.0) > kInvariantTol) {
            std::ostringstream os;
            os.precision(17);
            os << "mean is " << mean << " (criticality requires mean = 1 within 1e-12)";
            throw ValidationError(os.str());
        }
        variance_ = m2 - 1.0;
        if (!(variance_ > 0.0))
            throw ValidationError("variance is 0 (criticality with a degenerate law is excluded)");
        if (!(finite_pmf_[0] > 0.0))
            throw ValidationError("p_0 is 0 (criticality with positive variance forces p_0 > 0)");
        unsigned g = 0;
        for (std::size_t i = 1; i < finite_pmf_.size(); ++i)
            if (finite_pmf_[i] > 0.0) g = std::gcd(g, static_cast<unsigned>(i));
        span_ = g == 0 ? 1 : g;
    } else {
        // Infinite-support built-ins: series with geometric tail majorants.
        double sum = 0.0, mean = 0.0, m2 = 0.0;
        double p = family_ == Family::Cayley ? std::exp(-1.0) : 0.5;
        for (std::uint64_t i = 0;; ++i) {
            double x = static_cast<double>(i);
            sum += p;
            mean += x * p;
            m2 += x * x * p;
            double pn = next_p(family_, i, p);
            // i^2 p_i dominates the three term families; its successive
            // ratio is bounded by ((i+2)/(i+1))^2 * ratio_bound(i+1).
            double grow = (x + 2.0) / (x + 1.0);
            double q = grow * grow * ratio_bound(i + 1);
            if (q < 1.0) {
                double xn = x + 1.0;
                double tail = std::max(pn, xn * xn * pn) / (1.0 - q);
                if (tail < kSeriesTol) break;
            }
            p = pn;
        }
        if (std::abs(sum - 1.0) > kInvariantTol || std::abs(mean - 1.0) > kInvariantTol)
            throw ValidationError("built-in family failed its criticality check");
        variance_ = m2 - 1.0;
        span_ = 1;  // p_1 > 0 for both infinite built-ins
    }

    // Inverse-CDF tables; residual mass beyond the 1 - 1e-12 cutoff is
    // assigned to the last entry.
    auto build = [this](bool size_biased, std::vector<std::uint32_t>& values,
                        std::vector<double>& cum) {
        values.clear();
        cum.clear();
        double total = 0.0;
        double p = pmf(0);
        std::uint64_t i = 0;
        for (;;) {
            double w = size_biased ? static_cast<double>(i) * p : p;
            if (w > 0.0) {
                total += w;
                values.push_back(static_cast<std::uint32_t>(i));
                cum.push_back(total);
            }
            if (finite_support()) {
                if (i >= finite_pmf_.size() - 1) break;
                ++i;
                p = finite_pmf_[i];
            } else {
                if (total > 1.0 - 1e-12) break;
                p = next_p(family_, i, p);
                ++i;
            }
        }
        if (!cum.empty()) cum.back() = 1.0;
    };
    build(false, table_values_, table_cum_);
    build(true, sb_values_, sb_cum_);
}

double power_sum(const OffspringDistribution& d, double k) {
    if (!(k > 1.0)) throw std::invalid_argument("power_sum requires k > 1");
    if (d.finite_support()) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i <= d.max_support(); ++i) {
            double p = d.pmf(i);
            if (p > 0.0) sum += std::pow(p, k);
        }
        return sum;
    }
    double sum = 0.0;
    double p = d.pmf(0);
    for (std::uint64_t i = 0;; ++i) {
        sum += std::pow(p, k);
        double pn = next_p(d.family(), i, p);
        double q = std::pow(d.ratio_bound(i + 1), k);
        if (q < 1.0 && std::pow(pn, k) / (1.0 - q) < 1e-13) break;
        p = pn;
    }
    return sum;
}

double renyi_entropy(const OffspringDistribution& d, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("renyi_entropy requires alpha > 1");
    return -std::log2(power_sum(d, alpha)) / (alpha - 1.0);
}

double shannon_entropy(const OffspringDistribution& d) {
    if (d.finite_support()) {
        double h = 0.0;
        for (std::uint64_t i = 0; i <= d.max_support(); ++i) {
            double p = d.pmf(i);
            if (p > 0.0) h -= p * std::log2(p);
        }
        return h;
    }
    // p log2(1/p) <= C sqrt(p) with C = 2/(e ln 2), so sqrt-ratio tails bound
    // the remainder.
    constexpr double kC = 2.0 / (2.718281828459045 * 0.6931471805599453);
    double h = 0.0;
    double p = d.pmf(0);
    for (std::uint64_t i = 0;; ++i) {
        if (p > 0.0) h -= p * std::log2(p);
        double pn = next_p(d.family(), i, p);
        double q = std::sqrt(d.ratio_bound(i + 1));
        if (q < 1.0 && kC * std::sqrt(pn) / (1.0 - q) < 1e-13) break;
        p = pn;
    }
    return h;
}

double min_entropy(const OffspringDistribution& d) {
    double pmax = 0.0;
    if (d.finite_support()) {
        for (std::uint64_t i = 0; i <= d.max_support(); ++i) pmax = std::max(pmax, d.pmf(i));
    } else {
        double p = d.pmf(0);
        for (std::uint64_t i = 0;; ++i) {
            pmax = std::max(pmax, p);
            double pn = next_p(d.family(), i, p);
            if (pn < pmax && d.ratio_bound(i + 1) <= 1.0) break;
            p = pn;
        }
    }
    return -std::log2(pmax);
}

double gamma_constant(const OffspringDistribution& d) {
    const double p0 = d.pmf(0);
    double best = 0.0;
    if (d.finite_support()) {
        for (std::uint64_t k = 2; k <= d.max_support(); ++k) {
            if (best > 0.0 && std::pow(p0, static_cast<double>(k)) < best) break;
            double pk = d.pmf(k);
            if (pk == 0.0) continue;
            double kk = static_cast<double>(k);
            best = std::max(best, std::pow(p0, kk) * std::pow(pk, kk / (kk - 1.0)));
        }
        return best;
    }
    double p = d.pmf(0);
    p = next_p(d.family(), 0, p);  // p_1
    for (std::uint64_t k = 2;; ++k) {
        p = next_p(d.family(), k - 1, p);  // p_k
        double kk = static_cast<double>(k);
        if (best > 0.0 && std::pow(p0, kk) < best) break;
        if (p > 0.0) best = std::max(best, std::pow(p0, kk) * std::pow(p, kk / (kk - 1.0)));
    }
    return best;
}

BoundConstants bound_constants(const OffspringDistribution& d) {
    BoundConstants b{};
    double gamma = gamma_constant(d);
    b.lower_coeff = 1.0 / std::log2(1.0 / gamma);
    if (d.finite_two_exp()) b.upper_coeff = 2.0 / renyi_entropy(d, 2.0);
    return b;
}

OffspringDistribution OffspringDistribution::custom_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pmf file: " + path);
    std::vector<double> pmf;
    std::vector<bool> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long idx;
        double p;
        if (!(ls >> idx)) continue;  // blank line
        if (!(ls >> p))
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 'i p_i' pair");
        std::string extra;
        if (ls >> extra)
            throw IoError(path + ":" + std::to_string(lineno) + ": trailing tokens after pair");
        if (idx < 0)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": child count must be nonnegative");
        if (idx > 1'000'000)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": support index too large (custom pmfs are finite)");
        auto u = static_cast<std::size_t>(idx);
        if (u >= pmf.size()) {
            pmf.resize(u + 1, 0.0);
            seen.resize(u + 1, false);
        }
        if (seen[u])
            throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate entry for i = " +
                                  std::to_string(idx));
        seen[u] = true;
        pmf[u] = p;
    }
    if (pmf.empty()) throw IoError(path + ": no pmf entries found");
    return custom(std::move(pmf));
}

OffspringDistribution OffspringDistribution::parse(const std::string& spec) {
    std::string head = spec, arg;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        head = spec.substr(0, colon);
        arg = spec.substr(colon + 1);
    }
    auto need_uint = [&](const char* what) -> unsigned {
        try {
            std::size_t pos = 0;
            unsigned long v = std::stoul(arg, &pos);
            if (pos != arg.size() || v == 0) throw std::invalid_argument("bad");
            return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ValidationError(std::string("family '") + head + "' needs a positive integer " +
                                  what + ", e.g. '" + head + ":3'");
        }
    };
    if (head == "full-binary") return full_binary();
    if (head == "t-ary") return t_ary(need_uint("t"));
    if (head == "cayley") return cayley();
    if (head == "binomial") return binomial(need_uint("d"));
    if (head == "catalan") return catalan();
    if (head == "motzkin") return motzkin();
    if (head == "geometric-half" || head == "planted-plane") return geometric_half();
    if (head == "custom") {
        if (arg.empty()) throw ValidationError("custom family needs a file: 'custom:FILE'");
        return custom_from_file(arg);
    }
    throw ValidationError("unknown family '" + spec +
                          "' (expected full-binary, t-ary:T, cayley, binomial:D, catalan, "
                          "motzkin, geometric-half, custom:FILE)");
}

std::string OffspringDistribution::name() const {
    switch (family_) {
        case Family::FullBinary: return "full-binary";
        case Family::TAry: return "t-ary:" + std::to_string(param_);
        case Family::Cayley: return "cayley";
        case Family::Binomial:
            return param_ == 2 ? std::string("catalan") : "binomial:" + std::to_string(param_);
        case Family::Motzkin: return "motzkin";
        case Family::GeometricHalf: return "geometric-half";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

std::string OffspringDistribution::display_label() const {
    switch (family_) {
        case Family::FullBinary: return "Full binary";
        case Family::TAry: return "Flajolet t-ary";
        case Family::Cayley: return "Cayley";
        case Family::Binomial: return param_ == 2 ? "Catalan" : "Binomial";
        case Family::Motzkin: return "Motzkin";
        case Family::GeometricHalf: return "Planted plane";
        case Family::Custom: return "Custom";
    }
    return "unknown";
}

std::string OffspringDistribution::distribution_label() const {
    switch (family_) {
        case Family::FullBinary: return "uniform{0,2}";
        case Family::TAry:
            return "p0=1-1/" + std::to_string(param_) + ", p" + std::to_string(param_) + "=1/" +
                   std::to_string(param_);
        case Family::Cayley: return "Poisson(1)";
        case Family::Binomial:
            return "binomial(" + std::to_string(param_) + ",1/" + std::to_string(param_) + ")";
        case Family::Motzkin: return "uniform{0,1,2}";
        case Family::GeometricHalf: return "geometric(1/2)";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

}  // namespace treemult
