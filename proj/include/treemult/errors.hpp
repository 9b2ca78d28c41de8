#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treemult {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A proposed pmf violates a construction constraint (sum, criticality,
// variance, negativity). The message names the violated constraint.
struct ValidationError : Error {
    using Error::Error;
};

// Degree sequence does not sum to n-1.
struct SumMismatch : Error {
    SumMismatch(std::size_t n, long long sum)
        : Error("degree sequence sums to " + std::to_string(sum) + ", expected n-1 = " +
                std::to_string(n == 0 ? 0 : n - 1) + " for n = " + std::to_string(n)),
          n(n), sum(sum) {}
    std::size_t n;
    long long sum;
};

// A proper prefix of the degree sequence closes the tree early.
// index is 1-based: the first t with sum(xi_1..xi_t) <= t-1, t < n.
struct PrematureClose : Error {
    explicit PrematureClose(std::size_t t)
        : Error("degree sequence closes prematurely at t = " + std::to_string(t)), index(t) {}
    std::size_t index;
};

// Requested tree size is not reachable for the distribution's span.
struct InfeasibleSize : Error {
    InfeasibleSize(std::size_t n, unsigned span, const std::string& family)
        : Error("size n = " + std::to_string(n) + " is infeasible for family '" + family +
                "': (n-1) mod span(" + std::to_string(span) + ") != 0"),
          n(n), span(span) {}
    std::size_t n;
    unsigned span;
};

// Conditioned sampler exhausted its elementary-draw budget.
struct AttemptBudgetExceeded : Error {
    explicit AttemptBudgetExceeded(std::uint64_t budget)
        : Error("conditioned sampler exceeded its attempt budget of " + std::to_string(budget) +
                " elementary draws; the distribution/size combination looks mis-specified"),
          budget(budget) {}
    std::uint64_t budget;
};

// Unconditioned sampler grew past its node budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(std::size_t budget)
        : Error("unconditioned tree exceeded the node budget of " + std::to_string(budget)),
          budget(budget) {}
    std::size_t budget;
};

// File could not be read/written or its contents could not be parsed.
struct IoError : Error {
    using Error::Error;
};

}  // namespace treemult
