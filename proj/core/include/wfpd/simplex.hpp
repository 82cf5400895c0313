#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfpd/errors.hpp"

namespace wfpd {

/// Absolute tolerance separating float drift from logic errors in
/// simplex sums, for dimensions up to 10^4.
inline constexpr double kSimplexSumTol = 1e-12;

/// A point of the K-simplex: K >= 2 nonnegative frequencies summing to 1.
///
/// Construction renormalizes inputs whose sum deviates from 1 by less
/// than kSimplexSumTol and rejects larger deviations.  Immutable.
class SimplexState {
public:
    explicit SimplexState(std::vector<double> freqs);

    const std::vector<double>& freqs() const { return freqs_; }
    std::span<const double> span() const { return freqs_; }
    int K() const { return static_cast<int>(freqs_.size()); }
    double operator[](std::size_t i) const { return freqs_[i]; }

    /// Uniform state (1/K, ..., 1/K).
    static SimplexState uniform(int K);

    /// Vertex e_i.
    static SimplexState vertex(int K, int i);

private:
    std::vector<double> freqs_;
};

/// A point of the discrete simplex: K counts summing exactly to N.
class DiscreteSimplexState {
public:
    DiscreteSimplexState(std::vector<std::int64_t> counts, std::int64_t N);

    const std::vector<std::int64_t>& counts() const { return counts_; }
    std::int64_t N() const { return N_; }
    int K() const { return static_cast<int>(counts_.size()); }

    /// Relative frequencies counts / N.
    SimplexState to_frequencies() const;

    /// Near-uniform state: N/K per cell, remainder spread over the
    /// first N mod K cells.
    static DiscreteSimplexState balanced(int K, std::int64_t N);

private:
    std::vector<std::int64_t> counts_;
    std::int64_t N_;
};

/// A nonincreasing frequency vector, sum <= 1 + tolerance.  Images of
/// rho_K sum to 1; mass-deficient states arise only from truncated
/// exports.  The infinite tail of zeros is implicit.
class RankedState {
public:
    explicit RankedState(std::vector<double> freqs);

    const std::vector<double>& freqs() const { return freqs_; }
    std::span<const double> span() const { return freqs_; }
    int K() const { return static_cast<int>(freqs_.size()); }
    double operator[](std::size_t i) const { return freqs_[i]; }

    double sum() const;

    /// Re-embeds as a SimplexState; requires sum == 1 within tolerance.
    SimplexState as_simplex() const;

    /// Uniform over the first j of K coordinates (zeros after j).
    static RankedState uniform_over(int j, int K);

private:
    std::vector<double> freqs_;
};

/// Descending order statistics of z, ties kept in original index order.
RankedState rho_K(const SimplexState& z);

/// Same reordering applied to a raw vector (no simplex-sum requirement).
std::vector<double> sort_descending(std::vector<double> v);

}  // namespace wfpd
