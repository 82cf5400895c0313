#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wfpd/params.hpp"
#include "wfpd/simplex.hpp"

namespace wfpd {

/// (1-z)^K, computed as exp(K*log1p(-z)) for z < 0.5 and by direct
/// power otherwise (the subtraction 1-z is exact there).
double pow1m(double z, std::int64_t K);

/// Migration weight r(u) = (1-u)[1-(1-u)^K]/u for u > 0, r(0) = K.
/// Equals the truncated geometric series sum_{k=1..K} (1-u)^k, i.e. the
/// expected number of failures before the first success in at most K
/// Bernoulli(u) trials.  Strictly decreasing on [0,1].
double r_weight(double u, std::int64_t K);

/// The theta >= 0 variant: r(u) = [1-(1-u)^K]/u for u > 0, r(0) = K.
double r_weight_bar(double u, std::int64_t K);

/// Dispatches on params.regime.
double regime_r(double u, std::int64_t K, const Params& params);

/// Mainland frequencies p_i = (1-z_i)^K / sum_l (1-z_l)^K.  Sums to 1,
/// reverses the order of z (rarer island alleles are commoner on the
/// mainland).
std::vector<double> mainland_freqs(const SimplexState& z);

/// Same formula over a raw ranked vector padded with zeros up to K
/// (each implicit zero contributes 1 to the denominator).
std::vector<double> mainland_freqs_padded(std::span<const double> z,
                                          std::int64_t K);

/// Smallest population size N for which the per-generation migration
/// and mutation removals stay below 1, keeping all cell probabilities
/// nonnegative: max(ceil(alpha*K/2), ceil((theta+alpha)/2), 1) + 1.
std::int64_t minimum_population(const Params& params, int K);

/// Shared configuration of the pre-limit maps.
struct KernelConfig {
    Params params;
    int K = 2;
    std::int64_t N = 2;  // population size, used only by the pre-limit maps

    KernelConfig(Params p, int K_, std::int64_t N_);
};

/// One application of the state-dependent island migration:
/// z*_i = z_i + p_i(z) m(z) - z_i m_i(z) with m_i(z) = alpha r(z_i)/(2N)
/// and m(z) = sum_j z_j m_j(z).  Preserves the simplex.
SimplexState migration_step(const SimplexState& z, const KernelConfig& cfg);

/// One application of uniform mutation at rate u = num/(2N(K-1)):
/// z**_i = z*_i (1 - (K-1)u) + u (1 - z*_i).
SimplexState mutation_step(const SimplexState& zstar, const KernelConfig& cfg);

/// Drift of the K-dimensional diffusion limit,
/// b_i(z) = (1/2)[ num/(K-1) (1-z_i) - num z_i
///                 + alpha p_i(z) sum_j z_j r_j(z) - alpha z_i r_i(z) ],
/// where num = theta+alpha (General) or theta (ThetaNonneg) and r is
/// the regime's weight.  Satisfies sum_i b_i = 0 and b_i >= 0 at z_i = 0.
std::vector<double> drift_b(const SimplexState& z, const Params& params);

/// drift over a zero-padded ranked vector (K may exceed z.size()).
std::vector<double> drift_b_padded(std::span<const double> z, std::int64_t K,
                                   const Params& params);

/// Measured suprema of the generalized-migration conditions from the
/// closing remark of the convergence argument, over sampled ranked
/// states at a fixed K.  The caller inspects trends across K; nothing
/// about the K -> infinity limit is asserted.
struct RemarkCheck {
    bool pointwise_nonneg = false;  // 1 - u - u r(u) >= 0 on a u-grid
    double relcomp_sup = 0.0;       // sup sum_j z_j r_j sum_i p_i z_i
    double apriori_sup = 0.0;       // sup sup_u [1-u-ur(u)] u
    double apriori_top_sup = 0.0;   // sup sum_j z_j r_j p_1 z_1
    double rate_sup = 0.0;          // sup sum_i [1-z_i-z_i r(z_i)] z_i^(1+eps)
    double rate_mainland_sup = 0.0; // sup sum_j z_j r_j sum_i p_i z_i^(1+eps)
};

using RFamily = std::function<double(double u, std::int64_t K)>;
using PFamily = std::function<std::vector<double>(std::span<const double> z,
                                                  std::int64_t K)>;

RemarkCheck satisfies_remark_conditions(const RFamily& r, const PFamily& p,
                                        int K, double epsilon,
                                        std::span<const RankedState> states);

}  // namespace wfpd
