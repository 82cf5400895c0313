#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfpd/chain.hpp"
#include "wfpd/oracle.hpp"
#include "wfpd/simplex.hpp"

namespace wfpd {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

/// Mean of an autocorrelated series with standard error from batch
/// means, ceil(sqrt(n)) batches of near-equal size.  Throws
/// InsufficientData below 16 values.
Estimate batch_means(std::span<const double> values);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> sample1, std::vector<double> sample2);

/// Critical value c(level) * sqrt((n1+n2)/(n1 n2)); c(0.01) = 1.628.
double ks_critical_value(std::size_t n1, std::size_t n2, double level);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

/// Least squares on (log x, log y); requires >= 3 strictly positive
/// points.
LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y);

struct MomentReport {
    int m = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double analytic = 0.0;
    double z_score = 0.0;
};

/// Ergodic phi_m averages of a chain run against the analytic
/// stationary moments.  The chain starts from the balanced state unless
/// an initial state is supplied.
std::vector<MomentReport> stationary_compare_chain(
    const ChainConfig& config, std::span<const int> m_list,
    const DiscreteSimplexState* init = nullptr);

enum class CompareStatistic { KS, MeanAbsDiff };

struct CompareReport {
    CompareStatistic statistic = CompareStatistic::MeanAbsDiff;
    double value = 0.0;
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    double pass_threshold = 0.0;
};

/// Mean absolute difference of the top_j ranked-coordinate means
/// between a ranked diffusion sample and a PD oracle sample.
CompareReport ranked_top_compare(std::span<const RankedState> diffusion_sample,
                                 std::span<const PdSample> pd_sample,
                                 int top_j, double pass_threshold = 0.0);

}  // namespace wfpd
