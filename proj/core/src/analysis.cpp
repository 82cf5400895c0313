#include "wfpd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wfpd/generators.hpp"

namespace wfpd {

Estimate batch_means(std::span<const double> values) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    if (n < 16) {
        throw InsufficientData("batch_means requires >= 16 values, got " +
                               std::to_string(n));
    }
    const double grand =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

    const std::int64_t B =
        static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::int64_t base = n / B;
    const std::int64_t spill = n % B;  // first `spill` batches get one extra

    double ss = 0.0;  // sum over batches of n_j (mean_j - grand)^2
    std::size_t pos = 0;
    for (std::int64_t j = 0; j < B; ++j) {
        const std::int64_t nj = base + (j < spill ? 1 : 0);
        double s = 0.0;
        for (std::int64_t k = 0; k < nj; ++k) s += values[pos++];
        const double mj = s / static_cast<double>(nj);
        ss += static_cast<double>(nj) * (mj - grand) * (mj - grand);
    }
    const double var_of_mean = ss / (static_cast<double>(n) * static_cast<double>(B - 1));
    return Estimate{grand, std::sqrt(var_of_mean), n};
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw InsufficientData("ks_distance requires nonempty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(std::size_t n1, std::size_t n2, double level) {
    // c(level) = sqrt(-ln(level/2)/2) from the asymptotic KS distribution.
    const double c = std::sqrt(-0.5 * std::log(level / 2.0));
    const double m = static_cast<double>(n1);
    const double n = static_cast<double>(n2);
    return c * std::sqrt((m + n) / (m * n));
}

LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("loglog_fit: size mismatch");
    if (x.size() < 3) throw InsufficientData("loglog_fit requires >= 3 points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw DomainError("loglog_fit requires strictly positive inputs");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw DomainError("loglog_fit: degenerate x values");
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - fit.slope * sxy;
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::vector<MomentReport> stationary_compare_chain(
    const ChainConfig& config, std::span<const int> m_list,
    const DiscreteSimplexState* init) {
    const DiscreteSimplexState start =
        init ? *init
             : DiscreteSimplexState::balanced(config.kernel.K, config.kernel.N);
    const ChainPath path = run_chain(start, config);

    std::vector<MomentReport> reports;
    for (int m : m_list) {
        const ErgodicEstimate est = ergodic_average(
            path, [m](const SimplexState& z) { return phi(z, m); });
        MomentReport r;
        r.m = m;
        r.estimate = est.mean;
        r.std_error = est.std_error;
        r.analytic = stationary_moment(m, config.kernel.params);
        r.z_score = est.std_error > 0.0
                        ? (est.mean - r.analytic) / est.std_error
                        : 0.0;
        reports.push_back(r);
    }
    return reports;
}

CompareReport ranked_top_compare(std::span<const RankedState> diffusion_sample,
                                 std::span<const PdSample> pd_sample,
                                 int top_j, double pass_threshold) {
    if (diffusion_sample.empty() || pd_sample.empty()) {
        throw InsufficientData("ranked_top_compare requires nonempty samples");
    }
    if (top_j < 1) throw DomainError("ranked_top_compare requires top_j >= 1");

    std::vector<double> mean_diff(static_cast<std::size_t>(top_j), 0.0);
    for (const RankedState& z : diffusion_sample) {
        for (int j = 0; j < top_j; ++j) {
            const std::size_t s = static_cast<std::size_t>(j);
            mean_diff[s] += j < z.K() ? z[s] : 0.0;
        }
    }
    for (double& v : mean_diff) v /= static_cast<double>(diffusion_sample.size());

    std::vector<double> mean_pd(static_cast<std::size_t>(top_j), 0.0);
    for (const PdSample& s : pd_sample) {
        for (int j = 0; j < top_j; ++j) {
            const std::size_t k = static_cast<std::size_t>(j);
            mean_pd[k] += k < s.ranked_freqs.size() ? s.ranked_freqs[k] : 0.0;
        }
    }
    for (double& v : mean_pd) v /= static_cast<double>(pd_sample.size());

    double mad = 0.0;
    for (int j = 0; j < top_j; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        mad += std::abs(mean_diff[s] - mean_pd[s]);
    }
    mad /= static_cast<double>(top_j);

    CompareReport report;
    report.statistic = CompareStatistic::MeanAbsDiff;
    report.value = mad;
    report.n1 = static_cast<std::int64_t>(diffusion_sample.size());
    report.n2 = static_cast<std::int64_t>(pd_sample.size());
    report.pass_threshold = pass_threshold;
    return report;
}

}  // namespace wfpd
