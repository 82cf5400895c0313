#include "wfpd/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "wfpd/simplex.hpp"

namespace wfpd {

namespace {

double moment_product(int m, double theta, double alpha) {
    double value = 1.0;
    for (int k = 2; k <= m; ++k) {
        value *= (k - 1.0 - alpha) / (k - 1.0 + theta);
    }
    return value;
}

struct StickRun {
    std::vector<double> sticks;  // unranked, size-biased order
    double residual = 1.0;
};

StickRun break_sticks(const Params& params, RandomStream& rng,
                      const StickOptions& opts) {
    StickRun run;
    double rest = 1.0;
    for (long i = 1; i <= opts.max_sticks; ++i) {
        const double v =
            rng.beta(1.0 - params.alpha, params.theta + i * params.alpha);
        run.sticks.push_back(v * rest);
        rest *= 1.0 - v;
        if (rest < opts.residual_tol) break;
    }
    run.residual = rest;
    if (run.residual > opts.fail_residual &&
        static_cast<long>(run.sticks.size()) >= opts.max_sticks) {
        throw NonTermination(
            "stick residual " + std::to_string(run.residual) + " after " +
            std::to_string(run.sticks.size()) + " sticks exceeds " +
            std::to_string(opts.fail_residual));
    }
    return run;
}

}  // namespace

PdSample sample_pd(const Params& params, int J, RandomStream& rng,
                   const StickOptions& opts) {
    if (J < 1) throw DomainError("sample_pd requires J >= 1");
    validate_params(params.theta, params.alpha, Regime::General);

    StickRun run = break_sticks(params, rng, opts);
    std::vector<double> ranked = sort_descending(std::move(run.sticks));

    PdSample out;
    out.J = J;
    const std::size_t keep = std::min(ranked.size(), static_cast<std::size_t>(J));
    out.ranked_freqs.assign(ranked.begin(),
                            ranked.begin() + static_cast<std::ptrdiff_t>(keep));
    out.ranked_freqs.resize(static_cast<std::size_t>(J), 0.0);

    double top = 0.0;
    for (double w : out.ranked_freqs) top += w;
    out.tail_mass = std::max(0.0, 1.0 - top);
    return out;
}

double stationary_moment(int m, const Params& params) {
    if (m < 2) throw DomainError("stationary_moment requires integer m >= 2");
    return moment_product(m, params.theta, params.alpha);
}

std::vector<MomentEstimate> pd_phi_moments(const Params& params,
                                           std::span<const int> ms,
                                           long n_draws, std::uint64_t seed,
                                           const StickOptions& opts, int jobs) {
    if (n_draws < 2) throw InsufficientData("pd_phi_moments requires n >= 2");
    int max_m = 2;
    for (int m : ms) {
        if (m < 2) throw DomainError("pd_phi_moments requires m >= 2");
        max_m = std::max(max_m, m);
    }

    // Fixed-size chunks accumulated in chunk order keep the summation
    // identical whatever the thread schedule.
    const long chunk_size = 2048;
    const long n_chunks = (n_draws + chunk_size - 1) / chunk_size;
    std::vector<std::vector<double>> chunk_sum(
        static_cast<std::size_t>(n_chunks), std::vector<double>(ms.size(), 0.0));
    std::vector<std::vector<double>> chunk_sumsq = chunk_sum;

    auto run_chunk = [&](long c) {
        std::vector<double> powers(static_cast<std::size_t>(max_m) + 1);
        for (long d = c * chunk_size; d < std::min(n_draws, (c + 1) * chunk_size);
             ++d) {
            RandomStream rng(seed, static_cast<std::uint64_t>(d));
            const StickRun run = break_sticks(params, rng, opts);
            const double shifted_theta =
                params.theta +
                static_cast<double>(run.sticks.size()) * params.alpha;
            std::fill(powers.begin(), powers.end(), 0.0);
            for (double w : run.sticks) {
                double p = w * w;
                for (int e = 2; e <= max_m; ++e) {
                    powers[static_cast<std::size_t>(e)] += p;
                    p *= w;
                }
            }
            for (std::size_t k = 0; k < ms.size(); ++k) {
                double value = powers[static_cast<std::size_t>(ms[k])];
                // Exact conditional expectation of the untracked tail.
                value += std::pow(run.residual, ms[k]) *
                         moment_product(ms[k], shifted_theta, params.alpha);
                chunk_sum[static_cast<std::size_t>(c)][k] += value;
                chunk_sumsq[static_cast<std::size_t>(c)][k] += value * value;
            }
        }
    };

    if (jobs <= 1) {
        for (long c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&]() {
                for (;;) {
                    const long c = next.fetch_add(1);
                    if (c >= n_chunks) return;
                    run_chunk(c);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    std::vector<double> sum(ms.size(), 0.0);
    std::vector<double> sumsq(ms.size(), 0.0);
    for (long c = 0; c < n_chunks; ++c) {
        for (std::size_t k = 0; k < ms.size(); ++k) {
            sum[k] += chunk_sum[static_cast<std::size_t>(c)][k];
            sumsq[k] += chunk_sumsq[static_cast<std::size_t>(c)][k];
        }
    }

    std::vector<MomentEstimate> out;
    const double n = static_cast<double>(n_draws);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        MomentEstimate e;
        e.m = ms[k];
        e.n = n_draws;
        e.mean = sum[k] / n;
        const double var = std::max(0.0, (sumsq[k] - n * e.mean * e.mean) / (n - 1.0));
        e.std_error = std::sqrt(var / n);
        out.push_back(e);
    }
    return out;
}

}  // namespace wfpd
