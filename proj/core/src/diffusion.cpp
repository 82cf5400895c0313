#include "wfpd/diffusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <string>

#include "wfpd/kernel.hpp"

namespace wfpd {

double max_stable_dt(const Params& params, int K) {
    return 0.1 / (1.0 + params.theta + params.alpha * K);
}

DiffusionConfig::DiffusionConfig(Params p, int K_, double dt_, double t_end_,
                                 std::uint64_t seed_)
    : params(p), K(K_), dt(dt_), t_end(t_end_), seed(seed_) {
    if (K < 2) throw DomainError("DiffusionConfig requires K >= 2");
    if (!(dt > 0.0)) throw DomainError("DiffusionConfig requires dt > 0");
    if (t_end < 0.0) throw DomainError("DiffusionConfig requires t_end >= 0");
    const double cap = max_stable_dt(params, K);
    if (dt > cap) {
        throw DomainError("DiffusionConfig: dt = " + std::to_string(dt) +
                          " exceeds stability cap " + std::to_string(cap));
    }
}

DiffusionConfig DiffusionConfig::with_default_dt(Params p, int K, double t_end,
                                                 std::uint64_t seed) {
    return DiffusionConfig(p, K, std::min(1e-3, max_stable_dt(p, K)), t_end, seed);
}

std::vector<double> diffusion_coeff(const SimplexState& z) {
    const std::size_t K = static_cast<std::size_t>(z.K());
    std::vector<double> a(K * K);
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            a[i * K + j] = z[i] * ((i == j ? 1.0 : 0.0) - z[j]);
        }
    }
    return a;
}

std::vector<double> wright_fisher_noise(std::span<const double> z,
                                        std::span<const double> xi) {
    const std::size_t K = z.size();
    std::vector<double> out(K);
    double proj = 0.0;  // sqrt(z)^T xi
    for (std::size_t i = 0; i < K; ++i) {
        out[i] = std::sqrt(z[i]);
        proj += out[i] * xi[i];
    }
    for (std::size_t i = 0; i < K; ++i) {
        out[i] = out[i] * (xi[i] - out[i] * proj);
    }
    return out;
}

SimplexState diffusion_step(const SimplexState& z, const DiffusionConfig& cfg,
                            RandomStream& rng) {
    const std::size_t K = static_cast<std::size_t>(z.K());
    const std::vector<double> b = drift_b(z, cfg.params);
    std::vector<double> xi(K);
    for (double& x : xi) x = rng.normal();
    const std::vector<double> noise = wright_fisher_noise(z.span(), xi);

    const double sqdt = std::sqrt(cfg.dt);
    std::vector<double> next(K);
    double sum = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        double v = z[i] + b[i] * cfg.dt + sqdt * noise[i];
        if (v < 0.0) v = 0.0;
        next[i] = v;
        sum += v;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw NumericalError("diffusion_step: projected state has mass " +
                             std::to_string(sum));
    }
    for (double& v : next) v /= sum;
    return SimplexState(std::move(next));
}

std::vector<SimplexState> run_diffusion(const SimplexState& init,
                                        const DiffusionConfig& cfg,
                                        std::uint64_t stream) {
    if (init.K() != cfg.K) throw DomainError("run_diffusion: K mismatch");
    const std::int64_t n_steps =
        static_cast<std::int64_t>(std::ceil(cfg.t_end / cfg.dt));
    std::vector<SimplexState> path;
    path.reserve(static_cast<std::size_t>(n_steps) + 1);
    path.push_back(init);
    RandomStream rng(cfg.seed, stream);
    for (std::int64_t s = 0; s < n_steps; ++s) {
        path.push_back(diffusion_step(path.back(), cfg, rng));
    }
    return path;
}

std::vector<RankedState> ranked_path(std::span<const SimplexState> path) {
    std::vector<RankedState> out;
    out.reserve(path.size());
    for (const SimplexState& z : path) out.push_back(rho_K(z));
    return out;
}

std::vector<RankedState> diffusion_stationary_sample(const DiffusionConfig& cfg,
                                                     long n_draws,
                                                     double spacing,
                                                     int n_paths, int jobs) {
    if (n_paths < 1 || n_draws < 1 || !(spacing > 0.0)) {
        throw DomainError("diffusion_stationary_sample: bad arguments");
    }
    const double burn_time = 20.0 / (1.0 + cfg.params.theta);
    const std::int64_t burn_steps =
        static_cast<std::int64_t>(std::ceil(burn_time / cfg.dt));
    const std::int64_t stride =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::round(spacing / cfg.dt)));
    const long per_path = (n_draws + n_paths - 1) / n_paths;

    auto run_path = [&](int path_idx) {
        RandomStream rng(cfg.seed, static_cast<std::uint64_t>(path_idx));
        SimplexState z = SimplexState::uniform(cfg.K);
        for (std::int64_t s = 0; s < burn_steps; ++s) {
            z = diffusion_step(z, cfg, rng);
        }
        std::vector<RankedState> draws;
        draws.reserve(static_cast<std::size_t>(per_path));
        for (long d = 0; d < per_path; ++d) {
            for (std::int64_t s = 0; s < stride; ++s) {
                z = diffusion_step(z, cfg, rng);
            }
            draws.push_back(rho_K(z));
        }
        return draws;
    };

    const int workers = std::max(1, std::min(jobs, n_paths));
    std::vector<std::vector<RankedState>> results(static_cast<std::size_t>(n_paths));
    std::vector<std::future<void>> futures;
    std::atomic<int> next_path{0};
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const int p = next_path.fetch_add(1);
                if (p >= n_paths) return;
                results[static_cast<std::size_t>(p)] = run_path(p);
            }
        }));
    }
    for (auto& f : futures) f.get();

    std::vector<RankedState> out;
    out.reserve(static_cast<std::size_t>(per_path) * static_cast<std::size_t>(n_paths));
    for (const auto& r : results) {
        out.insert(out.end(), r.begin(), r.end());
    }
    if (out.size() > static_cast<std::size_t>(n_draws)) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(n_draws), out.end());
    }
    return out;
}

}  // namespace wfpd
