#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfpd/params.hpp"
#include "wfpd/random.hpp"
#include "wfpd/simplex.hpp"

namespace wfpd {

enum class Scheme { EulerProject };

/// Largest time step admitted by the stability heuristic,
/// 0.1 / (1 + theta + alpha K); drift magnitude grows like alpha K / 2
/// near vertices.
double max_stable_dt(const Params& params, int K);

struct DiffusionConfig {
    Params params;
    int K = 2;
    double dt = 1e-3;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::EulerProject;

    DiffusionConfig(Params p, int K_, double dt_, double t_end_,
                    std::uint64_t seed_);

    /// dt = min(1e-3, max_stable_dt).
    static DiffusionConfig with_default_dt(Params p, int K, double t_end,
                                           std::uint64_t seed);
};

/// Wright-Fisher covariance a_ij(z) = z_i (delta_ij - z_j); symmetric,
/// positive semidefinite, zero row sums on the simplex.  Row-major K*K.
std::vector<double> diffusion_coeff(const SimplexState& z);

/// Applies the exact covariance square root to a standard normal
/// vector: sigma(z) xi with sigma = diag(sqrt(z)) (I - sqrt(z) sqrt(z)^T),
/// which satisfies sigma sigma^T = a(z) whenever sum z_i = 1 (all z in
/// the simplex, boundary included; a(z) has rank <= K-1 so generic
/// Cholesky is unusable).
std::vector<double> wright_fisher_noise(std::span<const double> z,
                                        std::span<const double> xi);

/// One Euler-Maruyama step, clamped to nonnegative and renormalized.
SimplexState diffusion_step(const SimplexState& z, const DiffusionConfig& cfg,
                            RandomStream& rng);

/// Path of length ceil(t_end/dt)+1 (t = 0 state included); deterministic
/// given (config seed, stream).
std::vector<SimplexState> run_diffusion(const SimplexState& init,
                                        const DiffusionConfig& cfg,
                                        std::uint64_t stream = 0);

/// Pathwise reordering map.
std::vector<RankedState> ranked_path(std::span<const SimplexState> path);

/// Draws from the (approximately) stationary ranked law: per path, burn
/// in for 20/(1+theta) time units, then record every `spacing` units.
/// Paths use streams derived from (seed, path index) and run
/// concurrently up to `jobs` threads; the result order is path-major
/// and independent of scheduling.
std::vector<RankedState> diffusion_stationary_sample(const DiffusionConfig& cfg,
                                                     long n_draws,
                                                     double spacing,
                                                     int n_paths, int jobs);

}  // namespace wfpd
