#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfpd/params.hpp"
#include "wfpd/random.hpp"

namespace wfpd {

/// Stick-breaking truncation policy.  Generation stops once the
/// unassigned mass falls below residual_tol or max_sticks sticks have
/// been broken; NonTermination is raised if the residual still exceeds
/// fail_residual at the cap.  For alpha >= 0.5 the residual decays only
/// polynomially (like M^(-(1-alpha)/alpha)), so callers interested in
/// moments should cap max_sticks and rely on the tail correction of
/// pd_phi_moments rather than a small residual.
struct StickOptions {
    double residual_tol = 1e-12;
    long max_sticks = 1'000'000;
    double fail_residual = 1e-6;
};

/// Top-J ranked atoms of one PD(theta, alpha) draw.  tail_mass is the
/// mass not contained in the returned atoms (sub-top-J atoms plus the
/// unassigned stick residual), so ranked_freqs + tail_mass sum to 1.
struct PdSample {
    std::vector<double> ranked_freqs;
    double tail_mass = 0.0;
    int J = 0;
};

/// One draw of PD(theta, alpha) ranked frequencies by stick breaking:
/// W_i = V_i prod_{j<i} (1-V_j) with V_i ~ Beta(1-alpha, theta+i alpha).
PdSample sample_pd(const Params& params, int J, RandomStream& rng,
                   const StickOptions& opts = {});

/// Stationary moment of phi_m forced by the generator:
/// E[phi_m] = prod_{k=2..m} (k-1-alpha)/(k-1+theta), from the recursion
/// E[phi_m] = ((m-1-alpha)/(m-1+theta)) E[phi_{m-1}].  Strictly
/// decreasing in m, theta and alpha.
double stationary_moment(int m, const Params& params);

struct MomentEstimate {
    int m = 0;
    double mean = 0.0;
    double std_error = 0.0;
    long n = 0;
};

/// Monte Carlo E[phi_m] for each m by streaming stick draws, without
/// storing samples.  Per draw, the mass beyond the generated sticks is
/// accounted exactly in expectation through the residual-allocation
/// property: conditionally on residual R after M sticks, the remaining
/// atoms are R times a PD(theta + M alpha, alpha) sequence, so
/// E[tail phi_m] = R^m E[phi_m; theta + M alpha].
std::vector<MomentEstimate> pd_phi_moments(const Params& params,
                                           std::span<const int> ms,
                                           long n_draws, std::uint64_t seed,
                                           const StickOptions& opts = {},
                                           int jobs = 1);

}  // namespace wfpd
