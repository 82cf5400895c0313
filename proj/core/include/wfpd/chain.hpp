#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wfpd/kernel.hpp"
#include "wfpd/random.hpp"
#include "wfpd/simplex.hpp"

namespace wfpd {

/// Configuration of a discrete Wright-Fisher run.  Defaults for burn-in
/// and thinning follow mixing-time heuristics (10*N steps, thin = K)
/// and can be overridden.
struct ChainConfig {
    KernelConfig kernel;
    std::uint64_t seed = 0;
    std::int64_t steps = 0;
    std::int64_t burn_in = 0;
    std::int64_t thin = 1;

    ChainConfig(KernelConfig k, std::uint64_t seed_, std::int64_t steps_);
    ChainConfig(KernelConfig k, std::uint64_t seed_, std::int64_t steps_,
                std::int64_t burn_in_, std::int64_t thin_);
};

struct ChainPath {
    std::vector<DiscreteSimplexState> states;  // every thin-th state after burn-in
    ChainConfig config;
};

/// One generation: migration, mutation, then multinomial resampling of
/// N individuals.  Cell probabilities in (-1e-12, 0) are clamped to 0
/// and the vector renormalized; anything more negative is a hard error.
DiscreteSimplexState chain_step(const DiscreteSimplexState& state,
                                const KernelConfig& cfg, RandomStream& rng);

/// Runs the chain for config.steps generations from init, recording
/// every thin-th state from burn_in on (the initial state counts as
/// step 0).  Deterministic in (init, config.seed, stream); replicate r
/// of a run conventionally uses stream r.
ChainPath run_chain(const DiscreteSimplexState& init, const ChainConfig& config,
                    std::uint64_t stream = 0);

struct ErgodicEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

/// Sample mean of f over the retained states, standard error by batch
/// means with ceil(sqrt(n)) batches.  Throws InsufficientData below 16
/// retained states.
ErgodicEstimate ergodic_average(const ChainPath& path,
                                const std::function<double(const SimplexState&)>& f);

}  // namespace wfpd
