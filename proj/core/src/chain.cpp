#include "wfpd/chain.hpp"

#include <cmath>
#include <string>

#include "wfpd/analysis.hpp"

namespace wfpd {

ChainConfig::ChainConfig(KernelConfig k, std::uint64_t seed_, std::int64_t steps_)
    : ChainConfig(k, seed_, steps_, 10 * k.N, k.K) {}

ChainConfig::ChainConfig(KernelConfig k, std::uint64_t seed_, std::int64_t steps_,
                         std::int64_t burn_in_, std::int64_t thin_)
    : kernel(k), seed(seed_), steps(steps_), burn_in(burn_in_), thin(thin_) {
    if (burn_in < 0 || steps < burn_in) {
        throw DomainError("ChainConfig requires steps >= burn_in >= 0");
    }
    if (thin < 1) throw DomainError("ChainConfig requires thin >= 1");
}

DiscreteSimplexState chain_step(const DiscreteSimplexState& state,
                                const KernelConfig& cfg, RandomStream& rng) {
    const SimplexState z = state.to_frequencies();
    const SimplexState zss = mutation_step(migration_step(z, cfg), cfg);

    std::vector<double> cells = zss.freqs();
    for (double& c : cells) {
        if (c < 0.0) {
            if (c < -1e-12) {
                throw NumericalError("chain_step: cell probability " +
                                     std::to_string(c) + " below -1e-12");
            }
            c = 0.0;
        }
    }
    return DiscreteSimplexState(multinomial(rng, state.N(), cells), state.N());
}

ChainPath run_chain(const DiscreteSimplexState& init, const ChainConfig& config,
                    std::uint64_t stream) {
    ChainPath path{{}, config};
    const std::int64_t recorded =
        (config.steps - config.burn_in) / config.thin + 1;
    path.states.reserve(static_cast<std::size_t>(recorded));

    RandomStream rng(config.seed, stream);
    DiscreteSimplexState state = init;
    for (std::int64_t t = 0;; ++t) {
        if (t >= config.burn_in && (t - config.burn_in) % config.thin == 0) {
            path.states.push_back(state);
        }
        if (t == config.steps) break;
        state = chain_step(state, config.kernel, rng);
    }
    return path;
}

ErgodicEstimate ergodic_average(const ChainPath& path,
                                const std::function<double(const SimplexState&)>& f) {
    std::vector<double> values;
    values.reserve(path.states.size());
    for (const DiscreteSimplexState& s : path.states) {
        values.push_back(f(s.to_frequencies()));
    }
    const Estimate est = batch_means(values);
    return ErgodicEstimate{est.mean, est.std_error, est.n};
}

}  // namespace wfpd
