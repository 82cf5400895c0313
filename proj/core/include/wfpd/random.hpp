#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfpd/errors.hpp"

namespace wfpd {

/// Counter-based splittable 64-bit generator (splitmix64 finalizer over
/// a Weyl sequence).  Stream s of seed x starts from an independent
/// point derived from (x, s); replicate r of a run uses stream r.
/// State is tiny and copyable, sequences are reproducible across
/// platforms bit for bit.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// A stream derived from this one's identity (not its position).
    RandomStream substream(std::uint64_t stream) const;

    std::uint64_t next_u64();

    /// High then low 32 bits of successive 64-bit outputs.
    std::uint32_t next_u32();

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform01();

    /// Uniform on {0, ..., n-1} (n > 0), via rejection-free 128-bit scaling.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Standard normal (Marsaglia polar, second deviate cached).
    double normal();

    /// Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
    double gamma(double shape);

    /// Beta(a, b), a, b > 0.
    double beta(double a, double b);

private:
    std::uint64_t state_;
    std::uint64_t seed_key_;  // identity for substream derivation
    double spare_normal_ = 0.0;
    bool has_spare_normal_ = false;
    std::uint32_t low32_ = 0;
    bool has_low32_ = false;
};

/// Binomial(n, p) draw.  p is clamped to [0,1].
std::uint32_t binomial(RandomStream& rng, std::uint32_t n, double p);

/// Multinomial(n, p) via sequential conditional binomials; counts sum
/// to n exactly.  p must be nonnegative; it is normalized internally.
std::vector<std::int64_t> multinomial(RandomStream& rng, std::int64_t n,
                                      std::span<const double> p);

}  // namespace wfpd
