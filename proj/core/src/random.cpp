#include "wfpd/random.hpp"

#include <gsl/gsl_randist.h>
#include <gsl/gsl_rng.h>

#include <cmath>
#include <string>

namespace wfpd {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 output function (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_state(std::uint64_t seed, std::uint64_t stream) {
    // Two finalizer rounds decorrelate (seed, stream) pairs.
    return mix64(mix64(seed + kGolden) + stream * 0xD1342543DE82EF95ULL);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : state_(derive_state(seed, stream)), seed_key_(state_) {}

RandomStream RandomStream::substream(std::uint64_t stream) const {
    RandomStream out(0, 0);
    out.state_ = derive_state(seed_key_, stream + 1);
    out.seed_key_ = out.state_;
    return out;
}

std::uint64_t RandomStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

std::uint32_t RandomStream::next_u32() {
    if (has_low32_) {
        has_low32_ = false;
        return low32_;
    }
    const std::uint64_t x = next_u64();
    low32_ = static_cast<std::uint32_t>(x);
    has_low32_ = true;
    return static_cast<std::uint32_t>(x >> 32);
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_below requires n > 0");
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
}

double RandomStream::normal() {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * f;
    has_spare_normal_ = true;
    return u * f;
}

double RandomStream::gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma requires shape > 0");
    if (shape < 1.0) {
        // Boost to shape+1, then scale by U^(1/shape).
        const double g = gamma(shape + 1.0);
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RandomStream::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

namespace {

// Adapter exposing a RandomStream to GSL's variate transforms.  The
// gsl_rng state holds only a pointer to the active stream.
struct GslShim {
    RandomStream* stream;
};

void shim_set(void*, unsigned long) {}

unsigned long shim_get(void* state) {
    return static_cast<GslShim*>(state)->stream->next_u32();
}

double shim_get_double(void* state) {
    return static_cast<GslShim*>(state)->stream->uniform01();
}

const gsl_rng_type kShimType = {
    "wfpd_stream",       // name
    0xffffffffUL,        // max
    0,                   // min
    sizeof(GslShim),     // size
    &shim_set,           // set
    &shim_get,           // get
    &shim_get_double,    // get_double
};

struct ShimRngHolder {
    gsl_rng* r = gsl_rng_alloc(&kShimType);
    ~ShimRngHolder() { gsl_rng_free(r); }
};

gsl_rng* shim_rng(RandomStream& rng) {
    thread_local ShimRngHolder holder;
    static_cast<GslShim*>(holder.r->state)->stream = &rng;
    return holder.r;
}

}  // namespace

std::uint32_t binomial(RandomStream& rng, std::uint32_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    return gsl_ran_binomial(shim_rng(rng), p, n);
}

std::vector<std::int64_t> multinomial(RandomStream& rng, std::int64_t n,
                                      std::span<const double> p) {
    if (n < 0) throw DomainError("multinomial requires n >= 0");
    std::vector<std::int64_t> counts(p.size(), 0);
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) {
            throw DomainError("multinomial: negative cell probability " +
                              std::to_string(x));
        }
        total += x;
    }
    if (total <= 0.0) throw DomainError("multinomial: zero probability mass");

    std::int64_t remaining = n;
    double mass_left = total;
    for (std::size_t i = 0; i + 1 < p.size() && remaining > 0; ++i) {
        const double q = p[i] / mass_left;
        const std::int64_t c =
            binomial(rng, static_cast<std::uint32_t>(remaining), q);
        counts[i] = c;
        remaining -= c;
        mass_left -= p[i];
        if (mass_left <= 0.0) break;
    }
    counts.back() += remaining;
    return counts;
}

}  // namespace wfpd
