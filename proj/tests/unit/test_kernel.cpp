#include <doctest.h>

#include <mpfr.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "wfpd/kernel.hpp"
#include "wfpd/random.hpp"

using namespace wfpd;

namespace {

Params general(double theta, double alpha) {
    return validate_params(theta, alpha, Regime::General);
}

// Arbitrary-precision reference for r(u) = (1-u)(1-(1-u)^K)/u.  The
// working precision grows with -log2(u) so that 1-u is represented
// exactly enough for the cancellation to be meaningful.
double r_weight_reference(double u, long K) {
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(
        256, static_cast<mpfr_prec_t>(-std::log2(u)) + 128);
    mpfr_t t, p, num;
    mpfr_inits2(prec, t, p, num, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(t, u, MPFR_RNDN);
    mpfr_ui_sub(t, 1, t, MPFR_RNDN);        // t = 1-u
    mpfr_pow_ui(p, t, static_cast<unsigned long>(K), MPFR_RNDN);
    mpfr_ui_sub(p, 1, p, MPFR_RNDN);        // p = 1-(1-u)^K
    mpfr_mul(num, t, p, MPFR_RNDN);         // num = (1-u)(1-(1-u)^K)
    mpfr_set_d(t, u, MPFR_RNDN);
    mpfr_div(num, num, t, MPFR_RNDN);
    const double out = mpfr_get_d(num, MPFR_RNDN);
    mpfr_clears(t, p, num, static_cast<mpfr_ptr>(nullptr));
    return out;
}

std::vector<SimplexState> random_states(int K, int count, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<SimplexState> out;
    for (int i = 0; i < count; ++i) {
        std::vector<double> w(K);
        double sum = 0.0;
        for (double& x : w) {
            x = rng.gamma(0.5);
            sum += x;
        }
        for (double& x : w) x /= sum;
        out.emplace_back(std::move(w));
    }
    return out;
}

}  // namespace

TEST_CASE("r_weight closed values") {
    CHECK(r_weight(0.0, 5) == 5.0);
    CHECK(r_weight(1.0, 7) == 0.0);
    CHECK(r_weight(0.5, 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(r_weight(-0.1, 5), DomainError);
    CHECK_THROWS_AS(r_weight(1.1, 5), DomainError);

    CHECK(r_weight_bar(0.0, 5) == 5.0);
    CHECK(r_weight_bar(1.0, 7) == doctest::Approx(1.0));
    CHECK(r_weight_bar(0.5, 2) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("r_weight equals the truncated geometric series") {
    for (long K : {2L, 3L, 17L}) {
        for (double u : {0.001, 0.1, 0.4, 0.77, 0.99}) {
            double series = 0.0;
            for (long k = 1; k <= K; ++k) series += std::pow(1.0 - u, k);
            CHECK(r_weight(u, K) == doctest::Approx(series).epsilon(1e-13));
            CHECK(r_weight_bar(u, K) ==
                  doctest::Approx(series + 1.0 - std::pow(1.0 - u, K)).epsilon(1e-13));
        }
    }
}

TEST_CASE("r_weight is strictly decreasing") {
    for (long K : {2L, 7L, 64L}) {
        double prev = r_weight(0.0, K);
        double prev_bar = r_weight_bar(0.0, K);
        for (int g = 1; g <= 500; ++g) {
            const double u = static_cast<double>(g) / 500.0;
            const double cur = r_weight(u, K);
            const double cur_bar = r_weight_bar(u, K);
            CHECK(cur < prev);
            CHECK(cur_bar < prev_bar);
            prev = cur;
            prev_bar = cur_bar;
        }
    }
}

TEST_CASE("r_weight stays accurate down to 1e-300 against a 256-bit reference") {
    const long K = 10000;
    // 100 points log-spaced across the full double range.
    for (int i = 0; i < 100; ++i) {
        const double u = std::pow(10.0, -300.0 + 3.0 * i);
        const double approx = r_weight(u, K);
        const double exact = r_weight_reference(u, K);
        REQUIRE(std::isfinite(approx));
        REQUIRE(approx >= 0.0);
        REQUIRE(approx <= static_cast<double>(K));
        CHECK(std::abs(approx - exact) <= 1e-10 * std::abs(exact));
    }
}

TEST_CASE("mainland_freqs sums to one and reverses the island order") {
    const SimplexState uniform = SimplexState::uniform(6);
    for (double p : mainland_freqs(uniform)) {
        CHECK(p == doctest::Approx(1.0 / 6).epsilon(1e-14));
    }

    const std::vector<double> p2 = mainland_freqs(SimplexState({0.75, 0.25}));
    CHECK(p2[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p2[1] == doctest::Approx(0.9).epsilon(1e-14));

    const std::vector<double> p3 = mainland_freqs(SimplexState({1.0, 0.0, 0.0}));
    CHECK(p3[0] == 0.0);
    CHECK(p3[1] == doctest::Approx(0.5));
    CHECK(p3[2] == doctest::Approx(0.5));

    for (const SimplexState& z : random_states(5, 200, 77)) {
        const std::vector<double> p = mainland_freqs(z);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) ==
              doctest::Approx(1.0).epsilon(1e-12));
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                if (z[i] < z[j]) CHECK(p[i] > p[j]);
            }
        }
    }
}

TEST_CASE("minimum_population closed form") {
    CHECK(minimum_population(general(1.0, 0.0), 5) == 2);
    CHECK(minimum_population(general(1.0, 0.3), 100) == 16);
    CHECK(minimum_population(Params{0.0, 0.0, Regime::General}, 3) == 2);
}

TEST_CASE("migration_step fixed points") {
    const KernelConfig cfg(general(1.0, 0.3), 4, 500);
    const SimplexState uniform = SimplexState::uniform(4);
    const SimplexState moved = migration_step(uniform, cfg);
    for (int i = 0; i < 4; ++i) {
        CHECK(moved[i] == doctest::Approx(0.25).epsilon(1e-14));
    }

    const KernelConfig no_mig(general(1.0, 0.0), 4, 500);
    const SimplexState z({0.4, 0.3, 0.2, 0.1});
    CHECK(migration_step(z, no_mig).freqs() == z.freqs());
}

TEST_CASE("migration_step matches a direct evaluation of the three-term map") {
    // K=2, z=(0.75,0.25), theta=1, alpha=0.3, N=100, by hand:
    // r(0.75)=0.3125, r(0.25)=1.3125, p=(0.1,0.9),
    // m_i = 0.3 r_i/200, m = z1 m_1 + z2 m_2.
    const KernelConfig cfg(general(1.0, 0.3), 2, 100);
    const SimplexState out = migration_step(SimplexState({0.75, 0.25}), cfg);
    CHECK(out[0] == doctest::Approx(0.7497328125).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(0.2502671875).epsilon(1e-15));

    // Same map at random states, re-evaluated from scratch.
    for (const SimplexState& z : random_states(3, 100, 13)) {
        const KernelConfig c3(general(0.7, 0.45), 3, 200);
        const SimplexState got = migration_step(z, c3);
        std::vector<double> r(3), p = mainland_freqs(z);
        double m_total = 0.0;
        for (int i = 0; i < 3; ++i) {
            r[i] = (1.0 - z[i]) * (1.0 - std::pow(1.0 - z[i], 3)) /
                   (z[i] > 0 ? z[i] : 1.0);
            if (z[i] == 0.0) r[i] = 3.0;
            m_total += z[i] * 0.45 * r[i] / 400.0;
        }
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double expected =
                z[i] + p[i] * m_total - z[i] * 0.45 * r[i] / 400.0;
            CHECK(got[i] == doctest::Approx(expected).epsilon(1e-12));
            sum += got[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("migration and mutation are symmetric under coordinate permutation") {
    const KernelConfig cfg(general(0.8, 0.35), 4, 300);
    for (const SimplexState& z : random_states(4, 100, 23)) {
        const SimplexState a = mutation_step(migration_step(z, cfg), cfg);
        std::vector<double> perm{z[2], z[0], z[3], z[1]};
        const SimplexState b =
            mutation_step(migration_step(SimplexState(perm), cfg), cfg);
        CHECK(b[0] == doctest::Approx(a[2]).epsilon(1e-13));
        CHECK(b[1] == doctest::Approx(a[0]).epsilon(1e-13));
        CHECK(b[2] == doctest::Approx(a[3]).epsilon(1e-13));
        CHECK(b[3] == doctest::Approx(a[1]).epsilon(1e-13));
    }
}

TEST_CASE("mutation_step closed values") {
    const KernelConfig cfg(general(1.0, 0.3), 2, 100);
    // u = (theta+alpha)/(2N(K-1)) = 1.3/200 = 0.0065
    const SimplexState out = mutation_step(SimplexState({1.0, 0.0}), cfg);
    CHECK(out[0] == doctest::Approx(1.0 - 0.0065).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(0.0065).epsilon(1e-15));

    const SimplexState uniform = SimplexState::uniform(2);
    CHECK(mutation_step(uniform, cfg)[0] == doctest::Approx(0.5).epsilon(1e-15));

    // theta + alpha = 0 has zero mutation rate (raw params, below the
    // validation gate on purpose).
    const KernelConfig frozen(Params{-0.3, 0.3, Regime::General}, 2, 100);
    const SimplexState z({0.9, 0.1});
    CHECK(mutation_step(z, frozen).freqs() == z.freqs());
}

TEST_CASE("drift_b boundary identities") {
    RandomStream rng(31);
    const std::vector<Params> grid{general(1.0, 0.3), general(0.1, 0.9),
                                   general(2.0, 0.0),
                                   validate_params(1.0, 0.3, Regime::ThetaNonneg)};
    for (const Params& params : grid) {
        for (int trial = 0; trial < 2500; ++trial) {
            const int K = 2 + static_cast<int>(rng.uniform_below(6));
            std::vector<double> w(K);
            double sum = 0.0;
            for (double& x : w) {
                x = rng.gamma(0.35);
                sum += x;
            }
            for (double& x : w) x /= sum;
            const int zero_at = trial % (K + 1);
            if (zero_at < K) {
                // push one coordinate to the boundary and renormalize
                w[zero_at] = 0.0;
                double rest = 0.0;
                for (double x : w) rest += x;
                for (double& x : w) x /= rest;
            }
            const SimplexState z(w);
            const std::vector<double> b = drift_b(z, params);
            CHECK(std::accumulate(b.begin(), b.end(), 0.0) ==
                  doctest::Approx(0.0).epsilon(1e-12));
            if (zero_at < K) {
                CHECK(b[zero_at] >= 0.0);
                // closed form at the boundary coordinate
                const std::vector<double> p = mainland_freqs(z);
                double zr = 0.0;
                for (int j = 0; j < K; ++j) {
                    zr += z[j] * regime_r(z[j], K, params);
                }
                const double expected =
                    0.5 * (params.mutation_numerator() / (K - 1.0) +
                           params.alpha * p[zero_at] * zr);
                CHECK(b[zero_at] == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("drift vanishes at the uniform state") {
    const std::vector<double> b =
        drift_b(SimplexState::uniform(2), general(1.0, 0.3));
    CHECK(b[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("the concrete family passes the generalized-migration audit") {
    RandomStream rng(41);
    std::vector<RankedState> states;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> w(16);
        double sum = 0.0;
        for (double& x : w) {
            x = rng.gamma(0.3);
            sum += x;
        }
        for (double& x : w) x /= sum;
        states.emplace_back(sort_descending(std::move(w)));
    }
    const RFamily r = [](double u, std::int64_t K) { return r_weight(u, K); };
    const PFamily p = [](std::span<const double> z, std::int64_t K) {
        return mainland_freqs_padded(z, K);
    };
    const RemarkCheck check = satisfies_remark_conditions(r, p, 16, 0.5, states);
    CHECK(check.pointwise_nonneg);
    CHECK(check.relcomp_sup > 0.0);
    CHECK(check.apriori_sup >= 0.0);
    CHECK(check.apriori_sup < 1.0);
    CHECK(check.rate_sup < 1.0);
    CHECK(check.rate_mainland_sup < check.relcomp_sup + 1e-12);
}
