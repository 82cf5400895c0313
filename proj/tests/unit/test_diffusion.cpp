#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfpd/diffusion.hpp"
#include "wfpd/generators.hpp"
#include "wfpd/kernel.hpp"

using namespace wfpd;

namespace {
const Params kP13 = validate_params(1.0, 0.3, Regime::General);
}

TEST_CASE("diffusion_coeff closed values") {
    const std::vector<double> a = diffusion_coeff(SimplexState({0.5, 0.5}));
    CHECK(a[0] == doctest::Approx(0.25));
    CHECK(a[1] == doctest::Approx(-0.25));
    CHECK(a[2] == doctest::Approx(-0.25));
    CHECK(a[3] == doctest::Approx(0.25));

    const std::vector<double> av = diffusion_coeff(SimplexState::vertex(3, 0));
    for (double x : av) CHECK(x == doctest::Approx(0.0));

    const SimplexState z({0.5, 0.3, 0.2});
    const std::vector<double> az = diffusion_coeff(z);
    for (int i = 0; i < 3; ++i) {
        double row = 0.0;
        for (int j = 0; j < 3; ++j) {
            row += az[static_cast<std::size_t>(3 * i + j)];
            CHECK(az[static_cast<std::size_t>(3 * i + j)] ==
                  doctest::Approx(az[static_cast<std::size_t>(3 * j + i)]));
        }
        CHECK(row == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("the exact noise factor reproduces the covariance") {
    // sigma sigma^T = a(z) checked entrywise through random probing.
    RandomStream rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w(6);
        double sum = 0.0;
        for (double& x : w) {
            x = rng.gamma(0.4);
            sum += x;
        }
        for (double& x : w) x /= sum;
        if (trial % 3 == 0) {
            // exercise near-boundary coordinates
            w[0] += w[1] - 1e-15;
            w[1] = 1e-15;
        }
        const SimplexState z(w);
        // sigma = diag(sqrt z)(I - sqrt z sqrt z^T): assemble explicitly.
        std::vector<double> sigma(36);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                const double sij = (i == j ? 1.0 : 0.0) -
                                   std::sqrt(z[static_cast<std::size_t>(i)]) *
                                       std::sqrt(z[static_cast<std::size_t>(j)]);
                sigma[static_cast<std::size_t>(6 * i + j)] =
                    std::sqrt(z[static_cast<std::size_t>(i)]) * sij;
            }
        }
        const std::vector<double> a = diffusion_coeff(z);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                double dot = 0.0;
                for (int k = 0; k < 6; ++k) {
                    dot += sigma[static_cast<std::size_t>(6 * i + k)] *
                           sigma[static_cast<std::size_t>(6 * j + k)];
                }
                CHECK(dot == doctest::Approx(a[static_cast<std::size_t>(6 * i + j)])
                                 .epsilon(1e-10));
            }
        }
        // and the matrix-free application agrees with assembled sigma
        std::vector<double> xi(6);
        for (double& x : xi) x = rng.normal();
        const std::vector<double> fast = wright_fisher_noise(z.span(), xi);
        for (int i = 0; i < 6; ++i) {
            double slow = 0.0;
            for (int k = 0; k < 6; ++k) {
                slow += sigma[static_cast<std::size_t>(6 * i + k)] * xi[static_cast<std::size_t>(k)];
            }
            CHECK(fast[static_cast<std::size_t>(i)] == doctest::Approx(slow).epsilon(1e-12));
        }
    }
}

TEST_CASE("diffusion config validation") {
    CHECK_THROWS_AS(DiffusionConfig(kP13, 2, 0.2, 1.0, 1), DomainError);
    CHECK_THROWS_AS(DiffusionConfig(kP13, 1, 1e-3, 1.0, 1), DomainError);
    const DiffusionConfig d = DiffusionConfig::with_default_dt(kP13, 200, 1.0, 1);
    CHECK(d.dt <= max_stable_dt(kP13, 200));
}

TEST_CASE("a frozen vertex is a fixed point of the step") {
    const Params frozen{0.0, 0.0, Regime::General};
    const DiffusionConfig cfg(frozen, 3, 1e-3, 1.0, 5);
    RandomStream rng(5);
    SimplexState z = SimplexState::vertex(3, 1);
    for (int t = 0; t < 100; ++t) z = diffusion_step(z, cfg, rng);
    CHECK(z[1] == 1.0);
}

TEST_CASE("run_diffusion length and determinism") {
    const DiffusionConfig cfg(kP13, 4, 1e-3, 0.05, 17);
    const SimplexState init = SimplexState::uniform(4);
    CHECK(run_diffusion(init, DiffusionConfig(kP13, 4, 1e-3, 0.0, 17)).size() == 1);

    const auto a = run_diffusion(init, cfg);
    const auto b = run_diffusion(init, cfg);
    REQUIRE(a.size() == 51);
    REQUIRE(b.size() == 51);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].freqs() == b[i].freqs());
    }
    for (const SimplexState& z : a) {
        double sum = 0.0;
        for (double x : z.freqs()) sum += x;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("one-step mean and covariance match b(z)dt and a(z)dt") {
    const SimplexState z({0.4, 0.35, 0.25});
    const DiffusionConfig cfg(kP13, 3, 5e-3, 1.0, 23);
    const std::vector<double> b = drift_b(z, kP13);
    const std::vector<double> a = diffusion_coeff(z);

    const long draws = 200000;
    RandomStream rng(23);
    std::vector<double> mean(3, 0.0);
    std::vector<double> cov(9, 0.0);
    std::vector<std::vector<double>> deltas(static_cast<std::size_t>(draws));
    for (long d = 0; d < draws; ++d) {
        const SimplexState next = diffusion_step(z, cfg, rng);
        std::vector<double> delta(3);
        for (int i = 0; i < 3; ++i) {
            delta[static_cast<std::size_t>(i)] = next[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(i)];
            mean[static_cast<std::size_t>(i)] += delta[static_cast<std::size_t>(i)];
        }
        deltas[static_cast<std::size_t>(d)] = std::move(delta);
    }
    for (double& m : mean) m /= draws;
    for (const auto& delta : deltas) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                cov[static_cast<std::size_t>(3 * i + j)] +=
                    (delta[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)]) *
                    (delta[static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)]);
            }
        }
    }
    for (double& c : cov) c /= (draws - 1.0);

    for (int i = 0; i < 3; ++i) {
        const double sd_i = std::sqrt(a[static_cast<std::size_t>(4 * i)] * cfg.dt);
        const double se_mean = sd_i / std::sqrt(static_cast<double>(draws));
        CHECK(std::abs(mean[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)] * cfg.dt) <
              6.0 * se_mean + 1e-7);
        for (int j = 0; j < 3; ++j) {
            const double sd_j = std::sqrt(a[static_cast<std::size_t>(4 * j)] * cfg.dt);
            const double se_cov = sd_i * sd_j * 1.5 / std::sqrt(static_cast<double>(draws));
            CHECK(std::abs(cov[static_cast<std::size_t>(3 * i + j)] -
                           a[static_cast<std::size_t>(3 * i + j)] * cfg.dt) < 6.0 * se_cov + 1e-8);
        }
    }
}

TEST_CASE("ranked paths are sorted, mass preserving and permutation blind") {
    const DiffusionConfig cfg(kP13, 5, 1e-3, 0.2, 31);
    const auto path = run_diffusion(SimplexState({0.3, 0.25, 0.2, 0.15, 0.1}), cfg);
    const auto ranked = ranked_path(path);
    REQUIRE(ranked.size() == path.size());
    CHECK(ranked.front().freqs() == rho_K(path.front()).freqs());
    for (const RankedState& r : ranked) {
        for (int i = 1; i < r.K(); ++i) {
            CHECK(r[static_cast<std::size_t>(i)] <= r[static_cast<std::size_t>(i - 1)]);
        }
        CHECK(r.sum() == doctest::Approx(1.0).epsilon(1e-9));
    }

    // permuting the initial state changes nothing after ranking (same seed)
    const auto path2 = run_diffusion(SimplexState({0.1, 0.3, 0.2, 0.25, 0.15}), cfg);
    const auto ranked2 = ranked_path(path2);
    CHECK(ranked2.front().freqs() == ranked.front().freqs());
}

TEST_CASE("diffusion_stationary_sample is deterministic and ranked") {
    const DiffusionConfig cfg = DiffusionConfig::with_default_dt(kP13, 6, 0.0, 7);
    const auto draws = diffusion_stationary_sample(cfg, 40, 0.25, 4, 2);
    const auto again = diffusion_stationary_sample(cfg, 40, 0.25, 4, 1);
    REQUIRE(draws.size() == 40);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        CHECK(draws[i].freqs() == again[i].freqs());
    }
}
