#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <cmath>
#include <random>

#include "wfpd/params.hpp"
#include "wfpd/random.hpp"
#include "wfpd/simplex.hpp"

using namespace wfpd;

TEST_CASE("validate_params accepts the regime's constraint set") {
    CHECK_NOTHROW(validate_params(1.0, 0.3, Regime::General));
    CHECK_NOTHROW(validate_params(-0.2, 0.3, Regime::General));  // theta > -alpha
    CHECK_THROWS_AS(validate_params(-0.2, 0.1, Regime::General), InvalidParams);
    CHECK_THROWS_AS(validate_params(-0.1, 0.5, Regime::ThetaNonneg), InvalidParams);
    CHECK_NOTHROW(validate_params(0.0, 0.5, Regime::ThetaNonneg));
    CHECK_THROWS_AS(validate_params(1.0, 1.0, Regime::General), InvalidParams);
    CHECK_THROWS_AS(validate_params(1.0, -0.1, Regime::General), InvalidParams);
}

TEST_CASE("regime names round-trip") {
    CHECK(regime_from_name(regime_name(Regime::General)) == Regime::General);
    CHECK(regime_from_name(regime_name(Regime::ThetaNonneg)) == Regime::ThetaNonneg);
    CHECK_THROWS_AS(regime_from_name("bogus"), InvalidParams);
}

TEST_CASE("SimplexState renormalizes drift below tolerance and rejects more") {
    SimplexState z({0.2, 0.5, 0.3 + 4e-13});
    const double sum = std::accumulate(z.freqs().begin(), z.freqs().end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(SimplexState({0.2, 0.5, 0.31}), DomainError);
    CHECK_THROWS_AS(SimplexState({-0.1, 0.6, 0.5}), DomainError);
    CHECK_THROWS_AS(SimplexState({1.0}), DomainError);
}

TEST_CASE("DiscreteSimplexState enforces the integer identity") {
    CHECK_NOTHROW(DiscreteSimplexState({3, 0, 7}, 10));
    CHECK_THROWS_AS(DiscreteSimplexState({3, 0, 6}, 10), DomainError);
    CHECK_THROWS_AS(DiscreteSimplexState({-1, 11}, 10), DomainError);

    const DiscreteSimplexState b = DiscreteSimplexState::balanced(3, 11);
    CHECK(b.counts() == std::vector<std::int64_t>{4, 4, 3});
}

TEST_CASE("RankedState accepts mass-deficient states but not unsorted ones") {
    CHECK_NOTHROW(RankedState({0.5, 0.3, 0.1}));  // mass 0.9, fine
    CHECK_NOTHROW(RankedState({0.5, 0.5, 0.0}));
    CHECK_THROWS_AS(RankedState({0.3, 0.5, 0.2}), DomainError);
    CHECK_THROWS_AS(RankedState({0.8, 0.3}), DomainError);  // mass 1.1
    CHECK(RankedState::uniform_over(2, 5).freqs() ==
          std::vector<double>{0.5, 0.5, 0.0, 0.0, 0.0});
}

TEST_CASE("rho_K sorts descending") {
    CHECK(rho_K(SimplexState({0.2, 0.5, 0.3})).freqs() ==
          std::vector<double>{0.5, 0.3, 0.2});
    CHECK(rho_K(SimplexState({1.0 / 3, 1.0 / 3, 1.0 / 3})).freqs() ==
          std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(rho_K(SimplexState({0.0, 1.0, 0.0})).freqs() ==
          std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("rho_K properties: idempotent, sum preserving, permutation blind") {
    RandomStream rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int K = 2 + static_cast<int>(rng.uniform_below(8));
        std::vector<double> w(K);
        double sum = 0.0;
        for (double& x : w) {
            x = rng.gamma(0.4);
            sum += x;
        }
        for (double& x : w) x /= sum;
        SimplexState z(w);

        const RankedState r = rho_K(z);
        CHECK(r.sum() == doctest::Approx(1.0).epsilon(1e-12));
        // re-embedding renormalizes, which may shift values by an ulp
        const RankedState twice = rho_K(r.as_simplex());
        std::vector<double> perm = z.freqs();
        std::shuffle(perm.begin(), perm.end(),
                     std::mt19937_64(rng.next_u64()));
        const RankedState permuted = rho_K(SimplexState(perm));
        for (int i = 0; i < K; ++i) {
            CHECK(std::abs(twice[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)]) <= 1e-14);
            CHECK(std::abs(permuted[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)]) <= 1e-14);
        }
    }
}
