#include "wfpd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wfpd {

namespace {

double checked_sum(std::span<const double> v, const char* what) {
    double sum = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw DomainError(std::string(what) + ": non-finite entry");
        }
        if (x < 0.0) {
            throw DomainError(std::string(what) + ": negative entry " +
                              std::to_string(x));
        }
        sum += x;
    }
    return sum;
}

}  // namespace

SimplexState::SimplexState(std::vector<double> freqs) : freqs_(std::move(freqs)) {
    if (freqs_.size() < 2) {
        throw DomainError("SimplexState requires K >= 2");
    }
    const double sum = checked_sum(freqs_, "SimplexState");
    if (std::abs(sum - 1.0) > kSimplexSumTol) {
        throw DomainError("SimplexState: frequencies sum to " +
                          std::to_string(sum) + ", expected 1 within 1e-12");
    }
    if (sum != 1.0) {
        for (double& x : freqs_) x /= sum;
    }
}

SimplexState SimplexState::uniform(int K) {
    return SimplexState(std::vector<double>(K, 1.0 / K));
}

SimplexState SimplexState::vertex(int K, int i) {
    std::vector<double> v(K, 0.0);
    v.at(i) = 1.0;
    return SimplexState(std::move(v));
}

DiscreteSimplexState::DiscreteSimplexState(std::vector<std::int64_t> counts,
                                           std::int64_t N)
    : counts_(std::move(counts)), N_(N) {
    if (counts_.size() < 2) {
        throw DomainError("DiscreteSimplexState requires K >= 2");
    }
    if (N <= 0) {
        throw DomainError("DiscreteSimplexState requires N >= 1");
    }
    std::int64_t sum = 0;
    for (std::int64_t c : counts_) {
        if (c < 0) throw DomainError("DiscreteSimplexState: negative count");
        sum += c;
    }
    if (sum != N) {
        throw DomainError("DiscreteSimplexState: counts sum to " +
                          std::to_string(sum) + ", expected N = " +
                          std::to_string(N));
    }
}

SimplexState DiscreteSimplexState::to_frequencies() const {
    std::vector<double> z(counts_.size());
    const double n = static_cast<double>(N_);
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        z[i] = static_cast<double>(counts_[i]) / n;
    }
    return SimplexState(std::move(z));
}

DiscreteSimplexState DiscreteSimplexState::balanced(int K, std::int64_t N) {
    std::vector<std::int64_t> counts(K, N / K);
    for (std::int64_t i = 0; i < N % K; ++i) counts[static_cast<std::size_t>(i)] += 1;
    return DiscreteSimplexState(std::move(counts), N);
}

RankedState::RankedState(std::vector<double> freqs) : freqs_(std::move(freqs)) {
    if (freqs_.empty()) {
        throw DomainError("RankedState requires K >= 1");
    }
    const double sum = checked_sum(freqs_, "RankedState");
    if (sum > 1.0 + kSimplexSumTol) {
        throw DomainError("RankedState: mass " + std::to_string(sum) +
                          " exceeds 1");
    }
    for (std::size_t i = 1; i < freqs_.size(); ++i) {
        if (freqs_[i] > freqs_[i - 1]) {
            throw DomainError("RankedState: not nonincreasing at index " +
                              std::to_string(i));
        }
    }
}

double RankedState::sum() const {
    return std::accumulate(freqs_.begin(), freqs_.end(), 0.0);
}

SimplexState RankedState::as_simplex() const {
    if (freqs_.size() < 2) {
        std::vector<double> padded = freqs_;
        padded.resize(2, 0.0);
        return SimplexState(std::move(padded));
    }
    return SimplexState(freqs_);
}

RankedState RankedState::uniform_over(int j, int K) {
    if (j < 1 || j > K) throw DomainError("uniform_over requires 1 <= j <= K");
    std::vector<double> v(K, 0.0);
    for (int i = 0; i < j; ++i) v[static_cast<std::size_t>(i)] = 1.0 / j;
    return RankedState(std::move(v));
}

std::vector<double> sort_descending(std::vector<double> v) {
    std::stable_sort(v.begin(), v.end(), [](double a, double b) { return a > b; });
    return v;
}

RankedState rho_K(const SimplexState& z) {
    return RankedState(sort_descending(z.freqs()));
}

}  // namespace wfpd
