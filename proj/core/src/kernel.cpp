#include "wfpd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wfpd {

double pow1m(double z, std::int64_t K) {
    if (z >= 0.5) return std::pow(1.0 - z, static_cast<double>(K));
    return std::exp(static_cast<double>(K) * std::log1p(-z));
}

namespace {

constexpr double kTinyU = 0x1.0p-40;

void check_unit_interval(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw DomainError("migration weight requires u in [0,1], got " +
                          std::to_string(u));
    }
}

// sum_{k=1..K} (1-u)^k without forming the 0/0 ratio.
double geometric_sum(double u, std::int64_t K) {
    const double t = 1.0 - u;
    double term = 1.0;
    double sum = 0.0;
    for (std::int64_t k = 0; k < K; ++k) {
        term *= t;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace

double r_weight(double u, std::int64_t K) {
    check_unit_interval(u);
    if (K < 2) throw DomainError("r_weight requires K >= 2");
    if (u == 0.0) return static_cast<double>(K);
    if (u < kTinyU) return geometric_sum(u, K);
    // (1-u) * (1-(1-u)^K) / u, with the numerator via expm1/log1p.
    return (1.0 - u) * (-std::expm1(static_cast<double>(K) * std::log1p(-u))) / u;
}

double r_weight_bar(double u, std::int64_t K) {
    check_unit_interval(u);
    if (K < 2) throw DomainError("r_weight_bar requires K >= 2");
    if (u == 0.0) return static_cast<double>(K);
    if (u < kTinyU) return geometric_sum(u, K) + 1.0 - pow1m(u, K);
    return -std::expm1(static_cast<double>(K) * std::log1p(-u)) / u;
}

double regime_r(double u, std::int64_t K, const Params& params) {
    return params.regime == Regime::General ? r_weight(u, K)
                                            : r_weight_bar(u, K);
}

std::vector<double> mainland_freqs_padded(std::span<const double> z,
                                          std::int64_t K) {
    const std::size_t n = z.size();
    std::vector<double> p(n);
    double denom = static_cast<double>(K - static_cast<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = pow1m(z[i], K);
        denom += p[i];
    }
    for (double& x : p) x /= denom;
    return p;
}

std::vector<double> mainland_freqs(const SimplexState& z) {
    return mainland_freqs_padded(z.span(), z.K());
}

std::int64_t minimum_population(const Params& params, int K) {
    const double m1 = std::ceil(params.alpha * K / 2.0);
    const double m2 = std::ceil((params.theta + params.alpha) / 2.0);
    const double floor_n = std::max({m1, m2, 1.0});
    return static_cast<std::int64_t>(floor_n) + 1;
}

KernelConfig::KernelConfig(Params p, int K_, std::int64_t N_)
    : params(p), K(K_), N(N_) {
    if (K < 2) throw DomainError("KernelConfig requires K >= 2");
    const std::int64_t n_min = minimum_population(params, K);
    if (N < n_min) {
        throw InvalidPopulationSize(
            "population size N = " + std::to_string(N) +
            " below minimum N_min = " + std::to_string(n_min) +
            " for K = " + std::to_string(K));
    }
}

SimplexState migration_step(const SimplexState& z, const KernelConfig& cfg) {
    const int K = z.K();
    if (K != cfg.K) throw DomainError("migration_step: K mismatch");
    const double scale = cfg.params.alpha / (2.0 * static_cast<double>(cfg.N));
    if (scale == 0.0) return z;

    const std::vector<double>& zv = z.freqs();
    const std::vector<double> p = mainland_freqs(z);
    std::vector<double> m(static_cast<std::size_t>(K));
    double m_total = 0.0;  // m(z) = sum_j z_j m_j(z)
    for (int i = 0; i < K; ++i) {
        m[static_cast<std::size_t>(i)] = scale * regime_r(zv[static_cast<std::size_t>(i)], K, cfg.params);
        m_total += zv[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
    }
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        out[s] = zv[s] + p[s] * m_total - zv[s] * m[s];
    }
    return SimplexState(std::move(out));
}

SimplexState mutation_step(const SimplexState& zstar, const KernelConfig& cfg) {
    const int K = zstar.K();
    if (K != cfg.K) throw DomainError("mutation_step: K mismatch");
    const double u = cfg.params.mutation_numerator() /
                     (2.0 * static_cast<double>(cfg.N) * (K - 1));
    if ((K - 1) * u >= 1.0) {
        throw InvalidPopulationSize("mutation_step: total out-rate (K-1)u = " +
                                    std::to_string((K - 1) * u) + " >= 1");
    }
    if (u == 0.0) return zstar;
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        const double zi = zstar[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = zi * (1.0 - (K - 1) * u) + u * (1.0 - zi);
    }
    return SimplexState(std::move(out));
}

std::vector<double> drift_b_padded(std::span<const double> z, std::int64_t K,
                                   const Params& params) {
    const std::size_t n = z.size();
    const double num = params.mutation_numerator();
    const double alpha = params.alpha;
    const std::vector<double> p = mainland_freqs_padded(z, K);

    double zr_total = 0.0;  // sum_j z_j r_j(z); implicit zeros contribute 0
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = regime_r(z[i], K, params);
        zr_total += z[i] * r[i];
    }
    std::vector<double> b(n);
    const double mut_in = num / static_cast<double>(K - 1);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = 0.5 * (mut_in * (1.0 - z[i]) - num * z[i] +
                      alpha * (p[i] * zr_total - z[i] * r[i]));
    }
    return b;
}

std::vector<double> drift_b(const SimplexState& z, const Params& params) {
    return drift_b_padded(z.span(), z.K(), params);
}

RemarkCheck satisfies_remark_conditions(const RFamily& r, const PFamily& p,
                                        int K, double epsilon,
                                        std::span<const RankedState> states) {
    if (K < 2) throw DomainError("satisfies_remark_conditions requires K >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("satisfies_remark_conditions requires epsilon in (0,1)");
    }
    RemarkCheck out;

    // Pointwise conditions on r alone, checked on a u-grid.
    out.pointwise_nonneg = true;
    constexpr int kGrid = 4096;
    for (int g = 0; g <= kGrid; ++g) {
        const double u = static_cast<double>(g) / kGrid;
        const double slack = 1.0 - u - u * r(u, K);
        if (slack < -1e-12) out.pointwise_nonneg = false;
        out.apriori_sup = std::max(out.apriori_sup, slack * u);
    }

    for (const RankedState& state : states) {
        std::span<const double> z = state.span();
        const std::vector<double> pi = p(z, K);
        double zr = 0.0;
        double rate_a = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double ri = r(z[i], K);
            zr += z[i] * ri;
            rate_a += (1.0 - z[i] - z[i] * ri) * std::pow(z[i], 1.0 + epsilon);
        }
        double pz = 0.0;
        double pz_eps = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            pz += pi[i] * z[i];
            pz_eps += pi[i] * std::pow(z[i], 1.0 + epsilon);
        }
        out.relcomp_sup = std::max(out.relcomp_sup, zr * pz);
        out.apriori_top_sup = std::max(out.apriori_top_sup, zr * pi[0] * z[0]);
        out.rate_sup = std::max(out.rate_sup, rate_a);
        out.rate_mainland_sup = std::max(out.rate_mainland_sup, zr * pz_eps);
    }
    return out;
}

}  // namespace wfpd
