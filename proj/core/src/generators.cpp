#include "wfpd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wfpd/analysis.hpp"
#include "wfpd/kernel.hpp"

namespace wfpd {

namespace {

// sum_i z_i^p for real p >= 1; zero coordinates contribute 0.
double power_sum(std::span<const double> z, double p) {
    double sum = 0.0;
    for (double x : z) {
        if (x > 0.0) sum += std::pow(x, p);
    }
    return sum;
}

double binom2(double m) { return 0.5 * m * (m - 1.0); }

constexpr double kMassTol = 1e-9;
const double kTwoESq = 2.0 * std::exp(2.0);

void require_ranked_mass_one(const RankedState& z, int K) {
    if (z.K() > K) {
        throw DomainError("BK_phi: state has more than K coordinates");
    }
    if (std::abs(z.sum() - 1.0) > kMassTol) {
        throw DomainError("BK_phi: mass " + std::to_string(z.sum()) +
                          " differs from 1");
    }
}

}  // namespace

double phi(std::span<const double> z, double m) {
    if (m < 2.0) {
        throw DomainError("phi requires m >= 2 (phi_1 is the constant mass)");
    }
    return power_sum(z, m);
}

double phi(const SimplexState& z, double m) { return phi(z.span(), m); }
double phi(const RankedState& z, double m) { return phi(z.span(), m); }

double phi_one(std::span<const double> z) {
    return std::accumulate(z.begin(), z.end(), 0.0);
}

PhiProduct::PhiProduct(std::vector<double> ms) : exponents(std::move(ms)) {
    for (double m : exponents) {
        if (m < 2.0) {
            throw DomainError("PhiProduct exponents must be >= 2, got " +
                              std::to_string(m));
        }
    }
}

double PhiProduct::value(std::span<const double> z) const {
    double prod = 1.0;
    for (double m : exponents) prod *= power_sum(z, m);
    return prod;
}

double carre_phi(std::span<const double> z, double m, double n) {
    return m * n * (power_sum(z, m + n - 1.0) - power_sum(z, m) * power_sum(z, n));
}

double B_phi(std::span<const double> z, double m, const Params& params) {
    if (m < 2.0) throw DomainError("B_phi requires m >= 2");
    if (m == 2.0) {
        return 1.0 - params.alpha - (1.0 + params.theta) * power_sum(z, 2.0);
    }
    const double pm1 = power_sum(z, m - 1.0);
    const double pm = power_sum(z, m);
    return binom2(m) * (pm1 - pm) -
           0.5 * m * (params.theta * pm + params.alpha * pm1);
}

namespace {

// <grad phi_m, a grad(prod over ms)> via bilinearity of the carre du champ.
double carre_with_product(std::span<const double> z, double m,
                          std::span<const double> ms) {
    if (ms.size() == 1) return carre_phi(z, m, ms[0]);
    const auto rest = ms.subspan(1);
    double rest_prod = 1.0;
    for (double k : rest) rest_prod *= power_sum(z, k);
    return rest_prod * carre_phi(z, m, ms[0]) +
           power_sum(z, ms[0]) * carre_with_product(z, m, rest);
}

template <typename SingleFactor>
double product_rule(std::span<const double> z, std::span<const double> ms,
                    const SingleFactor& Bm) {
    if (ms.empty()) return 0.0;  // generator kills constants
    if (ms.size() == 1) return Bm(ms[0]);
    const auto rest = ms.subspan(1);
    double rest_prod = 1.0;
    for (double k : rest) rest_prod *= power_sum(z, k);
    return rest_prod * Bm(ms[0]) +
           power_sum(z, ms[0]) * product_rule(z, rest, Bm) +
           carre_with_product(z, ms[0], rest);
}

}  // namespace

double B_phi_product(std::span<const double> z, const PhiProduct& product,
                     const Params& params) {
    return product_rule(z, product.exponents,
                        [&](double m) { return B_phi(z, m, params); });
}

BkContext::BkContext(const RankedState& z, const Params& params, int K)
    : K_(K), params_(params) {
    if (K < 2) throw DomainError("BK_phi requires K >= 2");
    require_ranked_mass_one(z, K);
    denom_ = static_cast<double>(K) - static_cast<double>(z.K());
    for (double x : z.freqs()) {
        if (x <= 0.0) {
            denom_ += 1.0;
            continue;
        }
        z_.push_back(x);
        log_z_.push_back(std::log(x));
        const double p = pow1m(x, K);
        pow1m_.push_back(p);
        denom_ += p;
        zr_ += x * regime_r(x, K, params);
    }
    S_ = zr_ / denom_;
}

double BkContext::power_sum(double p) const {
    if (p == 2.0) {
        double s = 0.0;
        for (double x : z_) s += x * x;
        return s;
    }
    double s = 0.0;
    for (double lz : log_z_) s += std::exp(p * lz);
    return s;
}

double BkContext::tail_sum(double m) const {
    double tail = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
        const double w = pow1m_[i] * std::exp((m - 1.0) * log_z_[i]);
        tail += params_.regime == Regime::General ? w * (1.0 - z_[i] + S_)
                                                  : w * (1.0 + S_);
    }
    return tail;
}

double BK_phi(const BkContext& ctx, double m) {
    if (m < 2.0) throw DomainError("BK_phi requires m >= 2");
    const Params& params = ctx.params_;
    const double pm1 = ctx.power_sum(m - 1.0);
    const double pm = ctx.power_sum(m);
    const double num = params.mutation_numerator();
    return binom2(m) * (pm1 - pm) +
           0.5 * m * num / (ctx.K_ - 1.0) * (pm1 - pm) -
           0.5 * m * (params.theta * pm + params.alpha * pm1) +
           0.5 * m * params.alpha * ctx.tail_sum(m);
}

double BK_phi(const RankedState& z, double m, const Params& params, int K) {
    if (m < 2.0) throw DomainError("BK_phi requires m >= 2");
    return BK_phi(BkContext(z, params, K), m);
}

double BK_phi_product(const RankedState& z, const PhiProduct& product,
                      const Params& params, int K) {
    require_ranked_mass_one(z, K);
    return product_rule(z.span(), product.exponents,
                        [&](double m) { return BK_phi(z, m, params, K); });
}

double fact2_ratio(const RankedState& z, const Params& params, int K) {
    return BkContext(z, params, K).S();
}

double rate_lemma_bound(double m, int K, const Params& params) {
    const double fact1 =
        K * std::pow((m - 1.0) / (K + m - 1.0), m - 1.0);
    return 0.5 * m * (params.theta + params.alpha) / (K - 1.0) +
           0.5 * m * params.alpha * (1.0 + kTwoESq) * fact1;
}

double uniform_generator_bound(double m, const Params& params) {
    double fact1_sup = m > 2.0 ? 0.0 : 1.0;  // K -> infinity limit
    for (int K = 2; K <= 4096; ++K) {
        fact1_sup = std::max(
            fact1_sup, K * std::pow((m - 1.0) / (K + m - 1.0), m - 1.0));
    }
    const double ta = params.theta + params.alpha;
    return binom2(m) + 0.5 * m * ta + 0.5 * m * ta +
           0.5 * m * params.alpha * (1.0 + kTwoESq) * fact1_sup;
}

namespace {

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> z, double h) {
    std::vector<double> x(z.begin(), z.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double zi = x[i];
        x[i] = zi + h;
        const double fp = f(x);
        x[i] = zi - h;
        const double fm = f(x);
        x[i] = zi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::vector<double> fd_hessian(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> z, double h) {
    const std::size_t K = z.size();
    std::vector<double> x(z.begin(), z.end());
    std::vector<double> H(K * K);
    const double f0 = f(x);
    for (std::size_t i = 0; i < K; ++i) {
        const double zi = x[i];
        x[i] = zi + h;
        const double fp = f(x);
        x[i] = zi - h;
        const double fm = f(x);
        x[i] = zi;
        H[i * K + i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i + 1; j < K; ++j) {
            const double zi = x[i];
            const double zj = x[j];
            x[i] = zi + h; x[j] = zj + h;
            const double fpp = f(x);
            x[j] = zj - h;
            const double fpm = f(x);
            x[i] = zi - h; x[j] = zj + h;
            const double fmp = f(x);
            x[j] = zj - h;
            const double fmm = f(x);
            x[i] = zi; x[j] = zj;
            const double mixed = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            H[i * K + j] = mixed;
            H[j * K + i] = mixed;
        }
    }
    return H;
}

}  // namespace

double apply_A_K(const C2Function& f, const SimplexState& z, const Params& params) {
    std::span<const double> zs = z.span();
    const std::size_t K = zs.size();
    const std::vector<double> g =
        f.gradient ? f.gradient(zs) : fd_gradient(f.value, zs, f.fd_step);
    const std::vector<double> H =
        f.hessian ? f.hessian(zs) : fd_hessian(f.value, zs, f.fd_step);
    const std::vector<double> b = drift_b(z, params);

    double second = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            const double a_ij = zs[i] * ((i == j ? 1.0 : 0.0) - zs[j]);
            second += a_ij * H[i * K + j];
        }
    }
    double first = 0.0;
    for (std::size_t i = 0; i < K; ++i) first += b[i] * g[i];
    return 0.5 * second + first;
}

C2Function phi_after_rho(double m, double fd_step) {
    C2Function f;
    f.value = [m](std::span<const double> z) { return power_sum(z, m); };
    f.fd_step = fd_step;
    return f;
}

double gap_at(const RankedState& z, double m, const Params& params, int K) {
    return std::abs(BK_phi(z, m, params, K) - B_phi(z.span(), m, params));
}

RankedStateSampler::RankedStateSampler(Params params, int K, RandomStream rng)
    : params_(params), K_(K), rng_(rng) {}

RankedState RankedStateSampler::next() {
    std::vector<double> w(static_cast<std::size_t>(K_));
    const double pick = rng_.uniform01();
    if (pick < 0.4) {
        // Ranked GEM(theta, alpha) sticks truncated to K, renormalized.
        double rest = 1.0;
        for (int i = 0; i < K_; ++i) {
            const double v = rng_.beta(1.0 - params_.alpha,
                                       params_.theta + (i + 1) * params_.alpha);
            w[static_cast<std::size_t>(i)] = v * rest;
            rest *= 1.0 - v;
        }
    } else if (pick < 0.8) {
        // Uniform Dirichlet on the simplex via normalized exponentials.
        for (double& x : w) {
            double u = rng_.uniform01();
            while (u == 0.0) u = rng_.uniform01();
            x = -std::log(u);
        }
    } else if (pick < 0.9) {
        // Uniform over a random number of coordinates.
        const int j = 1 + static_cast<int>(rng_.uniform_below(
                              static_cast<std::uint64_t>(K_)));
        std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < j; ++i) w[static_cast<std::size_t>(i)] = 1.0;
    } else {
        // Geometric decay profile.
        const double rho = 0.05 + 0.93 * rng_.uniform01();
        double t = 1.0;
        for (double& x : w) {
            x = t;
            t *= rho;
        }
    }
    std::vector<double> ranked = sort_descending(std::move(w));
    const double sum = std::accumulate(ranked.begin(), ranked.end(), 0.0);
    for (double& x : ranked) x /= sum;
    return RankedState(std::move(ranked));
}

std::vector<RankedState> RankedStateSampler::fixed_profiles(int K) {
    std::vector<RankedState> out;
    for (int j = 1; j <= K; j = j < K ? std::min(2 * j, K) : K + 1) {
        out.push_back(RankedState::uniform_over(j, K));
    }
    for (double rho : {0.2, 0.5, 0.8, 0.95}) {
        std::vector<double> w(static_cast<std::size_t>(K));
        double t = 1.0;
        for (double& x : w) {
            x = t;
            t *= rho;
        }
        const double sum = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& x : w) x /= sum;
        out.emplace_back(std::move(w));
    }
    return out;
}

double sup_gap(double m, int K, const Params& params,
               RankedStateSampler& sampler, long n) {
    if (n < 1) throw DomainError("sup_gap requires n >= 1");
    double sup = 0.0;
    for (const RankedState& z : RankedStateSampler::fixed_profiles(K)) {
        sup = std::max(sup, gap_at(z, m, params, K));
    }
    for (long i = 0; i < n; ++i) {
        sup = std::max(sup, gap_at(sampler.next(), m, params, K));
    }
    return sup;
}

GapReport fit_gap_rate(double m, std::span<const int> K_values,
                       const Params& params, long n, std::uint64_t seed) {
    std::vector<int> ks(K_values.begin(), K_values.end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.size() < 4) {
        throw InsufficientData("fit_gap_rate requires >= 4 distinct K values");
    }
    if (m < 2.0) throw DomainError("fit_gap_rate requires m >= 2");

    GapReport report;
    report.m = m;
    report.K_values = ks;
    report.sample_size = n;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        RandomStream rng(seed, static_cast<std::uint64_t>(ks[i]));
        RankedStateSampler sampler(params, ks[i], rng);
        const double gap = sup_gap(m, ks[i], params, sampler, n);
        report.sup_gaps.push_back(gap);
        xs.push_back(static_cast<double>(ks[i]));
        ys.push_back(gap);
    }
    report.fit_slope = loglog_fit(xs, ys).slope;
    return report;
}

AprioriResult apriori_inequality_check(const BkContext& ctx, double m,
                                       const Params& params) {
    if (!(m > 2.0 && m < 3.0)) {
        throw DomainError("apriori_inequality_check requires 2 < m < 3");
    }
    AprioriResult res;
    res.lhs = BK_phi(ctx, 2.0) - BK_phi(ctx, m);
    const double p2 = ctx.power_sum(2.0);
    const double pm = ctx.power_sum(m);
    const double pm1 = ctx.power_sum(m - 1.0);
    const double ta = params.theta + params.alpha;
    res.rhs = 1.0 - params.alpha - 0.5 * m * (m - 1.0 - params.alpha) * pm1 -
              ((1.0 + params.theta) * p2 - 0.5 * m * (m - 1.0 + params.theta) * pm) -
              (1.5 * ta / (ctx.K() - 1.0) +
               0.5 * params.alpha * (1.0 + kTwoESq) / (ctx.K() + 1.0));
    res.holds = res.lhs >= res.rhs - 1e-10;
    return res;
}

AprioriResult apriori_inequality_check(const RankedState& z, double m,
                                       const Params& params, int K) {
    return apriori_inequality_check(BkContext(z, params, K), m, params);
}

double mass_deficit_statistic(std::span<const RankedState> path, double dt) {
    if (path.empty()) return 0.0;
    double integral = 0.0;
    double prev = 1.0 - path[0].sum();
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double cur = 1.0 - path[i].sum();
        integral += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    return integral;
}

}  // namespace wfpd
