#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wfpd/params.hpp"
#include "wfpd/random.hpp"
#include "wfpd/simplex.hpp"

namespace wfpd {

// ---------------------------------------------------------------------------
// Test-function algebra: power sums phi_m(z) = sum_i z_i^m and their
// products.  The limit generator B acts on this algebra in closed form;
// the ranked finite-K generator B_K acts on its restriction.
// ---------------------------------------------------------------------------

/// phi_m(z) = sum_i z_i^m over nonzero coordinates, for real m >= 2.
/// Throws DomainError for m < 2 (phi_1 is exposed separately).
double phi(std::span<const double> z, double m);
double phi(const SimplexState& z, double m);
double phi(const RankedState& z, double m);

/// phi_1(z) = sum_i z_i (the mass; identically 1 on simplex states).
double phi_one(std::span<const double> z);

/// A finite product phi_{m_1} ... phi_{m_l}; the empty product is the
/// constant 1.  Exponents must all be >= 2.
struct PhiProduct {
    std::vector<double> exponents;

    PhiProduct() = default;
    explicit PhiProduct(std::vector<double> ms);

    std::size_t size() const { return exponents.size(); }
    bool empty() const { return exponents.empty(); }

    /// Pointwise value of the product at z.
    double value(std::span<const double> z) const;
};

/// Carre du champ of two power sums:
/// <grad phi_m, a grad phi_n> = m n (phi_{m+n-1} - phi_m phi_n).
double carre_phi(std::span<const double> z, double m, double n);

/// Limit generator on a single factor:
///   B phi_m = C(m,2)(phi_{m-1} - phi_m) - (m/2)(theta phi_m + alpha phi_{m-1})
/// for m > 2; for m = 2 the continuous extension
///   B phi_2 = 1 - alpha - (1+theta) phi_2
/// is used (constant first term, not phi_1).
double B_phi(std::span<const double> z, double m, const Params& params);

/// Limit generator on a product, via the recursion
/// B(phi psi) = psi B phi + phi B psi + <grad phi, a grad psi>.
double B_phi_product(std::span<const double> z, const PhiProduct& product,
                     const Params& params);

/// Per-state quantities shared by BK evaluations at several exponents:
/// logs of the nonzero coordinates, (1-z_i)^K, the migration weights
/// r(z_i) and the redistribution factor S(z).  The verification sweeps
/// evaluate three exponents per sampled state and reuse one context.
class BkContext {
public:
    BkContext(const RankedState& z, const Params& params, int K);

    int K() const { return K_; }
    double S() const { return S_; }

    /// sum_i z_i^p over the nonzero coordinates, real p >= 1.
    double power_sum(double p) const;

    /// sum_i (1-z_i)^K z_i^(m-1) weighted by (1-z_i+S) or (1+S)
    /// according to the regime.
    double tail_sum(double m) const;

private:
    friend double BK_phi(const BkContext&, double);
    int K_;
    Params params_;
    std::vector<double> z_;       // nonzero coordinates
    std::vector<double> log_z_;
    std::vector<double> pow1m_;   // (1-z_i)^K
    double denom_ = 0.0;          // sum_l (1-z_l)^K, implicit zeros counted
    double zr_ = 0.0;             // sum_j z_j r_j(z)
    double S_ = 0.0;
};

/// Ranked finite-K generator applied to phi_m, m >= 2, evaluated in
/// closed form on z in nabla_K (ranked, mass 1, at most K nonzero
/// coordinates; K may exceed the stored length, implicit zeros).
/// Throws DomainError if z is not ranked or its mass is not 1 (within
/// 1e-9).
double BK_phi(const RankedState& z, double m, const Params& params, int K);
double BK_phi(const BkContext& ctx, double m);

/// Product-rule extension of BK_phi, same carre du champ as the limit.
double BK_phi_product(const RankedState& z, const PhiProduct& product,
                      const Params& params, int K);

/// S(z) = sum_j z_j r_j(z) / sum_l (1-z_l)^K, the redistribution factor
/// appearing in the closed form of BK_phi.  Bounded by 2e^2 on ranked
/// mass-1 states.
double fact2_ratio(const RankedState& z, const Params& params, int K);

/// Explicit sup-norm bound on |BK_phi - B phi| for a single factor m:
/// (m/2)(theta+alpha)/(K-1) + (m/2) alpha (1+2e^2) K ((m-1)/(K+m-1))^(m-1).
double rate_lemma_bound(double m, int K, const Params& params);

/// Explicit uniform-in-K bound on |BK_phi_m| assembled from the same
/// displays.
double uniform_generator_bound(double m, const Params& params);

// ---------------------------------------------------------------------------
// The K-dimensional generator A_K on twice-differentiable callbacks.
// ---------------------------------------------------------------------------

/// A twice continuously differentiable function on a neighbourhood of
/// the simplex.  gradient/hessian may be left empty, in which case
/// apply_A_K falls back to central finite differences with step fd_step.
struct C2Function {
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> gradient;
    std::function<std::vector<double>(std::span<const double>)> hessian;  // row-major K*K
    double fd_step = 1e-4;
};

/// A_K f(z) = (1/2) sum_ij a_ij(z) d2f/dz_i dz_j + sum_i b_i(z) df/dz_i
/// with a_ij(z) = z_i (delta_ij - z_j) and the drift of the kernel module.
double apply_A_K(const C2Function& f, const SimplexState& z, const Params& params);

/// phi_m composed with the reordering map, as a C2Function (smooth away
/// from ties; equals sum_i z_i^m on nonnegative vectors), with
/// finite-difference derivatives.
C2Function phi_after_rho(double m, double fd_step = 1e-4);

// ---------------------------------------------------------------------------
// Generator-gap estimation.
// ---------------------------------------------------------------------------

/// Pointwise gap |BK_phi(z, m) - B phi(z, m)| at one state.
double gap_at(const RankedState& z, double m, const Params& params, int K);

/// Sampler over nabla_K mixing ranked GEM draws, ranked uniform
/// Dirichlet draws, and low-entropy profiles (uniform blocks and
/// geometric decay).  The high-entropy corner maximises the m = 2 gap,
/// which pure Dirichlet sampling under-covers.
class RankedStateSampler {
public:
    RankedStateSampler(Params params, int K, RandomStream rng);

    RankedState next();

    /// Deterministic adversarial states: uniform over the first j
    /// coordinates for j on a log grid up to K (including j = K), plus
    /// geometric-decay profiles.
    static std::vector<RankedState> fixed_profiles(int K);

private:
    Params params_;
    int K_;
    RandomStream rng_;
};

/// Max of gap_at over the fixed profiles and n sampler draws; a lower
/// bound for the sup-norm gap.
double sup_gap(double m, int K, const Params& params,
               RankedStateSampler& sampler, long n);

struct GapReport {
    double m = 0.0;
    std::vector<int> K_values;
    std::vector<double> sup_gaps;
    double fit_slope = 0.0;
    long sample_size = 0;
};

/// Estimates sup gaps over >= 4 values of K and fits the log-log decay
/// slope.  Requires m >= 2.  Sampler streams are derived from (seed, K).
GapReport fit_gap_rate(double m, std::span<const int> K_values,
                       const Params& params, long n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// A-priori inequality and mass audit.
// ---------------------------------------------------------------------------

struct AprioriResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;  // lhs >= rhs - 1e-10
};

/// For 2 < m < 3: lhs = BK_phi(z,2) - BK_phi(z,m) against the explicit
/// lower bound
///   1 - alpha - m(m-1-alpha)/2 phi_{m-1}
///   - [(1+theta) phi_2 - m(m-1+theta)/2 phi_m]
///   - [3(theta+alpha)/(2(K-1)) + alpha(1+2e^2)/(2(K+1))].
AprioriResult apriori_inequality_check(const RankedState& z, double m,
                                       const Params& params, int K);
AprioriResult apriori_inequality_check(const BkContext& ctx, double m,
                                       const Params& params);

/// Trapezoidal time integral of the mass deficit 1 - sum_i z_i(t) along
/// a ranked path sampled at spacing dt.  Zero for full-K paths; positive
/// for exports truncated to the top coordinates.
double mass_deficit_statistic(std::span<const RankedState> path, double dt);

}  // namespace wfpd
