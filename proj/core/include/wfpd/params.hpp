#pragma once

#include <string_view>

#include "wfpd/errors.hpp"

namespace wfpd {

/// Which construction drives mutation and migration.
///
/// General:     mutation rate proportional to theta + alpha, migration
///              weight r(u) = (1-u)[1-(1-u)^K]/u.  Valid for theta > -alpha.
/// ThetaNonneg: mutation rate proportional to theta alone, migration
///              weight r(u) = [1-(1-u)^K]/u.  Valid for theta >= 0, and
///              separates the roles of the two parameters.
enum class Regime { General, ThetaNonneg };

/// Model parameters.  Use validate_params() to construct checked values.
struct Params {
    double theta = 1.0;
    double alpha = 0.0;
    Regime regime = Regime::General;

    /// Numerator of the per-generation mutation rate u = num / (2N(K-1)).
    double mutation_numerator() const {
        return regime == Regime::General ? theta + alpha : theta;
    }
};

/// Checks 0 <= alpha < 1 plus the regime's constraint on theta
/// (theta > -alpha for General, theta >= 0 for ThetaNonneg).
/// Throws InvalidParams naming the violated constraint.
Params validate_params(double theta, double alpha, Regime regime = Regime::General);

const char* regime_name(Regime regime);

/// Parses "general" / "theta-nonneg" (case-sensitive).  Throws InvalidParams.
Regime regime_from_name(std::string_view name);

}  // namespace wfpd
