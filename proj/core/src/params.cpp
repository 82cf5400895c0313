#include "wfpd/params.hpp"

#include <cmath>
#include <string>

namespace wfpd {

Params validate_params(double theta, double alpha, Regime regime) {
    if (!std::isfinite(theta) || !std::isfinite(alpha)) {
        throw InvalidParams("theta and alpha must be finite");
    }
    if (alpha < 0.0 || alpha >= 1.0) {
        throw InvalidParams("alpha must satisfy 0 <= alpha < 1, got " +
                            std::to_string(alpha));
    }
    switch (regime) {
        case Regime::General:
            if (theta <= -alpha) {
                throw InvalidParams(
                    "regime General requires theta > -alpha, got theta = " +
                    std::to_string(theta) + ", alpha = " + std::to_string(alpha));
            }
            break;
        case Regime::ThetaNonneg:
            if (theta < 0.0) {
                throw InvalidParams(
                    "regime ThetaNonneg requires theta >= 0, got theta = " +
                    std::to_string(theta));
            }
            break;
    }
    return Params{theta, alpha, regime};
}

const char* regime_name(Regime regime) {
    return regime == Regime::General ? "general" : "theta-nonneg";
}

Regime regime_from_name(std::string_view name) {
    if (name == "general") return Regime::General;
    if (name == "theta-nonneg") return Regime::ThetaNonneg;
    throw InvalidParams("unknown regime name: " + std::string(name));
}

}  // namespace wfpd
