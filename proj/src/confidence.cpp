#include "subpop/confidence.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subpop {

ConfidenceSpec::ConfidenceSpec(double sigma_sq_p) : sigma_sq_p_(sigma_sq_p) {
    if (!(sigma_sq_p > 0.0) || !std::isfinite(sigma_sq_p)) {
        throw std::domain_error("proxy variance must be positive and finite, got " +
                                std::to_string(sigma_sq_p));
    }
}

double zeta(std::uint64_t t, double delta) {
    if (t < 1) {
        throw std::domain_error("zeta: sample count must be >= 1");
    }
    if (!(delta > 0.0 && delta <= 0.1)) {
        throw std::domain_error("zeta: delta must lie in (0, 0.1], got " +
                                std::to_string(delta));
    }
    const double log_inv = std::log(1.0 / delta);
    const double et_half = std::numbers::e * static_cast<double>(t) / 2.0;
    return log_inv + 3.0 * std::log(log_inv) + 1.5 * std::log(std::log(et_half));
}

double phi(const ConfidenceSpec& spec, std::uint64_t t, double delta) {
    return std::sqrt(2.0 * spec.sigma_sq_p() * zeta(t, delta) /
                     static_cast<double>(t));
}

double KaufmannRadius::operator()(double sigma_sq_p, std::uint64_t t,
                                  double delta) const {
    return phi(ConfidenceSpec(sigma_sq_p), t, delta);
}

const ConfidenceRadius& default_radius() {
    static const KaufmannRadius radius;
    return radius;
}

}  // namespace subpop
