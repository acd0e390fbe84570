#pragma once

#include <cstdint>

namespace subpop {

/// Subgaussian proxy variance of a single observed effect signal.
///
/// For paired outcomes this is twice the per-arm proxy: the difference of two
/// sigma^2-subgaussian variables is 2 sigma^2-subgaussian.
class ConfidenceSpec {
   public:
    explicit ConfidenceSpec(double sigma_sq_p);

    double sigma_sq_p() const { return sigma_sq_p_; }

   private:
    double sigma_sq_p_;
};

/// log(1/delta) + 3 log log(1/delta) + (3/2) log log(e t / 2).
///
/// Requires t >= 1 and 0 < delta <= 0.1; throws std::domain_error otherwise.
/// The t = 1 term is negative and is kept as is.
double zeta(std::uint64_t t, double delta);

/// Anytime confidence radius sqrt(2 sigma_p^2 zeta(t, delta) / t).
double phi(const ConfidenceSpec& spec, std::uint64_t t, double delta);

/// Pluggable always-valid radius. Every rule in the trial algorithms goes
/// through this interface.
class ConfidenceRadius {
   public:
    virtual ~ConfidenceRadius() = default;
    virtual double operator()(double sigma_sq_p, std::uint64_t t,
                              double delta) const = 0;
};

/// The law-of-iterated-logarithm style bound used by default.
class KaufmannRadius final : public ConfidenceRadius {
   public:
    double operator()(double sigma_sq_p, std::uint64_t t,
                      double delta) const override;
};

const ConfidenceRadius& default_radius();

}  // namespace subpop
