#pragma once

#include <functional>
#include <optional>
#include <string>

namespace greentrans {

// Intrinsic preference for the green good as a function of the household
// index i in [0,1]. Strictly decreasing and positive: households are ordered
// from greenest to least green.
class PreferenceCurve {
public:
    // gamma(i) = gamma_max - (gamma_max - gamma_min) * i
    static PreferenceCurve affine(double gamma_max, double gamma_min);

    // Any strictly decreasing positive curve. A sampled invariant suite runs
    // at registration; throws std::invalid_argument on violation.
    static PreferenceCurve custom(std::function<double(double)> fn,
                                  std::string family = "custom");

    // Preference weight of household i. Throws std::domain_error outside [0,1].
    double operator()(double i) const;

    // The unique index with gamma(i) == value. Throws std::out_of_range when
    // value lies outside [gamma(1), gamma(0)]; callers clamp, not this.
    double inverse(double value) const;

    double at_zero() const noexcept { return gamma0_; }
    double at_one() const noexcept { return gamma1_; }

    double mean() const;              // integral of gamma over [0,1]
    double integral(double j) const;  // integral of gamma over [0,j]

    const std::string& family() const noexcept { return family_; }
    bool is_affine() const noexcept { return affine_; }
    double gamma_max() const noexcept { return gamma0_; }
    double gamma_min() const noexcept { return gamma1_; }

private:
    PreferenceCurve() = default;

    bool affine_ = true;
    std::function<double(double)> fn_;
    double gamma0_ = 0.0;
    double gamma1_ = 0.0;
    std::string family_ = "affine";
};

// Social norm multiplier as a function of last period's green/brown
// consumption ratio. Increasing, with a finite limit at infinity; the ratio
// argument accepts +inf as an explicit sentinel for "all green".
class SocialNormCurve {
public:
    // lambda(r) = lambda_0 + (lambda_inf - lambda_0) * r / (1 + r)
    static SocialNormCurve saturating(double lambda_0, double lambda_inf);

    // Increasing curve with the stated limit at +inf. Validated on a sampled
    // grid at registration.
    static SocialNormCurve custom(std::function<double(double)> fn,
                                  double limit_at_inf,
                                  std::string family = "custom");

    // Norm multiplier at ratio r >= 0 or r == +inf. Negative r is a
    // std::domain_error. lambda(+inf) returns the limit exactly.
    double operator()(double ratio) const;

    double at_zero() const noexcept { return lambda0_; }
    double at_inf() const noexcept { return lambda_inf_; }

    const std::string& family() const noexcept { return family_; }

private:
    SocialNormCurve() = default;

    bool saturating_ = true;
    std::function<double(double)> fn_;
    double lambda0_ = 0.0;
    double lambda_inf_ = 0.0;
    std::string family_ = "saturating";
};

struct ElasticityReport {
    bool ok = false;        // eps_H < |eps_B| along H = tau*B on the range
    bool vacuous = false;   // both elasticities vanish everywhere checked
    double worst_margin = 0.0;             // min of |eps_B| - eps_H
    std::optional<double> violating_B;     // first grid point that fails
};

// Labour-productivity multiplier mu(B, H), normalised so mu(0,0) = 1,
// decreasing in brown output B and increasing in healthcare provision H.
class DamageCurve {
public:
    // mu(B,H) = exp(-delta_B * B + delta_H * H)
    static DamageCurve exponential(double delta_B, double delta_H);

    // Validated at registration: mu(0,0)=1 within 1e-12, antitone in B,
    // monotone in H, positive on a sampled grid.
    static DamageCurve custom(std::function<double(double, double)> fn,
                              std::string family = "custom");

    // Multiplier at (B, H). Negative inputs are a std::domain_error.
    double operator()(double B, double H) const;

    // Checks eps_H < |eps_B| along the balanced-budget path H = tau*B for B
    // in [b_lo, b_hi]. Closed-form elasticities for the exponential family,
    // central differences (step 1e-6 * scale) otherwise. Grid points where
    // both elasticities vanish are recorded as vacuous rather than failing.
    ElasticityReport elasticity_check(double tau, double b_lo, double b_hi,
                                      int grid = 1001) const;

    const std::string& family() const noexcept { return family_; }
    bool is_exponential() const noexcept { return exponential_; }
    double delta_B() const noexcept { return delta_B_; }
    double delta_H() const noexcept { return delta_H_; }

private:
    DamageCurve() = default;

    bool exponential_ = true;
    std::function<double(double, double)> fn_;
    double delta_B_ = 0.0;
    double delta_H_ = 0.0;
    std::string family_ = "exponential";
};

// The (preference, norm, damage) triple that fixes household behaviour and
// the productivity feedback. Immutable after construction; all evaluations
// are pure.
struct FunctionalForms {
    PreferenceCurve preference;
    SocialNormCurve norm;
    DamageCurve damage;
};

}  // namespace greentrans
