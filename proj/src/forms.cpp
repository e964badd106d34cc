#include "greentrans/forms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace greentrans {
namespace {

constexpr double kInverseTol = 1e-10;    // bisection tolerance for curve inversion
constexpr double kQuadratureTol = 1e-10; // adaptive quadrature tolerance
constexpr int kValidationGrid = 513;     // sample count for registration checks

// Adaptive Simpson quadrature; enough for the smooth curves used here.
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb),
                            tol, 48);
}

}  // namespace

// ---------------------------------------------------------------------------
// PreferenceCurve

PreferenceCurve PreferenceCurve::affine(double gamma_max, double gamma_min) {
    if (!std::isfinite(gamma_max) || !std::isfinite(gamma_min) ||
        gamma_min <= 0.0 || gamma_max <= gamma_min) {
        throw std::invalid_argument(
            "preference curve requires gamma_max > gamma_min > 0 "
            "(strictly decreasing, positive)");
    }
    PreferenceCurve c;
    c.affine_ = true;
    c.gamma0_ = gamma_max;
    c.gamma1_ = gamma_min;
    c.family_ = "affine";
    return c;
}

PreferenceCurve PreferenceCurve::custom(std::function<double(double)> fn,
                                        std::string family) {
    if (!fn) throw std::invalid_argument("preference curve: empty function");
    PreferenceCurve c;
    c.affine_ = false;
    c.fn_ = std::move(fn);
    c.family_ = std::move(family);
    c.gamma0_ = c.fn_(0.0);
    c.gamma1_ = c.fn_(1.0);
    // Registration invariants: positive and strictly decreasing on a grid.
    double prev = c.gamma0_;
    if (!(prev > 0.0) || !std::isfinite(prev)) {
        throw std::invalid_argument("preference curve must be positive on [0,1]");
    }
    for (int k = 1; k < kValidationGrid; ++k) {
        const double i = static_cast<double>(k) / (kValidationGrid - 1);
        const double v = c.fn_(i);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(
                "preference curve must be positive on [0,1]");
        }
        if (!(v < prev)) {
            throw std::invalid_argument(
                "preference curve must be strictly decreasing on [0,1]");
        }
        prev = v;
    }
    return c;
}

double PreferenceCurve::operator()(double i) const {
    if (!(i >= 0.0 && i <= 1.0)) {
        throw std::domain_error("preference curve: household index outside [0,1]");
    }
    if (affine_) return gamma0_ - (gamma0_ - gamma1_) * i;
    return fn_(i);
}

double PreferenceCurve::inverse(double value) const {
    if (!(value >= gamma1_ && value <= gamma0_)) {
        throw std::out_of_range(
            "preference curve inverse: value outside [gamma(1), gamma(0)]");
    }
    if (affine_) return (gamma0_ - value) / (gamma0_ - gamma1_);
    // Bracketed bisection on the strictly decreasing curve.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > kInverseTol) {
        const double mid = 0.5 * (lo + hi);
        if (fn_(mid) >= value) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double PreferenceCurve::mean() const {
    if (affine_) return 0.5 * (gamma0_ + gamma1_);
    return integrate(fn_, 0.0, 1.0, kQuadratureTol);
}

double PreferenceCurve::integral(double j) const {
    if (!(j >= 0.0 && j <= 1.0)) {
        throw std::domain_error("preference curve integral: share outside [0,1]");
    }
    if (affine_) return gamma0_ * j - 0.5 * (gamma0_ - gamma1_) * j * j;
    return integrate(fn_, 0.0, j, kQuadratureTol);
}

// ---------------------------------------------------------------------------
// SocialNormCurve

SocialNormCurve SocialNormCurve::saturating(double lambda_0, double lambda_inf) {
    if (!std::isfinite(lambda_0) || !std::isfinite(lambda_inf) ||
        lambda_0 <= 0.0 || lambda_inf <= lambda_0) {
        throw std::invalid_argument(
            "social norm curve requires lambda_inf > lambda_0 > 0");
    }
    SocialNormCurve c;
    c.saturating_ = true;
    c.lambda0_ = lambda_0;
    c.lambda_inf_ = lambda_inf;
    c.family_ = "saturating";
    return c;
}

SocialNormCurve SocialNormCurve::custom(std::function<double(double)> fn,
                                        double limit_at_inf, std::string family) {
    if (!fn) throw std::invalid_argument("social norm curve: empty function");
    if (!std::isfinite(limit_at_inf)) {
        throw std::invalid_argument("social norm curve: limit at +inf must be finite");
    }
    SocialNormCurve c;
    c.saturating_ = false;
    c.fn_ = std::move(fn);
    c.lambda0_ = c.fn_(0.0);
    c.lambda_inf_ = limit_at_inf;
    c.family_ = std::move(family);
    if (!(c.lambda0_ > 0.0) || !(c.lambda_inf_ > c.lambda0_)) {
        throw std::invalid_argument(
            "social norm curve requires lambda(inf) > lambda(0) > 0");
    }
    // Nondecreasing on a geometric grid, bounded by the stated limit.
    double prev = c.lambda0_;
    for (double r = 1e-6; r <= 1e12; r *= 4.0) {
        const double v = c.fn_(r);
        if (!std::isfinite(v) || v < prev - 1e-12) {
            throw std::invalid_argument(
                "social norm curve must be nondecreasing in the ratio");
        }
        if (v > c.lambda_inf_ + 1e-9) {
            throw std::invalid_argument(
                "social norm curve exceeds its stated limit at +inf");
        }
        prev = v;
    }
    return c;
}

double SocialNormCurve::operator()(double ratio) const {
    if (std::isnan(ratio) || ratio < 0.0) {
        throw std::domain_error("social norm curve: ratio must be >= 0 or +inf");
    }
    if (std::isinf(ratio)) return lambda_inf_;
    if (saturating_) {
        return lambda0_ + (lambda_inf_ - lambda0_) * ratio / (1.0 + ratio);
    }
    return fn_(ratio);
}

// ---------------------------------------------------------------------------
// DamageCurve

DamageCurve DamageCurve::exponential(double delta_B, double delta_H) {
    if (!std::isfinite(delta_B) || !std::isfinite(delta_H) || delta_B < 0.0 ||
        delta_H < 0.0) {
        throw std::invalid_argument(
            "damage curve requires delta_B >= 0 and delta_H >= 0");
    }
    DamageCurve c;
    c.exponential_ = true;
    c.delta_B_ = delta_B;
    c.delta_H_ = delta_H;
    c.family_ = "exponential";
    return c;
}

DamageCurve DamageCurve::custom(std::function<double(double, double)> fn,
                                std::string family) {
    if (!fn) throw std::invalid_argument("damage curve: empty function");
    DamageCurve c;
    c.exponential_ = false;
    c.fn_ = std::move(fn);
    c.family_ = std::move(family);
    if (std::abs(c.fn_(0.0, 0.0) - 1.0) > 1e-12) {
        throw std::invalid_argument("damage curve must satisfy mu(0,0) = 1");
    }
    // Monotonicity and positivity on a coarse grid.
    for (double H = 0.0; H <= 4.0; H += 0.5) {
        double prev = c.fn_(0.0, H);
        for (double B = 0.25; B <= 4.0; B += 0.25) {
            const double v = c.fn_(B, H);
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("damage curve must stay positive");
            }
            if (v > prev + 1e-12) {
                throw std::invalid_argument(
                    "damage curve must be nonincreasing in brown output");
            }
            prev = v;
        }
    }
    for (double B = 0.0; B <= 4.0; B += 0.5) {
        double prev = c.fn_(B, 0.0);
        for (double H = 0.25; H <= 4.0; H += 0.25) {
            const double v = c.fn_(B, H);
            if (v < prev - 1e-12) {
                throw std::invalid_argument(
                    "damage curve must be nondecreasing in healthcare");
            }
            prev = v;
        }
    }
    return c;
}

double DamageCurve::operator()(double B, double H) const {
    if (!(B >= 0.0) || !(H >= 0.0)) {
        throw std::domain_error("damage curve: B and H must be nonnegative");
    }
    if (exponential_) return std::exp(-delta_B_ * B + delta_H_ * H);
    return fn_(B, H);
}

ElasticityReport DamageCurve::elasticity_check(double tau, double b_lo,
                                               double b_hi, int grid) const {
    if (!(tau >= 0.0)) throw std::domain_error("elasticity check: tau must be >= 0");
    if (!(b_lo >= 0.0) || !(b_hi >= b_lo)) {
        throw std::domain_error("elasticity check: invalid B range");
    }
    if (grid < 2) throw std::domain_error("elasticity check: grid too small");

    constexpr double kVanish = 1e-14;
    ElasticityReport rep;
    rep.ok = true;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    bool any_active = false;

    for (int k = 0; k < grid; ++k) {
        const double B = b_lo + (b_hi - b_lo) * static_cast<double>(k) / (grid - 1);
        const double H = tau * B;
        double eps_B, eps_H;
        if (exponential_) {
            eps_B = -delta_B_ * B;  // B/mu * dmu/dB
            eps_H = delta_H_ * H;   // H/mu * dmu/dH
        } else {
            const double mu = fn_(B, H);
            const double hB = 1e-6 * std::max(1.0, std::abs(B));
            const double hH = 1e-6 * std::max(1.0, std::abs(H));
            const double bl = std::max(0.0, B - hB);
            const double hl = std::max(0.0, H - hH);
            const double dmu_dB = (fn_(B + hB, H) - fn_(bl, H)) / (B + hB - bl);
            const double dmu_dH = (fn_(B, H + hH) - fn_(B, hl)) / (H + hH - hl);
            eps_B = B / mu * dmu_dB;
            eps_H = H / mu * dmu_dH;
        }
        if (std::abs(eps_B) <= kVanish && std::abs(eps_H) <= kVanish) {
            continue;  // vacuous point: no damage response at all
        }
        any_active = true;
        const double margin = std::abs(eps_B) - eps_H;
        if (margin < rep.worst_margin) rep.worst_margin = margin;
        if (margin <= 0.0 && !rep.violating_B) {
            rep.ok = false;
            rep.violating_B = B;
        }
    }
    if (!any_active) {
        rep.ok = true;
        rep.vacuous = true;
        rep.worst_margin = 0.0;
    }
    return rep;
}

}  // namespace greentrans
