#include "greentrans/levels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace greentrans {

namespace {

constexpr int kBisectionSteps = 200;

void check_tau(double tau) {
    if (!std::isfinite(tau) || tau < 0.0) {
        throw std::domain_error("tax rate must be finite and non-negative");
    }
}

// Residual of the all-brown stationarity condition at brown output B.
double brown_residual(double B, double tau, const Economy& eco) {
    return eco.forms.damage(B, tau * B) * eco.a_b / (1.0 + tau) - B;
}

}  // namespace

PeriodEquilibrium period_equilibrium(double j, const EconomyState& state,
                                     double tau, const Economy& eco) {
    if (!std::isfinite(j) || j < 0.0 || j > 1.0) {
        throw std::domain_error("marginal household must lie in [0, 1]");
    }
    check_tau(tau);
    if (state.B_prev < 0.0 || state.H_prev < 0.0) {
        throw std::domain_error("carry-over state must be non-negative");
    }

    PeriodEquilibrium eq;
    eq.j = j;
    eq.mu = eco.forms.damage(state.B_prev, state.H_prev);
    eq.p = eco.price();
    eq.w = eq.mu * eco.a_b;
    eq.l_g = j;
    eq.l_b = (1.0 - j) / (1.0 + tau);
    eq.l_h = tau * (1.0 - j) / (1.0 + tau);
    eq.G = j * eq.mu * eco.a_g;
    eq.B = (1.0 - j) * eq.mu * eco.a_b / (1.0 + tau);
    eq.H = tau * eq.B;
    return eq;
}

std::pair<double, double> household_demand(double i, double j,
                                           const PeriodEquilibrium& eq,
                                           double tau) {
    if (!std::isfinite(i) || i < 0.0 || i > 1.0) {
        throw std::domain_error("household index must lie in [0, 1]");
    }
    check_tau(tau);
    if (i <= j) {
        return {eq.w / eq.p, 0.0};
    }
    return {0.0, eq.w / (1.0 + tau)};
}

SteadyState brown_steady_state(double tau, const Economy& eco) {
    check_tau(tau);
    const double hi = eco.a_b / (1.0 + tau);

    // The stationary brown output is only well defined when provision cannot
    // outrun damage along H = tau * B; refuse to report a root otherwise.
    const ElasticityReport rep = eco.forms.damage.elasticity_check(tau, 0.0, hi);
    if (!rep.ok) {
        std::ostringstream msg;
        msg << "all-brown stationary state undefined: healthcare elasticity "
               "exceeds damage elasticity at B = "
            << (rep.violating_B ? *rep.violating_B : 0.0);
        throw std::domain_error(msg.str());
    }

    double B_star;
    if (brown_residual(hi, tau, eco) >= 0.0) {
        // Damage never bites on the bracket (e.g. mu == 1 throughout):
        // stationary output sits at the undamaged level.
        B_star = hi;
    } else {
        double lo = 0.0;
        double up = hi;
        for (int it = 0; it < kBisectionSteps && up - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + up);
            if (brown_residual(mid, tau, eco) >= 0.0) {
                lo = mid;
            } else {
                up = mid;
            }
        }
        B_star = 0.5 * (lo + up);
    }

    if (std::abs(brown_residual(B_star, tau, eco)) > 1e-10 * eco.a_b) {
        throw std::runtime_error(
            "all-brown stationary state solver failed to converge");
    }

    SteadyState ss;
    ss.kind = SseKind::brown;
    ss.j = 0.0;
    ss.output = B_star;
    ss.mu = eco.forms.damage(B_star, tau * B_star);
    ss.healthcare = tau * B_star;
    ss.consumption_total = B_star;
    ss.welfare = B_star;  // every household consumes brown worth w/(1+tau)
    return ss;
}

SteadyState green_steady_state(const Economy& eco) {
    SteadyState ss;
    ss.kind = SseKind::green;
    ss.j = 1.0;
    ss.output = eco.a_g;
    ss.mu = 1.0;
    ss.healthcare = 0.0;
    ss.consumption_total = eco.a_g;
    ss.welfare = eco.forms.norm.at_inf() * eco.forms.preference.mean() * eco.a_g;
    return ss;
}

double welfare(const SteadyState& ss, const Economy& eco) {
    if (ss.kind == SseKind::brown) {
        return ss.output;
    }
    return eco.forms.norm.at_inf() * eco.forms.preference.mean() * ss.output;
}

SseComparison compare_sse(double tau, const Economy& eco) {
    check_tau(tau);
    const SteadyState brown = brown_steady_state(tau, eco);
    const SteadyState green = green_steady_state(eco);

    SseComparison cmp;
    cmp.tau = tau;
    cmp.G_star = green.output;
    cmp.B_star = brown.output;
    cmp.SW_green = green.welfare;
    cmp.SW_brown = brown.welfare;
    cmp.consumption_green_higher = green.consumption_total > brown.consumption_total;
    cmp.welfare_green_higher = green.welfare > brown.welfare;
    cmp.tech_condition = eco.a_b <= eco.a_g;

    const double eps = dynamics_detail::kProbeEps;
    const bool brown_absorbing =
        psi(0.0, tau, eco) == 0.0 && psi(eps, tau, eco) < eps;
    const bool green_absorbing =
        psi(1.0, tau, eco) == 1.0 && psi(1.0 - eps, tau, eco) > 1.0 - eps;
    cmp.bistable = brown_absorbing && green_absorbing;
    return cmp;
}

double aggregate_utility(const PeriodEquilibrium& eq, double lambda_t,
                         double tau, const Economy& eco) {
    check_tau(tau);
    const double green_part =
        lambda_t * (eq.w / eq.p) * eco.forms.preference.integral(eq.j);
    const double brown_part = (1.0 - eq.j) * eq.w / (1.0 + tau);
    return green_part + brown_part;
}

int brown_sse_crossing_count(double tau, const Economy& eco, int grid) {
    check_tau(tau);
    if (grid < 2) {
        throw std::invalid_argument("crossing count requires at least 2 points");
    }
    const double hi = eco.a_b / (1.0 + tau);
    int crossings = 0;
    int last_sign = 0;
    for (int k = 0; k <= grid; ++k) {
        const double B = hi * static_cast<double>(k) / grid;
        const double r = brown_residual(B, tau, eco);
        const int sign = r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
        if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) {
                ++crossings;
            }
            last_sign = sign;
        }
    }
    return crossings;
}

}  // namespace greentrans
