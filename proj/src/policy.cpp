#include "greentrans/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace greentrans {

namespace {

constexpr double kRateTol = 1e-8;        // bisection width for min_constant_tax
constexpr double kTargetRateTol = 1e-10; // bisection width for per-period rates
constexpr double kConvergedShare = 1e-9; // distance to an endpoint that counts as reached

void check_share(double j, const char* what) {
    if (!std::isfinite(j) || j < 0.0 || j > 1.0) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

// Does the constant-tax flow from j0 reach full adoption?
bool reaches_full_adoption(double j0, double tau, const Economy& eco) {
    const Trajectory tr = iterate_constant(
        j0, tau, dynamics_detail::kMaxIterations, eco, /*stop_on_convergence=*/true);
    return tr.final_share() > 1.0 - kConvergedShare;
}

// Smallest rate in [0, cap] with psi(j, rate) >= target, if any. Closed form
// via tau_hat when the preference-intensity ratio does not carry the tax;
// monotone bisection otherwise.
std::optional<double> rate_for_target(double j, double target,
                                      const Economy& eco, double cap) {
    if (psi(j, 0.0, eco) >= target) {
        return 0.0;
    }
    if (eco.convention == RatioConvention::paper) {
        const double lambda = eco.forms.norm(green_ratio(j, eco, 0.0));
        const double rate = tau_hat(target, lambda, eco);
        if (rate > cap) {
            return std::nullopt;
        }
        return rate;
    }
    if (psi(j, cap, eco) < target) {
        return std::nullopt;
    }
    double lo = 0.0;
    double hi = cap;
    while (hi - lo > kTargetRateTol) {
        const double mid = 0.5 * (lo + hi);
        if (psi(j, mid, eco) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// Is the green endpoint locally absorbing under constant tax `tau`?
bool green_absorbing(double tau, const Economy& eco) {
    const double eps = dynamics_detail::kProbeEps;
    return psi(1.0, tau, eco) == 1.0 && psi(1.0 - eps, tau, eco) > 1.0 - eps;
}

// Strictly upward flow at every point of an even grid over [lo, hi]: the
// certificate that the constant-tax dynamics cannot stall below full
// adoption anywhere along the way.
bool escapes_on_grid(double lo, double hi, double tau, const Economy& eco) {
    constexpr int kGridSteps = 2000;
    if (hi <= lo) {
        return psi(lo, tau, eco) > lo;
    }
    for (int k = 0; k <= kGridSteps; ++k) {
        const double j = lo + (hi - lo) * static_cast<double>(k) / kGridSteps;
        if (psi(j, tau, eco) <= j) {
            return false;
        }
    }
    return true;
}

}  // namespace

double TaxSchedule::rate(std::size_t t) const {
    if (removal_period && t >= *removal_period) {
        return 0.0;
    }
    if (rates.empty()) {
        return 0.0;
    }
    return rates[std::min(t, rates.size() - 1)];
}

TaxSchedule TaxSchedule::constant(double rate) {
    return from_rates({rate});
}

TaxSchedule TaxSchedule::from_rates(std::vector<double> rates,
                                    std::optional<std::size_t> removal_period) {
    for (double r : rates) {
        if (!std::isfinite(r) || r < 0.0) {
            throw std::domain_error("tax rates must be finite and non-negative");
        }
    }
    TaxSchedule sched;
    sched.rates = std::move(rates);
    sched.removal_period = removal_period;
    return sched;
}

double PolicyReport::cumulative_welfare() const {
    return std::accumulate(welfare_path.begin(), welfare_path.end(), 0.0);
}

double tau_hat(double j_target, double lambda_t, const Economy& eco) {
    check_share(j_target, "target share");
    if (!std::isfinite(lambda_t) || lambda_t <= 0.0) {
        throw std::domain_error("preference intensity must be positive");
    }
    const double wedge = eco.a_b / (eco.a_g * lambda_t * eco.forms.preference(j_target));
    return std::max(0.0, wedge - 1.0);
}

UnstableThreshold unstable_threshold(double tau, const Economy& eco) {
    const std::vector<FixedPoint> fps = find_fixed_points(tau, eco);

    UnstableThreshold thr;
    for (const FixedPoint& fp : fps) {
        if (fp.j > 0.0 && fp.j < 1.0 && fp.kind != Stability::stable) {
            thr.kind = UnstableThreshold::Kind::barrier;
            thr.point = fp.j;  // fixed points are sorted; keep the largest
        }
    }
    if (thr.kind == UnstableThreshold::Kind::barrier) {
        return thr;
    }
    // Every fixed point below 1 (if any) is attracting here, so the flow
    // keeps one sign between the largest of them and 1; probe the midpoint.
    double below = 0.0;
    for (const FixedPoint& fp : fps) {
        if (fp.j < 1.0) {
            below = std::max(below, fp.j);
        }
    }
    const double probe = 0.5 * (below + 1.0);
    thr.kind = psi(probe, tau, eco) > probe ? UnstableThreshold::Kind::no_barrier
                                            : UnstableThreshold::Kind::no_escape;
    return thr;
}

double min_constant_tax(double j0, double margin, const Economy& eco,
                        double cap) {
    check_share(j0, "initial share");
    if (!std::isfinite(margin) || margin <= 0.0 || margin >= 1.0) {
        throw std::domain_error("margin must lie in (0, 1)");
    }
    if (!std::isfinite(cap) || cap <= 0.0) {
        throw std::domain_error("rate cap must be positive");
    }

    // Both conditions are monotone in the rate (psi never decreases in tau),
    // so their conjunction bisects cleanly.
    const auto feasible = [&](double tau) {
        return escapes_on_grid(j0, 1.0 - margin, tau, eco) &&
               reaches_full_adoption(j0, tau, eco);
    };

    if (feasible(0.0)) {
        return 0.0;
    }
    if (!feasible(cap)) {
        const double stalled =
            iterate_constant(j0, cap, dynamics_detail::kMaxIterations, eco, true)
                .final_share();
        std::ostringstream msg;
        msg << "no constant tax rate up to " << cap
            << " reaches full adoption from share " << j0 << " (stalls at "
            << stalled << ")";
        throw PolicyInfeasible(msg.str(), stalled, cap, 0);
    }

    double lo = 0.0;
    double hi = cap;
    while (hi - lo > kRateTol) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

TaxSchedule synthesize_schedule(double j0, double margin, const Economy& eco,
                                std::size_t t_max, double cap) {
    check_share(j0, "initial share");
    if (!std::isfinite(margin) || margin <= 0.0 || margin >= 1.0) {
        throw std::domain_error("margin must lie in (0, 1)");
    }
    if (!std::isfinite(cap) || cap <= 0.0) {
        throw std::domain_error("rate cap must be positive");
    }

    // Where the zero-tax flow alone suffices. Removal is only ever possible
    // when full adoption survives it.
    const bool removable_economy = green_absorbing(0.0, eco);
    const UnstableThreshold zero_thr = unstable_threshold(0.0, eco);
    const auto in_zero_tax_basin = [&](double j) {
        if (!removable_economy ||
            zero_thr.kind == UnstableThreshold::Kind::no_escape) {
            return false;
        }
        if (zero_thr.kind == UnstableThreshold::Kind::barrier) {
            return j > *zero_thr.point;
        }
        return j > 0.0 || psi(0.0, 0.0, eco) > 0.0;
    };

    std::vector<double> rates;
    double j = j0;
    for (std::size_t t = 0; t < t_max; ++t) {
        if (in_zero_tax_basin(j)) {
            return TaxSchedule::from_rates(std::move(rates), t);
        }

        const double creep = j + margin * (1.0 - j);
        double target = creep;
        if (removable_economy &&
            zero_thr.kind == UnstableThreshold::Kind::barrier) {
            const double z = *zero_thr.point;
            target = std::max(creep, z + margin * (1.0 - z));
        }
        target = std::min(target, 1.0);

        std::optional<double> rate = rate_for_target(j, target, eco, cap);
        if (!rate && target > creep) {
            // The clearing jump is out of reach; fall back to plain creep.
            target = creep;
            rate = rate_for_target(j, target, eco, cap);
        }
        if (!rate) {
            std::ostringstream msg;
            msg << "no rate up to " << cap << " advances the share beyond " << j
                << " by margin " << margin << " (period " << t << ")";
            throw PolicyInfeasible(msg.str(), j, cap, t);
        }
        rates.push_back(*rate);
        j = psi(j, *rate, eco);
    }

    if (in_zero_tax_basin(j)) {
        return TaxSchedule::from_rates(std::move(rates), t_max);
    }
    if (removable_economy) {
        std::ostringstream msg;
        msg << "tax removal not reached within " << t_max
            << " periods (share stalled at " << j << ")";
        throw PolicyInfeasible(msg.str(), j, cap, t_max);
    }
    // Full adoption cannot survive removal here; the creep path with a
    // permanent terminal rate is the best admissible schedule.
    return TaxSchedule::from_rates(std::move(rates));
}

PolicyReport simulate_policy(double j0, const EconomyState& seed,
                             const TaxSchedule& schedule, std::size_t horizon,
                             const Economy& eco) {
    check_share(j0, "initial share");
    if (horizon == 0) {
        throw std::invalid_argument("horizon must be at least 1");
    }

    PolicyReport report;
    report.schedule = schedule;
    report.trajectory.shares.reserve(horizon + 1);
    report.trajectory.taus.reserve(horizon);
    report.periods.reserve(horizon);
    report.welfare_path.reserve(horizon);

    // Pre-policy preference intensity: formed from the seed share, no tax.
    double lambda = eco.forms.norm(green_ratio(j0, eco, 0.0));
    EconomyState state = seed;
    double j = j0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const double tau = schedule.rate(t);
        const PeriodEquilibrium eq = period_equilibrium(j, state, tau, eco);
        report.trajectory.shares.push_back(j);
        report.trajectory.taus.push_back(tau);
        report.periods.push_back(eq);
        report.welfare_path.push_back(aggregate_utility(eq, lambda, tau, eco));

        lambda = eco.forms.norm(green_ratio(j, eco, tau));
        state = EconomyState{eq.B, eq.H};
        j = psi(j, tau, eco);
    }
    report.trajectory.shares.push_back(j);

    if (j > 1.0 - kConvergedShare) {
        report.terminal = green_steady_state(eco);
    } else if (j < kConvergedShare) {
        report.terminal = brown_steady_state(schedule.rate(horizon), eco);
    }
    return report;
}

}  // namespace greentrans
