#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greentrans/levels.hpp"

namespace greentrans {

// A tax path: explicit per-period rates (the last one extends forever),
// optionally cut to zero from `removal_period` onwards.
struct TaxSchedule {
    std::vector<double> rates;
    std::optional<std::size_t> removal_period;

    double rate(std::size_t t) const;

    static TaxSchedule constant(double rate);
    static TaxSchedule from_rates(std::vector<double> rates,
                                  std::optional<std::size_t> removal_period = {});
};

// Thrown when no admissible tax path meets the request within the rate cap
// and period budget.
class PolicyInfeasible : public std::runtime_error {
public:
    PolicyInfeasible(const std::string& what, double stalled_share,
                     double rate_cap, std::size_t periods)
        : std::runtime_error(what),
          stalled_share_(stalled_share),
          rate_cap_(rate_cap),
          periods_(periods) {}

    double stalled_share() const { return stalled_share_; }
    double rate_cap() const { return rate_cap_; }
    std::size_t periods() const { return periods_; }

private:
    double stalled_share_;
    double rate_cap_;
    std::size_t periods_;
};

// Where the adoption dynamics stop flowing towards full adoption:
//  - barrier:    an interior repelling point exists; crossing it is the
//                policy problem (point holds the largest such share)
//  - no_barrier: the flow already carries every interior share upwards
//  - no_escape:  the flow points down and full adoption is unreachable
struct UnstableThreshold {
    enum class Kind { barrier, no_barrier, no_escape };
    Kind kind = Kind::no_barrier;
    std::optional<double> point;
};

// Simulation of a tax path from an initial share and carry-over state:
// per-period levels, welfare, and the absorbing state reached (if any).
struct PolicyReport {
    TaxSchedule schedule;
    Trajectory trajectory;                   // shares j_0..j_H, taxes tau_0..tau_{H-1}
    std::vector<PeriodEquilibrium> periods;  // levels for t = 0..H-1
    std::vector<double> welfare_path;        // aggregate utility for t = 0..H-1
    std::optional<SteadyState> terminal;

    double cumulative_welfare() const;
};

// Smallest non-negative tax making household j_target weakly prefer green
// at preference intensity lambda_t.
double tau_hat(double j_target, double lambda_t, const Economy& eco);

// Locate the interior repelling share under constant tax `tau`, with
// sentinels when none exists (see UnstableThreshold).
UnstableThreshold unstable_threshold(double tau, const Economy& eco);

// Smallest constant tax rate from which the dynamics, started at j0, reach
// full adoption. Bisection to 1e-8; the winning rate must also clear a grid
// certificate (strictly upward flow at every grid point of [j0, 1-margin]).
// Throws PolicyInfeasible when even the rate cap fails.
double min_constant_tax(double j0, double margin, const Economy& eco,
                        double cap = 100.0);

// Build a finite tax path from j0: each period applies the smallest rate
// that either clears the zero-tax repelling share (plus a relative safety
// margin) or advances the share by the margin, and the tax is removed as
// soon as the zero-tax flow alone carries the share to full adoption.
// Economies where full adoption cannot survive tax removal get a pure
// margin-creep path with no removal period. Throws PolicyInfeasible when
// the rate cap or the period budget t_max is exhausted first.
TaxSchedule synthesize_schedule(double j0, double margin, const Economy& eco,
                                std::size_t t_max = 10'000, double cap = 100.0);

// Run a tax path for `horizon` periods from (j0, seed), recording levels and
// per-period welfare. Preference intensity enters with a one-period lag; the
// pre-policy intensity is formed from j0 at zero tax.
PolicyReport simulate_policy(double j0, const EconomyState& seed,
                             const TaxSchedule& schedule, std::size_t horizon,
                             const Economy& eco);

}  // namespace greentrans
