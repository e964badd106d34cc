#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "greentrans/forms.hpp"

namespace greentrans {

// Which consumption ratio feeds the social norm. `paper` uses the pre-tax
// quantity ratio (j/(1-j)) * a_g/a_b; `market` adds the tax wedge factor
// (1+tau) so the ratio matches the cleared quantities exactly.
enum class RatioConvention { paper, market };

// A linear two-sector economy: green productivity a_g, brown (= healthcare)
// productivity a_b, and the behavioural forms. Plain value type; everything
// downstream treats it as immutable.
struct Economy {
    double a_g = 1.0;
    double a_b = 1.0;
    FunctionalForms forms;
    RatioConvention convention = RatioConvention::paper;

    double price() const { return a_b / a_g; }  // green price under zero profit
};

enum class Stability { stable, unstable, semi_stable };

struct FixedPoint {
    double j = 0.0;
    Stability kind = Stability::stable;
    double residual = 0.0;  // |psi(j) - j| at the reported point
};

struct Trajectory {
    std::vector<double> shares;  // j_0 .. j_T
    std::vector<double> taus;    // tau_0 .. tau_{T-1}
    std::optional<FixedPoint> converged_to;
    std::optional<std::size_t> converged_at;  // first index where settled

    double final_share() const { return shares.back(); }
    bool converged() const { return converged_at.has_value(); }
};

struct BasinInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;
    double attractor = 0.0;  // fixed point the interval's interior converges to
};

struct BasinPartition {
    std::vector<BasinInterval> intervals;
    std::vector<double> boundaries;  // separating non-attracting fixed points
};

// Ratio of green to brown consumption implied by marginal household j.
// Returns 0 at j=0 and +inf at j=1 (the explicit all-green sentinel).
double green_ratio(double j, const Economy& eco, double tau);

// Next period's marginal household given today's share j and the sales tax
// tau on the brown good. Piecewise: all-brown, interior, all-green.
double psi(double j, double tau, const Economy& eco);

// Iterates the share map for `horizon` steps under a per-period tax schedule
// (constant-extended past its end; empty means tau = 0 throughout).
// Convergence is declared after 3 consecutive steps with |dj| < 1e-12 and the
// limit is matched against the enumerated fixed points of the terminal-tax
// map. With stop_on_convergence the run ends early once settled.
Trajectory iterate(double j0, std::span<const double> schedule,
                   std::size_t horizon, const Economy& eco,
                   bool stop_on_convergence = false);

Trajectory iterate_constant(double j0, double tau, std::size_t horizon,
                            const Economy& eco,
                            bool stop_on_convergence = false);

// All fixed points of psi(.; tau) in [0,1]: endpoints by direct evaluation,
// interior roots from a sign-change scan on a uniform grid refined by
// bisection. A degenerate plateau of fixed points is reported through its
// endpoints, classified semi-stable. Results are sorted by j.
std::vector<FixedPoint> find_fixed_points(double tau, const Economy& eco);

// One-sided probe classification at a fixed point (probe offset 1e-6).
// Throws std::invalid_argument when fp_j is not a fixed point.
Stability classify(double fp_j, double tau, const Economy& eco);

// Partition of [0,1] into intervals whose interiors converge to the labelled
// attractor, with the separating fixed points listed as boundaries. The
// intervals plus boundaries cover [0,1].
BasinPartition basins(double tau, const Economy& eco);

namespace dynamics_detail {
constexpr std::size_t kMaxIterations = 1'000'000;
constexpr double kConvergenceEps = 1e-12;
constexpr int kConvergenceRun = 3;
constexpr int kFixedPointGrid = 10'001;
constexpr double kRootTol = 1e-10;
constexpr double kProbeEps = 1e-6;
}  // namespace dynamics_detail

}  // namespace greentrans
