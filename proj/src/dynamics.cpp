#include "greentrans/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace greentrans {

using namespace dynamics_detail;

double green_ratio(double j, const Economy& eco, double tau) {
    if (!(j >= 0.0 && j <= 1.0)) {
        throw std::domain_error("green_ratio: share outside [0,1]");
    }
    if (!(tau >= 0.0)) throw std::domain_error("green_ratio: tau must be >= 0");
    if (j <= 0.0) return 0.0;
    if (j >= 1.0) return std::numeric_limits<double>::infinity();
    double r = (j / (1.0 - j)) * (eco.a_g / eco.a_b);
    if (eco.convention == RatioConvention::market) r *= (1.0 + tau);
    return r;
}

double psi(double j, double tau, const Economy& eco) {
    if (!(j >= 0.0 && j <= 1.0)) {
        throw std::domain_error("psi: share outside [0,1]");
    }
    if (!(tau >= 0.0)) throw std::domain_error("psi: tau must be >= 0");

    const double lam = eco.forms.norm(green_ratio(j, eco, tau));
    const double cutoff = eco.a_b / ((1.0 + tau) * eco.a_g);
    const PreferenceCurve& pref = eco.forms.preference;

    if (lam * pref.at_zero() <= cutoff) return 0.0;  // even the greenest abstains
    if (lam * pref.at_one() >= cutoff) return 1.0;   // even the least green buys
    const double v =
        std::clamp(cutoff / lam, pref.at_one(), pref.at_zero());
    return pref.inverse(v);
}

namespace {

double schedule_rate(std::span<const double> schedule, std::size_t t) {
    if (schedule.empty()) return 0.0;
    return t < schedule.size() ? schedule[t] : schedule.back();
}

std::optional<FixedPoint> match_fixed_point(double j, double tau,
                                            const Economy& eco) {
    constexpr double kMatchTol = 1e-6;
    std::optional<FixedPoint> best;
    for (const FixedPoint& fp : find_fixed_points(tau, eco)) {
        const double d = std::abs(fp.j - j);
        if (d <= kMatchTol && (!best || d < std::abs(best->j - j))) best = fp;
    }
    return best;
}

}  // namespace

Trajectory iterate(double j0, std::span<const double> schedule,
                   std::size_t horizon, const Economy& eco,
                   bool stop_on_convergence) {
    if (!(j0 >= 0.0 && j0 <= 1.0)) {
        throw std::domain_error("iterate: initial share outside [0,1]");
    }
    if (horizon < 1) throw std::domain_error("iterate: horizon must be >= 1");
    horizon = std::min(horizon, kMaxIterations);

    Trajectory tr;
    tr.shares.reserve(std::min<std::size_t>(horizon + 1, 4096));
    tr.shares.push_back(j0);
    tr.taus.reserve(std::min<std::size_t>(horizon, 4096));

    int run = 0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const double tau_t = schedule_rate(schedule, t);
        const double next = psi(tr.shares.back(), tau_t, eco);
        const double delta = std::abs(next - tr.shares.back());
        tr.taus.push_back(tau_t);
        tr.shares.push_back(next);
        if (delta < kConvergenceEps) {
            if (++run >= kConvergenceRun && !tr.converged_at) {
                tr.converged_at = t + 1;
                if (stop_on_convergence) break;
            }
        } else {
            run = 0;
        }
    }
    if (tr.converged_at) {
        const double terminal_tau =
            schedule_rate(schedule, tr.taus.empty() ? 0 : tr.taus.size() - 1);
        tr.converged_to = match_fixed_point(tr.final_share(), terminal_tau, eco);
    }
    return tr;
}

Trajectory iterate_constant(double j0, double tau, std::size_t horizon,
                            const Economy& eco, bool stop_on_convergence) {
    const double sched[1] = {tau};
    return iterate(j0, sched, horizon, eco, stop_on_convergence);
}

namespace {

// Refine a bracketed sign change of f(j) = psi(j) - j down to kRootTol.
double bisect_root(double lo, double hi, double flo, double tau,
                   const Economy& eco) {
    (void)flo;
    auto f = [&](double j) { return psi(j, tau, eco) - j; };
    bool lo_neg = f(lo) < 0.0;
    while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == lo_neg) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(double tau, const Economy& eco) {
    constexpr double kZeroFlag = 1e-12;
    auto f = [&](double j) { return psi(j, tau, eco) - j; };

    const int n = kFixedPointGrid;
    std::vector<double> fv(n);
    for (int k = 0; k < n; ++k) {
        fv[k] = f(static_cast<double>(k) / (n - 1));
    }
    auto grid_j = [&](int k) { return static_cast<double>(k) / (n - 1); };

    std::vector<double> roots;
    // Runs of (near-)exact zeros: isolated ones are roots, longer runs are
    // plateaus reported through both endpoints.
    int k = 0;
    while (k < n) {
        if (std::abs(fv[k]) <= kZeroFlag) {
            int end = k;
            while (end + 1 < n && std::abs(fv[end + 1]) <= kZeroFlag) ++end;
            roots.push_back(grid_j(k));
            if (end > k) roots.push_back(grid_j(end));
            k = end + 1;
        } else {
            ++k;
        }
    }
    // Strict sign changes between non-zero neighbours.
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(fv[i]) <= kZeroFlag || std::abs(fv[i + 1]) <= kZeroFlag) {
            continue;
        }
        if ((fv[i] < 0.0) != (fv[i + 1] < 0.0)) {
            roots.push_back(bisect_root(grid_j(i), grid_j(i + 1), fv[i], tau, eco));
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<FixedPoint> out;
    constexpr double kDedupe = 1e-9;
    for (double r : roots) {
        if (!out.empty() && r - out.back().j < kDedupe) continue;
        FixedPoint fp;
        fp.j = r;
        fp.residual = std::abs(f(r));
        fp.kind = classify(r, tau, eco);
        out.push_back(fp);
    }
    return out;
}

Stability classify(double fp_j, double tau, const Economy& eco) {
    constexpr double kFixedPointCheck = 1e-8;
    if (!(fp_j >= 0.0 && fp_j <= 1.0)) {
        throw std::invalid_argument("classify: share outside [0,1]");
    }
    if (std::abs(psi(fp_j, tau, eco) - fp_j) > kFixedPointCheck) {
        throw std::invalid_argument("classify: point is not a fixed point");
    }

    int sides = 0, attracting = 0, repelling = 0;
    if (fp_j > kProbeEps) {
        ++sides;
        const double x = fp_j - kProbeEps;
        const double d = psi(x, tau, eco) - x;
        if (d > 0.0) ++attracting;      // moves up toward the point
        else if (d < 0.0) ++repelling;  // moves down away from it
    }
    if (fp_j < 1.0 - kProbeEps) {
        ++sides;
        const double x = fp_j + kProbeEps;
        const double d = psi(x, tau, eco) - x;
        if (d < 0.0) ++attracting;
        else if (d > 0.0) ++repelling;
    }
    if (sides > 0 && attracting == sides) return Stability::stable;
    if (sides > 0 && repelling == sides) return Stability::unstable;
    return Stability::semi_stable;
}

BasinPartition basins(double tau, const Economy& eco) {
    const std::vector<FixedPoint> fps = find_fixed_points(tau, eco);
    auto f = [&](double j) { return psi(j, tau, eco) - j; };

    BasinPartition part;
    if (fps.empty()) return part;  // cannot happen for a continuous self-map

    // Segments between consecutive fixed points (plus leading/trailing ends),
    // each labelled by the fixed point its interior drifts toward.
    struct Segment {
        double lo, hi, attractor;
    };
    std::vector<Segment> segs;
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (const FixedPoint& fp : fps) {
        if (fp.j > cuts.back()) cuts.push_back(fp.j);
    }
    if (cuts.back() < 1.0) cuts.push_back(1.0);

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double mid = 0.5 * (lo + hi);
        segs.push_back({lo, hi, f(mid) >= 0.0 ? hi : lo});
    }

    auto is_fp = [&](double x) {
        for (const FixedPoint& fp : fps) {
            if (fp.j == x) return true;
        }
        return false;
    };

    // Merge adjacent segments sharing an attractor into basin intervals.
    std::size_t i = 0;
    std::vector<double> attractors;
    while (i < segs.size()) {
        std::size_t j = i;
        while (j + 1 < segs.size() && segs[j + 1].attractor == segs[i].attractor) {
            ++j;
        }
        BasinInterval iv;
        iv.lo = segs[i].lo;
        iv.hi = segs[j].hi;
        iv.attractor = segs[i].attractor;
        iv.lo_closed = (iv.lo == iv.attractor) || (iv.lo == 0.0 && !is_fp(0.0));
        iv.hi_closed = (iv.hi == iv.attractor) || (iv.hi == 1.0 && !is_fp(1.0));
        part.intervals.push_back(iv);
        attractors.push_back(iv.attractor);
        i = j + 1;
    }
    for (const FixedPoint& fp : fps) {
        if (std::find(attractors.begin(), attractors.end(), fp.j) ==
            attractors.end()) {
            part.boundaries.push_back(fp.j);
        }
    }
    return part;
}

}  // namespace greentrans
