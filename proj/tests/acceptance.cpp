// Acceptance gate: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. The binary exits non-zero if any check
// fails. All randomized checks use fixed seeds so reruns are identical.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "greentrans/policy.hpp"
#include "oracles.hpp"

using namespace greentrans;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double tipping_root() { return (2.5 - std::sqrt(4.25)) / 4.0; }

// --- 01: the share map against the discretized-household oracle -----------

Outcome check_map_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(9101);
    std::vector<Economy> economies{oracles::reference_economy()};
    for (int s = 0; s < 20; ++s) {
        economies.push_back(oracles::random_economy(
            rng, 2.0,
            s % 2 == 0 ? RatioConvention::paper : RatioConvention::market));
    }
    double worst = 0.0;
    for (const Economy& eco : economies) {
        for (int ti = 0; ti <= 20; ++ti) {
            const double tau = 0.1 * ti;
            for (int ji = 0; ji <= 200; ++ji) {
                const double j = ji / 200.0;
                const double diff = std::abs(
                    psi(j, tau, eco) - oracles::household_cutoff(j, tau, eco));
                if (diff > worst) worst = diff;
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    Outcome out;
    out.pass = worst <= 1e-8 && secs < 30.0;
    out.detail = "max deviation " + fmt(worst) + " over 21 economies x 201x21 "
                 "grid points in " + fmt(secs) + " s";
    return out;
}

// --- 02: weak norms keep the all-brown state locally stable ---------------

Outcome check_brown_stability() {
    std::mt19937_64 rng(9202);
    Outcome out;
    int built = 0;
    for (int attempt = 0; attempt < 20000 && built < 50; ++attempt) {
        const Economy eco = oracles::random_economy(rng, 1.0);
        const double product =
            eco.forms.norm.at_zero() * eco.forms.preference.gamma_max();
        const double q0 = eco.a_b / eco.a_g;
        if (product >= 0.999 * q0) continue;
        ++built;
        const double tau_bar = eco.a_b / (eco.a_g * product) - 1.0;
        for (double tau : {0.0, tau_bar / 2.0}) {
            if (classify(0.0, tau, eco) != Stability::stable) {
                out.pass = false;
                out.detail = "economy " + std::to_string(built) +
                             " not stable at tau=" + fmt(tau);
                return out;
            }
            const double margin = 1e-6 - psi(1e-6, tau, eco);
            if (margin <= 1e-9) {
                out.pass = false;
                out.detail = "probe margin " + fmt(margin) + " at tau=" +
                             fmt(tau);
                return out;
            }
        }
    }
    out.pass = built == 50;
    out.detail = std::to_string(built) +
                 " economies with an under-wedge norm, stable at 0 and at "
                 "half the escape rate";
    return out;
}

// --- 03: strong taxed norms drive every start to full adoption ------------

Outcome check_global_adoption() {
    std::mt19937_64 rng(9303);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Outcome out;
    for (int s = 0; s < 50; ++s) {
        const Economy eco = oracles::random_economy(rng, 1.0);
        const double worst_product =
            eco.forms.norm.at_zero() * eco.forms.preference.gamma_min();
        const double needed =
            1.01 * eco.a_b / (eco.a_g * worst_product) - 1.0;
        const double tau = std::max(0.0, needed) + 0.5 * U(rng);
        const double premise = eco.forms.norm.at_inf() *
                               eco.forms.preference.gamma_min() * (1.0 + tau) *
                               eco.a_g / eco.a_b;
        if (premise <= 1.01) {
            out.pass = false;
            out.detail = "sampler failed to satisfy the premise";
            return out;
        }
        for (int k = 0; k < 20; ++k) {
            const Trajectory tr = iterate_constant(
                U(rng), tau, dynamics_detail::kMaxIterations, eco, true);
            if (std::abs(tr.final_share() - 1.0) >= 1e-9) {
                out.pass = false;
                out.detail = "economy " + std::to_string(s) + " stalled at " +
                             fmt(tr.final_share());
                return out;
            }
        }
    }
    out.detail = "50 economies x 20 starts all reached full adoption";
    return out;
}

// --- 04: reference fixed-point set ----------------------------------------

Outcome check_reference_fixed_points() {
    const Economy eco = oracles::reference_economy();
    const std::vector<FixedPoint> fps = find_fixed_points(0.0, eco);
    Outcome out;
    if (fps.size() != 3 || fps[0].j != 0.0 || fps[2].j != 1.0 ||
        fps[0].kind != Stability::stable ||
        fps[1].kind != Stability::unstable ||
        fps[2].kind != Stability::stable) {
        out.pass = false;
        out.detail = "expected {0 stable, interior unstable, 1 stable}, got " +
                     std::to_string(fps.size()) + " points";
        return out;
    }
    const double err_nominal = std::abs(fps[1].j - 0.1096);
    const double err_root = std::abs(fps[1].j - tipping_root());
    out.pass = err_nominal <= 1e-4 && err_root <= 1e-8;
    out.detail = "interior point " + fmt(fps[1].j) + ", closed-form gap " +
                 fmt(err_root);
    return out;
}

// --- 05: all-brown stationary output at a 50% tax --------------------------

Outcome check_brown_sse() {
    const Economy eco = oracles::reference_economy();
    const SteadyState ss = brown_steady_state(0.5, eco);
    const double oracle = oracles::brown_output_iteration(0.5, eco);
    const double residual =
        std::abs(ss.output - eco.forms.damage(ss.output, 0.5 * ss.output) *
                                 eco.a_b / 1.5);
    const int crossings = brown_sse_crossing_count(0.5, eco);
    Outcome out;
    out.pass = std::abs(ss.output - 0.6002) <= 1e-3 &&
               std::abs(ss.output - oracle) <= 1e-9 && residual < 1e-10 &&
               crossings == 1;
    out.detail = "B* " + fmt(ss.output) + ", oracle gap " +
                 fmt(std::abs(ss.output - oracle)) + ", residual " +
                 fmt(residual) + ", crossings " + std::to_string(crossings);
    return out;
}

// --- 06 & 07: green dominance in consumption and welfare -------------------

struct DominanceSample {
    std::vector<SseComparison> comparisons;
    std::vector<Economy> economies;
};

DominanceSample dominance_sample() {
    std::mt19937_64 rng(9606);
    DominanceSample sample;
    for (int attempt = 0; attempt < 50000 &&
                          sample.comparisons.size() < 100; ++attempt) {
        const Economy eco = oracles::random_economy(rng, 10.0);
        if (eco.a_b > eco.a_g) continue;
        const double lo = eco.forms.norm.at_zero() *
                          eco.forms.preference.gamma_max() * 1.01;
        const double hi = std::min(eco.forms.norm.at_inf() *
                                       eco.forms.preference.gamma_min() * 0.99,
                                   eco.a_b / eco.a_g);
        if (lo >= hi) continue;
        const double q = 0.5 * (lo + hi);
        const double tau = std::max(0.0, eco.a_b / (eco.a_g * q) - 1.0);
        sample.comparisons.push_back(compare_sse(tau, eco));
        sample.economies.push_back(eco);
    }
    return sample;
}

Outcome check_consumption_dominance(const DominanceSample& sample) {
    Outcome out;
    if (sample.comparisons.size() != 100) {
        out.pass = false;
        out.detail = "sampler produced only " +
                     std::to_string(sample.comparisons.size()) + " economies";
        return out;
    }
    int violations = 0;
    for (const SseComparison& cmp : sample.comparisons) {
        if (!(cmp.bistable && cmp.G_star > cmp.B_star)) ++violations;
    }
    out.pass = violations == 0;
    out.detail = "100 bistable economies with a_b <= a_g, " +
                 std::to_string(violations) + " violations";
    return out;
}

Outcome check_welfare_dominance(const DominanceSample& sample) {
    Outcome out;
    if (sample.comparisons.size() != 100) {
        out.pass = false;
        out.detail = "sampler produced only " +
                     std::to_string(sample.comparisons.size()) + " economies";
        return out;
    }
    int violations = 0;
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < sample.comparisons.size(); ++k) {
        const SseComparison& cmp = sample.comparisons[k];
        const Economy& eco = sample.economies[k];
        const double mean = 0.5 * (eco.forms.preference.gamma_max() +
                                   eco.forms.preference.gamma_min());
        const double closed = eco.forms.norm.at_inf() * mean * cmp.G_star;
        const double gap = std::abs(cmp.SW_green - closed);
        if (gap > worst_gap) worst_gap = gap;
        if (!(cmp.SW_green > cmp.SW_brown) || gap > 1e-10) ++violations;
    }
    out.pass = violations == 0;
    out.detail = std::to_string(violations) +
                 " violations, worst closed-form gap " + fmt(worst_gap);
    return out;
}

// --- 08: threshold rates order by target greenness -------------------------

Outcome check_threshold_ordering() {
    const Economy ref = oracles::reference_economy();
    const double lambda0 = ref.forms.norm.at_zero();
    const double full = tau_hat(1.0, lambda0, ref);
    const double at_tip = tau_hat(tipping_root(), lambda0, ref);
    Outcome out;
    if (std::abs(full - 3.0) > 1e-9 || std::abs(at_tip - 0.4385) > 1e-3) {
        out.pass = false;
        out.detail = "reference rates " + fmt(full) + " / " + fmt(at_tip);
        return out;
    }

    std::mt19937_64 rng(9808);
    int built = 0;
    for (int attempt = 0; attempt < 50000 && built < 100; ++attempt) {
        const Economy eco = oracles::random_economy(rng, 1.0);
        const UnstableThreshold thr = unstable_threshold(0.0, eco);
        if (thr.kind != UnstableThreshold::Kind::barrier) continue;
        ++built;
        const double l0 = eco.forms.norm.at_zero();
        if (!(tau_hat(*thr.point, l0, eco) < tau_hat(1.0, l0, eco))) {
            out.pass = false;
            out.detail = "ordering violated at economy " +
                         std::to_string(built);
            return out;
        }
    }
    out.pass = built == 100;
    out.detail = "reference rates " + fmt(full) + " / " + fmt(at_tip) +
                 "; ordering held on " + std::to_string(built) +
                 " economies with an interior barrier";
    return out;
}

// --- 09: temporary taxation ------------------------------------------------

EconomyState reference_brown_seed(const Economy& eco) {
    return EconomyState{brown_steady_state(0.0, eco).output, 0.0};
}

Outcome check_single_period_tax() {
    const Economy eco = oracles::reference_economy();
    const PolicyReport rep =
        simulate_policy(0.0, reference_brown_seed(eco),
                        TaxSchedule::from_rates({0.45}, 1), 50, eco);
    Outcome out;
    out.pass = rep.terminal.has_value() &&
               rep.terminal->kind == SseKind::green &&
               rep.trajectory.final_share() == 1.0;
    out.detail = "one period at 0.45 then none: terminal share " +
                 fmt(rep.trajectory.final_share());
    return out;
}

Outcome check_synthesized_removal() {
    const Economy eco = oracles::reference_economy();
    const TaxSchedule plan = synthesize_schedule(0.0, 1e-6, eco);
    Outcome out;
    out.pass = plan.removal_period.has_value() && *plan.removal_period == 1 &&
               plan.rates.size() == 1;
    out.detail = "synthesized " + std::to_string(plan.rates.size()) +
                 " rate(s), removal at " +
                 (plan.removal_period ? std::to_string(*plan.removal_period)
                                      : std::string("none"));
    return out;
}

Outcome check_welfare_vs_permanent() {
    const Economy eco = oracles::reference_economy();
    const EconomyState seed = reference_brown_seed(eco);
    const TaxSchedule plan = synthesize_schedule(0.0, 1e-6, eco);
    const double synthesized =
        simulate_policy(0.0, seed, plan, 50, eco).cumulative_welfare();
    const double permanent =
        simulate_policy(0.0, seed, TaxSchedule::constant(3.0), 50, eco)
            .cumulative_welfare();
    Outcome out;
    out.pass = synthesized >= permanent;
    out.detail = "cumulative welfare " + fmt(synthesized) +
                 " (synthesized) vs " + fmt(permanent) + " (permanent rate 3)";
    return out;
}

// --- 10: per-period accounting identities ----------------------------------

Outcome check_conservation() {
    std::mt19937_64 rng(91010);
    std::uniform_real_distribution<double> Uj(0.0, 1.0);
    std::uniform_real_distribution<double> Ut(0.0, 2.0);
    std::uniform_real_distribution<double> Us(0.0, 1.5);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const Economy eco = oracles::random_economy(rng, 2.0);
        const double tau = Ut(rng);
        const PeriodEquilibrium eq = period_equilibrium(
            Uj(rng), EconomyState{Us(rng), Us(rng)}, tau, eco);
        const double errs[] = {
            std::abs(eq.l_g + eq.l_b + eq.l_h - 1.0),
            std::abs(eq.H - tau * eq.B),
            std::abs(eq.p * eq.mu * eco.a_g - eq.w),
            std::abs(eq.w - eq.mu * eco.a_b),
        };
        for (double e : errs) {
            if (e > worst) worst = e;
        }
    }
    Outcome out;
    out.pass = worst <= 1e-12;
    out.detail = "10000 draws, worst identity error " + fmt(worst);
    return out;
}

// --- 11: CLI determinism ----------------------------------------------------

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome check_cli_determinism() {
    const std::string cli = GREENTRANS_CLI_PATH;
    const std::string scenario =
        std::string(GREENTRANS_SCENARIO_DIR) + "/ref1.json";
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "greentrans_acceptance";
    std::filesystem::create_directories(tmp);

    Outcome out;
    const char* commands[] = {"simulate", "fixed-points", "steady-state",
                              "policy", "sweep"};
    for (const char* cmd : commands) {
        for (const char* format : {"csv", "json"}) {
            std::string first;
            for (int attempt = 0; attempt < 2; ++attempt) {
                const std::filesystem::path file =
                    tmp / (std::string(cmd) + "." + format + "." +
                           std::to_string(attempt));
                const std::string line = "\"" + cli + "\" " + cmd +
                                         " --scenario \"" + scenario +
                                         "\" --format " + format +
                                         " --out \"" + file.string() + "\"";
                if (std::system(line.c_str()) != 0) {
                    out.pass = false;
                    out.detail = std::string(cmd) + " --format " + format +
                                 " exited non-zero";
                    return out;
                }
                const std::string content = slurp(file);
                if (content.empty()) {
                    out.pass = false;
                    out.detail = std::string(cmd) + " --format " + format +
                                 " produced no output";
                    return out;
                }
                if (attempt == 0) {
                    first = content;
                } else if (content != first) {
                    out.pass = false;
                    out.detail = std::string(cmd) + " --format " + format +
                                 " differed between runs";
                    return out;
                }
            }
        }
    }
    out.detail = "5 subcommands x 2 formats byte-identical across reruns";
    return out;
}

int g_failures = 0;

void report(const std::string& id, const std::string& name,
            const Outcome& out) {
    if (!out.pass) ++g_failures;
    std::cout << "[acceptance] " << id << " " << name << ": "
              << (out.pass ? "PASS" : "FAIL") << " (" << out.detail << ")\n";
}

}  // namespace

int main() {
    report("01", "map matches household oracle", check_map_oracle());
    report("02", "brown state stable under small taxes", check_brown_stability());
    report("03", "large taxes make adoption global", check_global_adoption());
    report("04", "reference fixed-point set", check_reference_fixed_points());
    report("05", "brown stationary output", check_brown_sse());
    const DominanceSample sample = dominance_sample();
    report("06", "green consumption dominance", check_consumption_dominance(sample));
    report("07", "green welfare dominance", check_welfare_dominance(sample));
    report("08", "threshold rate ordering", check_threshold_ordering());
    report("09a", "single-period tax converts the economy", check_single_period_tax());
    report("09b", "synthesized schedule removes the tax", check_synthesized_removal());
    report("09c", "synthesized welfare beats permanent taxation", check_welfare_vs_permanent());
    report("10", "per-period accounting identities", check_conservation());
    report("11", "CLI determinism", check_cli_determinism());

    if (g_failures > 0) {
        std::cout << "[acceptance] " << g_failures << " check(s) failed\n";
        return 1;
    }
    std::cout << "[acceptance] all checks passed\n";
    return 0;
}
