#include <cmath>
#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "greentrans/run.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace greentrans;

namespace {

// The defaults of ScenarioDoc are the reference economy; tests only adjust
// the run-specific knobs.
ScenarioDoc constant_doc(double rate, double j0 = 0.0,
                         std::size_t horizon = 50) {
    ScenarioDoc doc;
    doc.policy.mode = "constant";
    doc.policy.rate = rate;
    doc.initial.j0 = j0;
    doc.horizon = horizon;
    return doc;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<double> fields_of(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) {
        out.push_back(std::stod(cell));
    }
    return out;
}

}  // namespace

TEST_CASE("analysis_tax: the rate the long run is analysed at") {
    ScenarioDoc doc = constant_doc(0.45);
    CHECK(analysis_tax(doc) == 0.45);

    doc.policy.mode = "schedule";
    doc.policy.rates = {0.45, 0.2};
    CHECK(analysis_tax(doc) == 0.2);  // last rate extends forever

    doc.policy.removal_period = 2;  // ...unless the tax is removed
    CHECK(analysis_tax(doc) == 0.0);

    doc.policy.mode = "synthesize";
    CHECK(analysis_tax(doc) == 0.0);  // synthesized paths end tax-free
}

TEST_CASE("resolve_seed: named carry-over states") {
    const ScenarioDoc doc = constant_doc(0.0);
    const Economy eco = doc.economy();

    ScenarioDoc pristine = doc;
    pristine.initial.seed = "pristine";
    const EconomyState p = resolve_seed(pristine, eco);
    CHECK(p.B_prev == 0.0);
    CHECK(p.H_prev == 0.0);

    ScenarioDoc brown = doc;
    brown.initial.seed = "brown-sse";
    const EconomyState b = resolve_seed(brown, eco);
    CHECK(b.B_prev ==
          doctest::Approx(brown_steady_state(0.0, eco).output).epsilon(1e-12));
    CHECK(b.H_prev == 0.0);

    ScenarioDoc expl = doc;
    expl.initial.seed = "explicit";
    expl.initial.B_prev = 0.6;
    expl.initial.H_prev = 0.3;
    const EconomyState e = resolve_seed(expl, eco);
    CHECK(e.B_prev == 0.6);
    CHECK(e.H_prev == 0.3);
}

TEST_CASE("run simulate: matches the policy simulation it wraps") {
    const ScenarioDoc doc = constant_doc(0.45, 0.0, 12);
    const Economy eco = doc.economy();
    const RunResult result = run(Command::simulate, doc);

    REQUIRE(result.records.size() == 12);
    const PolicyReport direct = simulate_policy(
        0.0, EconomyState{0.0, 0.0}, TaxSchedule::constant(0.45), 12, eco);
    for (std::size_t t = 0; t < result.records.size(); ++t) {
        const PeriodRecord& r = result.records[t];
        CHECK(r.t == t);
        CHECK(r.tau == 0.45);
        CHECK(r.j == direct.trajectory.shares[t]);
        CHECK(r.welfare == direct.welfare_path[t]);
        CHECK(r.B == direct.periods[t].B);
    }
    REQUIRE(result.terminal.has_value());
    CHECK(result.terminal->kind == SseKind::green);
}

TEST_CASE("emit_csv simulate: exact header, reparsable rows, identities") {
    const ScenarioDoc doc = constant_doc(0.45, 0.0, 20);
    const RunResult result = run(Command::simulate, doc);
    const std::string csv = emit_csv(result);

    const std::vector<std::string> lines = lines_of(csv);
    REQUIRE(lines.size() == 21);
    CHECK(lines[0] == "t,tau,j,mu,p,w,G,B,H,l_g,l_b,l_h,welfare");

    for (std::size_t k = 1; k < lines.size(); ++k) {
        const std::vector<double> f = fields_of(lines[k]);
        REQUIRE(f.size() == 13);
        const double tau = f[1], G = f[6], B = f[7], H = f[8];
        const double l_g = f[9], l_b = f[10], l_h = f[11];
        CHECK(f[0] == static_cast<double>(k - 1));
        CHECK(std::abs(l_g + l_b + l_h - 1.0) < 1e-9);
        CHECK(std::abs(H - tau * B) < 1e-9);
        CHECK(G >= 0.0);
        CHECK(B >= 0.0);
    }
}

TEST_CASE("emit: identical runs produce identical bytes") {
    const ScenarioDoc sim = constant_doc(0.45, 0.0, 25);
    ScenarioDoc pol = constant_doc(0.0);
    pol.policy.mode = "synthesize";
    pol.initial.seed = "brown-sse";
    ScenarioDoc swp = constant_doc(0.0);
    swp.sweep = ScenarioDoc::Sweep{"tau", 0.0, 1.0, 21};

    const struct {
        Command cmd;
        const ScenarioDoc& doc;
    } cases[] = {{Command::simulate, sim},
                 {Command::fixed_points, sim},
                 {Command::steady_state, sim},
                 {Command::policy, pol},
                 {Command::sweep, swp}};
    for (const auto& c : cases) {
        const RunResult a = run(c.cmd, c.doc);
        const RunResult b = run(c.cmd, c.doc);
        CHECK(emit_csv(a) == emit_csv(b));
        CHECK(emit_json(a) == emit_json(b));
    }
}

TEST_CASE("emit fixed-points: three reference points and their basins") {
    const ScenarioDoc doc = constant_doc(0.0);
    const RunResult result = run(Command::fixed_points, doc);

    const std::vector<std::string> lines = lines_of(emit_csv(result));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "j,kind,residual");
    CHECK(lines[1] == "0,stable,0");
    CHECK(lines[2].find(",unstable,") != std::string::npos);
    CHECK(lines[2].substr(0, 6) == "0.1096");
    CHECK(lines[3] == "1,stable,0");

    const nlohmann::json j = nlohmann::json::parse(emit_json(result));
    CHECK(j["command"] == "fixed-points");
    CHECK(j["analysis_tau"] == 0.0);
    REQUIRE(j["fixed_points"].size() == 3);
    CHECK(j["fixed_points"][1]["kind"] == "unstable");
    REQUIRE(j["basins"]["intervals"].size() == 2);
    CHECK(j["basins"]["intervals"][0]["attractor"] == 0.0);
    CHECK(j["basins"]["intervals"][1]["attractor"] == 1.0);
    REQUIRE(j["basins"]["boundaries"].size() == 1);
    CHECK(j["basins"]["boundaries"][0].get<double>() ==
          doctest::Approx((2.5 - std::sqrt(4.25)) / 4.0).epsilon(1e-8));
}

TEST_CASE("emit steady-state: metric table with verdict flags") {
    const RunResult result = run(Command::steady_state, constant_doc(0.0));
    const std::string csv = emit_csv(result);
    CHECK(lines_of(csv)[0] == "metric,value");
    CHECK(csv.find("G_star,1\n") != std::string::npos);
    CHECK(csv.find("B_star,0.844579867") != std::string::npos);
    CHECK(csv.find("SW_green,2.5\n") != std::string::npos);
    CHECK(csv.find("consumption_green_higher,1\n") != std::string::npos);
    CHECK(csv.find("bistable,1\n") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(emit_json(result));
    CHECK(j["steady_state"]["tech_condition"] == true);
    CHECK(j["steady_state"]["B_star"].get<double>() ==
          doctest::Approx(0.8446).epsilon(1e-3));
}

TEST_CASE("run policy: synthesis summary on the reference scenario") {
    ScenarioDoc doc = constant_doc(0.0);
    doc.policy.mode = "synthesize";
    doc.initial.seed = "brown-sse";
    const RunResult result = run(Command::policy, doc);

    REQUIRE(result.policy.has_value());
    const PolicySummary& p = *result.policy;
    CHECK(p.lambda_initial == 0.5);
    CHECK(p.tau_hat_full == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(p.threshold_kind == "barrier");
    REQUIRE(p.tipping_share.has_value());
    CHECK(*p.tipping_share ==
          doctest::Approx((2.5 - std::sqrt(4.25)) / 4.0).epsilon(1e-8));
    REQUIRE(p.tau_hat_threshold.has_value());
    CHECK(*p.tau_hat_threshold == doctest::Approx(0.4384).epsilon(1e-3));
    CHECK(p.min_constant_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    REQUIRE(p.synthesized.rates.size() == 1);
    // The schedule clears the tipping share with a safety margin, so its
    // rate sits strictly above the bare threshold rate.
    CHECK(p.synthesized.rates[0] > *p.tau_hat_threshold);
    CHECK(p.synthesized.rates[0] == doctest::Approx(0.4384).epsilon(1e-3));
    REQUIRE(p.removal_period.has_value());
    CHECK(*p.removal_period == 1);
    CHECK(p.verification_terminal_share == 1.0);
    CHECK(p.cumulative_welfare ==
          doctest::Approx(103.79030734565092).epsilon(1e-9));

    REQUIRE(result.records.size() == 50);
    REQUIRE(result.terminal.has_value());
    CHECK(result.terminal->kind == SseKind::green);

    const nlohmann::json j = nlohmann::json::parse(emit_json(result));
    CHECK(j["policy"]["threshold"]["kind"] == "barrier");
    CHECK(j["policy"]["schedule"]["removal_period"] == 1);
    CHECK(j["policy"]["verification"]["terminal_share"] == 1.0);
    CHECK(j["periods"].size() == 50);
}

TEST_CASE("run sweep: tax grid traces the vanishing barrier") {
    ScenarioDoc doc = constant_doc(0.0);
    doc.sweep = ScenarioDoc::Sweep{"tau", 0.0, 1.0, 101};
    const RunResult result = run(Command::sweep, doc);
    CHECK(result.sweep_parameter == "tau");

    std::set<double> values;
    std::size_t unstable_rows = 0;
    double last_barrier = 1.0;
    for (const SweepRow& row : result.sweep_rows) {
        values.insert(row.value);
        if (row.fp.kind == Stability::unstable) {
            ++unstable_rows;
            // The barrier shrinks monotonically as the tax rises.
            CHECK(row.fp.j < last_barrier);
            last_barrier = row.fp.j;
        }
    }
    CHECK(values.size() == 101);
    // The interior barrier exists exactly while the brown state is still
    // absorbing, i.e. for rates up to a third: grid points 0.00 .. 0.33.
    CHECK(unstable_rows == 34);

    // Past the threshold only full adoption remains.
    bool saw_high_value = false;
    for (const SweepRow& row : result.sweep_rows) {
        if (row.value > 0.34) {
            saw_high_value = true;
            CHECK(row.fp.j == 1.0);
            CHECK(row.fp.kind == Stability::stable);
        }
    }
    CHECK(saw_high_value);

    const std::vector<std::string> lines = lines_of(emit_csv(result));
    CHECK(lines[0] == "parameter,value,j,kind,residual");
    CHECK(lines[1] == "tau,0,0,stable,0");
    CHECK(lines.size() == result.sweep_rows.size() + 1);

    // Sweeping without a grid in the scenario is a usage error.
    CHECK_THROWS_AS(run(Command::sweep, constant_doc(0.0)),
                    std::invalid_argument);
}

TEST_CASE("run sweep: non-tax parameters rebuild the economy per point") {
    ScenarioDoc doc = constant_doc(0.0);
    doc.sweep = ScenarioDoc::Sweep{"lambda_inf", 1.0, 2.5, 7};
    const RunResult result = run(Command::sweep, doc);
    CHECK(result.sweep_parameter == "lambda_inf");

    // A weak norm limit leaves only the brown state; the reference limit
    // restores bistability.
    std::size_t first_count = 0, last_count = 0;
    for (const SweepRow& row : result.sweep_rows) {
        if (row.value == 1.0) ++first_count;
        if (row.value == 2.5) ++last_count;
    }
    CHECK(first_count == 1);
    CHECK(last_count == 3);
}
