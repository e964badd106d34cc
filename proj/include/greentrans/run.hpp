#pragma once

#include <optional>
#include <string>
#include <vector>

#include "greentrans/scenario.hpp"

namespace greentrans {

enum class Command { simulate, fixed_points, steady_state, policy, sweep };

std::string command_name(Command cmd);

// One emitted time-series row: levels plus per-period welfare.
struct PeriodRecord {
    std::size_t t = 0;
    double tau = 0.0;
    double j = 0.0;
    double mu = 1.0;
    double p = 1.0;
    double w = 1.0;
    double G = 0.0;
    double B = 0.0;
    double H = 0.0;
    double l_g = 0.0;
    double l_b = 0.0;
    double l_h = 0.0;
    double welfare = 0.0;
};

struct SweepRow {
    double value = 0.0;
    FixedPoint fp;
};

// Synthesis diagnostics for the `policy` command.
struct PolicySummary {
    double lambda_initial = 0.0;
    double tau_hat_full = 0.0;               // rate making household 1 adopt now
    std::string threshold_kind;              // barrier | no_barrier | no_escape
    std::optional<double> tipping_share;     // repelling share, when present
    std::optional<double> tau_hat_threshold; // rate lifting the share to it
    double min_constant_rate = 0.0;
    TaxSchedule synthesized;
    std::optional<std::size_t> removal_period;
    double verification_terminal_share = 0.0;
    double cumulative_welfare = 0.0;
};

struct RunResult {
    Command command = Command::simulate;
    ScenarioDoc scenario;
    double analysis_tau = 0.0;

    std::vector<PeriodRecord> records;        // simulate, policy verification
    std::vector<FixedPoint> fixed_points;     // fixed-points
    BasinPartition basin_partition;           // fixed-points
    std::optional<SseComparison> steady;      // steady-state
    std::optional<PolicySummary> policy;      // policy
    std::string sweep_parameter;              // sweep
    std::vector<SweepRow> sweep_rows;         // sweep
    std::optional<SteadyState> terminal;      // simulate, policy verification
};

// Carry-over state named by the scenario's initial.seed.
EconomyState resolve_seed(const ScenarioDoc& doc, const Economy& eco);

// Tax path named by the scenario's policy section (running synthesis when
// asked for).
TaxSchedule schedule_from_doc(const ScenarioDoc& doc, const Economy& eco);

// Tax rate at which fixed points, basins and steady states are analysed:
// the constant rate, a schedule's permanent terminal rate, or zero for a
// synthesized (eventually removed) path.
double analysis_tax(const ScenarioDoc& doc);

RunResult run(Command cmd, const ScenarioDoc& doc);

// Deterministic emission: identical results yield identical bytes.
std::string emit_csv(const RunResult& result);
std::string emit_json(const RunResult& result);

}  // namespace greentrans
