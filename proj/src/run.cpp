#include "greentrans/run.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace greentrans {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::semi_stable: return "semi_stable";
    }
    return "unknown";
}

const char* threshold_kind_name(UnstableThreshold::Kind k) {
    switch (k) {
        case UnstableThreshold::Kind::barrier: return "barrier";
        case UnstableThreshold::Kind::no_barrier: return "no_barrier";
        case UnstableThreshold::Kind::no_escape: return "no_escape";
    }
    return "unknown";
}

std::vector<PeriodRecord> records_from(const PolicyReport& report) {
    std::vector<PeriodRecord> records;
    records.reserve(report.periods.size());
    for (std::size_t t = 0; t < report.periods.size(); ++t) {
        const PeriodEquilibrium& eq = report.periods[t];
        PeriodRecord row;
        row.t = t;
        row.tau = report.trajectory.taus[t];
        row.j = eq.j;
        row.mu = eq.mu;
        row.p = eq.p;
        row.w = eq.w;
        row.G = eq.G;
        row.B = eq.B;
        row.H = eq.H;
        row.l_g = eq.l_g;
        row.l_b = eq.l_b;
        row.l_h = eq.l_h;
        row.welfare = report.welfare_path[t];
        records.push_back(row);
    }
    return records;
}

void apply_sweep_value(ScenarioDoc& doc, const std::string& parameter,
                       double value) {
    if (parameter == "a_g") {
        doc.a_g = value;
    } else if (parameter == "a_b") {
        doc.a_b = value;
    } else if (parameter == "gamma_max") {
        doc.gamma_max = value;
    } else if (parameter == "gamma_min") {
        doc.gamma_min = value;
    } else if (parameter == "lambda_0") {
        doc.lambda_0 = value;
    } else if (parameter == "lambda_inf") {
        doc.lambda_inf = value;
    } else if (parameter == "delta_B") {
        doc.delta_B = value;
    } else if (parameter == "delta_H") {
        doc.delta_H = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter \"" + parameter +
                                    "\"");
    }
}

void run_simulate(RunResult& result, const ScenarioDoc& doc,
                  const Economy& eco) {
    const TaxSchedule schedule = schedule_from_doc(doc, eco);
    const PolicyReport report = simulate_policy(
        doc.initial.j0, resolve_seed(doc, eco), schedule, doc.horizon, eco);
    result.records = records_from(report);
    result.terminal = report.terminal;
}

void run_fixed_points(RunResult& result, const Economy& eco) {
    result.fixed_points = find_fixed_points(result.analysis_tau, eco);
    result.basin_partition = basins(result.analysis_tau, eco);
}

void run_policy(RunResult& result, const ScenarioDoc& doc, const Economy& eco) {
    PolicySummary summary;
    summary.lambda_initial =
        eco.forms.norm(green_ratio(doc.initial.j0, eco, 0.0));
    summary.tau_hat_full = tau_hat(1.0, summary.lambda_initial, eco);

    const UnstableThreshold thr = unstable_threshold(result.analysis_tau, eco);
    summary.threshold_kind = threshold_kind_name(thr.kind);
    if (thr.point) {
        summary.tipping_share = *thr.point;
        summary.tau_hat_threshold =
            tau_hat(*thr.point, summary.lambda_initial, eco);
    }

    summary.min_constant_rate = min_constant_tax(
        doc.initial.j0, doc.policy.margin, eco, doc.tolerances.rate_cap);
    summary.synthesized =
        synthesize_schedule(doc.initial.j0, doc.policy.margin, eco,
                            doc.tolerances.max_periods, doc.tolerances.rate_cap);
    summary.removal_period = summary.synthesized.removal_period;

    const PolicyReport verification =
        simulate_policy(doc.initial.j0, resolve_seed(doc, eco),
                        summary.synthesized, doc.horizon, eco);
    summary.verification_terminal_share = verification.trajectory.final_share();
    summary.cumulative_welfare = verification.cumulative_welfare();

    result.records = records_from(verification);
    result.terminal = verification.terminal;
    result.policy = std::move(summary);
}

void run_sweep(RunResult& result, const ScenarioDoc& doc) {
    if (!doc.sweep) {
        throw std::invalid_argument(
            "sweep command requires a sweep section in the scenario");
    }
    const ScenarioDoc::Sweep& sw = *doc.sweep;
    result.sweep_parameter = sw.parameter;
    const Economy base = doc.economy();
    for (std::size_t k = 0; k < sw.steps; ++k) {
        const double value =
            sw.from + (sw.to - sw.from) * static_cast<double>(k) /
                          static_cast<double>(sw.steps - 1);
        std::vector<FixedPoint> fps;
        if (sw.parameter == "tau") {
            fps = find_fixed_points(value, base);
        } else {
            ScenarioDoc modified = doc;
            apply_sweep_value(modified, sw.parameter, value);
            fps = find_fixed_points(result.analysis_tau, modified.economy());
        }
        for (const FixedPoint& fp : fps) {
            result.sweep_rows.push_back(SweepRow{value, fp});
        }
    }
}

ordered_json steady_state_json(const SteadyState& ss) {
    ordered_json j;
    j["kind"] = ss.kind == SseKind::brown ? "brown" : "green";
    j["j"] = ss.j;
    j["output"] = ss.output;
    j["mu"] = ss.mu;
    j["healthcare"] = ss.healthcare;
    j["consumption_total"] = ss.consumption_total;
    j["welfare"] = ss.welfare;
    return j;
}

ordered_json records_json(const std::vector<PeriodRecord>& records) {
    ordered_json arr = ordered_json::array();
    for (const PeriodRecord& r : records) {
        ordered_json row;
        row["t"] = r.t;
        row["tau"] = r.tau;
        row["j"] = r.j;
        row["mu"] = r.mu;
        row["p"] = r.p;
        row["w"] = r.w;
        row["G"] = r.G;
        row["B"] = r.B;
        row["H"] = r.H;
        row["l_g"] = r.l_g;
        row["l_b"] = r.l_b;
        row["l_h"] = r.l_h;
        row["welfare"] = r.welfare;
        arr.push_back(std::move(row));
    }
    return arr;
}

}  // namespace

std::string command_name(Command cmd) {
    switch (cmd) {
        case Command::simulate: return "simulate";
        case Command::fixed_points: return "fixed-points";
        case Command::steady_state: return "steady-state";
        case Command::policy: return "policy";
        case Command::sweep: return "sweep";
    }
    return "unknown";
}

EconomyState resolve_seed(const ScenarioDoc& doc, const Economy& eco) {
    if (doc.initial.seed == "pristine") {
        return EconomyState{0.0, 0.0};
    }
    if (doc.initial.seed == "brown-sse") {
        return EconomyState{brown_steady_state(0.0, eco).output, 0.0};
    }
    if (doc.initial.seed == "explicit") {
        return EconomyState{doc.initial.B_prev, doc.initial.H_prev};
    }
    throw std::invalid_argument("unknown initial seed \"" + doc.initial.seed +
                                "\"");
}

TaxSchedule schedule_from_doc(const ScenarioDoc& doc, const Economy& eco) {
    if (doc.policy.mode == "constant") {
        return TaxSchedule::constant(doc.policy.rate);
    }
    if (doc.policy.mode == "schedule") {
        return TaxSchedule::from_rates(doc.policy.rates,
                                       doc.policy.removal_period);
    }
    if (doc.policy.mode == "synthesize") {
        return synthesize_schedule(doc.initial.j0, doc.policy.margin, eco,
                                   doc.tolerances.max_periods,
                                   doc.tolerances.rate_cap);
    }
    throw std::invalid_argument("unknown policy mode \"" + doc.policy.mode +
                                "\"");
}

double analysis_tax(const ScenarioDoc& doc) {
    if (doc.policy.mode == "constant") {
        return doc.policy.rate;
    }
    if (doc.policy.mode == "schedule") {
        if (doc.policy.removal_period) {
            return 0.0;
        }
        return doc.policy.rates.empty() ? 0.0 : doc.policy.rates.back();
    }
    return 0.0;  // synthesized paths end tax-free
}

RunResult run(Command cmd, const ScenarioDoc& doc) {
    RunResult result;
    result.command = cmd;
    result.scenario = doc;
    result.analysis_tau = analysis_tax(doc);

    const Economy eco = doc.economy();
    switch (cmd) {
        case Command::simulate:
            run_simulate(result, doc, eco);
            break;
        case Command::fixed_points:
            run_fixed_points(result, eco);
            break;
        case Command::steady_state:
            result.steady = compare_sse(result.analysis_tau, eco);
            break;
        case Command::policy:
            run_policy(result, doc, eco);
            break;
        case Command::sweep:
            run_sweep(result, doc);
            break;
    }
    return result;
}

std::string emit_csv(const RunResult& result) {
    std::string out;
    switch (result.command) {
        case Command::simulate:
        case Command::policy: {
            out = "t,tau,j,mu,p,w,G,B,H,l_g,l_b,l_h,welfare\n";
            for (const PeriodRecord& r : result.records) {
                out += std::to_string(r.t);
                out += ',';
                out += fmt(r.tau);
                out += ',';
                out += fmt(r.j);
                out += ',';
                out += fmt(r.mu);
                out += ',';
                out += fmt(r.p);
                out += ',';
                out += fmt(r.w);
                out += ',';
                out += fmt(r.G);
                out += ',';
                out += fmt(r.B);
                out += ',';
                out += fmt(r.H);
                out += ',';
                out += fmt(r.l_g);
                out += ',';
                out += fmt(r.l_b);
                out += ',';
                out += fmt(r.l_h);
                out += ',';
                out += fmt(r.welfare);
                out += '\n';
            }
            break;
        }
        case Command::fixed_points: {
            out = "j,kind,residual\n";
            for (const FixedPoint& fp : result.fixed_points) {
                out += fmt(fp.j);
                out += ',';
                out += stability_name(fp.kind);
                out += ',';
                out += fmt(fp.residual);
                out += '\n';
            }
            break;
        }
        case Command::steady_state: {
            out = "metric,value\n";
            const SseComparison& c = *result.steady;
            const auto row = [&out](const char* name, double v) {
                out += name;
                out += ',';
                out += fmt(v);
                out += '\n';
            };
            row("tau", c.tau);
            row("G_star", c.G_star);
            row("B_star", c.B_star);
            row("SW_green", c.SW_green);
            row("SW_brown", c.SW_brown);
            row("consumption_green_higher", c.consumption_green_higher ? 1 : 0);
            row("welfare_green_higher", c.welfare_green_higher ? 1 : 0);
            row("tech_condition", c.tech_condition ? 1 : 0);
            row("bistable", c.bistable ? 1 : 0);
            break;
        }
        case Command::sweep: {
            out = "parameter,value,j,kind,residual\n";
            for (const SweepRow& r : result.sweep_rows) {
                out += result.sweep_parameter;
                out += ',';
                out += fmt(r.value);
                out += ',';
                out += fmt(r.fp.j);
                out += ',';
                out += stability_name(r.fp.kind);
                out += ',';
                out += fmt(r.fp.residual);
                out += '\n';
            }
            break;
        }
    }
    return out;
}

std::string emit_json(const RunResult& result) {
    ordered_json j;
    j["command"] = command_name(result.command);
    j["scenario"] = ordered_json::parse(scenario_to_json(result.scenario));
    j["analysis_tau"] = result.analysis_tau;

    switch (result.command) {
        case Command::simulate: {
            j["periods"] = records_json(result.records);
            j["terminal"] =
                result.terminal ? steady_state_json(*result.terminal)
                                : ordered_json(nullptr);
            break;
        }
        case Command::fixed_points: {
            ordered_json fps = ordered_json::array();
            for (const FixedPoint& fp : result.fixed_points) {
                ordered_json row;
                row["j"] = fp.j;
                row["kind"] = stability_name(fp.kind);
                row["residual"] = fp.residual;
                fps.push_back(std::move(row));
            }
            j["fixed_points"] = std::move(fps);
            ordered_json intervals = ordered_json::array();
            for (const BasinInterval& iv : result.basin_partition.intervals) {
                ordered_json row;
                row["lo"] = iv.lo;
                row["hi"] = iv.hi;
                row["lo_closed"] = iv.lo_closed;
                row["hi_closed"] = iv.hi_closed;
                row["attractor"] = iv.attractor;
                intervals.push_back(std::move(row));
            }
            j["basins"]["intervals"] = std::move(intervals);
            j["basins"]["boundaries"] = result.basin_partition.boundaries;
            break;
        }
        case Command::steady_state: {
            const SseComparison& c = *result.steady;
            ordered_json s;
            s["tau"] = c.tau;
            s["G_star"] = c.G_star;
            s["B_star"] = c.B_star;
            s["SW_green"] = c.SW_green;
            s["SW_brown"] = c.SW_brown;
            s["consumption_green_higher"] = c.consumption_green_higher;
            s["welfare_green_higher"] = c.welfare_green_higher;
            s["tech_condition"] = c.tech_condition;
            s["bistable"] = c.bistable;
            j["steady_state"] = std::move(s);
            break;
        }
        case Command::policy: {
            const PolicySummary& p = *result.policy;
            ordered_json s;
            s["lambda_initial"] = p.lambda_initial;
            s["tau_hat_full_adoption"] = p.tau_hat_full;
            s["threshold"]["kind"] = p.threshold_kind;
            if (p.tipping_share) {
                s["threshold"]["tipping_share"] = *p.tipping_share;
                s["threshold"]["tau_hat"] = *p.tau_hat_threshold;
            }
            s["min_constant_rate"] = p.min_constant_rate;
            s["schedule"]["rates"] = p.synthesized.rates;
            s["schedule"]["removal_period"] =
                p.removal_period ? ordered_json(*p.removal_period)
                                 : ordered_json(nullptr);
            s["verification"]["terminal_share"] = p.verification_terminal_share;
            s["verification"]["cumulative_welfare"] = p.cumulative_welfare;
            s["verification"]["terminal"] =
                result.terminal ? steady_state_json(*result.terminal)
                                : ordered_json(nullptr);
            j["policy"] = std::move(s);
            j["periods"] = records_json(result.records);
            break;
        }
        case Command::sweep: {
            j["sweep"]["parameter"] = result.sweep_parameter;
            ordered_json rows = ordered_json::array();
            for (const SweepRow& r : result.sweep_rows) {
                ordered_json row;
                row["value"] = r.value;
                row["j"] = r.fp.j;
                row["kind"] = stability_name(r.fp.kind);
                row["residual"] = r.fp.residual;
                rows.push_back(std::move(row));
            }
            j["sweep"]["rows"] = std::move(rows);
            break;
        }
    }
    return j.dump(2) + "\n";
}

}  // namespace greentrans
