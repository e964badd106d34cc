#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "greentrans/run.hpp"

namespace {

// Exit codes: 0 success, 2 invalid input, 3 policy infeasible, 4 internal
// failure. CLI11 help/version keep their own (successful) exits.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + out_path);
    }
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adoption dynamics and tax policy for a two-good economy"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string scenario_path;
    std::string format = "csv";
    std::string out_path;
    std::string seed_state;
    double tau_override = 0.0;

    app.add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "Write output to this file (default: stdout)");
    CLI::Option* tau_opt =
        app.add_option("--tau", tau_override,
                       "Override the policy with this constant tax rate")
            ->check(CLI::NonNegativeNumber);
    app.add_option("--seed-state", seed_state,
                   "Override the initial carry-over state")
        ->check(CLI::IsMember({"pristine", "brown-sse"}));

    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "Run the adoption dynamics period by period");
    CLI::App* cmd_fixed =
        app.add_subcommand("fixed-points", "Enumerate and classify fixed points");
    CLI::App* cmd_steady =
        app.add_subcommand("steady-state", "Compare the two stationary environments");
    CLI::App* cmd_policy =
        app.add_subcommand("policy", "Synthesize and verify a tax schedule");
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Fixed points across a parameter range");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    greentrans::Command cmd = greentrans::Command::simulate;
    if (cmd_simulate->parsed()) cmd = greentrans::Command::simulate;
    if (cmd_fixed->parsed()) cmd = greentrans::Command::fixed_points;
    if (cmd_steady->parsed()) cmd = greentrans::Command::steady_state;
    if (cmd_policy->parsed()) cmd = greentrans::Command::policy;
    if (cmd_sweep->parsed()) cmd = greentrans::Command::sweep;

    try {
        greentrans::ScenarioDoc doc =
            greentrans::parse_scenario(read_file(scenario_path));
        if (*tau_opt) {
            doc.policy.mode = "constant";
            doc.policy.rate = tau_override;
            doc.policy.rates.clear();
            doc.policy.removal_period.reset();
        }
        if (!seed_state.empty()) {
            doc.initial.seed = seed_state;
        }

        const greentrans::RunResult result = greentrans::run(cmd, doc);
        write_output(format == "csv" ? greentrans::emit_csv(result)
                                     : greentrans::emit_json(result),
                     out_path);
        return kExitOk;
    } catch (const greentrans::PolicyInfeasible& e) {
        nlohmann::ordered_json err;
        err["error"]["type"] = "policy_infeasible";
        err["error"]["message"] = e.what();
        err["error"]["stalled_share"] = e.stalled_share();
        err["error"]["rate_cap"] = e.rate_cap();
        err["error"]["periods"] = e.periods();
        std::cerr << err.dump(2) << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
