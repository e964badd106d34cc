#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "greentrans/policy.hpp"

namespace greentrans {

// A fully validated run description, mirroring the scenario JSON document.
// All values are stored raw so a document can be echoed back exactly.
struct ScenarioDoc {
    double a_g = 1.0;
    double a_b = 1.0;
    RatioConvention convention = RatioConvention::paper;

    std::string preference_family = "affine";
    double gamma_max = 1.5;
    double gamma_min = 0.5;

    std::string norm_family = "saturating";
    double lambda_0 = 0.5;
    double lambda_inf = 2.5;

    std::string damage_family = "exponential";
    double delta_B = 0.2;
    double delta_H = 0.05;

    struct Initial {
        double j0 = 0.0;
        std::string seed = "pristine";  // "pristine" | "brown-sse" | "explicit"
        double B_prev = 0.0;            // explicit seed only
        double H_prev = 0.0;            // explicit seed only
    } initial;

    struct Policy {
        std::string mode = "constant";  // "constant" | "schedule" | "synthesize"
        double rate = 0.0;              // constant mode
        std::vector<double> rates;      // schedule mode
        std::optional<std::size_t> removal_period;  // schedule mode
        double margin = 1e-6;           // synthesize mode
    } policy;

    std::size_t horizon = 50;

    struct Sweep {
        std::string parameter = "tau";
        double from = 0.0;
        double to = 1.0;
        std::size_t steps = 11;
    };
    std::optional<Sweep> sweep;

    struct Tolerances {
        double rate_cap = 100.0;
        std::size_t max_periods = 10'000;
    } tolerances;

    // Build the functional forms and technology described by this document.
    Economy economy() const;
};

// Parse and validate a scenario document. Collects every problem found and
// throws a single std::invalid_argument listing all of them (one per line,
// prefixed with the JSON path). Unknown keys are rejected.
ScenarioDoc parse_scenario(const std::string& json_text);

// Canonical JSON for a scenario document: parsing it reproduces the document
// exactly, and re-serialising yields identical bytes.
std::string scenario_to_json(const ScenarioDoc& doc);

}  // namespace greentrans
