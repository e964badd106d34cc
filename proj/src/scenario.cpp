#include "greentrans/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace greentrans {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kMaxHorizon = 10'000'000;
constexpr std::size_t kMaxSweepSteps = 100'000;
constexpr std::size_t kMaxScheduleLength = 1'000'000;

// Accumulates every validation problem so a bad document is reported whole.
class Collector {
public:
    void add(const std::string& path, const std::string& what) {
        errors_.push_back(path + ": " + what);
    }

    // No error recorded yet at `path` or below it.
    bool ok_so_far(const std::string& path) const {
        for (const std::string& e : errors_) {
            if (e.rfind(path + ":", 0) == 0 || e.rfind(path + ".", 0) == 0) {
                return false;
            }
        }
        return true;
    }

    void raise_if_any() const {
        if (errors_.empty()) return;
        std::ostringstream os;
        os << "invalid scenario:";
        for (const std::string& e : errors_) {
            os << "\n  - " << e;
        }
        throw std::invalid_argument(os.str());
    }

private:
    std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Collector& errs) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            errs.add(path + "." + item.key(), "unknown key");
        }
    }
}

const json* get_section(const json& root, const char* key, Collector& errs,
                        bool required = true) {
    if (!root.contains(key)) {
        if (required) errs.add(key, "missing section");
        return nullptr;
    }
    if (!root.at(key).is_object()) {
        errs.add(key, "must be an object");
        return nullptr;
    }
    return &root.at(key);
}

std::optional<double> get_number(const json& obj, const char* key,
                                 const std::string& path, Collector& errs,
                                 bool required = true) {
    const std::string full = path + "." + key;
    if (!obj.contains(key)) {
        if (required) errs.add(full, "missing required number");
        return std::nullopt;
    }
    if (!obj.at(key).is_number()) {
        errs.add(full, "must be a number");
        return std::nullopt;
    }
    const double v = obj.at(key).get<double>();
    if (!std::isfinite(v)) {
        errs.add(full, "must be finite");
        return std::nullopt;
    }
    return v;
}

std::optional<std::size_t> get_index(const json& obj, const char* key,
                                     const std::string& path, Collector& errs,
                                     bool required = true) {
    const std::string full = path + "." + key;
    if (!obj.contains(key)) {
        if (required) errs.add(full, "missing required integer");
        return std::nullopt;
    }
    if (!obj.at(key).is_number_integer() || obj.at(key).get<long long>() < 0) {
        errs.add(full, "must be a non-negative integer");
        return std::nullopt;
    }
    return obj.at(key).get<std::size_t>();
}

std::optional<std::string> get_string(const json& obj, const char* key,
                                      const std::string& path, Collector& errs,
                                      bool required = true) {
    const std::string full = path + "." + key;
    if (!obj.contains(key)) {
        if (required) errs.add(full, "missing required string");
        return std::nullopt;
    }
    if (!obj.at(key).is_string()) {
        errs.add(full, "must be a string");
        return std::nullopt;
    }
    return obj.at(key).get<std::string>();
}

void forbid(const json& obj, const char* key, const std::string& path,
            const std::string& why, Collector& errs) {
    if (obj.contains(key)) {
        errs.add(path + "." + key, "only allowed " + why);
    }
}

void parse_economy(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "economy", errs);
    if (!sec) return;
    check_keys(*sec, "economy", {"a_g", "a_b", "ratio_convention"}, errs);
    if (auto v = get_number(*sec, "a_g", "economy", errs)) {
        if (*v <= 0.0) {
            errs.add("economy.a_g", "must be positive");
        } else {
            doc.a_g = *v;
        }
    }
    if (auto v = get_number(*sec, "a_b", "economy", errs)) {
        if (*v <= 0.0) {
            errs.add("economy.a_b", "must be positive");
        } else {
            doc.a_b = *v;
        }
    }
    if (auto s = get_string(*sec, "ratio_convention", "economy", errs, false)) {
        if (*s == "paper") {
            doc.convention = RatioConvention::paper;
        } else if (*s == "market") {
            doc.convention = RatioConvention::market;
        } else {
            errs.add("economy.ratio_convention",
                     "must be \"paper\" or \"market\"");
        }
    }
}

void parse_preference(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "preference", errs);
    if (!sec) return;
    check_keys(*sec, "preference", {"family", "gamma_max", "gamma_min"}, errs);
    if (auto s = get_string(*sec, "family", "preference", errs)) {
        if (*s != "affine") {
            errs.add("preference.family", "must be \"affine\"");
        } else {
            doc.preference_family = *s;
        }
    }
    const auto hi = get_number(*sec, "gamma_max", "preference", errs);
    const auto lo = get_number(*sec, "gamma_min", "preference", errs);
    if (lo && *lo <= 0.0) {
        errs.add("preference.gamma_min", "must be positive");
    }
    if (hi && lo && *hi <= *lo) {
        errs.add("preference.gamma_max",
                 "must exceed gamma_min (gamma strictly decreasing)");
    }
    if (hi) doc.gamma_max = *hi;
    if (lo) doc.gamma_min = *lo;
}

void parse_norm(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "norm", errs);
    if (!sec) return;
    check_keys(*sec, "norm", {"family", "lambda_0", "lambda_inf"}, errs);
    if (auto s = get_string(*sec, "family", "norm", errs)) {
        if (*s != "saturating") {
            errs.add("norm.family", "must be \"saturating\"");
        } else {
            doc.norm_family = *s;
        }
    }
    const auto lo = get_number(*sec, "lambda_0", "norm", errs);
    const auto hi = get_number(*sec, "lambda_inf", "norm", errs);
    if (lo && *lo <= 0.0) {
        errs.add("norm.lambda_0", "must be positive");
    }
    if (lo && hi && *hi <= *lo) {
        errs.add("norm.lambda_inf", "must exceed lambda_0 (nondecreasing norm)");
    }
    if (lo) doc.lambda_0 = *lo;
    if (hi) doc.lambda_inf = *hi;
}

void parse_damage(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "damage", errs);
    if (!sec) return;
    check_keys(*sec, "damage", {"family", "delta_B", "delta_H"}, errs);
    if (auto s = get_string(*sec, "family", "damage", errs)) {
        if (*s != "exponential") {
            errs.add("damage.family", "must be \"exponential\"");
        } else {
            doc.damage_family = *s;
        }
    }
    if (auto v = get_number(*sec, "delta_B", "damage", errs)) {
        if (*v < 0.0) {
            errs.add("damage.delta_B", "must be non-negative");
        } else {
            doc.delta_B = *v;
        }
    }
    if (auto v = get_number(*sec, "delta_H", "damage", errs)) {
        if (*v < 0.0) {
            errs.add("damage.delta_H", "must be non-negative");
        } else {
            doc.delta_H = *v;
        }
    }
}

void parse_initial(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "initial", errs);
    if (!sec) return;
    check_keys(*sec, "initial", {"j0", "seed", "B_prev", "H_prev"}, errs);
    if (auto v = get_number(*sec, "j0", "initial", errs)) {
        if (*v < 0.0 || *v > 1.0) {
            errs.add("initial.j0", "must lie in [0, 1]");
        } else {
            doc.initial.j0 = *v;
        }
    }
    if (auto s = get_string(*sec, "seed", "initial", errs, false)) {
        if (*s == "pristine" || *s == "brown-sse" || *s == "explicit") {
            doc.initial.seed = *s;
        } else {
            errs.add("initial.seed",
                     "must be \"pristine\", \"brown-sse\" or \"explicit\"");
        }
    }
    if (doc.initial.seed == "explicit") {
        if (auto v = get_number(*sec, "B_prev", "initial", errs)) {
            if (*v < 0.0) {
                errs.add("initial.B_prev", "must be non-negative");
            } else {
                doc.initial.B_prev = *v;
            }
        }
        if (auto v = get_number(*sec, "H_prev", "initial", errs)) {
            if (*v < 0.0) {
                errs.add("initial.H_prev", "must be non-negative");
            } else {
                doc.initial.H_prev = *v;
            }
        }
    } else {
        forbid(*sec, "B_prev", "initial", "with seed \"explicit\"", errs);
        forbid(*sec, "H_prev", "initial", "with seed \"explicit\"", errs);
    }
}

void parse_policy(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "policy", errs);
    if (!sec) return;
    check_keys(*sec, "policy",
               {"mode", "rate", "rates", "removal_period", "margin"}, errs);
    const auto mode = get_string(*sec, "mode", "policy", errs);
    if (!mode) return;
    if (*mode != "constant" && *mode != "schedule" && *mode != "synthesize") {
        errs.add("policy.mode",
                 "must be \"constant\", \"schedule\" or \"synthesize\"");
        return;
    }
    doc.policy.mode = *mode;

    if (*mode == "constant") {
        forbid(*sec, "rates", "policy", "in mode \"schedule\"", errs);
        forbid(*sec, "removal_period", "policy", "in mode \"schedule\"", errs);
        forbid(*sec, "margin", "policy", "in mode \"synthesize\"", errs);
        if (auto v = get_number(*sec, "rate", "policy", errs)) {
            if (*v < 0.0) {
                errs.add("policy.rate", "must be non-negative");
            } else {
                doc.policy.rate = *v;
            }
        }
    } else if (*mode == "schedule") {
        forbid(*sec, "rate", "policy", "in mode \"constant\"", errs);
        forbid(*sec, "margin", "policy", "in mode \"synthesize\"", errs);
        if (!sec->contains("rates")) {
            errs.add("policy.rates", "missing required array");
        } else if (!sec->at("rates").is_array() || sec->at("rates").empty()) {
            errs.add("policy.rates", "must be a non-empty array of numbers");
        } else if (sec->at("rates").size() > kMaxScheduleLength) {
            errs.add("policy.rates", "too many entries");
        } else {
            std::vector<double> rates;
            bool good = true;
            for (std::size_t k = 0; k < sec->at("rates").size(); ++k) {
                const json& item = sec->at("rates")[k];
                if (!item.is_number() || !std::isfinite(item.get<double>()) ||
                    item.get<double>() < 0.0) {
                    errs.add("policy.rates[" + std::to_string(k) + "]",
                             "must be a finite non-negative number");
                    good = false;
                } else {
                    rates.push_back(item.get<double>());
                }
            }
            if (good) doc.policy.rates = std::move(rates);
        }
        if (sec->contains("removal_period")) {
            doc.policy.removal_period =
                get_index(*sec, "removal_period", "policy", errs);
        }
    } else {  // synthesize
        forbid(*sec, "rate", "policy", "in mode \"constant\"", errs);
        forbid(*sec, "rates", "policy", "in mode \"schedule\"", errs);
        forbid(*sec, "removal_period", "policy", "in mode \"schedule\"", errs);
        if (auto v = get_number(*sec, "margin", "policy", errs, false)) {
            if (*v <= 0.0 || *v >= 1.0) {
                errs.add("policy.margin", "must lie strictly in (0, 1)");
            } else {
                doc.policy.margin = *v;
            }
        }
    }
}

void parse_sweep(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "sweep", errs, false);
    if (!sec) return;
    check_keys(*sec, "sweep", {"parameter", "from", "to", "steps"}, errs);

    ScenarioDoc::Sweep sw;
    bool good = true;
    if (auto s = get_string(*sec, "parameter", "sweep", errs)) {
        static const char* kKnown[] = {"tau",      "a_g",        "a_b",
                                       "gamma_max", "gamma_min", "lambda_0",
                                       "lambda_inf", "delta_B",  "delta_H"};
        bool known = false;
        for (const char* k : kKnown) {
            if (*s == k) known = true;
        }
        if (!known) {
            errs.add("sweep.parameter", "unknown sweep parameter \"" + *s + "\"");
            good = false;
        } else {
            sw.parameter = *s;
        }
    } else {
        good = false;
    }
    const auto from = get_number(*sec, "from", "sweep", errs);
    const auto to = get_number(*sec, "to", "sweep", errs);
    if (from && to && !(*from < *to)) {
        errs.add("sweep.from", "must be strictly below sweep.to");
        good = false;
    }
    if (auto n = get_index(*sec, "steps", "sweep", errs)) {
        if (*n < 2 || *n > kMaxSweepSteps) {
            errs.add("sweep.steps", "must lie in [2, " +
                                        std::to_string(kMaxSweepSteps) + "]");
            good = false;
        } else {
            sw.steps = *n;
        }
    } else {
        good = false;
    }
    if (!from || !to || !good) return;
    sw.from = *from;
    sw.to = *to;

    // Keep every value the sweep will visit inside the admissible range of
    // the swept parameter, so each point yields a valid economy.
    const std::string at = "sweep.from";
    if (sw.parameter == "tau" || sw.parameter == "delta_B" ||
        sw.parameter == "delta_H") {
        if (sw.from < 0.0) errs.add(at, "must be non-negative for " + sw.parameter);
    } else if (sw.parameter == "a_g" || sw.parameter == "a_b") {
        if (sw.from <= 0.0) errs.add(at, "must be positive for " + sw.parameter);
    } else if (sw.parameter == "gamma_max") {
        if (sw.from <= doc.gamma_min) {
            errs.add(at, "must exceed preference.gamma_min");
        }
    } else if (sw.parameter == "gamma_min") {
        if (sw.from <= 0.0) errs.add(at, "must be positive");
        if (sw.to >= doc.gamma_max) {
            errs.add("sweep.to", "must stay below preference.gamma_max");
        }
    } else if (sw.parameter == "lambda_0") {
        if (sw.from <= 0.0) errs.add(at, "must be positive");
        if (sw.to >= doc.lambda_inf) {
            errs.add("sweep.to", "must stay below norm.lambda_inf");
        }
    } else if (sw.parameter == "lambda_inf") {
        if (sw.from <= doc.lambda_0) {
            errs.add(at, "must exceed norm.lambda_0");
        }
    }
    doc.sweep = sw;
}

// The damage curve must hurt more through brown output than it heals through
// tax-funded healthcare at every rate the document can reach, or the brown
// stationary state is ill-defined. Checked once against the largest such rate.
void check_elasticity(const ScenarioDoc& doc, Collector& errs) {
    if (!errs.ok_so_far("damage") || !errs.ok_so_far("policy") ||
        !errs.ok_so_far("economy") || !errs.ok_so_far("sweep")) {
        return;
    }
    double max_tau = 0.0;
    if (doc.policy.mode == "constant") {
        max_tau = doc.policy.rate;
    } else if (doc.policy.mode == "schedule") {
        for (double r : doc.policy.rates) max_tau = std::max(max_tau, r);
    }
    if (doc.sweep && doc.sweep->parameter == "tau") {
        max_tau = std::max(max_tau, doc.sweep->to);
    }
    const DamageCurve curve = DamageCurve::exponential(doc.delta_B, doc.delta_H);
    const ElasticityReport rep =
        curve.elasticity_check(max_tau, 0.0, doc.a_b / (1.0 + max_tau));
    if (!rep.ok) {
        std::ostringstream os;
        os << "elasticity condition eps_H < |eps_B| fails at tau=" << max_tau;
        if (rep.violating_B) {
            os << " (first violating B=" << *rep.violating_B << ")";
        }
        errs.add("damage", os.str());
    }
}

void parse_tolerances(const json& root, ScenarioDoc& doc, Collector& errs) {
    const json* sec = get_section(root, "tolerances", errs, false);
    if (!sec) return;
    check_keys(*sec, "tolerances", {"rate_cap", "max_periods"}, errs);
    if (auto v = get_number(*sec, "rate_cap", "tolerances", errs, false)) {
        if (*v <= 0.0) {
            errs.add("tolerances.rate_cap", "must be positive");
        } else {
            doc.tolerances.rate_cap = *v;
        }
    }
    if (sec->contains("max_periods")) {
        if (auto n = get_index(*sec, "max_periods", "tolerances", errs)) {
            if (*n < 1 || *n > kMaxHorizon) {
                errs.add("tolerances.max_periods", "must lie in [1, " +
                                                       std::to_string(kMaxHorizon) +
                                                       "]");
            } else {
                doc.tolerances.max_periods = *n;
            }
        }
    }
}

}  // namespace

Economy ScenarioDoc::economy() const {
    if (preference_family != "affine" || norm_family != "saturating" ||
        damage_family != "exponential") {
        throw std::domain_error(
            "scenario documents only support the built-in families");
    }
    FunctionalForms forms{PreferenceCurve::affine(gamma_max, gamma_min),
                          SocialNormCurve::saturating(lambda_0, lambda_inf),
                          DamageCurve::exponential(delta_B, delta_H)};
    return Economy{a_g, a_b, std::move(forms), convention};
}

ScenarioDoc parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("invalid scenario: ") +
                                    err.what());
    }

    Collector errs;
    if (!root.is_object()) {
        errs.add("$", "document must be a JSON object");
        errs.raise_if_any();
    }

    check_keys(root, "$",
               {"economy", "preference", "norm", "damage", "initial", "policy",
                "horizon", "sweep", "tolerances"},
               errs);

    ScenarioDoc doc;
    parse_economy(root, doc, errs);
    parse_preference(root, doc, errs);
    parse_norm(root, doc, errs);
    parse_damage(root, doc, errs);
    parse_initial(root, doc, errs);
    parse_policy(root, doc, errs);

    if (!root.contains("horizon")) {
        errs.add("horizon", "missing required integer");
    } else if (auto n = get_index(root, "horizon", "$", errs)) {
        if (*n < 1 || *n > kMaxHorizon) {
            errs.add("horizon",
                     "must lie in [1, " + std::to_string(kMaxHorizon) + "]");
        } else {
            doc.horizon = *n;
        }
    }

    parse_sweep(root, doc, errs);
    parse_tolerances(root, doc, errs);
    check_elasticity(doc, errs);

    errs.raise_if_any();
    return doc;
}

std::string scenario_to_json(const ScenarioDoc& doc) {
    ordered_json j;
    j["economy"]["a_g"] = doc.a_g;
    j["economy"]["a_b"] = doc.a_b;
    j["economy"]["ratio_convention"] =
        doc.convention == RatioConvention::paper ? "paper" : "market";
    j["preference"]["family"] = doc.preference_family;
    j["preference"]["gamma_max"] = doc.gamma_max;
    j["preference"]["gamma_min"] = doc.gamma_min;
    j["norm"]["family"] = doc.norm_family;
    j["norm"]["lambda_0"] = doc.lambda_0;
    j["norm"]["lambda_inf"] = doc.lambda_inf;
    j["damage"]["family"] = doc.damage_family;
    j["damage"]["delta_B"] = doc.delta_B;
    j["damage"]["delta_H"] = doc.delta_H;
    j["initial"]["j0"] = doc.initial.j0;
    j["initial"]["seed"] = doc.initial.seed;
    if (doc.initial.seed == "explicit") {
        j["initial"]["B_prev"] = doc.initial.B_prev;
        j["initial"]["H_prev"] = doc.initial.H_prev;
    }
    j["policy"]["mode"] = doc.policy.mode;
    if (doc.policy.mode == "constant") {
        j["policy"]["rate"] = doc.policy.rate;
    } else if (doc.policy.mode == "schedule") {
        j["policy"]["rates"] = doc.policy.rates;
        if (doc.policy.removal_period) {
            j["policy"]["removal_period"] = *doc.policy.removal_period;
        }
    } else {
        j["policy"]["margin"] = doc.policy.margin;
    }
    j["horizon"] = doc.horizon;
    if (doc.sweep) {
        j["sweep"]["parameter"] = doc.sweep->parameter;
        j["sweep"]["from"] = doc.sweep->from;
        j["sweep"]["to"] = doc.sweep->to;
        j["sweep"]["steps"] = doc.sweep->steps;
    }
    j["tolerances"]["rate_cap"] = doc.tolerances.rate_cap;
    j["tolerances"]["max_periods"] = doc.tolerances.max_periods;
    return j.dump(2);
}

}  // namespace greentrans
