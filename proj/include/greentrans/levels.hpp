#pragma once

#include <utility>

#include "greentrans/dynamics.hpp"

namespace greentrans {

// Carry-over state: last period's brown output and healthcare provision,
// which determine this period's productivity multiplier.
struct EconomyState {
    double B_prev = 0.0;
    double H_prev = 0.0;
};

// One period's prices, quantities and labour allocation, given the marginal
// household j and the brown-good sales tax.
struct PeriodEquilibrium {
    double j = 0.0;    // marginal household (green share of households)
    double mu = 1.0;   // productivity multiplier inherited from last period
    double p = 1.0;    // green price in brown units (zero profit)
    double w = 1.0;    // wage
    double G = 0.0;    // green output
    double B = 0.0;    // brown output
    double H = 0.0;    // healthcare provision (= tax revenue)
    double l_g = 0.0;  // labour in green production
    double l_b = 0.0;  // labour in brown production
    double l_h = 0.0;  // labour in healthcare
};

enum class SseKind { brown, green };

// A stationary environment: either all-brown (j=0) or all-green (j=1).
struct SteadyState {
    SseKind kind = SseKind::brown;
    double j = 0.0;
    double output = 0.0;       // B* or G*
    double mu = 1.0;           // stationary productivity multiplier
    double healthcare = 0.0;   // H* = tau * B* (zero in the green state)
    double welfare = 0.0;      // aggregate stationary welfare
    double consumption_total = 0.0;
};

struct SseComparison {
    double tau = 0.0;
    double G_star = 0.0;
    double B_star = 0.0;
    double SW_green = 0.0;
    double SW_brown = 0.0;
    bool consumption_green_higher = false;
    bool welfare_green_higher = false;
    bool tech_condition = false;  // a_b <= a_g
    bool bistable = false;        // both endpoint states locally absorbing
};

// Prices, quantities and labour for one period. Zero profit pins p = a_b/a_g
// and w = mu * a_b; brown output carries the tax wedge so that goods, labour
// and the government budget all clear by construction.
PeriodEquilibrium period_equilibrium(double j, const EconomyState& state,
                                     double tau, const Economy& eco);

// (green, brown) consumption of household i when the marginal household is j.
// The indifferent household buys green.
std::pair<double, double> household_demand(double i, double j,
                                           const PeriodEquilibrium& eq,
                                           double tau);

// The all-brown stationary state: the unique root of
// B = mu(B, tau*B) * a_b / (1+tau) on [0, a_b/(1+tau)], found by bisection.
// Requires the damage elasticity condition on that bracket; throws
// std::domain_error naming the violating B otherwise.
SteadyState brown_steady_state(double tau, const Economy& eco);

// The all-green stationary state: G* = a_g, no brown output, mu = 1.
SteadyState green_steady_state(const Economy& eco);

// Aggregate stationary welfare of a steady state: B* for the brown state,
// lambda(inf) * mean(gamma) * G* for the green one.
double welfare(const SteadyState& ss, const Economy& eco);

// Side-by-side comparison of the two stationary states at tax rate tau.
// `bistable` reports whether both endpoints are locally absorbing; verdicts
// always come from the computed values.
SseComparison compare_sse(double tau, const Economy& eco);

// Aggregate utility over households for one period: green buyers contribute
// lambda_t * gamma(i) * w/p, brown buyers w/(1+tau).
double aggregate_utility(const PeriodEquilibrium& eq, double lambda_t,
                         double tau, const Economy& eco);

// Diagnostic for the stationarity equation B = mu(B, tau*B) * a_b / (1+tau):
// number of sign changes of the residual over a uniform grid on the bracket.
int brown_sse_crossing_count(double tau, const Economy& eco, int grid = 10'000);

}  // namespace greentrans
