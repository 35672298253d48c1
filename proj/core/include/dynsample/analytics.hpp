#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dynsample/distributions.hpp"

namespace dynsample::analytics {

// One rate band of the composition-rejection structure under a rate law.
struct BandCost {
  std::size_t index = 0;
  double lower = 0.0;       // effective lower edge, max(max/c^(i+1), min)
  double upper = 0.0;       // band ceiling max/c^i
  double count_mass = 0.0;  // fraction of outcomes whose rate falls in the band
  double mass = 0.0;        // probability the band is selected: its share of the total rate
  double acceptance = 0.0;  // per-trial acceptance inside the band: mean member rate / ceiling
};

struct CostPrediction {
  double p_accept = 1.0;           // overall per-trial acceptance, 1/expected_attempts
  double expected_attempts = 1.0;  // rejection trials per extraction
  double expected_select = 0.0;    // groups passed over before the chosen one
  double expected_total = 1.0;     // expected_select + expected_attempts
  std::size_t depth_d = 0;         // index of the band holding min
  // Same expectation from the summed algebraic expression.
  double closed_form_total = 1.0;
  // Leading-order growth of the extraction cost (asymptotic, min << max).
  double growth_model = 1.0;
  std::vector<BandCost> bands;
};

// Plain rejection against the global ceiling: p_f = E[rate] / max.
CostPrediction rejection_cost(const DistributionSpec& spec);

// Composition-rejection with group constant c > 1, evaluated band by band
// with the last band truncated at min, so the band masses sum to one:
//   E[t_ext] = sum_i mass_i * (i + 1/acceptance_i).
// The scan picks band i with probability (rate in band i) / (total rate).
CostPrediction cr_cost(const DistributionSpec& spec, double c);

// Closed-form value of cr_cost(spec, c).expected_total.
double cr_closed_form(const DistributionSpec& spec, double c);

// Growth model of the composition-rejection extraction cost:
//   uniform:     c/ln(c) * ln(max/min) * max/min
//   log-uniform: c/(c-1) ln(max/min) + ln(max/min)/(2 ln c) + ln^2(max/min)/(2 ln^2 c)
double cr_growth_model(const DistributionSpec& spec, double c);

// Minimiser of the growth model over c: e for uniform rates; the
// log-uniform model has no interior optimum worth reporting.
std::optional<double> optimal_c(const DistributionSpec& spec);

// d = floor(log_c(max/min)), computed with the sampler's band rule.
std::size_t depth(const DistributionSpec& spec, double c);

}  // namespace dynsample::analytics
