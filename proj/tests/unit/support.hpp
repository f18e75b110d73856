#pragma once

#include <cmath>
#include <string>

#include "model.hpp"
#include "scenario.hpp"

namespace testing {

inline adyn::Json fixture(const std::string& name) {
  return adyn::load_json_file(std::string(ADYN_FIXTURE_DIR) + "/" + name);
}

inline adyn::DemographyModel model_of(const adyn::Json& j) { return adyn::DemographyModel::from_json(j); }

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Directional scenario used across modules: additive phi on [0,1], f = 2 + phi,
// D = 1, C = 1, so that d1 S(u;u) = 1/2 and nbar(u) = 1 + u.
inline adyn::DemographyModel directional(double sigma = 0.02, double mu_K = 0.0, std::int64_t K = 1000) {
  adyn::DemographyModel m;
  m.fertility_fn = adyn::PhenotypeFunction::linear(2.0, 1.0);
  m.sigma = sigma;
  m.mu_K = mu_K;
  m.K = K;
  m.validate();
  return m;
}

// Constant f = 2, D = 1, C = 1 on [0, 1]: neutral, nbar = 1.
inline adyn::DemographyModel neutral_constant(std::int64_t K = 1000) {
  adyn::DemographyModel m;
  m.K = K;
  m.validate();
  return m;
}

}  // namespace testing
