#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "dynamics.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace adyn {

// Two-allele IBM (no mutation) against the three-genotype ODE from the same
// initial densities, compared on a regular time grid.
struct IbmOdeSetup {
  double u_A = 0.0;
  double u_a = 0.0;
  Vec3 initial{};  // densities of AA, Aa, aa
  double horizon = 20.0;
  double record_dt = 0.05;
};

// sup over the grid of the max-norm distance between IBM densities and the
// ODE solution started from the IBM's (integer-rounded) initial densities.
double ibm_ode_sup_error(const DemographyModel& model, const IbmOdeSetup& setup, std::int64_t K, Rng& rng);

struct IbmOdeRow {
  std::int64_t K = 0;
  std::vector<double> errors;
  double median = 0.0;
  double mean = 0.0;
};

std::vector<IbmOdeRow> ibm_ode_ladder(const DemographyModel& model, const IbmOdeSetup& setup,
                                      const std::vector<std::int64_t>& K_list, std::int64_t replicates,
                                      std::uint64_t seed, int threads = 1);

// TSS runs against the canonical equation on the rescaled clock t / sigma^2.
struct TssCanonicalSetup {
  double u0 = 0.0;
  double horizon = 1.0;  // rescaled time
  int grid = 200;        // comparison points over [0, horizon]
  double eta = 0.0;
  CanonicalForm form = CanonicalForm::general;
  CanonicalOptions options;
};

struct TssCanonicalRow {
  double sigma = 0.0;
  std::int64_t replicates = 0;
  std::int64_t stopped = 0;
  std::int64_t absorbed = 0;
  // sup_k |mean TSS path - canonical| / trait-space width
  double distance = 0.0;
  // M1 modulus of the mean TSS path (trait units) at delta = horizon / 10.
  double m1 = 0.0;
  std::vector<double> times;
  std::vector<double> mean_path;
  std::vector<double> canonical_path;
};

TssCanonicalRow tss_canonical_distance(const DemographyModel& model, double sigma, const TssCanonicalSetup& setup,
                                       std::int64_t replicates, std::uint64_t seed, int threads = 1);

// Largest absolute difference between the numeric cells of two CSV files
// with identical headers and row counts.
double csv_distance(const std::string& path_a, const std::string& path_b);

}  // namespace adyn
