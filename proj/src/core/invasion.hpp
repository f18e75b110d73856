#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynamics.hpp"
#include "ibm.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace adyn {

// Linear bi-type birth-death chain of a rare mutant lineage in an AA
// resident at n_AA: an Aa individual gives Aa births at rate f_Aa and dies
// at d_Aa = D_Aa + C_{Aa,AA} n_AA; an aa individual gives Aa births at
// rate 2 f_aa and dies at d_aa = D_aa + C_{aa,AA} n_AA; no aa births.
struct BranchingSpec {
  double f_Aa = 0.0;
  double f_aa = 0.0;
  double d_Aa = 0.0;
  double d_aa = 0.0;

  static BranchingSpec from(const DimorphicModel& dm);
  void validate() const;
};

// [S_{Aa,AA}]_+ / f_Aa.
double survival_probability(const DimorphicModel& dm);

// (q1, q2): extinction probabilities by time t from one Aa or one aa founder.
std::array<double, 2> extinction_ode_rhs(const std::array<double, 2>& q, const BranchingSpec& spec);

struct ExtinctionLimit {
  std::array<double, 2> q{};
  double horizon = 0.0;
  double residual = 0.0;     // |rhs| at the end point
  bool monotone = true;      // both coordinates nondecreasing along the path
};

// Integrates from (0, 0) to 50 / min(positive rates) unless horizon > 0.
ExtinctionLimit integrate_extinction(const BranchingSpec& spec, double horizon = 0.0);

enum class Founder { Aa, aa };

struct BranchingOutcome {
  bool extinct = false;
  bool reached_threshold = false;
  bool censored = false;
  std::uint64_t events = 0;
  double time = 0.0;
  std::int64_t births_aa = 0;
};

BranchingOutcome simulate_branching(const BranchingSpec& spec, Founder founder, std::int64_t threshold, Rng& rng,
                                    std::uint64_t max_events = 100'000'000ULL);

struct ProportionEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  std::int64_t censored = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
};

ProportionEstimate proportion(std::int64_t successes, std::int64_t trials, std::int64_t censored = 0);

// Single invasion attempt in the full IBM: floor(K n_AA) AA individuals
// plus one Aa, mutation switched off, until the mutant individuals (Aa +
// aa) reach K epsilon or the mutant allele is lost.
struct InvasionAttempt {
  bool invaded = false;
  bool lost = false;
  bool censored = false;
  double time = 0.0;
};

InvasionAttempt invasion_attempt(const DemographyModel& model, double u_A, double u_a, std::int64_t K,
                                 double epsilon, Rng& rng, std::uint64_t max_events = 500'000'000ULL);

// Replicate r uses Rng::stream(seed, r); the result does not depend on the
// number of threads.
ProportionEstimate monte_carlo_invasion(const DemographyModel& model, double u_A, double u_a, std::int64_t K,
                                        std::int64_t replicates, double epsilon, std::uint64_t seed,
                                        int threads = 1);

struct PhaseSplit {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

// t1: first time y + z >= eps; t2: first time max(x, y, |z - n_aa|) <= eps
// (capped at t3); t3: first time x = y = 0. nullopt if the run never fixed.
std::optional<PhaseSplit> three_phase_split(const std::vector<double>& t, const std::vector<Vec3>& xyz,
                                            double epsilon, double n_aa);

// IBM run from floor(K n_AA) AA + one Aa, no mutation, recorded every
// record_dt and stopped at fixation of a (A allele count zero) or loss of a.
struct InvasionRun {
  std::vector<double> t;
  std::vector<Vec3> xyz;
  bool fixed = false;
  bool lost = false;
  bool truncated = false;
};

InvasionRun simulate_invasion(const DemographyModel& model, double u_A, double u_a, std::int64_t K, Rng& rng,
                              double record_dt = 0.01, double max_time = 1e6,
                              std::uint64_t max_events = 2'000'000'000ULL);

struct ExitRow {
  std::int64_t K = 0;
  std::int64_t exits = 0;
  std::int64_t replicates = 0;
  double frequency = 0.0;
};

// Fraction of monomorphic runs started at n_AA whose density leaves
// [n_AA - eps, n_AA + eps] before the horizon. A nonzero perturbation adds
// c * eps * xi to every death rate, xi uniform on [-1, 1] drawn per replicate.
std::vector<ExitRow> exit_time_scaling(const DemographyModel& model, double u_A, double epsilon,
                                       const std::vector<std::int64_t>& K_list, double horizon,
                                       std::int64_t replicates, std::uint64_t seed, double perturbation_c = 0.0,
                                       int threads = 1);

}  // namespace adyn
