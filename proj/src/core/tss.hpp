#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace adyn {

// f(u,u) n(u) [S(u+h; u)]_+ / f(u, u+h) * m_sigma(u, h).
double jump_rate_density(const DemographyModel& model, double u_A, double h);

// Jump law out of a frozen resident u_A: rate, CDF of the step and a
// rejection sampler. Quadrature is split at h = 0 and at every sign change
// of S(u_A + h; u_A) in the admissible step interval.
class JumpLaw {
 public:
  JumpLaw(const DemographyModel& model, double u_A);

  double u() const { return u_; }
  double total_rate() const { return total_; }
  double density(double h) const;
  // Integral of the density over [lo, h], divided by the total rate.
  double cdf(double h) const;
  // Sup over admissible h of density(h) / m_sigma(u, h) with a safety margin.
  double envelope() const { return envelope_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // Step h drawn from the normalised density; requires total_rate() > 0.
  double sample_step(Rng& rng) const;

 private:
  double integrate(double a, double b) const;
  double ratio(double h) const;

  const DemographyModel* model_;
  double u_;
  double lo_;
  double hi_;
  double prefactor_;  // f(u,u) n(u)
  std::vector<double> breaks_;
  std::vector<double> cumulative_;  // integral up to breaks_[k]
  double total_ = 0.0;
  double envelope_ = 0.0;
};

double total_jump_rate(const DemographyModel& model, double u_A);

struct JumpDraw {
  bool absorbed = false;  // zero total rate, no further jumps
  double wait = 0.0;
  double u_new = 0.0;
};

JumpDraw sample_jump(const DemographyModel& model, double u_A, Rng& rng);

enum class SingularKind { ecological, developmental };
const char* to_string(SingularKind kind);

struct SingularStrategy {
  double u = 0.0;
  SingularKind kind = SingularKind::ecological;
  double slope = 0.0;       // d/du of g1(u) = d1 S(u; u)
  bool degenerate = false;  // slope indistinguishable from zero
  bool boundary = false;
};

struct SingularReport {
  std::vector<SingularStrategy> points;
  // g1 vanishes on the whole grid; no isolated singular strategies.
  bool degenerate = false;
};

// Roots of g1(u) = d1 S(u; u) bracketed on a uniform grid of the trait
// space and refined by bisection.
SingularReport find_singular_strategies(const DemographyModel& model, int grid_resolution = 200,
                                        double developmental_tol = 1e-6);

struct TssJump {
  std::int64_t index = 0;
  double time = 0.0;
  double u = 0.0;
  double fitness = 0.0;  // S(u_new; u_old) at the jump; 0 for the initial row
};

struct TssTrajectory {
  std::vector<TssJump> jumps;  // jumps[0] is the initial state
  bool stopped = false;        // entered the eta-neighbourhood of J
  bool absorbed = false;       // total jump rate vanished
  double end_time = 0.0;

  // Piecewise-constant value at time t (last value beyond end_time).
  double value_at(double t) const;
};

struct TssOptions {
  double horizon = 1.0;
  double eta = 0.0;
  std::int64_t max_jumps = 10'000'000;
};

TssTrajectory simulate_tss(const DemographyModel& model, double u0, const std::vector<double>& singular_set,
                           const TssOptions& opt, Rng& rng);

// Discrete M1 continuity modulus of a sampled path; the sampling step must
// not exceed delta / 10.
double m1_modulus(const std::vector<double>& t, const std::vector<double>& x, double delta);

}  // namespace adyn
