#pragma once

#include <string>
#include <vector>

#include "model.hpp"

namespace adyn {

enum class CanonicalForm { general, symmetric, phenotypic };
CanonicalForm canonical_form_from_string(const std::string& s);
const char* to_string(CanonicalForm form);

// How the phenotypic mutational variance is reported. Both conventions give
// the same right-hand side:
//   heterozygote: V_p = (d1 phi)^2 V_a,       rhs = n V_p d1 S~
//   homozygote:   V_p = (2 d1 phi)^2 V_a,     rhs = n (V_p / 4) d1 S~
enum class VpConvention { heterozygote, homozygote };
VpConvention vp_convention_from_string(const std::string& s);
const char* to_string(VpConvention c);

// The right-hand sides are written on the rescaled time t / sigma^2 with the
// unit-scale mutation law m on [-1, 1]. With fertility_prefactor set every
// form is multiplied by f(u, u).
struct CanonicalOptions {
  bool fertility_prefactor = false;
  VpConvention vp = VpConvention::heterozygote;
};

// d1 S(u; u). At the trait-space boundary the difference is one-sided and
// *one_sided is set when given.
double fitness_gradient(const DemographyModel& model, double u, bool* one_sided = nullptr);

// V_a: second moment of the unit mutation law, by quadrature.
double allelic_variance(const DemographyModel& model);

double canonical_rhs_general(const DemographyModel& model, double u, const CanonicalOptions& opt = {});
double canonical_rhs_symmetric(const DemographyModel& model, double u, const CanonicalOptions& opt = {});

// S~(psi; U) on phenotypes and its derivative in psi at psi = U.
double phenotypic_fitness(const DemographyModel& model, double psi, double U);
double phenotypic_fitness_gradient(const DemographyModel& model, double U);
double phenotypic_variance(const DemographyModel& model, double u, VpConvention c);

// Inverse of u -> phi(u, u); throws DomainError if that map is not strictly
// monotone on the trait space or U lies outside its range.
double allele_for_phenotype(const DemographyModel& model, double U);
double canonical_rhs_phenotypic(const DemographyModel& model, double U, const CanonicalOptions& opt = {});

struct CanonicalTrajectory {
  std::vector<double> t;
  std::vector<double> u;
  std::vector<double> U;
  std::vector<double> rhs;       // du/dt, or dU/dt for the phenotypic form
  std::vector<double> gradient;  // d1 S(u; u)
  bool ess_reached = false;
  bool boundary_hit = false;

  // Linear interpolation of u; constant beyond the last point.
  double u_at(double time) const;
};

struct CanonicalIntegration {
  double horizon = 1.0;
  double record_dt = 0.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double stop_rhs = 1e-10;
};

CanonicalTrajectory integrate_canonical(const DemographyModel& model, double u0, CanonicalForm form,
                                        const CanonicalIntegration& integ, const CanonicalOptions& opt = {});

}  // namespace adyn
