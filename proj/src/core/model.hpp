#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace adyn {

class Rng;

using Json = nlohmann::json;

// The allelic trait space, a closed bounded interval.
struct TraitSpace {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double u) const { return u >= lo && u <= hi; }
  double width() const { return hi - lo; }
};

// Unordered pair of allelic traits, stored with first() <= second().
class Genotype {
 public:
  Genotype() = default;
  Genotype(double u1, double u2) : a_(u1 < u2 ? u1 : u2), b_(u1 < u2 ? u2 : u1) {}

  static Genotype homozygote(double u) { return {u, u}; }

  double first() const { return a_; }
  double second() const { return b_; }
  bool homozygous() const { return a_ == b_; }

  auto operator<=>(const Genotype&) const = default;

 private:
  double a_ = 0.0;
  double b_ = 0.0;
};

// Genotype-to-phenotype map phi(u1, u2). All families are symmetric.
//   additive:            (u1 + u2) / 2
//   polynomial:          sum_k c_k m^k with m = (u1 + u2) / 2
//   quadratic_dominance: (u1 + u2) / 2 + d (u1 - u2)^2
class PhenotypeMap {
 public:
  enum class Kind { additive, polynomial, quadratic_dominance };

  PhenotypeMap() = default;
  static PhenotypeMap additive();
  static PhenotypeMap polynomial(std::vector<double> coefficients);
  static PhenotypeMap quadratic_dominance(double d);

  double operator()(double u1, double u2) const;
  // Partial derivative with respect to the first allele.
  double d1(double u1, double u2) const;

  Kind kind() const { return kind_; }

  static PhenotypeMap from_json(const Json& j);
  Json to_json() const;

 private:
  Kind kind_ = Kind::additive;
  std::vector<double> coefficients_;
  double dominance_ = 0.0;
};

// A scalar function of phenotype, used for fertility and background death.
//   constant: value
//   linear:   intercept + slope * phi
//   gaussian: base + amplitude * exp(-(phi - center)^2 / (2 width^2))
//   spline:   piecewise-cubic Hermite (pchip) through tabulated points,
//             constant beyond the end knots
class PhenotypeFunction {
 public:
  enum class Kind { constant, linear, gaussian, spline };

  PhenotypeFunction() = default;
  static PhenotypeFunction constant(double value);
  static PhenotypeFunction linear(double intercept, double slope);
  static PhenotypeFunction gaussian(double base, double amplitude, double center, double width);
  static PhenotypeFunction spline(std::vector<double> phenotypes, std::vector<double> values);

  double operator()(double phi) const;
  Kind kind() const { return kind_; }

  static PhenotypeFunction from_json(const Json& j);
  Json to_json() const;

 private:
  Kind kind_ = Kind::constant;
  std::vector<double> params_;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::shared_ptr<const std::function<double(double)>> interpolant_;
};

struct GaussianKernelParams {
  double r_bar = 1.0;
  double sigma_a = 1.0;
  double sigma_k = 1.0;
  double phi_0 = 0.0;

  void validate() const;
};

// r_bar * exp(-(phi_focal - phi_other)^2 / (2 sigma_a^2)
//             + (phi_focal - phi_0)^2 / (2 sigma_k^2)).
// Not symmetric in (focal, other).
double gaussian_competition(const GaussianKernelParams& params, double phi_focal, double phi_other);

// Competition kernel C(focal, other) expressed on phenotypes.
//   constant:        value
//   gaussian_kernel: gaussian_competition(...)
//   focal:           g(phi_focal), independent of the competitor
class CompetitionKernel {
 public:
  enum class Kind { constant, gaussian_kernel, focal };

  CompetitionKernel() = default;
  static CompetitionKernel constant(double value);
  static CompetitionKernel gaussian(GaussianKernelParams params);
  static CompetitionKernel focal(PhenotypeFunction g);

  double operator()(double phi_focal, double phi_other) const;
  Kind kind() const { return kind_; }
  const GaussianKernelParams& gaussian_params() const { return gaussian_; }

  static CompetitionKernel from_json(const Json& j);
  Json to_json() const;

 private:
  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  GaussianKernelParams gaussian_;
  PhenotypeFunction focal_;
};

// Unit-scale mutation law m(h) on [-1, 1]. `skewed_uniform` puts mass
// right_mass uniformly on [0, 1] and the rest uniformly on [-1, 0); the
// plain uniform law is right_mass = 1/2. Every member has second moment 1/3.
class MutationLaw {
 public:
  enum class Kind { uniform, skewed_uniform };

  MutationLaw() = default;
  static MutationLaw uniform();
  static MutationLaw skewed_uniform(double right_mass);

  double density(double t) const;
  double cdf(double t) const;
  double quantile(double p) const;
  bool symmetric() const { return right_mass_ == 0.5; }
  double right_mass() const { return right_mass_; }
  double second_moment() const { return 1.0 / 3.0; }

  Kind kind() const { return kind_; }
  static MutationLaw from_json(const Json& j);
  Json to_json() const;

 private:
  Kind kind_ = Kind::uniform;
  double right_mass_ = 0.5;
};

struct ModelBounds {
  double f_max = 0.0;
  double d_max = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  double r_min = 0.0;
};

// The demographic model: trait space, phenotype map, f, D, C, mutation law
// and the scaling parameters sigma, mu_K and K. Immutable once built.
class DemographyModel {
 public:
  TraitSpace space;
  PhenotypeMap phi;
  PhenotypeFunction fertility_fn = PhenotypeFunction::constant(2.0);
  PhenotypeFunction death_fn = PhenotypeFunction::constant(1.0);
  CompetitionKernel competition_fn = CompetitionKernel::constant(1.0);
  MutationLaw mutation;
  double sigma = 0.05;
  double mu_K = 0.0;
  std::int64_t K = 1000;
  // Optional user-declared bounds (f_max, D_max, C_min, C_max); zero means
  // undeclared. Checked by validate().
  ModelBounds declared;

  double phenotype(const Genotype& g) const;
  double fertility(const Genotype& g) const;
  double death(const Genotype& g) const;
  double competition(const Genotype& focal, const Genotype& other) const;

  // Monomorphic equilibrium (f - D) / C at the homozygote (u, u).
  double carrying_capacity(double u) const;

  // Admissible step interval [lo, hi] for a mutation from allele u:
  // [-sigma, sigma] intersected with {h : u + h in space}.
  std::pair<double, double> step_bounds(double u) const;
  // m_sigma(u, h), renormalised over the admissible interval.
  double mutation_density(double u, double h) const;
  double mutation_cdf(double u, double h) const;
  double sample_mutation_step(double u, Rng& rng) const;

  // Scans f, D, C and r = f - D over a grid of genotypes.
  ModelBounds scan_bounds(int alleles = 21) const;
  // Throws ConfigError on any violated model assumption.
  void validate() const;

  static DemographyModel from_json(const Json& j);
  Json to_json() const;

 private:
  void check_allele(double u) const;
};

}  // namespace adyn
