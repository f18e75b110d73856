#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace adyn {

namespace {

double require_number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

double optional_number(const Json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

// Every key of `given` must appear in the canonical form of what was parsed.
void reject_unknown(const Json& given, const Json& canonical, const std::string& where) {
  if (!given.is_object()) return;
  for (const auto& [key, v] : given.items()) {
    if (!canonical.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
    if (v.is_object()) reject_unknown(v, canonical.at(key), where + "." + key);
  }
}

std::string require_family(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw ConfigError(where + ": missing string field 'family'");
  return j.at("family").get<std::string>();
}

std::vector<double> require_array(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ConfigError(where + ": missing array field '" + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- phenotype

PhenotypeMap PhenotypeMap::additive() { return {}; }

PhenotypeMap PhenotypeMap::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw ConfigError("phenotype.polynomial: empty coefficient list");
  PhenotypeMap p;
  p.kind_ = Kind::polynomial;
  p.coefficients_ = std::move(coefficients);
  return p;
}

PhenotypeMap PhenotypeMap::quadratic_dominance(double d) {
  PhenotypeMap p;
  p.kind_ = Kind::quadratic_dominance;
  p.dominance_ = d;
  return p;
}

double PhenotypeMap::operator()(double u1, double u2) const {
  const double m = 0.5 * (u1 + u2);
  switch (kind_) {
    case Kind::additive:
      return m;
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * m + *it;
      return acc;
    }
    case Kind::quadratic_dominance:
      return m + dominance_ * (u1 - u2) * (u1 - u2);
  }
  return m;
}

double PhenotypeMap::d1(double u1, double u2) const {
  const double m = 0.5 * (u1 + u2);
  switch (kind_) {
    case Kind::additive:
      return 0.5;
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = coefficients_.size() - 1; k >= 1; --k)
        acc = acc * m + static_cast<double>(k) * coefficients_[k];
      return 0.5 * acc;
    }
    case Kind::quadratic_dominance:
      return 0.5 + 2.0 * dominance_ * (u1 - u2);
  }
  return 0.5;
}

PhenotypeMap PhenotypeMap::from_json(const Json& j) {
  const std::string where = "model.phenotype";
  const auto family = require_family(j, where);
  if (family == "additive") return additive();
  if (family == "polynomial") return polynomial(require_array(j, "coefficients", where));
  if (family == "quadratic_dominance") return quadratic_dominance(require_number(j, "d", where));
  throw ConfigError(where + ": unknown family '" + family + "'");
}

Json PhenotypeMap::to_json() const {
  switch (kind_) {
    case Kind::additive:
      return {{"family", "additive"}};
    case Kind::polynomial:
      return {{"family", "polynomial"}, {"coefficients", coefficients_}};
    case Kind::quadratic_dominance:
      return {{"family", "quadratic_dominance"}, {"d", dominance_}};
  }
  return {};
}

// ------------------------------------------------------- phenotype function

PhenotypeFunction PhenotypeFunction::constant(double value) {
  PhenotypeFunction f;
  f.kind_ = Kind::constant;
  f.params_ = {value};
  return f;
}

PhenotypeFunction PhenotypeFunction::linear(double intercept, double slope) {
  PhenotypeFunction f;
  f.kind_ = Kind::linear;
  f.params_ = {intercept, slope};
  return f;
}

PhenotypeFunction PhenotypeFunction::gaussian(double base, double amplitude, double center,
                                              double width) {
  if (!(width > 0.0)) throw ConfigError("gaussian family: width must be positive");
  PhenotypeFunction f;
  f.kind_ = Kind::gaussian;
  f.params_ = {base, amplitude, center, width};
  return f;
}

PhenotypeFunction PhenotypeFunction::spline(std::vector<double> phenotypes,
                                            std::vector<double> values) {
  if (phenotypes.size() != values.size())
    throw ConfigError("spline family: phenotypes and values differ in length");
  if (phenotypes.size() < 4) throw ConfigError("spline family: at least four knots required");
  for (std::size_t i = 1; i < phenotypes.size(); ++i)
    if (!(phenotypes[i] > phenotypes[i - 1]))
      throw ConfigError("spline family: knots must be strictly increasing");
  PhenotypeFunction f;
  f.kind_ = Kind::spline;
  f.knots_ = phenotypes;
  f.values_ = values;
  auto interp = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(phenotypes), std::move(values));
  f.interpolant_ = std::make_shared<const std::function<double(double)>>(
      [interp](double x) { return (*interp)(x); });
  return f;
}

double PhenotypeFunction::operator()(double phi) const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::linear:
      return params_[0] + params_[1] * phi;
    case Kind::gaussian: {
      const double z = (phi - params_[2]) / params_[3];
      return params_[0] + params_[1] * std::exp(-0.5 * z * z);
    }
    case Kind::spline: {
      const double x = std::clamp(phi, knots_.front(), knots_.back());
      return (*interpolant_)(x);
    }
  }
  return 0.0;
}

PhenotypeFunction PhenotypeFunction::from_json(const Json& j) {
  const std::string where = "function";
  const auto family = require_family(j, where);
  if (family == "constant") return constant(require_number(j, "value", where));
  if (family == "linear")
    return linear(require_number(j, "intercept", where), require_number(j, "slope", where));
  if (family == "gaussian")
    return gaussian(optional_number(j, "base", 0.0, where), require_number(j, "amplitude", where),
                    require_number(j, "center", where), require_number(j, "width", where));
  if (family == "spline")
    return spline(require_array(j, "phenotypes", where), require_array(j, "values", where));
  throw ConfigError(where + ": unknown family '" + family + "'");
}

Json PhenotypeFunction::to_json() const {
  switch (kind_) {
    case Kind::constant:
      return {{"family", "constant"}, {"value", params_[0]}};
    case Kind::linear:
      return {{"family", "linear"}, {"intercept", params_[0]}, {"slope", params_[1]}};
    case Kind::gaussian:
      return {{"family", "gaussian"},
              {"base", params_[0]},
              {"amplitude", params_[1]},
              {"center", params_[2]},
              {"width", params_[3]}};
    case Kind::spline:
      return {{"family", "spline"}, {"phenotypes", knots_}, {"values", values_}};
  }
  return {};
}

// --------------------------------------------------------------- competition

void GaussianKernelParams::validate() const {
  if (!(r_bar > 0.0) || !(sigma_a > 0.0) || !(sigma_k > 0.0))
    throw ConfigError("gaussian_kernel: r_bar, sigma_a and sigma_k must be positive");
}

double gaussian_competition(const GaussianKernelParams& p, double phi_focal, double phi_other) {
  const double da = phi_focal - phi_other;
  const double dk = phi_focal - p.phi_0;
  return p.r_bar * std::exp(-da * da / (2.0 * p.sigma_a * p.sigma_a) +
                            dk * dk / (2.0 * p.sigma_k * p.sigma_k));
}

CompetitionKernel CompetitionKernel::constant(double value) {
  CompetitionKernel c;
  c.kind_ = Kind::constant;
  c.value_ = value;
  return c;
}

CompetitionKernel CompetitionKernel::gaussian(GaussianKernelParams params) {
  params.validate();
  CompetitionKernel c;
  c.kind_ = Kind::gaussian_kernel;
  c.gaussian_ = params;
  return c;
}

CompetitionKernel CompetitionKernel::focal(PhenotypeFunction g) {
  CompetitionKernel c;
  c.kind_ = Kind::focal;
  c.focal_ = std::move(g);
  return c;
}

double CompetitionKernel::operator()(double phi_focal, double phi_other) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::gaussian_kernel:
      return gaussian_competition(gaussian_, phi_focal, phi_other);
    case Kind::focal:
      return focal_(phi_focal);
  }
  return value_;
}

CompetitionKernel CompetitionKernel::from_json(const Json& j) {
  const std::string where = "model.competition";
  const auto family = require_family(j, where);
  if (family == "constant") return constant(require_number(j, "value", where));
  if (family == "gaussian_kernel") {
    GaussianKernelParams p;
    p.r_bar = require_number(j, "r_bar", where);
    p.sigma_a = require_number(j, "sigma_a", where);
    p.sigma_k = require_number(j, "sigma_k", where);
    p.phi_0 = require_number(j, "phi_0", where);
    return gaussian(p);
  }
  if (family == "focal") {
    if (!j.contains("function")) throw ConfigError(where + ": focal family needs 'function'");
    return focal(PhenotypeFunction::from_json(j.at("function")));
  }
  throw ConfigError(where + ": unknown family '" + family + "'");
}

Json CompetitionKernel::to_json() const {
  switch (kind_) {
    case Kind::constant:
      return {{"family", "constant"}, {"value", value_}};
    case Kind::gaussian_kernel:
      return {{"family", "gaussian_kernel"},
              {"r_bar", gaussian_.r_bar},
              {"sigma_a", gaussian_.sigma_a},
              {"sigma_k", gaussian_.sigma_k},
              {"phi_0", gaussian_.phi_0}};
    case Kind::focal:
      return {{"family", "focal"}, {"function", focal_.to_json()}};
  }
  return {};
}

// ------------------------------------------------------------------ mutation

MutationLaw MutationLaw::uniform() { return {}; }

MutationLaw MutationLaw::skewed_uniform(double right_mass) {
  if (!(right_mass > 0.0 && right_mass < 1.0))
    throw ConfigError("mutation.right_mass must lie in (0, 1)");
  MutationLaw m;
  m.kind_ = Kind::skewed_uniform;
  m.right_mass_ = right_mass;
  return m;
}

double MutationLaw::density(double t) const {
  if (t < -1.0 || t > 1.0) return 0.0;
  return t >= 0.0 ? right_mass_ : 1.0 - right_mass_;
}

double MutationLaw::cdf(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t < 0.0) return (1.0 - right_mass_) * (t + 1.0);
  return (1.0 - right_mass_) + right_mass_ * t;
}

double MutationLaw::quantile(double p) const {
  const double left = 1.0 - right_mass_;
  if (p <= 0.0) return -1.0;
  if (p >= 1.0) return 1.0;
  if (p < left) return p / left - 1.0;
  return (p - left) / right_mass_;
}

MutationLaw MutationLaw::from_json(const Json& j) {
  const std::string where = "model.mutation";
  if (!j.contains("law")) return uniform();
  const auto law = j.at("law").get<std::string>();
  if (law == "uniform") return uniform();
  if (law == "skewed_uniform") return skewed_uniform(require_number(j, "right_mass", where));
  throw ConfigError(where + ": unknown law '" + law + "'");
}

Json MutationLaw::to_json() const {
  if (kind_ == Kind::uniform) return {{"law", "uniform"}};
  return {{"law", "skewed_uniform"}, {"right_mass", right_mass_}};
}

// -------------------------------------------------------------------- model

void DemographyModel::check_allele(double u) const {
  if (!space.contains(u)) {
    std::ostringstream os;
    os << "allelic trait " << u << " outside trait space [" << space.lo << ", " << space.hi << "]";
    throw DomainError(os.str());
  }
}

double DemographyModel::phenotype(const Genotype& g) const {
  check_allele(g.first());
  check_allele(g.second());
  return phi(g.first(), g.second());
}

double DemographyModel::fertility(const Genotype& g) const {
  return fertility_fn(phi(g.first(), g.second()));
}

double DemographyModel::death(const Genotype& g) const {
  return death_fn(phi(g.first(), g.second()));
}

double DemographyModel::competition(const Genotype& focal, const Genotype& other) const {
  return competition_fn(phi(focal.first(), focal.second()), phi(other.first(), other.second()));
}

double DemographyModel::carrying_capacity(double u) const {
  const auto g = Genotype::homozygote(u);
  const double c = competition(g, g);
  if (!(c > 0.0)) throw DomainError("carrying capacity undefined: C(uu, uu) <= 0");
  return (fertility(g) - death(g)) / c;
}

std::pair<double, double> DemographyModel::step_bounds(double u) const {
  return {std::max(-sigma, space.lo - u), std::min(sigma, space.hi - u)};
}

double DemographyModel::mutation_density(double u, double h) const {
  const auto [lo, hi] = step_bounds(u);
  if (h < lo || h > hi) return 0.0;
  const double z = mutation.cdf(hi / sigma) - mutation.cdf(lo / sigma);
  return mutation.density(h / sigma) / (sigma * z);
}

double DemographyModel::mutation_cdf(double u, double h) const {
  const auto [lo, hi] = step_bounds(u);
  if (h <= lo) return 0.0;
  if (h >= hi) return 1.0;
  const double c0 = mutation.cdf(lo / sigma);
  const double z = mutation.cdf(hi / sigma) - c0;
  return (mutation.cdf(h / sigma) - c0) / z;
}

double DemographyModel::sample_mutation_step(double u, Rng& rng) const {
  check_allele(u);
  const auto [lo, hi] = step_bounds(u);
  const double c0 = mutation.cdf(lo / sigma);
  const double z = mutation.cdf(hi / sigma) - c0;
  if (!(z > 0.0)) throw NumericalError("empty admissible mutation support");
  const double h = sigma * mutation.quantile(c0 + rng.uniform() * z);
  return std::clamp(h, lo, hi);
}

ModelBounds DemographyModel::scan_bounds(int alleles) const {
  std::vector<Genotype> grid;
  for (int i = 0; i < alleles; ++i)
    for (int j = i; j < alleles; ++j) {
      const double ui = space.lo + space.width() * i / (alleles - 1);
      const double uj = space.lo + space.width() * j / (alleles - 1);
      grid.emplace_back(ui, uj);
    }
  ModelBounds b;
  b.c_min = std::numeric_limits<double>::infinity();
  b.r_min = std::numeric_limits<double>::infinity();
  double f_min = std::numeric_limits<double>::infinity();
  double d_min = std::numeric_limits<double>::infinity();
  for (const auto& g : grid) {
    const double f = fertility(g);
    const double d = death(g);
    f_min = std::min(f_min, f);
    d_min = std::min(d_min, d);
    b.f_max = std::max(b.f_max, f);
    b.d_max = std::max(b.d_max, d);
    b.r_min = std::min(b.r_min, f - d);
    for (const auto& h : grid) {
      const double c = competition(g, h);
      b.c_min = std::min(b.c_min, c);
      b.c_max = std::max(b.c_max, c);
    }
  }
  if (f_min < 0.0) b.f_max = -1.0;  // flags negative fertility to validate()
  if (d_min < 0.0) b.d_max = -1.0;
  return b;
}

void DemographyModel::validate() const {
  if (!(space.lo < space.hi)) throw ConfigError("model.trait_space: min must be < max");
  if (!(sigma > 0.0)) throw ConfigError("model.mutation.sigma must be positive");
  if (!(mu_K >= 0.0 && mu_K <= 1.0)) throw ConfigError("model.mu_K must lie in [0, 1]");
  if (K < 1) throw ConfigError("model.K must be a positive integer");
  const auto b = scan_bounds();
  if (b.f_max < 0.0) throw ConfigError("model.fertility: negative values on the trait space");
  if (b.d_max < 0.0) throw ConfigError("model.death: negative values on the trait space");
  if (!(b.r_min > 0.0))
    throw ConfigError("model: r = f - D must be positive on the whole trait space");
  if (!(b.c_min > 0.0))
    throw ConfigError("model.competition: kernel must be bounded below by a positive constant");
  if (declared.f_max > 0.0 && b.f_max > declared.f_max)
    throw ConfigError("model.bounds.f_max violated on the trait space");
  if (declared.d_max > 0.0 && b.d_max > declared.d_max)
    throw ConfigError("model.bounds.d_max violated on the trait space");
  if (declared.c_max > 0.0 && b.c_max > declared.c_max)
    throw ConfigError("model.bounds.c_max violated on the trait space");
  if (declared.c_min > 0.0 && b.c_min < declared.c_min)
    throw ConfigError("model.bounds.c_min violated on the trait space");
  // The unit law must integrate to one; piecewise-constant laws are checked
  // on their CDF.
  if (std::abs(mutation.cdf(1.0) - mutation.cdf(-1.0) - 1.0) > 1e-12)
    throw ConfigError("model.mutation: law does not integrate to one");
}

DemographyModel DemographyModel::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("model: expected an object");
  static const std::set<std::string> known{"trait_space", "phenotype", "fertility", "death", "competition",
                                           "mutation", "mu_K", "K", "bounds"};
  for (const auto& [key, v] : j.items())
    if (!known.contains(key)) throw ConfigError("model: unknown field '" + key + "'");
  DemographyModel m;
  if (j.contains("trait_space")) {
    const auto& ts = j.at("trait_space");
    m.space.lo = require_number(ts, "min", "model.trait_space");
    m.space.hi = require_number(ts, "max", "model.trait_space");
  }
  if (j.contains("phenotype")) m.phi = PhenotypeMap::from_json(j.at("phenotype"));
  if (j.contains("fertility")) m.fertility_fn = PhenotypeFunction::from_json(j.at("fertility"));
  if (j.contains("death")) m.death_fn = PhenotypeFunction::from_json(j.at("death"));
  if (j.contains("competition")) m.competition_fn = CompetitionKernel::from_json(j.at("competition"));
  if (j.contains("mutation")) {
    const auto& mj = j.at("mutation");
    m.mutation = MutationLaw::from_json(mj);
    m.sigma = optional_number(mj, "sigma", m.sigma, "model.mutation");
  }
  {
    Json canonical = m.to_json();
    canonical["mutation"]["right_mass"] = 0.5;
    canonical["bounds"] = {{"f_max", 0}, {"d_max", 0}, {"c_max", 0}, {"c_min", 0}};
    reject_unknown(j, canonical, "model");
  }
  m.mu_K = optional_number(j, "mu_K", m.mu_K, "model");
  if (j.contains("K")) {
    if (!j.at("K").is_number()) throw ConfigError("model.K: expected a number");
    const double k = j.at("K").get<double>();
    if (k != std::floor(k)) throw ConfigError("model.K: expected an integer");
    m.K = static_cast<std::int64_t>(k);
  }
  if (j.contains("bounds")) {
    const auto& bj = j.at("bounds");
    m.declared.f_max = optional_number(bj, "f_max", 0.0, "model.bounds");
    m.declared.d_max = optional_number(bj, "d_max", 0.0, "model.bounds");
    m.declared.c_max = optional_number(bj, "c_max", 0.0, "model.bounds");
    m.declared.c_min = optional_number(bj, "c_min", 0.0, "model.bounds");
  }
  m.validate();
  return m;
}

Json DemographyModel::to_json() const {
  Json mj = mutation.to_json();
  mj["sigma"] = sigma;
  Json j = {{"trait_space", {{"min", space.lo}, {"max", space.hi}}},
            {"phenotype", phi.to_json()},
            {"fertility", fertility_fn.to_json()},
            {"death", death_fn.to_json()},
            {"competition", competition_fn.to_json()},
            {"mutation", mj},
            {"mu_K", mu_K},
            {"K", K}};
  Json bj = Json::object();
  if (declared.f_max > 0.0) bj["f_max"] = declared.f_max;
  if (declared.d_max > 0.0) bj["d_max"] = declared.d_max;
  if (declared.c_max > 0.0) bj["c_max"] = declared.c_max;
  if (declared.c_min > 0.0) bj["c_min"] = declared.c_min;
  if (!bj.empty()) j["bounds"] = bj;
  return j;
}

}  // namespace adyn
