#include "canonical.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "ode.hpp"
#include "quadrature.hpp"

namespace adyn {

CanonicalForm canonical_form_from_string(const std::string& s) {
  if (s == "general") return CanonicalForm::general;
  if (s == "symmetric") return CanonicalForm::symmetric;
  if (s == "phenotypic") return CanonicalForm::phenotypic;
  throw ConfigError("unknown canonical form '" + s + "' (expected general, symmetric or phenotypic)");
}

const char* to_string(CanonicalForm form) {
  switch (form) {
    case CanonicalForm::general: return "general";
    case CanonicalForm::symmetric: return "symmetric";
    case CanonicalForm::phenotypic: return "phenotypic";
  }
  return "?";
}

VpConvention vp_convention_from_string(const std::string& s) {
  if (s == "heterozygote") return VpConvention::heterozygote;
  if (s == "homozygote") return VpConvention::homozygote;
  throw ConfigError("unknown V_p convention '" + s + "' (expected heterozygote or homozygote)");
}

const char* to_string(VpConvention c) { return c == VpConvention::heterozygote ? "heterozygote" : "homozygote"; }

namespace {

double fitness_raw(const DemographyModel& model, double u_a, double u_A) {
  const Genotype res = Genotype::homozygote(u_A);
  const Genotype het(u_A, u_a);
  return model.fertility(het) - model.death(het) -
         model.competition(het, res) * model.carrying_capacity(u_A);
}

template <class F>
double quad(F f, double a, double b) {
  const auto q = integrate_adaptive(f, a, b, 1e-11);
  if (!std::isfinite(q.value) || q.error > 1e-9 * std::abs(q.value) + 1e-15)
    throw NumericalError("canonical quadrature did not reach tolerance");
  return q.value;
}

double prefactor(const DemographyModel& model, double u, const CanonicalOptions& opt) {
  return opt.fertility_prefactor ? model.fertility(Genotype::homozygote(u)) : 1.0;
}

}  // namespace

double fitness_gradient(const DemographyModel& model, double u, bool* one_sided) {
  model.phenotype(Genotype::homozygote(u));
  const double h = 1e-3 * model.space.width();
  const bool at_lo = u - h < model.space.lo;
  const bool at_hi = u + h > model.space.hi;
  if (one_sided) *one_sided = at_lo || at_hi;
  if (!at_lo && !at_hi) return invasion_fitness_slope(model, u);
  const double dir = at_lo ? 1.0 : -1.0;
  auto s = [&](double step) { return fitness_raw(model, u + dir * step, u); };
  auto forward = [&](double step) { return dir * (-3.0 * s(0.0) + 4.0 * s(step) - s(2.0 * step)) / (2.0 * step); };
  const double hh = 0.25 * h;
  return (4.0 * forward(0.5 * hh) - forward(hh)) / 3.0;
}

double allelic_variance(const DemographyModel& model) {
  auto m2 = [&](double t) { return t * t * model.mutation.density(t); };
  return quad(m2, -1.0, 0.0) + quad(m2, 0.0, 1.0);
}

double canonical_rhs_general(const DemographyModel& model, double u, const CanonicalOptions& opt) {
  const double g = fitness_gradient(model, u);
  auto integrand = [&](double t) { return t * std::max(t * g, 0.0) * model.mutation.density(t); };
  const double moment = quad(integrand, -1.0, 0.0) + quad(integrand, 0.0, 1.0);
  return prefactor(model, u, opt) * model.carrying_capacity(u) * moment;
}

double canonical_rhs_symmetric(const DemographyModel& model, double u, const CanonicalOptions& opt) {
  if (!model.mutation.symmetric())
    throw PreconditionError("symmetric canonical form requires a symmetric mutation law");
  return prefactor(model, u, opt) * 0.5 * model.carrying_capacity(u) * allelic_variance(model) *
         fitness_gradient(model, u);
}

double phenotypic_fitness(const DemographyModel& model, double psi, double U) {
  const double c_res = model.competition_fn(U, U);
  if (c_res == 0.0) throw DomainError("phenotypic fitness undefined: C(U, U) = 0");
  const double n_res = (model.fertility_fn(U) - model.death_fn(U)) / c_res;
  return model.fertility_fn(psi) - model.death_fn(psi) - model.competition_fn(psi, U) * n_res;
}

double phenotypic_fitness_gradient(const DemographyModel& model, double U) {
  const double range = std::abs(model.phi(model.space.hi, model.space.hi) - model.phi(model.space.lo, model.space.lo));
  const double h = 1e-3 * std::max(range, 1e-6);
  auto central = [&](double step) {
    return (phenotypic_fitness(model, U + step, U) - phenotypic_fitness(model, U - step, U)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double phenotypic_variance(const DemographyModel& model, double u, VpConvention c) {
  const double d1 = model.phi.d1(u, u);
  const double lift = c == VpConvention::heterozygote ? d1 : 2.0 * d1;
  return lift * lift * allelic_variance(model);
}

double allele_for_phenotype(const DemographyModel& model, double U) {
  const double lo = model.space.lo;
  const double w = model.space.width();
  const int n = 400;
  double prev = model.phi(lo, lo);
  int sign = 0;
  for (int i = 1; i <= n; ++i) {
    const double u = lo + w * i / n;
    const double cur = model.phi(u, u);
    const int s = cur > prev ? 1 : (cur < prev ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw DomainError("u -> phi(u, u) is not strictly monotone on the trait space");
    sign = s;
    prev = cur;
  }
  const double p_lo = model.phi(lo, lo);
  const double p_hi = model.phi(model.space.hi, model.space.hi);
  if (U < std::min(p_lo, p_hi) || U > std::max(p_lo, p_hi))
    throw DomainError("phenotype outside the range of u -> phi(u, u)");
  if (U == p_lo) return lo;
  if (U == p_hi) return model.space.hi;
  auto f = [&](double u) { return model.phi(u, u) - U; };
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, model.space.hi, p_lo - U, p_hi - U,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double canonical_rhs_phenotypic(const DemographyModel& model, double U, const CanonicalOptions& opt) {
  const double u = allele_for_phenotype(model, U);
  const double vp = phenotypic_variance(model, u, opt.vp);
  const double scale = opt.vp == VpConvention::heterozygote ? 1.0 : 0.25;
  return prefactor(model, u, opt) * model.carrying_capacity(u) * scale * vp *
         phenotypic_fitness_gradient(model, U);
}

double CanonicalTrajectory::u_at(double time) const {
  if (t.empty()) throw PreconditionError("empty canonical trajectory");
  if (time <= t.front()) return u.front();
  if (time >= t.back()) return u.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
  return u[k - 1] + w * (u[k] - u[k - 1]);
}

CanonicalTrajectory integrate_canonical(const DemographyModel& model, double u0, CanonicalForm form,
                                        const CanonicalIntegration& integ, const CanonicalOptions& opt) {
  const double lo = model.space.lo;
  const double hi = model.space.hi;
  if (!(u0 > lo && u0 < hi)) throw PreconditionError("canonical start must be interior to the trait space");
  if (integ.horizon < 0.0) throw PreconditionError("negative horizon");
  if (form == CanonicalForm::symmetric && !model.mutation.symmetric())
    throw PreconditionError("symmetric canonical form requires a symmetric mutation law");
  const bool pheno = form == CanonicalForm::phenotypic;
  double y_lo = lo;
  double y_hi = hi;
  if (pheno) {
    allele_for_phenotype(model, model.phi(u0, u0));
    y_lo = std::min(model.phi(lo, lo), model.phi(hi, hi));
    y_hi = std::max(model.phi(lo, lo), model.phi(hi, hi));
  }
  auto rhs_of = [&](double y) {
    const double c = std::clamp(y, y_lo, y_hi);
    switch (form) {
      case CanonicalForm::general: return canonical_rhs_general(model, c, opt);
      case CanonicalForm::symmetric: return canonical_rhs_symmetric(model, c, opt);
      case CanonicalForm::phenotypic: return canonical_rhs_phenotypic(model, c, opt);
    }
    return 0.0;
  };

  CanonicalTrajectory tr;
  auto record = [&](double t, double y, double r) {
    const double u = pheno ? allele_for_phenotype(model, y) : y;
    tr.t.push_back(t);
    tr.u.push_back(u);
    tr.U.push_back(pheno ? y : model.phi(u, u));
    tr.rhs.push_back(r);
    tr.gradient.push_back(fitness_gradient(model, u));
  };
  const double y0 = pheno ? model.phi(u0, u0) : u0;
  const double r0 = rhs_of(y0);
  record(0.0, y0, r0);
  if (std::abs(r0) < integ.stop_rhs) {
    tr.ess_reached = true;
    return tr;
  }

  OdeOptions o;
  o.rtol = integ.rtol;
  o.atol = integ.atol;
  o.record_dt = integ.record_dt;
  auto rhs = [&](const std::array<double, 1>& y, double) { return std::array<double, 1>{rhs_of(y[0])}; };
  auto clamp = [&](std::array<double, 1>& y) {
    if (y[0] < y_lo || y[0] > y_hi) {
      y[0] = std::clamp(y[0], y_lo, y_hi);
      tr.boundary_hit = true;
      return true;
    }
    return false;
  };
  auto stop = [&](double t, const std::array<double, 1>& y) {
    const double r = rhs_of(y[0]);
    record(t, y[0], r);
    if (tr.boundary_hit) return true;
    if (std::abs(r) < integ.stop_rhs) {
      tr.ess_reached = true;
      return true;
    }
    return false;
  };
  integrate_adaptive<1>(rhs, std::array<double, 1>{y0}, 0.0, integ.horizon, o, clamp, stop);
  return tr;
}

}  // namespace adyn
