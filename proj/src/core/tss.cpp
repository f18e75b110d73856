#include "tss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <functional>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace adyn {

namespace {

double fitness_raw(const DemographyModel& model, double u_a, double u_A) {
  const Genotype res = Genotype::homozygote(u_A);
  const Genotype het(u_A, u_a);
  return model.fertility(het) - model.death(het) -
         model.competition(het, res) * model.carrying_capacity(u_A);
}

double bisect(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double jump_rate_density(const DemographyModel& model, double u_A, double h) {
  model.phenotype(Genotype(u_A, u_A + h));
  const double s = fitness_raw(model, u_A + h, u_A);
  if (!(s > 0.0)) return 0.0;
  const double f_mut = model.fertility(Genotype(u_A, u_A + h));
  if (!(f_mut > 0.0)) throw DomainError("jump rate undefined: f(u, u + h) = 0");
  const Genotype res = Genotype::homozygote(u_A);
  return model.fertility(res) * model.carrying_capacity(u_A) * s / f_mut * model.mutation_density(u_A, h);
}

JumpLaw::JumpLaw(const DemographyModel& model, double u_A) : model_(&model), u_(u_A) {
  model.phenotype(Genotype::homozygote(u_A));
  std::tie(lo_, hi_) = model.step_bounds(u_A);
  prefactor_ = model.fertility(Genotype::homozygote(u_A)) * model.carrying_capacity(u_A);

  breaks_.push_back(lo_);
  if (lo_ < 0.0 && hi_ > 0.0) breaks_.push_back(0.0);
  breaks_.push_back(hi_);
  // Sign changes of S away from h = 0.
  const int cells = 64;
  std::vector<double> extra;
  auto s_of = [&](double h) { return fitness_raw(model, u_A + h, u_A); };
  double prev_h = lo_;
  double prev_s = s_of(lo_);
  for (int i = 1; i <= cells; ++i) {
    const double h = lo_ + (hi_ - lo_) * i / cells;
    const double s = s_of(h);
    if (prev_s != 0.0 && s != 0.0 && (prev_s < 0.0) != (s < 0.0))
      extra.push_back(bisect(s_of, prev_h, h, prev_s, s));
    prev_h = h;
    prev_s = s;
  }
  breaks_.insert(breaks_.end(), extra.begin(), extra.end());
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());

  cumulative_.assign(breaks_.size(), 0.0);
  for (std::size_t k = 1; k < breaks_.size(); ++k)
    cumulative_[k] = cumulative_[k - 1] + integrate(breaks_[k - 1], breaks_[k]);
  total_ = cumulative_.back();

  // Envelope: grid maximum of the ratio, refined around the best cell.
  const int grid = 200;
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= grid; ++i) {
    const double r = ratio(lo_ + (hi_ - lo_) * i / grid);
    if (r > best) {
      best = r;
      best_i = i;
    }
  }
  const double cell = (hi_ - lo_) / grid;
  const double a = std::max(lo_, lo_ + (best_i - 1) * cell);
  const double b = std::min(hi_, lo_ + (best_i + 1) * cell);
  for (int i = 0; i <= 100; ++i) best = std::max(best, ratio(a + (b - a) * i / 100));
  envelope_ = 1.05 * best;
}

double JumpLaw::ratio(double h) const {
  const double s = fitness_raw(*model_, u_ + h, u_);
  if (!(s > 0.0)) return 0.0;
  const double f_mut = model_->fertility(Genotype(u_, u_ + h));
  if (!(f_mut > 0.0)) throw DomainError("jump rate undefined: f(u, u + h) = 0");
  return prefactor_ * s / f_mut;
}

double JumpLaw::density(double h) const {
  if (h < lo_ || h > hi_) return 0.0;
  return ratio(h) * model_->mutation_density(u_, h);
}

double JumpLaw::integrate(double a, double b) const {
  if (!(b > a)) return 0.0;
  const auto q = integrate_adaptive([this](double h) { return density(h); }, a, b, 1e-11);
  const double v = q.value;
  const double err = q.error;
  if (!std::isfinite(v) || err > 1e-9 * std::abs(v) + 1e-15) {
    std::ostringstream os;
    os << "jump-rate quadrature did not reach tolerance on [" << a << ", " << b << "] (error " << err << ")";
    throw NumericalError(os.str());
  }
  return v;
}

double JumpLaw::cdf(double h) const {
  if (!(total_ > 0.0)) throw PreconditionError("jump CDF undefined for a zero total rate");
  if (h <= lo_) return 0.0;
  if (h >= hi_) return 1.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), h);
  const std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::clamp((cumulative_[k] + integrate(breaks_[k], h)) / total_, 0.0, 1.0);
}

double JumpLaw::sample_step(Rng& rng) const {
  if (!(total_ > 0.0)) throw PreconditionError("cannot sample a jump at zero total rate");
  for (int attempt = 0; attempt < 10'000'000; ++attempt) {
    const double h = model_->sample_mutation_step(u_, rng);
    const double r = ratio(h);
    if (r > envelope_) throw NumericalError("rejection envelope violated");
    if (rng.uniform() * envelope_ < r) return h;
  }
  throw NumericalError("rejection sampler failed to accept");
}

double total_jump_rate(const DemographyModel& model, double u_A) { return JumpLaw(model, u_A).total_rate(); }

JumpDraw sample_jump(const DemographyModel& model, double u_A, Rng& rng) {
  const JumpLaw law(model, u_A);
  JumpDraw d;
  if (!(law.total_rate() > 0.0)) {
    d.absorbed = true;
    d.u_new = u_A;
    d.wait = std::numeric_limits<double>::infinity();
    return d;
  }
  d.wait = rng.exponential(law.total_rate());
  d.u_new = u_A + law.sample_step(rng);
  return d;
}

const char* to_string(SingularKind kind) {
  return kind == SingularKind::ecological ? "ecological" : "developmental";
}

// ------------------------------------------------------------ singular strategies

SingularReport find_singular_strategies(const DemographyModel& model, int grid_resolution,
                                        double developmental_tol) {
  if (grid_resolution < 2) throw PreconditionError("grid_resolution must be at least 2");
  const double lo = model.space.lo;
  const double hi = model.space.hi;
  const double w = model.space.width();
  auto g1 = [&](double u) { return invasion_fitness_slope(model, u); };
  std::vector<double> us(static_cast<std::size_t>(grid_resolution) + 1);
  std::vector<double> gs(us.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    us[i] = lo + w * static_cast<double>(i) / grid_resolution;
    gs[i] = g1(us[i]);
    scale = std::max(scale, std::abs(gs[i]));
  }
  SingularReport rep;
  if (scale < 1e-10) {
    rep.degenerate = true;
    return rep;
  }
  const double zero_tol = 1e-12 * std::max(1.0, scale);
  std::vector<double> roots;
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (std::abs(gs[i]) <= zero_tol) {
      roots.push_back(us[i]);
      continue;
    }
    if (i + 1 < us.size() && std::abs(gs[i + 1]) > zero_tol && (gs[i] < 0.0) != (gs[i + 1] < 0.0))
      roots.push_back(bisect(g1, us[i], us[i + 1], gs[i], gs[i + 1]));
  }
  const double du = 1e-4 * w;
  for (double u : roots) {
    SingularStrategy s;
    s.u = u;
    const double a = std::max(lo, u - du);
    const double b = std::min(hi, u + du);
    s.slope = (g1(b) - g1(a)) / (b - a);
    s.degenerate = std::abs(s.slope) < 1e-8 * std::max(1.0, scale / w);
    s.boundary = u <= lo + 1e-12 * w || u >= hi - 1e-12 * w;
    s.kind = std::abs(model.phi.d1(u, u)) < developmental_tol ? SingularKind::developmental
                                                               : SingularKind::ecological;
    rep.points.push_back(s);
  }
  return rep;
}

// ------------------------------------------------------------ TSS

double TssTrajectory::value_at(double t) const {
  if (jumps.empty()) throw PreconditionError("empty TSS trajectory");
  auto it = std::upper_bound(jumps.begin(), jumps.end(), t,
                             [](double v, const TssJump& j) { return v < j.time; });
  if (it == jumps.begin()) return jumps.front().u;
  return std::prev(it)->u;
}

TssTrajectory simulate_tss(const DemographyModel& model, double u0, const std::vector<double>& singular_set,
                           const TssOptions& opt, Rng& rng) {
  model.phenotype(Genotype::homozygote(u0));
  auto near_singular = [&](double u) {
    for (double s : singular_set)
      if (std::abs(u - s) <= opt.eta) return true;
    return false;
  };
  if (near_singular(u0)) throw PreconditionError("initial trait lies within eta of a singular strategy");
  if (opt.horizon < 0.0) throw PreconditionError("negative horizon");
  TssTrajectory tr;
  tr.jumps.push_back({0, 0.0, u0, 0.0});
  double t = 0.0;
  double u = u0;
  for (std::int64_t k = 1; k <= opt.max_jumps; ++k) {
    const JumpDraw d = sample_jump(model, u, rng);
    if (d.absorbed) {
      tr.absorbed = true;
      break;
    }
    if (t + d.wait > opt.horizon) break;
    t += d.wait;
    const double s = invasion_fitness(model, d.u_new, u);
    u = d.u_new;
    tr.jumps.push_back({k, t, u, s});
    if (near_singular(u)) {
      tr.stopped = true;
      break;
    }
  }
  tr.end_time = tr.stopped ? t : opt.horizon;
  return tr;
}

double m1_modulus(const std::vector<double>& t, const std::vector<double>& x, double delta) {
  if (t.size() != x.size()) throw PreconditionError("m1_modulus: size mismatch");
  if (!(delta > 0.0)) throw PreconditionError("m1_modulus: delta must be positive");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[i - 1]) throw PreconditionError("m1_modulus: times must be nondecreasing");
    if (t[i] - t[i - 1] > delta / 10.0 * (1.0 + 1e-12))
      throw PreconditionError("m1_modulus: sampling coarser than delta / 10");
  }
  const std::size_t n = t.size();
  double w = 0.0;
  std::vector<double> run_min;
  std::vector<double> run_max;
  for (std::size_t i = 0; i < n; ++i) {
    // Running extrema of x over [i, j] for j ahead of i within delta.
    run_min.clear();
    run_max.clear();
    for (std::size_t j = i; j < n && t[j] - t[i] <= delta; ++j) {
      run_min.push_back(j == i ? x[j] : std::min(run_min.back(), x[j]));
      run_max.push_back(j == i ? x[j] : std::max(run_max.back(), x[j]));
    }
    std::size_t reach = run_min.size() - 1;
    for (std::size_t i1 = i + 1; i1-- > 0;) {
      if (t[i] - t[i1] > delta) break;
      while (reach > 0 && t[i + reach] - t[i1] > delta) --reach;
      const double a = x[i1];
      // Above the segment: both endpoints low; below: both endpoints high.
      const double above = x[i] - std::max(a, run_min[reach]);
      const double below = std::min(a, run_max[reach]) - x[i];
      w = std::max({w, above, below});
    }
  }
  return w;
}

}  // namespace adyn
