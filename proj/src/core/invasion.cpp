#include "invasion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "ode.hpp"
#include "parallel.hpp"

namespace adyn {

BranchingSpec BranchingSpec::from(const DimorphicModel& dm) {
  const double n = dm.n_AA();
  if (!(n > 0.0)) throw PreconditionError("branching spec needs a positive resident equilibrium");
  BranchingSpec s;
  s.f_Aa = dm.fertility[1];
  s.f_aa = dm.fertility[2];
  s.d_Aa = dm.death[1] + dm.competition[1][0] * n;
  s.d_aa = dm.death[2] + dm.competition[2][0] * n;
  return s;
}

void BranchingSpec::validate() const {
  if (!(f_Aa >= 0.0 && f_aa >= 0.0 && d_Aa >= 0.0 && d_aa >= 0.0))
    throw PreconditionError("branching rates must be nonnegative");
}

double survival_probability(const DimorphicModel& dm) {
  const double f = dm.fertility[1];
  if (!(f > 0.0)) throw DomainError("survival probability undefined for f_Aa = 0");
  return std::max(dm.fitness_Aa_in_AA(), 0.0) / f;
}

std::array<double, 2> extinction_ode_rhs(const std::array<double, 2>& q, const BranchingSpec& s) {
  const double q1 = q[0];
  const double q2 = q[1];
  return {s.f_Aa * q1 * q1 + s.d_Aa - (s.f_Aa + s.d_Aa) * q1,
          2.0 * s.f_aa * q1 * q2 + s.d_aa - (2.0 * s.f_aa + s.d_aa) * q2};
}

ExtinctionLimit integrate_extinction(const BranchingSpec& spec, double horizon) {
  spec.validate();
  if (!(horizon > 0.0)) {
    double slowest = std::numeric_limits<double>::infinity();
    for (double r : {spec.f_Aa, spec.d_Aa, 2.0 * spec.f_aa, spec.d_aa, std::abs(spec.f_Aa - spec.d_Aa)})
      if (r > 0.0) slowest = std::min(slowest, r);
    if (!std::isfinite(slowest)) throw PreconditionError("all branching rates vanish");
    horizon = std::min(50.0 / slowest, 1e6);
  }
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  ExtinctionLimit out;
  out.horizon = horizon;
  std::array<double, 2> prev{0.0, 0.0};
  auto rhs = [&](const std::array<double, 2>& q, double) { return extinction_ode_rhs(q, spec); };
  auto watch = [&](double, const std::array<double, 2>& q) {
    if (q[0] < prev[0] - 1e-12 || q[1] < prev[1] - 1e-12) out.monotone = false;
    prev = q;
    return false;
  };
  const auto sol = integrate_adaptive<2>(rhs, std::array<double, 2>{0.0, 0.0}, 0.0, horizon, o, NoPostStep{}, watch);
  out.q = sol.y.back();
  const auto r = extinction_ode_rhs(out.q, spec);
  out.residual = std::hypot(r[0], r[1]);
  return out;
}

BranchingOutcome simulate_branching(const BranchingSpec& spec, Founder founder, std::int64_t threshold, Rng& rng,
                                    std::uint64_t max_events) {
  spec.validate();
  if (threshold < 1) throw PreconditionError("branching threshold must be positive");
  std::int64_t y = founder == Founder::Aa ? 1 : 0;
  std::int64_t z = founder == Founder::aa ? 1 : 0;
  BranchingOutcome out;
  while (true) {
    if (y + z == 0) {
      out.extinct = true;
      return out;
    }
    if (y + z >= threshold) {
      out.reached_threshold = true;
      return out;
    }
    if (out.events >= max_events) {
      out.censored = true;
      return out;
    }
    const double birth = spec.f_Aa * static_cast<double>(y) + 2.0 * spec.f_aa * static_cast<double>(z);
    const double death_y = spec.d_Aa * static_cast<double>(y);
    const double death_z = spec.d_aa * static_cast<double>(z);
    const double total = birth + death_y + death_z;
    if (!(total > 0.0)) {
      out.censored = true;  // frozen lineage, neither lost nor growing
      return out;
    }
    out.time += rng.exponential(total);
    const double r = rng.uniform() * total;
    if (r < birth)
      ++y;
    else if (r < birth + death_y)
      --y;
    else
      --z;
    ++out.events;
  }
}

ProportionEstimate proportion(std::int64_t successes, std::int64_t trials, std::int64_t censored) {
  ProportionEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.censored = censored;
  if (successes < 0 || censored < 0 || successes > trials)
    throw PreconditionError("proportion: successes must lie in [0, trials]");
  if (trials <= 0) return e;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  e.estimate = p;
  e.std_error = std::sqrt(p * (1.0 - p) / n);
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  e.ci_low = std::max(0.0, centre - half);
  e.ci_high = std::min(1.0, centre + half);
  return e;
}

namespace {

DemographyModel without_mutation(const DemographyModel& model) {
  DemographyModel m = model;
  m.mu_K = 0.0;
  return m;
}

PopulationState resident_plus_mutant(const DemographyModel& model, double u_A, double u_a, std::int64_t K) {
  const double n = model.carrying_capacity(u_A);
  if (!(n > 0.0)) throw PreconditionError("resident carrying capacity must be positive");
  PopulationState s;
  s.K = K;
  s.add(Genotype::homozygote(u_A), static_cast<std::int64_t>(std::floor(static_cast<double>(K) * n)));
  s.add(Genotype(u_A, u_a), 1);
  return s;
}

}  // namespace

InvasionAttempt invasion_attempt(const DemographyModel& model, double u_A, double u_a, std::int64_t K,
                                 double epsilon, Rng& rng, std::uint64_t max_events) {
  if (u_A == u_a) throw PreconditionError("invasion attempt needs distinct alleles");
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  const DemographyModel m = without_mutation(model);
  IbmEngine engine(m, resident_plus_mutant(m, u_A, u_a, K));
  const Genotype het(u_A, u_a);
  const Genotype hom = Genotype::homozygote(u_a);
  const auto target = static_cast<std::int64_t>(std::ceil(static_cast<double>(K) * epsilon));
  InvasionAttempt out;
  for (std::uint64_t ev = 1;; ++ev) {
    const auto step = engine.step(rng);
    if (step.status != IbmEngine::StepStatus::event) {
      out.censored = true;
      break;
    }
    const std::int64_t mutants = engine.count(het) + engine.count(hom);
    if (mutants == 0) {
      out.lost = true;
      break;
    }
    if (mutants >= target) {
      out.invaded = true;
      break;
    }
    if (ev % 10'000 == 0) engine.resync();
    if (ev >= max_events) {
      out.censored = true;
      break;
    }
  }
  out.time = engine.time();
  return out;
}

ProportionEstimate monte_carlo_invasion(const DemographyModel& model, double u_A, double u_a, std::int64_t K,
                                        std::int64_t replicates, double epsilon, std::uint64_t seed,
                                        int threads) {
  if (replicates < 1) throw PreconditionError("replicates must be positive");
  std::vector<InvasionAttempt> results(static_cast<std::size_t>(replicates));
  parallel_for(replicates, threads, [&](std::int64_t r) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
    results[static_cast<std::size_t>(r)] = invasion_attempt(model, u_A, u_a, K, epsilon, rng);
  });
  std::int64_t wins = 0;
  std::int64_t censored = 0;
  for (const auto& a : results) {
    wins += a.invaded ? 1 : 0;
    censored += a.censored ? 1 : 0;
  }
  return proportion(wins, replicates - censored, censored);
}

std::optional<PhaseSplit> three_phase_split(const std::vector<double>& t, const std::vector<Vec3>& xyz,
                                            double epsilon, double n_aa) {
  if (t.size() != xyz.size()) throw PreconditionError("three_phase_split: size mismatch");
  std::size_t i3 = t.size();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (xyz[i][0] == 0.0 && xyz[i][1] == 0.0 && xyz[i][2] > 0.0) {
      i3 = i;
      break;
    }
  if (i3 == t.size()) return std::nullopt;
  std::size_t i1 = i3;
  for (std::size_t i = 0; i <= i3; ++i)
    if (xyz[i][1] + xyz[i][2] >= epsilon) {
      i1 = i;
      break;
    }
  std::size_t i2 = i3;
  for (std::size_t i = i1; i <= i3; ++i)
    if (std::max({xyz[i][0], xyz[i][1], std::abs(xyz[i][2] - n_aa)}) <= epsilon) {
      i2 = i;
      break;
    }
  return PhaseSplit{t[i1], t[i2], t[i3]};
}

InvasionRun simulate_invasion(const DemographyModel& model, double u_A, double u_a, std::int64_t K, Rng& rng,
                              double record_dt, double max_time, std::uint64_t max_events) {
  if (u_A == u_a) throw PreconditionError("invasion run needs distinct alleles");
  const DemographyModel m = without_mutation(model);
  IbmEngine engine(m, resident_plus_mutant(m, u_A, u_a, K));
  const Genotype res = Genotype::homozygote(u_A);
  const Genotype het(u_A, u_a);
  const Genotype hom = Genotype::homozygote(u_a);
  InvasionRun out;
  auto stop = [&](const IbmEngine& e) {
    const std::int64_t nx = e.count(res);
    const std::int64_t ny = e.count(het);
    const std::int64_t nz = e.count(hom);
    if (ny + nz == 0) out.lost = true;
    if (nx == 0 && ny == 0 && nz > 0) out.fixed = true;
    return out.lost || out.fixed;
  };
  SimulateOptions opt;
  opt.horizon = max_time;
  opt.record_dt = record_dt;
  opt.max_events = max_events;
  const IbmRun run = simulate(engine, opt, rng, stop);
  out.truncated = run.truncated;
  out.t = run.times();
  const auto x = run.series(res);
  const auto y = run.series(het);
  const auto z = run.series(hom);
  out.xyz.reserve(out.t.size());
  for (std::size_t i = 0; i < out.t.size(); ++i) out.xyz.push_back({x[i], y[i], z[i]});
  return out;
}

std::vector<ExitRow> exit_time_scaling(const DemographyModel& model, double u_A, double epsilon,
                                       const std::vector<std::int64_t>& K_list, double horizon,
                                       std::int64_t replicates, std::uint64_t seed, double perturbation_c,
                                       int threads) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  const DemographyModel m = without_mutation(model);
  const double n_bar = m.carrying_capacity(u_A);
  const Genotype res = Genotype::homozygote(u_A);
  std::vector<ExitRow> rows;
  for (std::size_t k = 0; k < K_list.size(); ++k) {
    const std::int64_t K = K_list[k];
    std::vector<char> exited(static_cast<std::size_t>(replicates), 0);
    parallel_for(replicates, threads, [&](std::int64_t r) {
      Rng rng = Rng::stream(seed, (static_cast<std::uint64_t>(k) << 32) + static_cast<std::uint64_t>(r));
      PopulationState s;
      s.K = K;
      s.add(res, static_cast<std::int64_t>(std::llround(static_cast<double>(K) * n_bar)));
      IbmEngine engine(m, s);
      if (perturbation_c != 0.0) engine.set_death_offset(perturbation_c * epsilon * rng.uniform(-1.0, 1.0));
      const double inv_k = 1.0 / static_cast<double>(K);
      for (std::uint64_t ev = 1;; ++ev) {
        const auto step = engine.step(rng, horizon);
        if (step.status != IbmEngine::StepStatus::event) {
          if (engine.total() == 0) exited[static_cast<std::size_t>(r)] = 1;
          break;
        }
        if (std::abs(static_cast<double>(engine.total()) * inv_k - n_bar) > epsilon) {
          exited[static_cast<std::size_t>(r)] = 1;
          break;
        }
        if (ev % 10'000 == 0) engine.resync();
      }
    });
    ExitRow row;
    row.K = K;
    row.replicates = replicates;
    for (char e : exited) row.exits += e;
    row.frequency = static_cast<double>(row.exits) / static_cast<double>(replicates);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace adyn
