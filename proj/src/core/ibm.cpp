#include "ibm.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "errors.hpp"

namespace adyn {

std::int64_t PopulationState::total() const {
  std::int64_t n = 0;
  for (const auto& [g, c] : counts) n += c;
  return n;
}

double PopulationState::density(const Genotype& g) const {
  const auto it = counts.find(g);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(K);
}

void PopulationState::add(const Genotype& g, std::int64_t n) {
  if (n < 0) throw PreconditionError("negative genotype count");
  if (n == 0) return;
  counts[g] += n;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::birth: return "birth";
    case EventKind::mutant_birth: return "mutant_birth";
    case EventKind::death: return "death";
  }
  return "?";
}

double death_rate(const PopulationState& state, const DemographyModel& model, const Genotype& g) {
  if (!state.counts.contains(g)) throw PreconditionError("death_rate: genotype not present");
  double pressure = 0.0;
  for (const auto& [h, n] : state.counts) pressure += model.competition(g, h) * static_cast<double>(n);
  return model.death(g) + pressure / static_cast<double>(state.K);
}

EventRates total_event_rate(const PopulationState& state, const DemographyModel& model) {
  EventRates r;
  double F = 0.0;
  double Q = 0.0;
  for (const auto& [g, n] : state.counts) {
    const double f = model.fertility(g);
    F += f * static_cast<double>(n);
    Q += f * f * static_cast<double>(n);
    r.death_total += static_cast<double>(n) * death_rate(state, model, g);
  }
  if (F > 0.0) r.birth_total = std::max(0.0, F - Q / F);
  return r;
}

std::pair<Genotype, bool> offspring(const Genotype& mother, const Genotype& father,
                                    const DemographyModel& model, Rng& rng) {
  const double from_mother = rng.bernoulli(0.5) ? mother.first() : mother.second();
  const double from_father = rng.bernoulli(0.5) ? father.first() : father.second();
  if (model.mu_K > 0.0 && rng.bernoulli(model.mu_K)) {
    if (rng.bernoulli(0.5)) {
      const double u = from_mother + model.sample_mutation_step(from_mother, rng);
      return {Genotype(std::clamp(u, model.space.lo, model.space.hi), from_father), true};
    }
    const double u = from_father + model.sample_mutation_step(from_father, rng);
    return {Genotype(from_mother, std::clamp(u, model.space.lo, model.space.hi)), true};
  }
  return {Genotype(from_mother, from_father), false};
}

namespace {

template <class Weight>
std::size_t pick(std::size_t n, double total, Rng& rng, Weight w) {
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w(i);
    if (wi > 0.0) last_positive = i;
    acc += wi;
    if (target < acc) return i;
  }
  if (last_positive == n) throw NumericalError("weighted pick with zero total weight");
  return last_positive;  // rounding at the top end
}

}  // namespace

BirthDraw birth_event(const PopulationState& state, const DemographyModel& model, Rng& rng) {
  if (state.total() < 2) throw PreconditionError("birth_event needs at least two individuals");
  std::vector<Genotype> gs;
  std::vector<double> n;
  std::vector<double> f;
  double F = 0.0;
  for (const auto& [g, c] : state.counts) {
    gs.push_back(g);
    n.push_back(static_cast<double>(c));
    f.push_back(model.fertility(g));
    F += f.back() * n.back();
  }
  double mother_total = 0.0;
  for (std::size_t a = 0; a < gs.size(); ++a) mother_total += n[a] * f[a] * (F - f[a]);
  if (!(mother_total > 0.0)) throw PreconditionError("birth_event: birth rate is zero");
  const std::size_t m = pick(gs.size(), mother_total, rng, [&](std::size_t a) { return n[a] * f[a] * (F - f[a]); });
  const std::size_t d = pick(gs.size(), F - f[m], rng,
                             [&](std::size_t b) { return (n[b] - (b == m ? 1.0 : 0.0)) * f[b]; });
  BirthDraw out;
  out.mother = gs[m];
  out.father = gs[d];
  std::tie(out.child, out.mutated) = offspring(out.mother, out.father, model, rng);
  return out;
}

// ------------------------------------------------------------ engine

IbmEngine::IbmEngine(const DemographyModel& model, const PopulationState& initial)
    : model_(model), K_(initial.K), time_(initial.time) {
  if (K_ < 1) throw PreconditionError("K must be a positive integer");
  for (const auto& [g, n] : initial.counts) {
    if (n < 0) throw PreconditionError("negative genotype count");
    if (n == 0) continue;
    model_.phenotype(g);
    change(index_of(g), n);
  }
}

std::size_t IbmEngine::index_of(const Genotype& g) {
  const auto it = slot_.find(g);
  if (it != slot_.end()) return it->second;
  const std::size_t idx = genotypes_.size();
  genotypes_.push_back(g);
  counts_.push_back(0);
  fert_.push_back(model_.fertility(g));
  death_.push_back(model_.death(g) + death_offset_);
  double pressure = 0.0;
  for (std::size_t a = 0; a < idx; ++a) comp_[a].push_back(model_.competition(genotypes_[a], g));
  std::vector<double> row(idx + 1);
  for (std::size_t b = 0; b <= idx; ++b) {
    row[b] = model_.competition(g, genotypes_[b]);
    if (b < idx) pressure += row[b] * static_cast<double>(counts_[b]);
  }
  comp_.push_back(std::move(row));
  pressure_.push_back(pressure);
  slot_.emplace(g, idx);
  return idx;
}

void IbmEngine::change(std::size_t idx, std::int64_t delta) {
  counts_[idx] += delta;
  total_ += delta;
  const double dd = static_cast<double>(delta);
  for (std::size_t a = 0; a < genotypes_.size(); ++a) pressure_[a] += comp_[a][idx] * dd;
  if (counts_[idx] == 0) remove_slot(idx);
}

void IbmEngine::remove_slot(std::size_t idx) {
  const std::size_t last = genotypes_.size() - 1;
  slot_.erase(genotypes_[idx]);
  if (idx != last) {
    genotypes_[idx] = genotypes_[last];
    counts_[idx] = counts_[last];
    fert_[idx] = fert_[last];
    death_[idx] = death_[last];
    pressure_[idx] = pressure_[last];
    comp_[idx] = std::move(comp_[last]);
    slot_[genotypes_[idx]] = idx;
  }
  genotypes_.pop_back();
  counts_.pop_back();
  fert_.pop_back();
  death_.pop_back();
  pressure_.pop_back();
  comp_.pop_back();
  for (auto& row : comp_) {
    row[idx] = row[last];
    row.pop_back();
  }
}

std::int64_t IbmEngine::count(const Genotype& g) const {
  const auto it = slot_.find(g);
  return it == slot_.end() ? 0 : counts_[it->second];
}

PopulationState IbmEngine::state() const {
  PopulationState s;
  s.K = K_;
  s.time = time_;
  for (std::size_t a = 0; a < genotypes_.size(); ++a) s.counts[genotypes_[a]] = counts_[a];
  return s;
}

double IbmEngine::death_rate(const Genotype& g) const {
  const auto it = slot_.find(g);
  if (it == slot_.end()) throw PreconditionError("death_rate: genotype not present");
  return death_[it->second] + pressure_[it->second] / static_cast<double>(K_);
}

void IbmEngine::set_death_offset(double offset) {
  for (std::size_t a = 0; a < genotypes_.size(); ++a) {
    death_[a] += offset - death_offset_;
    if (death_[a] < 0.0) throw PreconditionError("death offset makes a death rate negative");
  }
  death_offset_ = offset;
}

EventRates IbmEngine::rates() const {
  EventRates r;
  double F = 0.0;
  double Q = 0.0;
  const double inv_k = 1.0 / static_cast<double>(K_);
  for (std::size_t a = 0; a < genotypes_.size(); ++a) {
    const double n = static_cast<double>(counts_[a]);
    F += fert_[a] * n;
    Q += fert_[a] * fert_[a] * n;
    r.death_total += n * (death_[a] + pressure_[a] * inv_k);
  }
  if (F > 0.0) r.birth_total = std::max(0.0, F - Q / F);
  return r;
}

IbmEngine::StepOutcome IbmEngine::step(Rng& rng, double t_max) {
  StepOutcome out;
  const EventRates r = rates();
  const double total = r.total();
  if (!(total > 0.0)) {
    out.status = StepStatus::absorbed;
    return out;
  }
  const double t_next = time_ + rng.exponential(total);
  if (t_next > t_max) {
    time_ = t_max;
    out.status = StepStatus::horizon;
    return out;
  }
  time_ = t_next;
  out.status = StepStatus::event;
  EventRecord& ev = out.event;
  ev.time = time_;
  const std::size_t G = genotypes_.size();
  const double inv_k = 1.0 / static_cast<double>(K_);
  if (rng.uniform() * total < r.birth_total) {
    double F = 0.0;
    for (std::size_t a = 0; a < G; ++a) F += fert_[a] * static_cast<double>(counts_[a]);
    double mother_total = 0.0;
    for (std::size_t a = 0; a < G; ++a) mother_total += static_cast<double>(counts_[a]) * fert_[a] * (F - fert_[a]);
    const std::size_t m = pick(G, mother_total, rng, [&](std::size_t a) {
      return static_cast<double>(counts_[a]) * fert_[a] * (F - fert_[a]);
    });
    const std::size_t d = pick(G, F - fert_[m], rng, [&](std::size_t b) {
      return static_cast<double>(counts_[b] - (b == m ? 1 : 0)) * fert_[b];
    });
    const Genotype mother = genotypes_[m];
    const Genotype father = genotypes_[d];
    const auto [child, mutated] = offspring(mother, father, model_, rng);
    ev.kind = mutated ? EventKind::mutant_birth : EventKind::birth;
    ev.genotype = child;
    ev.parents = std::make_pair(mother, father);
    change(index_of(child), +1);
  } else {
    const std::size_t a = pick(G, r.death_total, rng, [&](std::size_t i) {
      return static_cast<double>(counts_[i]) * (death_[i] + pressure_[i] * inv_k);
    });
    ev.kind = EventKind::death;
    ev.genotype = genotypes_[a];
    change(a, -1);
  }
  return out;
}

double IbmEngine::consistency_error() const {
  double worst = 0.0;
  for (std::size_t a = 0; a < genotypes_.size(); ++a) {
    double exact = 0.0;
    for (std::size_t b = 0; b < genotypes_.size(); ++b)
      exact += model_.competition(genotypes_[a], genotypes_[b]) * static_cast<double>(counts_[b]);
    worst = std::max(worst, std::abs(exact - pressure_[a]) / std::max(1.0, std::abs(exact)));
  }
  return worst;
}

void IbmEngine::resync(double tol) {
  if (consistency_error() > tol) throw NumericalError("incremental rate bookkeeping drifted");
  for (std::size_t a = 0; a < genotypes_.size(); ++a) {
    double exact = 0.0;
    for (std::size_t b = 0; b < genotypes_.size(); ++b) exact += comp_[a][b] * static_cast<double>(counts_[b]);
    pressure_[a] = exact;
  }
}

// ------------------------------------------------------------ runs

std::size_t GenotypeRegistry::id(const Genotype& g) {
  const auto [it, inserted] = ids_.emplace(g, list_.size());
  if (inserted) list_.push_back(g);
  return it->second;
}

std::optional<std::size_t> GenotypeRegistry::find(const Genotype& g) const {
  const auto it = ids_.find(g);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> IbmRun::series(const Genotype& g) const {
  const auto id = registry.find(g);
  const double k = static_cast<double>(final_state.K);
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) {
    double v = 0.0;
    if (id)
      for (const auto& [i, c] : s.counts)
        if (i == *id) v = static_cast<double>(c) / k;
    out.push_back(v);
  }
  return out;
}

std::vector<double> IbmRun::times() const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(s.time);
  return out;
}

std::vector<double> IbmRun::total_density_series() const {
  const double k = static_cast<double>(final_state.K);
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) {
    std::int64_t n = 0;
    for (const auto& [i, c] : s.counts) n += c;
    out.push_back(static_cast<double>(n) / k);
  }
  return out;
}

IbmRun simulate(IbmEngine& engine, const SimulateOptions& opt, Rng& rng, const StopPredicate& stop,
                const EventSink& sink) {
  if (opt.horizon < 0.0) throw PreconditionError("negative horizon");
  IbmRun run;
  const double t0 = engine.time();
  const double t_end = t0 + opt.horizon;
  auto snap = [&](double t) {
    Snapshot s;
    s.time = t;
    const auto& gs = engine.genotypes();
    const auto& cs = engine.counts();
    s.counts.reserve(gs.size());
    for (std::size_t a = 0; a < gs.size(); ++a) s.counts.emplace_back(run.registry.id(gs[a]), cs[a]);
    std::sort(s.counts.begin(), s.counts.end());
    run.snapshots.push_back(std::move(s));
  };
  std::uint64_t next_index = 0;
  auto grid_time = [&](std::uint64_t k) { return t0 + opt.record_dt * static_cast<double>(k); };
  // Records every grid point strictly before t (state constant up to t).
  auto flush_until = [&](double t, bool inclusive) {
    if (opt.record_dt <= 0.0) return;
    while (true) {
      const double g = grid_time(next_index);
      if (g > t_end || (inclusive ? g > t : g >= t)) break;
      snap(g);
      ++next_index;
    }
  };
  if (opt.record_dt <= 0.0) snap(t0);

  while (true) {
    const auto outcome = engine.step(rng, t_end);
    if (outcome.status == IbmEngine::StepStatus::absorbed) {
      run.extinct = engine.total() == 0;
      flush_until(t_end, true);
      break;
    }
    if (outcome.status == IbmEngine::StepStatus::horizon) {
      flush_until(t_end, true);
      break;
    }
    flush_until(outcome.event.time, false);
    ++run.events;
    if (sink) sink(outcome.event);
    if (opt.record_dt <= 0.0) snap(engine.time());
    if (opt.check_every > 0 && run.events % opt.check_every == 0) engine.resync(opt.check_tolerance);
    if (engine.total() == 0) {
      run.extinct = true;
      break;
    }
    if (stop && stop(engine)) {
      run.stopped = true;
      break;
    }
    if (run.events >= opt.max_events) {
      run.truncated = true;
      break;
    }
  }
  run.end_time = engine.time();
  if (run.snapshots.empty() || run.snapshots.back().time < run.end_time) {
    if (opt.record_dt > 0.0 || run.snapshots.empty()) snap(run.end_time);
  }
  run.final_state = engine.state();
  return run;
}

void write_event_json(std::ostream& os, const EventRecord& ev) {
  os << std::setprecision(17) << "{\"time\":" << ev.time << ",\"kind\":\"" << to_string(ev.kind)
     << "\",\"genotype\":[" << ev.genotype.first() << ',' << ev.genotype.second() << ']';
  if (ev.parents) {
    os << ",\"parents\":[[" << ev.parents->first.first() << ',' << ev.parents->first.second() << "],["
       << ev.parents->second.first() << ',' << ev.parents->second.second() << "]]";
  }
  os << "}\n";
}

}  // namespace adyn
