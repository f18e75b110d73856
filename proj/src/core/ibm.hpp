#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace adyn {

// Individuals grouped by genotype. Genotypes with zero count are not kept.
struct PopulationState {
  std::map<Genotype, std::int64_t> counts;
  std::int64_t K = 1;
  double time = 0.0;

  std::int64_t total() const;
  double density(const Genotype& g) const;
  double total_density() const { return static_cast<double>(total()) / static_cast<double>(K); }
  void add(const Genotype& g, std::int64_t n);
};

enum class EventKind { birth, mutant_birth, death };
const char* to_string(EventKind kind);

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::death;
  Genotype genotype;
  std::optional<std::pair<Genotype, Genotype>> parents;  // (mother, father)
};

struct EventRates {
  double birth_total = 0.0;
  double death_total = 0.0;
  double total() const { return birth_total + death_total; }
};

// Per-individual death rate D(g) + (1/K) sum_j C(g, g_j), the sum running
// over every individual, the focal one included.
double death_rate(const PopulationState& state, const DemographyModel& model, const Genotype& g);
EventRates total_event_rate(const PopulationState& state, const DemographyModel& model);

// Genotype of a newborn from the given parents: one uniformly chosen
// allele from each, then with probability mu_K one uniformly chosen slot
// of the child is displaced by a mutation step centred on that allele.
std::pair<Genotype, bool> offspring(const Genotype& mother, const Genotype& father,
                                    const DemographyModel& model, Rng& rng);

// Picks mother and father (j != i) from the state and returns the child.
// Requires at least two individuals.
struct BirthDraw {
  Genotype mother;
  Genotype father;
  Genotype child;
  bool mutated = false;
};
BirthDraw birth_event(const PopulationState& state, const DemographyModel& model, Rng& rng);

// Gillespie engine with per-genotype aggregated rates. The competition
// pressure on each genotype is updated incrementally on every event.
class IbmEngine {
 public:
  IbmEngine(const DemographyModel& model, const PopulationState& initial);

  const DemographyModel& model() const { return model_; }
  double time() const { return time_; }
  std::int64_t total() const { return total_; }
  std::int64_t K() const { return K_; }
  std::size_t genotype_count() const { return genotypes_.size(); }
  const std::vector<Genotype>& genotypes() const { return genotypes_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t count(const Genotype& g) const;
  double density(const Genotype& g) const { return static_cast<double>(count(g)) / static_cast<double>(K_); }
  PopulationState state() const;

  EventRates rates() const;
  double death_rate(const Genotype& g) const;
  // Constant added to every background death rate D(g).
  void set_death_offset(double offset);

  enum class StepStatus { event, horizon, absorbed };
  struct StepOutcome {
    StepStatus status = StepStatus::absorbed;
    EventRecord event;
  };
  // One event. If the next event would fall after t_max the clock is set
  // to t_max and nothing else changes; `absorbed` means the total rate is
  // zero (e.g. extinct population).
  StepOutcome step(Rng& rng, double t_max = std::numeric_limits<double>::infinity());
  // Maximum relative discrepancy between incrementally maintained and
  // recomputed competition pressures.
  double consistency_error() const;
  // Recomputes the pressures from scratch, throwing NumericalError if the
  // incremental values drifted by more than tol.
  void resync(double tol = 1e-9);

 private:
  std::size_t index_of(const Genotype& g);
  void change(std::size_t idx, std::int64_t delta);
  void remove_slot(std::size_t idx);

  DemographyModel model_;
  std::int64_t K_;
  double time_ = 0.0;
  double death_offset_ = 0.0;
  std::int64_t total_ = 0;
  std::vector<Genotype> genotypes_;
  std::vector<std::int64_t> counts_;
  std::vector<double> fert_;
  std::vector<double> death_;
  std::vector<std::vector<double>> comp_;  // comp_[a][b] = C(g_a, g_b)
  std::vector<double> pressure_;           // sum_b C(g_a, g_b) n_b
  std::map<Genotype, std::size_t> slot_;
};

// Stable genotype numbering for output.
class GenotypeRegistry {
 public:
  std::size_t id(const Genotype& g);
  std::optional<std::size_t> find(const Genotype& g) const;
  const std::vector<Genotype>& genotypes() const { return list_; }

 private:
  std::map<Genotype, std::size_t> ids_;
  std::vector<Genotype> list_;
};

struct Snapshot {
  double time = 0.0;
  std::vector<std::pair<std::size_t, std::int64_t>> counts;  // (genotype id, count)
};

struct SimulateOptions {
  double horizon = 0.0;
  // Recording interval; 0 records after every event.
  double record_dt = 0.1;
  std::uint64_t max_events = 2'000'000'000ULL;
  std::uint64_t check_every = 10'000;
  double check_tolerance = 1e-9;
};

struct IbmRun {
  GenotypeRegistry registry;
  std::vector<Snapshot> snapshots;
  PopulationState final_state;
  std::uint64_t events = 0;
  bool extinct = false;
  bool truncated = false;
  bool stopped = false;  // stop predicate fired
  double end_time = 0.0;

  // Densities of the given genotype at every snapshot.
  std::vector<double> series(const Genotype& g) const;
  std::vector<double> times() const;
  std::vector<double> total_density_series() const;
};

using StopPredicate = std::function<bool(const IbmEngine&)>;
using EventSink = std::function<void(const EventRecord&)>;

// Runs the engine until the horizon, extinction, the event budget, or the
// stop predicate (checked after every event). The state at time t is the
// state after all events at times <= t; snapshots sit on the record grid
// plus one final snapshot at the end time.
IbmRun simulate(IbmEngine& engine, const SimulateOptions& opt, Rng& rng,
                const StopPredicate& stop = {}, const EventSink& sink = {});

// JSON-lines event log line.
void write_event_json(std::ostream& os, const EventRecord& ev);

}  // namespace adyn
