#include <doctest.h>

#include <set>
#include <sstream>

#include "errors.hpp"
#include "ibm.hpp"
#include "stats.hpp"
#include "support.hpp"

using namespace adyn;

namespace {

PopulationState state_of(const Json& s) {
  PopulationState st;
  st.K = s["K"];
  for (const auto& g : s["genotypes"]) st.add(Genotype(g["u1"], g["u2"]), g["count"]);
  return st;
}

}  // namespace

TEST_CASE("death rate includes the self term") {
  const auto m = testing::neutral_constant(10);
  PopulationState st;
  st.K = 10;
  st.add(Genotype::homozygote(0.5), 1);
  CHECK(death_rate(st, m, Genotype::homozygote(0.5)) == doctest::Approx(1.1));

  PopulationState two;
  two.K = 10;
  two.add(Genotype::homozygote(0.2), 5);
  two.add(Genotype::homozygote(0.8), 5);
  CHECK(death_rate(two, m, Genotype::homozygote(0.2)) == doctest::Approx(1.0 + 10.0 / 10.0));
  CHECK(death_rate(two, m, Genotype::homozygote(0.8)) == doctest::Approx(2.0));
}

TEST_CASE("birth totals for tiny populations") {
  const auto m = testing::neutral_constant(10);
  PopulationState one;
  one.K = 10;
  one.add(Genotype::homozygote(0.5), 1);
  CHECK(total_event_rate(one, m).birth_total == 0.0);
  PopulationState two = one;
  two.add(Genotype::homozygote(0.5), 1);
  CHECK(total_event_rate(two, m).birth_total == doctest::Approx(2.0));
  CHECK(total_event_rate(PopulationState{}, m).total() == 0.0);
}

TEST_CASE("rates match the brute-force pairwise oracle") {
  const auto fx = testing::fixture("ibm.json");
  const auto m = testing::model_of(fx["model"]);
  const double tol = fx["rates"]["tolerance"];
  for (const auto& s : fx["rates"]["states"]) {
    const auto st = state_of(s);
    const auto r = total_event_rate(st, m);
    CHECK(testing::close_rel(r.birth_total, s["birth_total"], tol));
    CHECK(testing::close_rel(r.death_total, s["death_total"], tol));
    auto mk = m;
    mk.K = st.K;
    IbmEngine engine(mk, st);
    const auto er = engine.rates();
    CHECK(testing::close_rel(er.birth_total, s["birth_total"], tol));
    CHECK(testing::close_rel(er.death_total, s["death_total"], tol));
    for (const auto& g : s["genotypes"]) {
      const Genotype gt(g["u1"], g["u2"]);
      CHECK(testing::close_rel(death_rate(st, m, gt), g["death_rate"], tol));
      CHECK(testing::close_rel(engine.death_rate(gt), g["death_rate"], tol));
    }
  }
}

TEST_CASE("Mendelian offspring without mutation") {
  const auto m = testing::directional(0.02, 0.0);
  Rng rng(3);
  const Genotype AA = Genotype::homozygote(0.2);
  const Genotype aa = Genotype::homozygote(0.8);
  const Genotype Aa(0.2, 0.8);
  for (int i = 0; i < 1000; ++i) {
    CHECK(offspring(AA, AA, m, rng).first == AA);
    CHECK(offspring(AA, aa, m, rng).first == Aa);
  }

  const auto fx = testing::fixture("ibm.json")["mendel"];
  const int trials = fx["trials"];
  int nAA = 0, nAa = 0, naa = 0;
  for (int i = 0; i < trials; ++i) {
    const auto [child, mutated] = offspring(Aa, Aa, m, rng);
    REQUIRE_FALSE(mutated);
    if (child == AA) ++nAA;
    else if (child == Aa) ++nAa;
    else if (child == aa) ++naa;
  }
  const int obs[3] = {nAA, nAa, naa};
  for (int k = 0; k < 3; ++k) {
    const double freq = static_cast<double>(obs[k]) / trials;
    CHECK(freq >= fx["bands"][k]["lo"].get<double>());
    CHECK(freq <= fx["bands"][k]["hi"].get<double>());
  }
}

TEST_CASE("mutation displaces exactly one allele by at most sigma") {
  const auto m = testing::directional(0.05, 1.0);
  Rng rng(17);
  const Genotype mother(0.3, 0.6);
  const Genotype father(0.4, 0.7);
  int upper_slot = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto [child, mutated] = offspring(mother, father, m, rng);
    REQUIRE(mutated);
    // one allele comes unchanged from a parent, the other is within sigma of one
    const std::set<double> parental{0.3, 0.6, 0.4, 0.7};
    const bool first_plain = parental.contains(child.first());
    const bool second_plain = parental.contains(child.second());
    CHECK((first_plain || second_plain));
    const double moved = first_plain ? child.second() : child.first();
    double best = 1.0;
    for (double p : parental) best = std::min(best, std::abs(moved - p));
    CHECK(best <= 0.05 + 1e-15);
    if (second_plain && !first_plain) ++upper_slot;
  }
  CHECK(upper_slot > 0);
}

TEST_CASE("birth_event requires two individuals") {
  const auto m = testing::neutral_constant(10);
  PopulationState one;
  one.K = 10;
  one.add(Genotype::homozygote(0.5), 1);
  Rng rng(1);
  CHECK_THROWS_AS(birth_event(one, m, rng), PreconditionError);
  one.add(Genotype::homozygote(0.1), 1);
  const auto b = birth_event(one, m, rng);
  CHECK(b.mother != b.father);  // no selfing with one individual per genotype
}

TEST_CASE("seeded replay gives identical event sequences") {
  const auto m = testing::directional(0.05, 0.01, 200);
  PopulationState init;
  init.K = 200;
  init.add(Genotype::homozygote(0.3), 200);
  auto record = [&](std::uint64_t seed) {
    IbmEngine e(m, init);
    Rng rng(seed);
    std::ostringstream os;
    for (int i = 0; i < 3000; ++i) {
      const auto o = e.step(rng);
      if (o.status != IbmEngine::StepStatus::event) break;
      write_event_json(os, o.event);
    }
    return os.str();
  };
  CHECK(record(42) == record(42));
  CHECK(record(42) != record(43));
}

TEST_CASE("pure-death population goes extinct") {
  DemographyModel m;
  m.fertility_fn = PhenotypeFunction::constant(0.0);
  m.K = 50;
  PopulationState init;
  init.K = 50;
  init.add(Genotype::homozygote(0.5), 50);
  IbmEngine e(m, init);
  Rng rng(2);
  SimulateOptions opt;
  opt.horizon = 1e9;
  const auto run = simulate(e, opt, rng);
  CHECK(run.extinct);
  CHECK(run.events == 50);
  CHECK(run.final_state.total() == 0);
}

TEST_CASE("count conservation, time order and rate bookkeeping") {
  const auto m = testing::model_of(testing::fixture("ibm.json")["model"]);
  auto mk = m;
  mk.K = 300;
  mk.mu_K = 0.05;
  mk.sigma = 0.1;
  PopulationState init;
  init.K = 300;
  init.add(Genotype::homozygote(0.3), 200);
  init.add(Genotype(0.3, 0.7), 60);
  IbmEngine e(mk, init);
  Rng rng(8);
  double last_t = 0.0;
  std::int64_t last_n = e.total();
  for (int i = 0; i < 40000; ++i) {
    const auto o = e.step(rng);
    REQUIRE(o.status == IbmEngine::StepStatus::event);
    CHECK(o.event.time > last_t);
    CHECK(std::abs(e.total() - last_n) == 1);
    last_t = o.event.time;
    last_n = e.total();
    if (i % 10000 == 9999) {
      CHECK(e.consistency_error() < 1e-9);
      const auto fresh = total_event_rate(e.state(), mk);
      CHECK(testing::close_rel(e.rates().death_total, fresh.death_total, 1e-9));
      CHECK(testing::close_rel(e.rates().birth_total, fresh.birth_total, 1e-9));
    }
  }
  CHECK(e.genotype_count() > 2);
  for (std::int64_t c : e.counts()) CHECK(c > 0);
}

TEST_CASE("zero horizon returns the initial state") {
  const auto m = testing::directional();
  PopulationState init;
  init.K = 1000;
  init.add(Genotype::homozygote(0.3), 1000);
  IbmEngine e(m, init);
  Rng rng(1);
  SimulateOptions opt;
  opt.horizon = 0.0;
  const auto run = simulate(e, opt, rng);
  REQUIRE(run.snapshots.size() == 1);
  CHECK(run.events == 0);
  CHECK(run.snapshots[0].counts[0].second == 1000);
}

TEST_CASE("no mutation keeps the support inside {AA, Aa, aa}") {
  const auto m = testing::directional(0.05, 0.0, 300);
  PopulationState init;
  init.K = 300;
  init.add(Genotype::homozygote(0.2), 150);
  init.add(Genotype(0.2, 0.9), 50);
  IbmEngine e(m, init);
  Rng rng(4);
  SimulateOptions opt;
  opt.horizon = 20.0;
  const auto run = simulate(e, opt, rng);
  for (const auto& g : run.registry.genotypes()) {
    CHECK((g.first() == 0.2 || g.first() == 0.9));
    CHECK((g.second() == 0.2 || g.second() == 0.9));
  }
}

TEST_CASE("monomorphic logistic time average") {
  const auto fx = testing::fixture("ibm.json")["logistic"];
  DemographyModel m;
  m.K = fx["K"];
  PopulationState init;
  init.K = m.K;
  init.add(Genotype::homozygote(0.5), m.K / 10);
  IbmEngine e(m, init);
  Rng rng(12);
  SimulateOptions opt;
  opt.horizon = fx["horizon"];
  opt.record_dt = 0.05;
  const auto run = simulate(e, opt, rng);
  const auto t = run.times();
  const auto n = run.total_density_series();
  std::vector<double> tail;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= 0.5 * opt.horizon) tail.push_back(n[i]);
  CHECK(std::abs(mean(tail) - fx["nbar"].get<double>()) < fx["relative_tolerance"].get<double>());
}

TEST_CASE("event budget truncates a run") {
  const auto m = testing::neutral_constant(1000);
  PopulationState init;
  init.K = 1000;
  init.add(Genotype::homozygote(0.5), 1000);
  IbmEngine e(m, init);
  Rng rng(1);
  SimulateOptions opt;
  opt.horizon = 100.0;
  opt.max_events = 500;
  const auto run = simulate(e, opt, rng);
  CHECK(run.truncated);
  CHECK(run.events == 500);
}

TEST_CASE("event log lines are JSON") {
  EventRecord ev;
  ev.time = 1.5;
  ev.kind = EventKind::mutant_birth;
  ev.genotype = Genotype(0.1, 0.2);
  ev.parents = std::make_pair(Genotype(0.1, 0.1), Genotype(0.2, 0.3));
  std::ostringstream os;
  write_event_json(os, ev);
  const auto j = Json::parse(os.str());
  CHECK(j["kind"] == "mutant_birth");
  CHECK(j["parents"][1][1].get<double>() == 0.3);
}
