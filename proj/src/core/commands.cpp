#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "canonical.hpp"
#include "compare.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "ibm.hpp"
#include "invasion.hpp"
#include "parallel.hpp"
#include "tss.hpp"

namespace fs = std::filesystem;

namespace adyn {

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : os_(path) {
    if (!os_) throw ConfigError("cannot write '" + path.string() + "'");
    os_ << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }

  template <class... T>
  void row(const T&... cells) {
    std::size_t i = 0;
    ((os_ << (i++ ? "," : ""), put(cells)), ...);
    os_ << '\n';
  }

 private:
  void put(double v) {
    if (std::isnan(v))
      os_ << "nan";
    else
      os_ << v;
  }
  void put(bool v) { os_ << (v ? 1 : 0); }
  template <class I>
  void put(I v) requires std::is_integral_v<I> { os_ << v; }

  std::ofstream os_;
};

void write_json(const fs::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

struct Manifest {
  std::string command;
  Json scenario;
  Json outputs = Json::array();
  Json warnings = Json::array();

  void output(const std::string& name) { outputs.push_back(name); }
  void warn(const std::string& w) { warnings.push_back(w); }
  Json to_json() const {
    return {{"command", command}, {"version", kVersion}, {"scenario", scenario},
            {"outputs", outputs}, {"warnings", warnings}};
  }
};

double first_allele(const Scenario& sc) { return sc.initial.front().first.first(); }

Vec3 default_start(const DemographyModel& model, double u_A) {
  const double n = model.carrying_capacity(u_A);
  return {n, 0.01 * n, 0.0};
}

Vec3 read_start(const Section& sec, const Vec3& fallback) {
  return {sec.number("x0", fallback[0]), sec.number("y0", fallback[1]), sec.number("z0", fallback[2])};
}

Json singular_json(const SingularReport& rep) {
  Json pts = Json::array();
  for (const auto& p : rep.points)
    pts.push_back({{"u", p.u},
                   {"kind", to_string(p.kind)},
                   {"g1_slope", p.slope},
                   {"degenerate", p.degenerate},
                   {"boundary", p.boundary}});
  return {{"degenerate", rep.degenerate}, {"points", pts}};
}

Json proportion_json(const ProportionEstimate& e) {
  return {{"estimate", e.estimate}, {"std_error", e.std_error}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high},
          {"successes", e.successes}, {"replicates", e.trials}, {"censored", e.censored}};
}

// ------------------------------------------------------------ ibm

Json cmd_ibm(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("ibm"), "ibm");
  sec.finish();
  PopulationState init;
  init.K = sc.model.K;
  for (const auto& [g, d] : sc.initial)
    init.add(g, static_cast<std::int64_t>(std::llround(d * static_cast<double>(sc.model.K))));
  if (init.total() == 0) throw ConfigError("initial: population rounds to zero individuals at this K");

  struct Result {
    IbmRun run;
    std::vector<EventRecord> events;
  };
  std::vector<Result> results(static_cast<std::size_t>(sc.run.replicates));
  SimulateOptions opt;
  opt.horizon = sc.run.horizon;
  opt.record_dt = sc.run.record_dt;
  opt.max_events = sc.run.max_events;
  parallel_for(sc.run.replicates, sc.run.threads, [&](std::int64_t r) {
    Rng rng = Rng::stream(sc.run.seed, static_cast<std::uint64_t>(r));
    IbmEngine engine(sc.model, init);
    auto& res = results[static_cast<std::size_t>(r)];
    EventSink sink;
    if (sc.run.event_log) sink = [&res](const EventRecord& ev) { res.events.push_back(ev); };
    res.run = simulate(engine, opt, rng, {}, sink);
  });

  GenotypeRegistry global;
  for (const auto& [g, d] : sc.initial) global.id(g);
  CsvWriter traj(out / "trajectory.csv", {"replicate", "time", "genotype_id", "density"});
  Json reps = Json::array();
  const double k = static_cast<double>(sc.model.K);
  for (std::size_t r = 0; r < results.size(); ++r) {
    const IbmRun& run = results[r].run;
    std::vector<std::size_t> map;
    for (const auto& g : run.registry.genotypes()) map.push_back(global.id(g));
    for (const auto& s : run.snapshots)
      for (const auto& [id, c] : s.counts)
        traj.row(static_cast<std::int64_t>(r), s.time, static_cast<std::int64_t>(map[id]), static_cast<double>(c) / k);
    reps.push_back({{"replicate", r},
                    {"events", run.events},
                    {"extinct", run.extinct},
                    {"truncated", run.truncated},
                    {"end_time", run.end_time},
                    {"final_density", run.final_state.total_density()}});
    if (run.truncated) mf.warn("replicate " + std::to_string(r) + " hit the event budget (truncated run)");
    if (sc.run.event_log) {
      const std::string name = "events_r" + std::to_string(r) + ".jsonl";
      std::ofstream os(out / name);
      for (const auto& ev : results[r].events) write_event_json(os, ev);
      mf.output(name);
    }
  }
  mf.output("trajectory.csv");
  CsvWriter dict(out / "genotypes.csv", {"genotype_id", "u1", "u2", "phenotype"});
  const auto& gs = global.genotypes();
  for (std::size_t i = 0; i < gs.size(); ++i)
    dict.row(static_cast<std::int64_t>(i), gs[i].first(), gs[i].second(), sc.model.phenotype(gs[i]));
  mf.output("genotypes.csv");
  Json report = {{"replicates", reps}, {"K", sc.model.K}};
  write_json(out / "ibm.json", report);
  mf.output("ibm.json");
  return report;
}

// ------------------------------------------------------------ ode

Json cmd_ode(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("ode"), "ode");
  const double u_A = sec.number("u_A", first_allele(sc));
  const double u_a = sec.number("u_a", u_A);
  const Vec3 start = read_start(sec, default_start(sc.model, u_A));
  FlowOptions fo;
  fo.rtol = sec.number("rtol", 1e-9);
  fo.atol = sec.number("atol", 1e-12);
  fo.record_dt = sc.run.record_dt;
  sec.finish();
  mf.scenario["ode"] = {{"u_A", u_A}, {"u_a", u_a}, {"x0", start[0]}, {"y0", start[1]},
                        {"z0", start[2]}, {"rtol", fo.rtol}, {"atol", fo.atol}};

  const DimorphicModel dm = DimorphicModel::from_model(sc.model, u_A, u_a);
  const FlowTrajectory tr = integrate_flow(GenotypeDensities::of(start), dm, sc.run.horizon, fo);
  const Vec3 w = phenotype_weights(sc.model, u_A, u_a);
  CsvWriter csv(out / "ode.csv", {"t", "x", "y", "z", "n", "p", "h", "mean_phenotype"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const auto& s = tr.states[i];
    const double n = s.total();
    NphCoordinates c{n, nan, nan};
    if (n > 0.0) c = to_nph(s);
    csv.row(tr.t[i], s.x, s.y, s.z, n, c.p, c.h, n > 0.0 ? dot(s.vec(), w) / n : nan);
  }
  mf.output("ode.csv");
  const auto& last = tr.states.back();
  Json report = {{"final", {{"x", last.x}, {"y", last.y}, {"z", last.z}}},
                 {"S_Aa_AA", dm.fitness_Aa_in_AA()},
                 {"S_Aa_aa", dm.fitness_Aa_in_aa()},
                 {"points", tr.t.size()}};
  write_json(out / "ode.json", report);
  mf.output("ode.json");
  return report;
}

// ------------------------------------------------------------ tss / ess

Json cmd_tss(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("tss"), "tss");
  const double u0 = sec.number("u0", first_allele(sc));
  TssOptions opt;
  opt.eta = sec.number("eta", sc.model.sigma);
  opt.horizon = sec.number("horizon", sc.run.horizon);
  opt.max_jumps = sec.integer("max_jumps", opt.max_jumps);
  const int grid = static_cast<int>(sec.integer("grid_resolution", 200));
  sec.finish();
  if (opt.eta < 0.0) throw ConfigError("tss.eta: must be nonnegative");
  mf.scenario["tss"] = {{"u0", u0}, {"eta", opt.eta}, {"horizon", opt.horizon},
                        {"max_jumps", opt.max_jumps}, {"grid_resolution", grid}};

  const SingularReport rep = find_singular_strategies(sc.model, grid);
  if (rep.degenerate) mf.warn("fitness gradient vanishes identically; no singular set used for stopping");
  std::vector<double> J;
  for (const auto& p : rep.points) J.push_back(p.u);
  write_json(out / "singular.json", singular_json(rep));
  mf.output("singular.json");

  std::vector<TssTrajectory> runs(static_cast<std::size_t>(sc.run.replicates));
  parallel_for(sc.run.replicates, sc.run.threads, [&](std::int64_t r) {
    Rng rng = Rng::stream(sc.run.seed, static_cast<std::uint64_t>(r));
    runs[static_cast<std::size_t>(r)] = simulate_tss(sc.model, u0, J, opt, rng);
  });
  CsvWriter csv(out / "tss.csv", {"replicate", "jump_index", "time", "u", "S_at_jump", "stopped"});
  Json reps = Json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& tr = runs[r];
    for (std::size_t i = 0; i < tr.jumps.size(); ++i) {
      const auto& j = tr.jumps[i];
      csv.row(static_cast<std::int64_t>(r), j.index, j.time, j.u, j.fitness, tr.stopped && i + 1 == tr.jumps.size());
    }
    reps.push_back({{"replicate", r},
                    {"jumps", tr.jumps.size() - 1},
                    {"stopped", tr.stopped},
                    {"absorbed", tr.absorbed},
                    {"end_time", tr.end_time},
                    {"final_u", tr.jumps.back().u}});
  }
  mf.output("tss.csv");
  Json report = {{"replicates", reps}, {"singular", singular_json(rep)}};
  write_json(out / "tss.json", report);
  mf.output("tss.json");
  return report;
}

Json cmd_ess(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("ess"), "ess");
  const int grid = static_cast<int>(sec.integer("grid_resolution", 200));
  const double tol = sec.number("developmental_tol", 1e-6);
  sec.finish();
  mf.scenario["ess"] = {{"grid_resolution", grid}, {"developmental_tol", tol}};
  const Json report = singular_json(find_singular_strategies(sc.model, grid, tol));
  write_json(out / "singular.json", report);
  mf.output("singular.json");
  return report;
}

// ------------------------------------------------------------ canonical

CanonicalOptions read_canonical_options(const Section& sec) {
  CanonicalOptions o;
  o.fertility_prefactor = sec.boolean("fertility_prefactor", false);
  o.vp = vp_convention_from_string(sec.string("vp_convention", "heterozygote"));
  return o;
}

Json cmd_canonical(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("canonical"), "canonical");
  const double u0 = sec.number("u0", first_allele(sc));
  const CanonicalForm form = canonical_form_from_string(sec.string("form", "general"));
  const CanonicalOptions opt = read_canonical_options(sec);
  CanonicalIntegration integ;
  integ.horizon = sec.number("horizon", sc.run.horizon);
  integ.record_dt = sec.number("record_dt", sc.run.record_dt);
  integ.rtol = sec.number("rtol", integ.rtol);
  sec.finish();
  mf.scenario["canonical"] = {{"u0", u0},
                              {"form", to_string(form)},
                              {"fertility_prefactor", opt.fertility_prefactor},
                              {"vp_convention", to_string(opt.vp)},
                              {"horizon", integ.horizon},
                              {"record_dt", integ.record_dt},
                              {"rtol", integ.rtol}};
  const CanonicalTrajectory tr = integrate_canonical(sc.model, u0, form, integ, opt);
  CsvWriter csv(out / "canonical.csv", {"t", "u", "U", "rhs", "gradient"});
  for (std::size_t i = 0; i < tr.t.size(); ++i) csv.row(tr.t[i], tr.u[i], tr.U[i], tr.rhs[i], tr.gradient[i]);
  mf.output("canonical.csv");
  Json report = {{"form", to_string(form)},
                 {"ess_reached", tr.ess_reached},
                 {"boundary_hit", tr.boundary_hit},
                 {"final_t", tr.t.back()},
                 {"final_u", tr.u.back()}};
  if (tr.boundary_hit) mf.warn("canonical trajectory reached the trait-space boundary (boundary equilibrium)");
  write_json(out / "canonical.json", report);
  mf.output("canonical.json");
  return report;
}

// ------------------------------------------------------------ invasion

Json cmd_invasion(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("invasion"), "invasion");
  const double u_A = sec.number("u_A", first_allele(sc));
  const double u_a = sec.number("u_a");
  const double eps = sec.number("epsilon", 0.1);
  const std::int64_t K = sec.integer("K", sc.model.K);
  const std::int64_t reps = sec.integer("replicates", sc.run.replicates);
  const std::int64_t branching_runs = sec.integer("branching_runs", 0);
  const std::int64_t threshold = sec.integer("threshold", 1000);
  const std::int64_t phase_runs = sec.integer("phase_runs", 0);
  const double phase_dt = sec.number("phase_record_dt", 0.01);
  sec.finish();
  if (!(eps > 0.0)) throw ConfigError("invasion.epsilon: must be positive");
  if (K < 1) throw ConfigError("invasion.K: must be positive");
  mf.scenario["invasion"] = {{"u_A", u_A},
                             {"u_a", u_a},
                             {"epsilon", eps},
                             {"K", K},
                             {"replicates", reps},
                             {"branching_runs", branching_runs},
                             {"threshold", threshold},
                             {"phase_runs", phase_runs},
                             {"phase_record_dt", phase_dt}};

  const DimorphicModel dm = DimorphicModel::from_model(sc.model, u_A, u_a);
  const BranchingSpec spec = BranchingSpec::from(dm);
  const ExtinctionLimit ext = integrate_extinction(spec);
  Json report = {{"S", dm.fitness_Aa_in_AA()},
                 {"f_Aa", dm.fertility[1]},
                 {"formula_probability", survival_probability(dm)},
                 {"extinction_ode",
                  {{"q1", ext.q[0]}, {"q2", ext.q[1]}, {"survival", 1.0 - ext.q[0]},
                   {"residual", ext.residual}, {"horizon", ext.horizon}}},
                 {"K", K},
                 {"epsilon", eps}};
  if (u_A == u_a) {
    report["monte_carlo"] = proportion_json(proportion(0, reps));
    mf.warn("u_A == u_a: identical alleles, mutant lineage indistinguishable; Monte Carlo skipped");
  } else if (reps > 0) {
    report["monte_carlo"] =
        proportion_json(monte_carlo_invasion(sc.model, u_A, u_a, K, reps, eps, sc.run.seed, sc.run.threads));
  }
  if (branching_runs > 0) {
    std::vector<char> hit(static_cast<std::size_t>(branching_runs), 0);
    std::vector<char> cens(hit.size(), 0);
    parallel_for(branching_runs, sc.run.threads, [&](std::int64_t r) {
      Rng rng = Rng::stream(sc.run.seed ^ 0x6272616e6368ULL, static_cast<std::uint64_t>(r));
      const auto o = simulate_branching(spec, Founder::Aa, threshold, rng);
      hit[static_cast<std::size_t>(r)] = o.reached_threshold;
      cens[static_cast<std::size_t>(r)] = o.censored;
    });
    std::int64_t h = 0;
    std::int64_t c = 0;
    for (std::size_t i = 0; i < hit.size(); ++i) {
      h += hit[i];
      c += cens[i];
    }
    report["branching"] = proportion_json(proportion(h, branching_runs - c, c));
  }
  if (phase_runs > 0 && u_A != u_a) {
    std::vector<InvasionRun> runs(static_cast<std::size_t>(phase_runs));
    parallel_for(phase_runs, sc.run.threads, [&](std::int64_t r) {
      Rng rng = Rng::stream(sc.run.seed ^ 0x7068617365ULL, static_cast<std::uint64_t>(r));
      runs[static_cast<std::size_t>(r)] = simulate_invasion(sc.model, u_A, u_a, K, rng, phase_dt);
    });
    CsvWriter csv(out / "phases.csv", {"replicate", "fixed", "t1", "t2", "t3"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto split = three_phase_split(runs[r].t, runs[r].xyz, eps, dm.n_aa());
      if (split)
        csv.row(static_cast<std::int64_t>(r), true, split->t1, split->t2, split->t3);
      else
        csv.row(static_cast<std::int64_t>(r), false, nan, nan, nan);
    }
    mf.output("phases.csv");
  }
  write_json(out / "invasion.json", report);
  mf.output("invasion.json");
  return report;
}

// ------------------------------------------------------------ compare

Json cmd_compare(const Scenario& sc, const fs::path& out, Manifest& mf) {
  const Section sec(sc.section("compare"), "compare");
  const std::string kind = sec.string("kind", "ibm_ode");
  Json report = {{"kind", kind}};
  if (kind == "ibm_ode") {
    IbmOdeSetup setup;
    setup.u_A = sec.number("u_A", first_allele(sc));
    setup.u_a = sec.number("u_a");
    setup.initial = read_start(sec, default_start(sc.model, setup.u_A));
    setup.horizon = sec.number("horizon", sc.run.horizon);
    setup.record_dt = sec.number("record_dt", sc.run.record_dt);
    const auto Ks = sec.integers("K", {sc.model.K});
    const std::int64_t reps = sec.integer("replicates", sc.run.replicates);
    sec.finish();
    mf.scenario["compare"] = {{"kind", kind}, {"u_A", setup.u_A}, {"u_a", setup.u_a},
                              {"x0", setup.initial[0]}, {"y0", setup.initial[1]}, {"z0", setup.initial[2]},
                              {"horizon", setup.horizon}, {"record_dt", setup.record_dt}, {"K", Ks},
                              {"replicates", reps}};
    if (!(setup.record_dt > 0.0)) throw ConfigError("compare.record_dt: must be positive");
    const auto rows = ibm_ode_ladder(sc.model, setup, Ks, reps, sc.run.seed, sc.run.threads);
    Json jr = Json::array();
    for (const auto& r : rows)
      jr.push_back({{"K", r.K}, {"median_sup_error", r.median}, {"mean_sup_error", r.mean}, {"errors", r.errors}});
    report["rows"] = jr;
  } else if (kind == "tss_canonical") {
    TssCanonicalSetup setup;
    setup.u0 = sec.number("u0", first_allele(sc));
    setup.horizon = sec.number("horizon", sc.run.horizon);
    setup.grid = static_cast<int>(sec.integer("grid", 200));
    setup.eta = sec.number("eta", 0.0);
    setup.form = canonical_form_from_string(sec.string("form", "general"));
    setup.options = read_canonical_options(sec);
    const auto sigmas = sec.numbers("sigmas", {sc.model.sigma});
    const std::int64_t reps = sec.integer("replicates", sc.run.replicates);
    sec.finish();
    mf.scenario["compare"] = {{"kind", kind},
                              {"u0", setup.u0},
                              {"horizon", setup.horizon},
                              {"grid", setup.grid},
                              {"eta", setup.eta},
                              {"form", to_string(setup.form)},
                              {"fertility_prefactor", setup.options.fertility_prefactor},
                              {"vp_convention", to_string(setup.options.vp)},
                              {"sigmas", sigmas},
                              {"replicates", reps}};
    Json jr = Json::array();
    CsvWriter csv(out / "compare_paths.csv", {"sigma", "t", "mean_tss", "canonical"});
    for (double s : sigmas) {
      const auto row = tss_canonical_distance(sc.model, s, setup, reps, sc.run.seed, sc.run.threads);
      for (std::size_t k = 0; k < row.times.size(); ++k) csv.row(s, row.times[k], row.mean_path[k], row.canonical_path[k]);
      jr.push_back({{"sigma", s}, {"distance", row.distance}, {"m1_modulus", row.m1}, {"replicates", row.replicates},
                    {"stopped", row.stopped}, {"absorbed", row.absorbed}});
    }
    mf.output("compare_paths.csv");
    report["rows"] = jr;
  } else if (kind == "csv") {
    const std::string a = sec.string("a", "");
    const std::string b = sec.string("b", "");
    sec.finish();
    if (a.empty() || b.empty()) throw ConfigError("compare: kind 'csv' needs fields 'a' and 'b'");
    mf.scenario["compare"] = {{"kind", kind}, {"a", a}, {"b", b}};
    report["distance"] = csv_distance(a, b);
  } else {
    throw ConfigError("compare.kind: unknown kind '" + kind + "' (expected ibm_ode, tss_canonical or csv)");
  }
  write_json(out / "compare.json", report);
  mf.output("compare.json");
  return report;
}

Json run_single(const Scenario& sc, const std::string& command, const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out.string() + "': " + ec.message());
  Manifest mf;
  mf.command = command;
  mf.scenario = sc.config;
  mf.scenario.erase("sweep");
  for (const auto& w : time_scale_advisory(sc.model)) mf.warn(w);
  Json report;
  if (command == "ibm")
    report = cmd_ibm(sc, out, mf);
  else if (command == "ode")
    report = cmd_ode(sc, out, mf);
  else if (command == "tss")
    report = cmd_tss(sc, out, mf);
  else if (command == "canonical")
    report = cmd_canonical(sc, out, mf);
  else if (command == "invasion")
    report = cmd_invasion(sc, out, mf);
  else if (command == "compare")
    report = cmd_compare(sc, out, mf);
  else if (command == "ess")
    report = cmd_ess(sc, out, mf);
  else
    throw ConfigError("unknown command '" + command + "'");
  write_json(out / "manifest.json", mf.to_json());
  report["warnings"] = mf.warnings;
  return report;
}

std::string value_label(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ibm", "ode", "tss", "canonical", "invasion", "compare", "ess"};
  return names;
}

Json run_command(const Scenario& scenario, const std::string& command, const std::string& out_dir) {
  bool known = false;
  for (const auto& n : command_names()) known = known || n == command;
  if (!known) throw ConfigError("unknown command '" + command + "'");
  const fs::path out(out_dir);
  if (!scenario.sweep.active()) return run_single(scenario, command, out);

  Json points = Json::array();
  for (const auto& v : scenario.sweep.values) {
    Json cfg = scenario.input;
    cfg.erase("sweep");
    set_path(cfg, scenario.sweep.parameter, v);
    const Scenario sub = Scenario::from_json(cfg);
    const std::string dir = scenario.sweep.parameter + "=" + value_label(v);
    Json rep = run_single(sub, command, out / dir);
    points.push_back({{"value", v}, {"directory", dir}, {"report", rep}});
  }
  Json manifest = {{"command", command},
                   {"version", kVersion},
                   {"sweep", {{"parameter", scenario.sweep.parameter}, {"values", scenario.sweep.values}}},
                   {"directories", Json::array()},
                   {"scenario", scenario.config}};
  for (const auto& p : points) manifest["directories"].push_back(p["directory"]);
  std::error_code ec;
  fs::create_directories(out, ec);
  write_json(out / "manifest.json", manifest);
  Json warnings = Json::array();
  for (const auto& p : points)
    for (const auto& w : p["report"]["warnings"]) warnings.push_back(p["directory"].get<std::string>() + ": " + w.get<std::string>());
  return {{"sweep", points}, {"warnings", warnings}};
}

}  // namespace adyn
