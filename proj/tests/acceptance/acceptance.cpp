// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "canonical.hpp"
#include "compare.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "ibm.hpp"
#include "invasion.hpp"
#include "parallel.hpp"
#include "scenario.hpp"
#include "stats.hpp"
#include "tss.hpp"

using namespace adyn;

namespace {

int threads = 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Json fixture(const std::string& name) { return load_json_file(std::string(ADYN_FIXTURE_DIR) + "/" + name); }

// f = 2 + phi on [0, 1], D = C = 1; S(1; 0) = 1/2, nbar(u) = 1 + u.
DemographyModel directional(double sigma = 0.02) {
  DemographyModel m;
  m.fertility_fn = PhenotypeFunction::linear(2.0, 1.0);
  m.sigma = sigma;
  m.mu_K = 0.0;
  m.K = 1000;
  m.validate();
  return m;
}

// Random Gaussian-kernel scenario on [-1, 1] and a resident allele whose
// fitness slope is bounded away from zero.
struct RandomScenario {
  DemographyModel model;
  double u_A = 0.0;
  double slope = 0.0;
};

RandomScenario random_scenario(Rng& rng) {
  RandomScenario r;
  DemographyModel& m = r.model;
  m.space = {-1.0, 1.0};
  const double f = rng.uniform(1.5, 3.0);
  m.fertility_fn = PhenotypeFunction::constant(f);
  m.death_fn = PhenotypeFunction::constant(rng.uniform(0.3, 0.9));
  GaussianKernelParams p;
  p.r_bar = rng.uniform(0.5, 1.5);
  p.sigma_a = rng.uniform(0.4, 1.0);
  p.sigma_k = rng.uniform(0.5, 1.2);
  p.phi_0 = rng.uniform(-0.3, 0.3);
  m.competition_fn = CompetitionKernel::gaussian(p);
  m.mu_K = 0.0;
  m.validate();
  do {
    r.u_A = rng.uniform(-0.8, 0.8);
  } while (std::abs(r.u_A - p.phi_0) < 0.2);
  r.slope = invasion_fitness_slope(m, r.u_A);
  return r;
}

double max_norm(const Vec3& a, const Vec3& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

// ------------------------------------------------------------ 1

Verdict logistic_limit() {
  DemographyModel m;  // f = 2, D = 1, C = 1
  m.K = 10000;
  m.mu_K = 0.0;
  const double n0 = 0.1;
  const double horizon = 50.0;
  const int reps = 20;
  // Closed-form n(t) = nbar n0 e^{rt} / (nbar + n0 (e^{rt} - 1)), r = f - D.
  auto exact = [&](double t) { return n0 * std::exp(t) / (1.0 + n0 * (std::exp(t) - 1.0)); };
  double oracle = 0.0;
  const int steps = 25000;
  for (int i = 0; i < steps; ++i) oracle += exact(25.0 + 25.0 * (i + 0.5) / steps) / steps;

  std::vector<double> averages(reps);
  parallel_for(reps, threads, [&](std::int64_t r) {
    PopulationState init;
    init.K = m.K;
    init.add(Genotype::homozygote(0.5), static_cast<std::int64_t>(n0 * m.K));
    IbmEngine e(m, init);
    Rng rng = Rng::stream(101, static_cast<std::uint64_t>(r));
    SimulateOptions opt;
    opt.horizon = horizon;
    opt.record_dt = 0.01;
    const auto run = simulate(e, opt, rng);
    const auto t = run.times();
    const auto n = run.total_density_series();
    std::vector<double> tail;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] >= 25.0) tail.push_back(n[i]);
    averages[static_cast<std::size_t>(r)] = mean(tail);
  });
  double worst = 0.0;
  for (double a : averages) worst = std::max(worst, std::abs(a - oracle) / oracle);
  return {worst < 0.02, fmt("closed-form average %.6f, worst replicate deviation %.3f%% (< 2%%), mean %.5f",
                            oracle, 100.0 * worst, mean(averages))};
}

// ------------------------------------------------------------ 2

Verdict deterministic_limit() {
  IbmOdeSetup setup;
  setup.u_A = 0.0;
  setup.u_a = 1.0;
  setup.initial = {0.5, 0.3, 0.2};
  setup.horizon = 20.0;
  setup.record_dt = 0.05;
  const auto rows = ibm_ode_ladder(directional(), setup, {100, 1000, 10000}, 50, 202, threads);
  bool decreasing = true;
  std::string d = "median sup-error";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d += fmt(" K=%lld: %.4f", static_cast<long long>(rows[i].K), rows[i].median);
    if (i > 0 && !(rows[i].median < rows[i - 1].median)) decreasing = false;
  }
  return {decreasing, d + (decreasing ? " (strictly decreasing)" : " (not decreasing)")};
}

// ------------------------------------------------------------ 3

Verdict neutral_geometry() {
  Rng rng(303);
  double p_drift = 0.0;
  double rate_err = 0.0;
  double gamma_res = 0.0;
  double dual_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double f = rng.uniform(1.5, 3.0);
    const double D0 = rng.uniform(0.2, f - 0.3);
    const double D1 = rng.uniform(0.5, 2.0);
    const auto dm = DimorphicModel::neutral(f, D0, D1);
    const NeutralGeometry g(f, D0, D1);
    for (int i = 0; i <= 20; ++i) {
      const double v = -g.n0() + 2.0 * g.n0() * i / 20.0;
      gamma_res = std::max(gamma_res, max_norm(genotype_rhs(GenotypeDensities::of(g.gamma(v)), dm), {0, 0, 0}));
      const auto b = g.duals(v);
      const std::array<Vec3, 3> e{g.e1(v), g.e2(v), g.e3(v)};
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t c = 0; c < 3; ++c) dual_err = std::max(dual_err, std::abs(dot(b[a], e[c]) - (a == c)));
    }

    GenotypeDensities d0;
    NphCoordinates c0;
    do {
      d0 = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
      c0 = to_nph(d0);
    } while (std::abs(c0.h) < 0.02);
    FlowOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.record_dt = 0.02;
    const double horizon = std::log(std::abs(c0.h) / 1e-6) / f;
    const auto tr = integrate_flow(d0, dm, horizon, opt);
    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      const auto c = to_nph(tr.states[i]);
      p_drift = std::max(p_drift, std::abs(c.p - c0.p));
      ts.push_back(tr.t[i]);
      logs.push_back(std::log(std::abs(c.h)));
    }
    const auto fit = linear_fit(ts, logs);
    rate_err = std::max(rate_err, std::abs(-fit.slope - f) / f);
  }
  const bool ok = p_drift < 1e-8 && rate_err < 0.01 && gamma_res < 1e-10 && dual_err < 1e-10;
  return {ok, fmt("max |p(t)-p(0)| %.2e (< 1e-8), h decay rate error %.2e (< 1%%), Gamma0 residual %.2e, "
                  "dual error %.2e (< 1e-10)",
                  p_drift, rate_err, gamma_res, dual_err)};
}

// ------------------------------------------------------------ 4

Verdict invasion_probability() {
  const auto m = directional();
  const auto dm = DimorphicModel::from_model(m, 0.0, 1.0);
  const double p = survival_probability(dm);
  const auto spec = BranchingSpec::from(dm);
  const auto lim = integrate_extinction(spec);
  const double ode_err = std::abs(1.0 - lim.q[0] - p);

  const std::int64_t runs = 10000;
  Rng rng(404);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < runs; ++i) hits += simulate_branching(spec, Founder::Aa, 1000, rng).reached_threshold;
  const double pb = static_cast<double>(hits) / runs;
  const double sb = std::sqrt(p * (1.0 - p) / runs);

  const auto ibm = monte_carlo_invasion(m, 0.0, 1.0, 10000, 2000, 0.05, 405, threads);
  const double si = std::sqrt(p * (1.0 - p) / static_cast<double>(ibm.trials));
  const bool ok = ode_err < 1e-6 && std::abs(pb - p) <= 3.0 * sb && std::abs(ibm.estimate - p) <= 3.0 * si &&
                  ibm.censored == 0;
  return {ok, fmt("[S]+/f_Aa = %.6f; (a) extinction ODE error %.1e (< 1e-6); (b) branching %.4f, %.2f sigma; "
                  "(c) IBM K=1e4 %.4f over %lld runs, %.2f sigma, %lld censored",
                  p, ode_err, pb, std::abs(pb - p) / sb, ibm.estimate, static_cast<long long>(ibm.trials),
                  std::abs(ibm.estimate - p) / si, static_cast<long long>(ibm.censored))};
}

// ------------------------------------------------------------ 5

Verdict substitution() {
  Rng rng(505);
  double worst = 0.0;
  int forward = 0;
  int backward = 0;
  for (int k = 0; k < 20; ++k) {
    const auto sc = random_scenario(rng);
    for (double zeta : {1e-2, -1e-2}) {
      const auto dm = DimorphicModel::from_model(sc.model, sc.u_A, sc.u_A + zeta);
      const double n = dm.n_AA();
      const GenotypeDensities d0{n * (1.0 + rng.uniform(-0.05, 0.05)), 1e-3, 1e-4};
      FlowOptions opt;
      opt.rtol = 1e-10;
      opt.atol = 1e-13;
      opt.fixed_point_tol = 1e-12;
      const auto tr = integrate_flow(d0, dm, 1e7, opt);
      const bool invades = zeta * sc.slope > 0.0;
      const Vec3 target = invades ? Vec3{0.0, 0.0, dm.n_aa()} : Vec3{n, 0.0, 0.0};
      worst = std::max(worst, max_norm(tr.states.back().vec(), target));
      (invades ? forward : backward)++;
    }
  }
  return {worst < 1e-4 && forward > 0 && backward > 0,
          fmt("%d substitutions, %d returns to the resident; worst distance to the predicted endpoint %.2e (< 1e-4)",
              forward, backward, worst)};
}

// ------------------------------------------------------------ 6

constexpr double kOrderSlack = 0.05;

Verdict two_zeros() {
  Rng rng(606);
  std::string d;
  bool ok = true;
  double min_order = 1e9;
  for (int k = 0; k < 5; ++k) {
    const auto sc = random_scenario(rng);
    const auto g = NeutralGeometry::of(DimorphicModel::from_model(sc.model, sc.u_A, sc.u_A));
    std::vector<double> errs;
    for (double zeta : {1e-2, 5e-3, 2.5e-3}) {
      const auto dm = DimorphicModel::from_model(sc.model, sc.u_A, sc.u_A + zeta);
      const auto zc = count_zeros_near_curve(dm, g);
      if (zc.degenerate || zc.count != 2) ok = false;
      double err = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double v = -g.n0() + 2.0 * g.n0() * i / 40.0;
        const double scaled = reduced_field(dm, g, v) / zeta;
        err = std::max(err, std::abs(scaled - reduced_field_limit(v, g.n0(), sc.slope)));
      }
      errs.push_back(err);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double order = std::log2(errs[i - 1] / errs[i]);
      min_order = std::min(min_order, order);
      // First order up to the O(zeta) drift of a three-point estimate.
      if (!(errs[i] < errs[i - 1]) || order < 1.0 - kOrderSlack) ok = false;
    }
    d += fmt("%s[%.1e %.1e %.1e]", k ? " " : "", errs[0], errs[1], errs[2]);
  }
  return {ok, fmt("two zeros in every case; grid errors at zeta = 1e-2, 5e-3, 2.5e-3: %s; min observed order %.3f (>= 1 - %.2f)",
                  d.c_str(), min_order, kOrderSlack)};
}

// ------------------------------------------------------------ 7

Verdict monotone_phenotype() {
  Rng rng(707);
  double worst_violation = 0.0;
  double worst_m1 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto sc = random_scenario(rng);
    const double zeta = (k % 2 ? 1.0 : -1.0) * 1e-2;
    const auto dm = DimorphicModel::from_model(sc.model, sc.u_A, sc.u_A + zeta);
    const auto g = NeutralGeometry::of(DimorphicModel::from_model(sc.model, sc.u_A, sc.u_A));
    const double v = rng.uniform(-0.8, 0.8) * g.n0();
    const auto pt = zero_curve(dm, g, v);
    FlowOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.record_dt = 1.0;
    const double horizon = 20.0 / std::abs(zeta * sc.slope);
    const auto tr = integrate_flow(GenotypeDensities::of(g.frame_point(v, pt.r, pt.s)), dm, horizon, opt);
    const auto F = average_phenotype_series(tr, phenotype_weights(sc.model, sc.u_A, sc.u_A + zeta));
    const double sign = F.back() >= F.front() ? 1.0 : -1.0;
    for (std::size_t i = 1; i < F.size(); ++i) worst_violation = std::max(worst_violation, -sign * (F[i] - F[i - 1]));
    std::vector<double> t(tr.t.begin(), tr.t.end());
    for (double delta : {10.0, 100.0, 1000.0}) worst_m1 = std::max(worst_m1, m1_modulus(t, F, delta));
  }
  return {worst_violation <= 1e-10 && worst_m1 <= 1e-10,
          fmt("largest step against the trend %.2e, largest M1 modulus %.2e (both <= 1e-10)", worst_violation,
              worst_m1)};
}

// ------------------------------------------------------------ 8

Verdict three_phases() {
  const auto m = directional();
  const double eps = 0.05;
  const std::vector<std::int64_t> Ks{1000, 10000, 100000};
  const std::vector<int> wanted{12, 12, 8};
  std::vector<double> logK;
  std::array<std::vector<double>, 4> means;  // phase 1, 2, 3, total
  std::string d;
  for (std::size_t k = 0; k < Ks.size(); ++k) {
    std::array<std::vector<double>, 4> durations;
    for (std::uint64_t i = 0; static_cast<int>(durations[0].size()) < wanted[k] && i < 400; ++i) {
      Rng rng = Rng::stream(808 + k, i);
      const auto run = simulate_invasion(m, 0.0, 1.0, Ks[k], rng, 0.01);
      if (!run.fixed) continue;
      const auto split = three_phase_split(run.t, run.xyz, eps, 2.0);
      if (!split) continue;
      durations[0].push_back(split->t1);
      durations[1].push_back(split->t2 - split->t1);
      durations[2].push_back(split->t3 - split->t2);
      durations[3].push_back(split->t3);
    }
    logK.push_back(std::log(static_cast<double>(Ks[k])));
    for (std::size_t j = 0; j < 4; ++j) means[j].push_back(mean(durations[j]));
    d += fmt(" K=%lld (%zu runs): %.2f/%.2f/%.2f;", static_cast<long long>(Ks[k]), durations[0].size(),
             means[0].back(), means[1].back(), means[2].back());
  }
  bool ok = true;
  const char* names[] = {"phase1", "phase2", "phase3", "total"};
  std::string fits;
  for (std::size_t j = 0; j < 4; ++j) {
    const auto fit = linear_fit(logK, means[j]);
    fits += fmt(" %s slope %.2f R2 %.3f;", names[j], fit.slope, fit.r_squared);
    // The middle phase follows the deterministic flow and is O(1) in K.
    if (j != 1 && !(fit.slope > 0.0 && fit.r_squared > 0.8)) ok = false;
  }
  return {ok, "mean durations" + d + fits};
}

// ------------------------------------------------------------ 9

Verdict tss_canonical() {
  TssCanonicalSetup setup;
  setup.u0 = 0.1;
  setup.horizon = 5.0;
  setup.grid = 200;
  std::vector<double> dist;
  std::string d;
  for (double sigma : {0.04, 0.02, 0.01}) {
    const auto row = tss_canonical_distance(directional(sigma), sigma, setup, 1000, 909, threads);
    dist.push_back(row.distance);
    d += fmt(" sigma=%.2f: %.4f;", sigma, row.distance);
  }
  const bool ok = dist[1] < dist[0] && dist[2] < dist[1] && dist[2] < 0.05;
  return {ok, "sup distance of the mean TSS path to the canonical solution" + d + " (decreasing, < 0.05 at 0.01)"};
}

// ------------------------------------------------------------ 10

Verdict jump_law() {
  std::string d;
  bool ok = true;
  const auto gauss = DemographyModel::from_json(fixture("tss.json")["singular"]["model"]);
  const auto dir = directional(0.05);
  const std::vector<std::pair<const DemographyModel*, double>> cases{{&gauss, -0.3}, {&gauss, 0.6}, {&dir, 0.3}};
  Rng rng(1010);
  for (const auto& [m, u] : cases) {
    const JumpLaw law(*m, u);
    std::vector<double> waits;
    std::vector<double> steps;
    for (int i = 0; i < 2000; ++i) {
      const auto j = sample_jump(*m, u, rng);
      waits.push_back(j.wait);
      steps.push_back(j.u_new - u);
    }
    const double rate = law.total_rate();
    const double a2 = anderson_darling(waits, [&](double w) { return 1.0 - std::exp(-rate * w); });
    const double ks = ks_statistic(steps, [&](double h) { return law.cdf(h); });
    const double crit = ks_critical(steps.size(), 0.01);
    ok = ok && a2 < anderson_darling_critical(0.01) && ks < crit;
    d += fmt(" u=%.1f: A2 %.3f, KS %.4f;", u, a2, ks);
  }
  return {ok, "waits vs Exp(rate) and steps vs quadrature CDF, 2000 draws each" + d +
                  fmt(" (1%% critical A2 %.3f, KS %.4f)", anderson_darling_critical(0.01), ks_critical(2000, 0.01))};
}

// ------------------------------------------------------------ 11

struct FixtureCheck {
  int checks = 0;
  int failures = 0;
  std::string first_failure;

  void abs(double got, double want, double tol, const std::string& what) {
    ++checks;
    if (!(std::abs(got - want) <= tol)) fail(what, got, want);
  }
  void rel(double got, double want, double tol, const std::string& what) {
    ++checks;
    if (!(std::abs(got - want) <= tol * std::max({1.0, std::abs(got), std::abs(want)}))) fail(what, got, want);
  }
  void fail(const std::string& what, double got, double want) {
    if (failures++ == 0) first_failure = fmt("%s: got %.17g want %.17g", what.c_str(), got, want);
  }
};

Vec3 vec_of(const Json& j) { return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}; }

Verdict fixtures() {
  FixtureCheck fc;
  {
    const auto fx = fixture("model.json");
    const double tol = fx["gaussian_kernel"]["tolerance"];
    for (const auto& c : fx["gaussian_kernel"]["cases"]) {
      const auto& j = c["params"];
      GaussianKernelParams q{j["r_bar"], j["sigma_a"], j["sigma_k"], j["phi_0"]};
      fc.rel(gaussian_competition(q, c["phi_focal"], c["phi_other"]), c["value"], tol, "model.gaussian_kernel");
    }
    const auto mtol = fx["mutation"]["tolerance"].get<double>();
    for (const auto& c : fx["mutation"]["cases"]) {
      const auto m = DemographyModel::from_json(c["model"]);
      const double u = c["u"];
      const auto [lo, hi] = m.step_bounds(u);
      fc.abs(lo, c["lo"], mtol, "model.mutation.lo");
      fc.abs(hi, c["hi"], mtol, "model.mutation.hi");
      for (std::size_t k = 0; k < c["cdf_h"].size(); ++k)
        fc.abs(m.mutation_cdf(u, c["cdf_h"][k]), c["cdf"][k], mtol, "model.mutation.cdf");
    }
    const auto la = DemographyModel::from_json(fx["local_additivity"]["model"]);
    for (const auto& c : fx["local_additivity"]["cases"]) {
      const double u = c["u"];
      const double z = c["zeta"];
      fc.rel(la.phi(u, u + z) - 0.5 * (la.phi(u, u) + la.phi(u + z, u + z)), c["defect"], 1e-9,
             "model.local_additivity");
    }
  }
  {
    const auto fx = fixture("ibm.json");
    const auto m = DemographyModel::from_json(fx["model"]);
    const double tol = fx["rates"]["tolerance"];
    for (const auto& s : fx["rates"]["states"]) {
      PopulationState st;
      st.K = s["K"];
      for (const auto& g : s["genotypes"]) st.add(Genotype(g["u1"], g["u2"]), g["count"]);
      const auto r = total_event_rate(st, m);
      fc.rel(r.birth_total, s["birth_total"], tol, "ibm.rates.birth");
      fc.rel(r.death_total, s["death_total"], tol, "ibm.rates.death");
      for (const auto& g : s["genotypes"])
        fc.rel(death_rate(st, m, Genotype(g["u1"], g["u2"])), g["death_rate"], tol, "ibm.rates.death_rate");
    }
  }
  {
    const auto fx = fixture("dynamics.json");
    const auto fm = DemographyModel::from_json(fx["field"]["model"]);
    for (const auto& c : fx["field"]["cases"]) {
      const Vec3 x = genotype_rhs(GenotypeDensities::of(vec_of(c["state"])),
                                  DimorphicModel::from_model(fm, c["u_A"], c["u_a"]));
      for (std::size_t i = 0; i < 3; ++i) fc.abs(x[i], c["rhs"][i], fx["field"]["tolerance"], "dynamics.field");
    }
    for (const auto& c : fx["logistic"]["cases"])
      fc.abs(integrate_logistic(c["n0"], c["f"], c["D"], c["C"], c["t"]), c["n"], fx["logistic"]["tolerance"],
             "dynamics.logistic");
    const auto gm = DemographyModel::from_json(fx["spectrum"]["model"]);
    for (const auto& c : fx["spectrum"]["cases"]) {
      Vec3 ev = jacobian_spectrum_at_AA(DimorphicModel::from_model(gm, c["u_A"], c["u_a"]));
      std::sort(ev.begin(), ev.end());
      for (std::size_t i = 0; i < 3; ++i)
        fc.abs(ev[i], c["eigenvalues"][i], fx["spectrum"]["tolerance"], "dynamics.spectrum");
    }
    for (const auto& c : fx["neutral"]["cases"]) {
      const NeutralGeometry g(c["f"], c["D0"], c["D1"]);
      for (const auto& p : c["points"]) {
        const double v = p["v"];
        const double tol = fx["neutral"]["tolerance"];
        for (std::size_t i = 0; i < 3; ++i) {
          fc.abs(g.gamma(v)[i], p["gamma"][i], tol, "dynamics.neutral.gamma");
          fc.abs(g.e2(v)[i], p["e2"][i], tol, "dynamics.neutral.e2");
          fc.abs(g.e3(v)[i], p["e3"][i], tol, "dynamics.neutral.e3");
          for (std::size_t j = 0; j < 3; ++j) fc.abs(g.duals(v)[i][j], p["duals"][i][j], 1e-10, "dynamics.neutral.duals");
        }
      }
    }
    const auto rm = DemographyModel::from_json(fx["reduced_limit"]["model"]);
    for (const auto& c : fx["reduced_limit"]["cases"]) {
      const double slope = invasion_fitness_slope(rm, c["u_A"]);
      fc.rel(slope, c["slope"], 1e-7, "dynamics.reduced_limit.slope");
      for (std::size_t i = 0; i < c["v"].size(); ++i)
        fc.abs(reduced_field_limit(c["v"][i], c["n_AA"], slope), c["g"][i], fx["reduced_limit"]["tolerance"],
               "dynamics.reduced_limit");
    }
    const auto em = DemographyModel::from_json(fx["equilibria"]["model"]);
    for (const auto& c : fx["equilibria"]["cases"]) {
      const double u_A = c["u_A"];
      const auto dm = DimorphicModel::from_model(em, u_A, c["u_a"]);
      const auto zc = count_zeros_near_curve(dm, NeutralGeometry::of(DimorphicModel::from_model(em, u_A, u_A)));
      fc.abs(zc.count, 2, 0, "dynamics.equilibria.count");
      if (zc.count == 2) {
        fc.abs(zc.points.front()[0], c["n_AA"], fx["equilibria"]["tolerance"], "dynamics.equilibria.n_AA");
        fc.abs(zc.points.back()[2], c["n_aa"], fx["equilibria"]["tolerance"], "dynamics.equilibria.n_aa");
      }
    }
  }
  {
    const auto fx = fixture("tss.json");
    const auto dm = DemographyModel::from_json(fx["density"]["model"]);
    for (const auto& c : fx["density"]["cases"])
      fc.abs(jump_rate_density(dm, c["u"], c["h"]), c["density"], fx["density"]["tolerance"], "tss.density");
    for (const auto& c : fx["rate"]["cases"]) {
      const auto m = DemographyModel::from_json(c["model"]);
      const JumpLaw law(m, c["u"]);
      fc.rel(law.total_rate(), c["rate"], fx["rate"]["rate_tolerance"], "tss.rate");
      for (std::size_t k = 0; k < c["cdf_h"].size(); ++k)
        fc.abs(law.cdf(c["cdf_h"][k]), c["cdf"][k], fx["rate"]["cdf_tolerance"], "tss.cdf");
    }
    for (const auto& c : fx["asymptotic"]["cases"])
      fc.rel(total_jump_rate(DemographyModel::from_json(c["model"]), c["u"]), c["asymptotic"],
             c["relative_tolerance"], "tss.asymptotic");
    for (const auto& c : fx["ess_rate"]["cases"]) {
      auto cfg = fx["ess_rate"]["model"];
      cfg["mutation"]["sigma"] = c["sigma"];
      fc.rel(total_jump_rate(DemographyModel::from_json(cfg), fx["ess_rate"]["u"]), c["rate"],
             fx["ess_rate"]["tolerance"], "tss.ess_rate");
    }
    const auto rep = find_singular_strategies(DemographyModel::from_json(fx["singular"]["model"]));
    fc.abs(static_cast<double>(rep.points.size()), 1.0, 0.0, "tss.singular.count");
    if (!rep.points.empty()) fc.abs(rep.points[0].u, fx["singular"]["u_star"], fx["singular"]["tolerance"], "tss.singular");
    for (const auto& c : fx["m1"]["cases"])
      fc.abs(m1_modulus(c["t"].get<std::vector<double>>(), c["x"].get<std::vector<double>>(), c["delta"]),
             c["modulus"], fx["m1"]["tolerance"], "tss.m1");
  }
  {
    const auto fx = fixture("canonical.json");
    for (const auto& c : fx["gradient"]["cases"])
      fc.abs(fitness_gradient(DemographyModel::from_json(c["model"]), c["u"]), c["gradient"],
             fx["gradient"]["tolerance"], "canonical.gradient");
    CanonicalOptions with_f;
    with_f.fertility_prefactor = true;
    for (const auto& c : fx["rhs"]["cases"]) {
      const auto m = DemographyModel::from_json(c["model"]);
      fc.rel(canonical_rhs_general(m, c["u"]), c["general"], fx["rhs"]["relative_tolerance"], "canonical.rhs");
      fc.rel(canonical_rhs_general(m, c["u"], with_f), c["general_with_fertility"], fx["rhs"]["relative_tolerance"],
             "canonical.rhs_with_fertility");
    }
    const auto sym = DemographyModel::from_json(fx["asymmetric"]["model"]);
    const auto skew = DemographyModel::from_json(fx["asymmetric"]["skewed_model"]);
    for (const auto& c : fx["asymmetric"]["cases"]) {
      fc.rel(canonical_rhs_general(sym, c["u"]), c["symmetric"], 1e-8, "canonical.asymmetric.symmetric");
      fc.rel(canonical_rhs_general(skew, c["u"]), c["skewed"], 1e-8, "canonical.asymmetric.skewed");
    }
    fc.abs(allelic_variance(sym), fx["allelic_variance"]["value"], fx["allelic_variance"]["tolerance"],
           "canonical.allelic_variance");
    const auto pm = DemographyModel::from_json(fx["phenotypic"]["model"]);
    for (const auto& c : fx["phenotypic"]["cases"])
      fc.rel(canonical_rhs_phenotypic(pm, c["U"]), c["rhs_heterozygote"], fx["phenotypic"]["relative_tolerance"],
             "canonical.phenotypic");
  }
  {
    const auto fx = fixture("invasion.json");
    for (const auto& c : fx["extinction"]["cases"]) {
      const auto dm = DimorphicModel::from_model(DemographyModel::from_json(c["model"]), c["u_A"], c["u_a"]);
      fc.abs(survival_probability(dm), c["formula"], 1e-12, "invasion.formula");
      if (c["critical"].get<bool>()) continue;
      const auto lim = integrate_extinction(BranchingSpec::from(dm));
      fc.abs(lim.q[0], c["q_limit"][0], fx["extinction"]["tolerance"], "invasion.q1");
      fc.abs(lim.q[1], c["q_limit"][1], fx["extinction"]["tolerance"], "invasion.q2");
    }
    for (const auto& c : fx["wilson"]["cases"]) {
      const auto p = proportion(c["successes"], c["trials"]);
      fc.abs(p.ci_low, c["ci_low"], fx["wilson"]["tolerance"], "invasion.wilson.low");
      fc.abs(p.ci_high, c["ci_high"], fx["wilson"]["tolerance"], "invasion.wilson.high");
    }
  }
  {
    const auto fx = fixture("stats.json");
    for (const auto& c : fx["samples"]) {
      const auto x = c["x"].get<std::vector<double>>();
      const double rate = c["rate"];
      std::function<double(double)> cdf = [](double v) { return std::clamp(v, 0.0, 1.0); };
      if (c["law"] == "exponential") cdf = [rate](double v) { return v <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * v); };
      fc.abs(ks_statistic(x, cdf), c["ks"], fx["tolerance"], "stats.ks");
      fc.rel(anderson_darling(x, cdf), c["ad"], 1e-10, "stats.ad");
    }
  }
  if (fc.failures == 0) return {true, fmt("%d fixture values reproduced within their stated tolerances", fc.checks)};
  return {false, fmt("%d of %d fixture values off; first: %s", fc.failures, fc.checks, fc.first_failure.c_str())};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("criteria", only, "criterion numbers to run (default: all)");
  app.add_option("--threads", threads, "worker threads");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "logistic limit", 60, [] { return logistic_limit(); }},
      {2, "dimorphic deterministic limit", 600, [] { return deterministic_limit(); }},
      {3, "neutral geometry", 60, [] { return neutral_geometry(); }},
      {4, "invasion probability", 1800, [] { return invasion_probability(); }},
      {5, "invasion implies substitution", 60, [] { return substitution(); }},
      {6, "two zeros near the neutral line", 60, [] { return two_zeros(); }},
      {7, "monotone mean phenotype", 60, [] { return monotone_phenotype(); }},
      {8, "three-phase structure", 1800, [] { return three_phases(); }},
      {9, "TSS to canonical equation", 600, [] { return tss_canonical(); }},
      {10, "jump-rate law", 60, [] { return jump_law(); }},
      {11, "fixture reproduction", 60, [] { return fixtures(); }},
  };
  const std::set<int> chosen(only.begin(), only.end());
  int failed = 0;
  for (const auto& c : all) {
    if (!chosen.empty() && !chosen.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      v.pass = false;
      v.detail += fmt("; runtime over budget of %.0f s", c.budget_s);
    }
    if (!v.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
