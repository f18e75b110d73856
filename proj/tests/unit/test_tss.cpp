#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "stats.hpp"
#include "support.hpp"
#include "quadrature.hpp"
#include "tss.hpp"

using namespace adyn;

namespace {

std::vector<double> doubles(const Json& j) { return j.get<std::vector<double>>(); }

}  // namespace

TEST_CASE("jump density matches oracle") {
  const auto fx = testing::fixture("tss.json")["density"];
  const auto m = testing::model_of(fx["model"]);
  const double tol = fx["tolerance"];
  for (const auto& c : fx["cases"]) {
    const double d = jump_rate_density(m, c["u"], c["h"]);
    CHECK(std::abs(d - c["density"].get<double>()) <= tol);
  }
}

TEST_CASE("jump density vanishes where the mutant cannot invade") {
  const auto m = testing::directional(0.05);
  const JumpLaw law(m, 0.4);
  for (double h = law.lo(); h <= 0.0; h += 0.005) CHECK(law.density(h) == 0.0);
  CHECK(law.density(0.01) > 0.0);
  CHECK(law.cdf(law.lo()) == 0.0);
  CHECK(law.cdf(0.0) == 0.0);
  CHECK(law.cdf(law.hi()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jump rates and step law match oracle") {
  const auto fx = testing::fixture("tss.json")["rate"];
  const double rtol = fx["rate_tolerance"];
  const double ctol = fx["cdf_tolerance"];
  for (const auto& c : fx["cases"]) {
    const auto m = testing::model_of(c["model"]);
    const double u = c["u"];
    const JumpLaw law(m, u);
    CHECK(testing::close_rel(law.total_rate(), c["rate"].get<double>(), rtol));
    CHECK(total_jump_rate(m, u) == law.total_rate());
    const auto hs = doubles(c["cdf_h"]);
    const auto cdf = doubles(c["cdf"]);
    for (std::size_t i = 0; i < hs.size(); ++i) CHECK(std::abs(law.cdf(hs[i]) - cdf[i]) <= ctol);
  }
}

TEST_CASE("small-sigma jump rate follows the gradient asymptotics") {
  for (const auto& c : testing::fixture("tss.json")["asymptotic"]["cases"]) {
    const auto m = testing::model_of(c["model"]);
    const double rate = total_jump_rate(m, c["u"]);
    CHECK(testing::close_rel(rate, c["asymptotic"].get<double>(), c["relative_tolerance"].get<double>()));
  }
}

TEST_CASE("jump rate at the singular strategy is second order in sigma") {
  const auto fx = testing::fixture("tss.json")["ess_rate"];
  const double u = fx["u"];
  std::vector<double> rates;
  for (const auto& c : fx["cases"]) {
    auto cfg = fx["model"];
    cfg["mutation"]["sigma"] = c["sigma"];
    const double r = total_jump_rate(testing::model_of(cfg), u);
    CHECK(testing::close_rel(r, c["rate"].get<double>(), fx["tolerance"].get<double>()));
    rates.push_back(r);
  }
  CHECK(rates[0] / rates[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("singular strategy of the Gaussian scenario") {
  const auto fx = testing::fixture("tss.json")["singular"];
  const auto m = testing::model_of(fx["model"]);
  const auto rep = find_singular_strategies(m);
  CHECK_FALSE(rep.degenerate);
  REQUIRE(rep.points.size() == 1);
  const auto& s = rep.points[0];
  CHECK(std::abs(s.u - fx["u_star"].get<double>()) <= fx["tolerance"].get<double>());
  CHECK(s.kind == SingularKind::ecological);
  CHECK(s.slope < 0.0);
  CHECK_FALSE(s.boundary);
  CHECK(std::string(to_string(s.kind)) == "ecological");
}

TEST_CASE("neutral model has no isolated singular strategies") {
  const auto rep = find_singular_strategies(testing::neutral_constant());
  CHECK(rep.degenerate);
  CHECK(rep.points.empty());
  CHECK(total_jump_rate(testing::neutral_constant(), 0.5) == 0.0);
  CHECK_THROWS_AS(find_singular_strategies(testing::neutral_constant(), 1), PreconditionError);
}

TEST_CASE("developmental singularity where the phenotype map is flat") {
  auto cfg = testing::fixture("tss.json")["singular"]["model"];
  cfg["phenotype"] = {{"family", "polynomial"}, {"coefficients", {0.0, 0.0, 1.0}}};
  cfg["competition"]["phi_0"] = 0.5;
  const auto rep = find_singular_strategies(testing::model_of(cfg));
  bool found = false;
  for (const auto& s : rep.points)
    if (std::abs(s.u) < 1e-6) found = found || s.kind == SingularKind::developmental;
  CHECK(found);
}

TEST_CASE("sampled steps follow the step law") {
  const auto m = testing::model_of(testing::fixture("tss.json")["singular"]["model"]);
  const JumpLaw law(m, -0.3);
  Rng rng(21);
  std::vector<double> steps;
  for (int i = 0; i < 4000; ++i) steps.push_back(law.sample_step(rng));
  for (double h : steps) {
    CHECK(h > 0.0);
    CHECK(h <= law.hi());
  }
  const double d = ks_statistic(steps, [&](double h) { return law.cdf(h); });
  CHECK(d < ks_critical(steps.size(), 0.01));
}

TEST_CASE("jump waits are exponential with the total rate") {
  const auto m = testing::directional(0.05);
  Rng rng(8);
  std::vector<double> waits;
  for (int i = 0; i < 4000; ++i) {
    const auto d = sample_jump(m, 0.3, rng);
    REQUIRE_FALSE(d.absorbed);
    CHECK(d.u_new > 0.3);
    waits.push_back(d.wait);
  }
  const double rate = total_jump_rate(m, 0.3);
  const double a2 = anderson_darling(waits, [&](double w) { return 1.0 - std::exp(-rate * w); });
  CHECK(a2 < anderson_darling_critical(0.01));
  Rng r2(1);
  CHECK(sample_jump(testing::neutral_constant(), 0.5, r2).absorbed);
}

TEST_CASE("directional TSS climbs and every jump invades") {
  const auto m = testing::directional(0.05);
  Rng rng(4);
  TssOptions opt;
  opt.horizon = 2000.0;
  const auto tr = simulate_tss(m, 0.1, {}, opt, rng);
  REQUIRE(tr.jumps.size() > 5);
  for (std::size_t i = 1; i < tr.jumps.size(); ++i) {
    CHECK(tr.jumps[i].u > tr.jumps[i - 1].u);
    CHECK(tr.jumps[i].time >= tr.jumps[i - 1].time);
    CHECK(tr.jumps[i].fitness > 0.0);
    CHECK(tr.jumps[i].index == static_cast<std::int64_t>(i));
  }
  CHECK(tr.end_time == opt.horizon);
  CHECK(tr.value_at(0.0) == 0.1);
  CHECK(tr.value_at(1e9) == tr.jumps.back().u);
}

TEST_CASE("TSS replays from a seed") {
  const auto m = testing::directional(0.05);
  TssOptions opt;
  opt.horizon = 500.0;
  Rng a(99);
  Rng b(99);
  const auto ta = simulate_tss(m, 0.2, {}, opt, a);
  const auto tb = simulate_tss(m, 0.2, {}, opt, b);
  REQUIRE(ta.jumps.size() == tb.jumps.size());
  for (std::size_t i = 0; i < ta.jumps.size(); ++i) {
    CHECK(ta.jumps[i].u == tb.jumps[i].u);
    CHECK(ta.jumps[i].time == tb.jumps[i].time);
  }
}

TEST_CASE("TSS stops near the singular set") {
  const auto fx = testing::fixture("tss.json")["singular"];
  const auto m = testing::model_of(fx["model"]);
  const double u_star = fx["u_star"];
  TssOptions opt;
  opt.horizon = 1e9;
  opt.eta = 0.05;
  Rng rng(3);
  const auto tr = simulate_tss(m, -0.3, {u_star}, opt, rng);
  CHECK(tr.stopped);
  CHECK(std::abs(tr.jumps.back().u - u_star) <= opt.eta);
  CHECK(tr.end_time == tr.jumps.back().time);
  CHECK_THROWS_AS(simulate_tss(m, u_star, {u_star}, opt, rng), PreconditionError);
}

TEST_CASE("TSS in a neutral model is absorbed at once") {
  Rng rng(1);
  TssOptions opt;
  opt.horizon = 10.0;
  const auto tr = simulate_tss(testing::neutral_constant(), 0.5, {}, opt, rng);
  CHECK(tr.absorbed);
  CHECK(tr.jumps.size() == 1);
}

TEST_CASE("M1 modulus matches brute force") {
  const auto fx = testing::fixture("tss.json")["m1"];
  const double tol = fx["tolerance"];
  for (const auto& c : fx["cases"]) {
    const double w = m1_modulus(doubles(c["t"]), doubles(c["x"]), c["delta"]);
    CHECK(std::abs(w - c["modulus"].get<double>()) <= tol);
  }
}

TEST_CASE("M1 modulus of a monotone step path is zero") {
  std::vector<double> t;
  std::vector<double> x;
  for (int i = 0; i <= 1000; ++i) {
    t.push_back(i * 0.001);
    x.push_back(i < 400 ? 0.0 : (i < 700 ? 0.5 : 0.9));
  }
  CHECK(m1_modulus(t, x, 0.05) == 0.0);
  CHECK_THROWS_AS(m1_modulus(t, x, 0.005), PreconditionError);
  CHECK_THROWS_AS(m1_modulus(t, {0.0}, 0.05), PreconditionError);
}

TEST_CASE("adaptive quadrature error is in interval units") {
  auto line = [](double h) { return 27.5 * h; };
  const auto q = integrate_adaptive(line, 0.0, 2e-6, 1e-11);
  CHECK(q.value == doctest::Approx(27.5 * 2e-12));
  CHECK(q.error <= 1e-12 * q.value);
  const auto w = integrate_adaptive([](double h) { return std::sqrt(h); }, 0.0, 1e-6, 1e-11, 30);
  CHECK(std::abs(w.value - 2.0 / 3.0 * 1e-9) <= 1e-9 * w.value);
  CHECK(w.error <= 1e-9 * w.value);
  CHECK(integrate_adaptive(line, 1.0, 1.0, 1e-11).value == 0.0);
}
