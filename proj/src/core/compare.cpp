#include "compare.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "ibm.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "tss.hpp"

namespace adyn {

double ibm_ode_sup_error(const DemographyModel& model, const IbmOdeSetup& setup, std::int64_t K, Rng& rng) {
  DemographyModel m = model;
  m.mu_K = 0.0;
  const std::array<Genotype, 3> g{Genotype::homozygote(setup.u_A), Genotype(setup.u_A, setup.u_a),
                                  Genotype::homozygote(setup.u_a)};
  PopulationState s;
  s.K = K;
  Vec3 start{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto n = static_cast<std::int64_t>(std::llround(setup.initial[i] * static_cast<double>(K)));
    s.add(g[i], n);
    start[i] = static_cast<double>(n) / static_cast<double>(K);
  }
  IbmEngine engine(m, s);
  SimulateOptions opt;
  opt.horizon = setup.horizon;
  opt.record_dt = setup.record_dt;
  const IbmRun run = simulate(engine, opt, rng);

  const DimorphicModel dm = DimorphicModel::from_model(m, setup.u_A, setup.u_a);
  FlowOptions fo;
  fo.record_dt = setup.record_dt;
  fo.rtol = 1e-10;
  fo.atol = 1e-12;
  const FlowTrajectory ode = integrate_flow(GenotypeDensities::of(start), dm, setup.horizon, fo);

  std::array<std::vector<double>, 3> ibm;
  for (std::size_t i = 0; i < 3; ++i) ibm[i] = run.series(g[i]);
  const std::vector<double> times = run.times();
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < ode.t.size(); ++k) {
    const double t = ode.t[k];
    while (j + 1 < times.size() && times[j + 1] <= t + 1e-9 * std::max(1.0, t)) ++j;
    const Vec3 o = ode.states[k].vec();
    for (std::size_t i = 0; i < 3; ++i) {
      const double v = (run.extinct && t > run.end_time) ? 0.0 : ibm[i][j];
      worst = std::max(worst, std::abs(v - o[i]));
    }
  }
  return worst;
}

std::vector<IbmOdeRow> ibm_ode_ladder(const DemographyModel& model, const IbmOdeSetup& setup,
                                      const std::vector<std::int64_t>& K_list, std::int64_t replicates,
                                      std::uint64_t seed, int threads) {
  std::vector<IbmOdeRow> rows;
  for (std::size_t k = 0; k < K_list.size(); ++k) {
    IbmOdeRow row;
    row.K = K_list[k];
    row.errors.assign(static_cast<std::size_t>(replicates), 0.0);
    parallel_for(replicates, threads, [&](std::int64_t r) {
      Rng rng = Rng::stream(seed, (static_cast<std::uint64_t>(k) << 32) + static_cast<std::uint64_t>(r));
      row.errors[static_cast<std::size_t>(r)] = ibm_ode_sup_error(model, setup, row.K, rng);
    });
    row.median = median(row.errors);
    row.mean = mean(row.errors);
    rows.push_back(std::move(row));
  }
  return rows;
}

TssCanonicalRow tss_canonical_distance(const DemographyModel& model, double sigma, const TssCanonicalSetup& setup,
                                       std::int64_t replicates, std::uint64_t seed, int threads) {
  if (replicates < 1) throw PreconditionError("replicates must be positive");
  if (setup.grid < 2) throw PreconditionError("comparison grid needs at least two points");
  DemographyModel m = model;
  m.sigma = sigma;
  m.validate();
  std::vector<double> singular;
  if (setup.eta > 0.0)
    for (const auto& s : find_singular_strategies(m).points) singular.push_back(s.u);

  TssCanonicalRow row;
  row.sigma = sigma;
  row.replicates = replicates;
  for (int k = 0; k <= setup.grid; ++k) row.times.push_back(setup.horizon * k / setup.grid);
  std::vector<std::vector<double>> paths(static_cast<std::size_t>(replicates));
  std::vector<char> stopped(paths.size(), 0);
  std::vector<char> absorbed(paths.size(), 0);
  TssOptions opt;
  opt.horizon = setup.horizon / (sigma * sigma);
  opt.eta = setup.eta;
  parallel_for(replicates, threads, [&](std::int64_t r) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
    const TssTrajectory tr = simulate_tss(m, setup.u0, singular, opt, rng);
    auto& p = paths[static_cast<std::size_t>(r)];
    for (double t : row.times) p.push_back(tr.value_at(t / (sigma * sigma)));
    stopped[static_cast<std::size_t>(r)] = tr.stopped;
    absorbed[static_cast<std::size_t>(r)] = tr.absorbed;
  });
  for (std::size_t r = 0; r < paths.size(); ++r) {
    row.stopped += stopped[r];
    row.absorbed += absorbed[r];
  }
  CanonicalIntegration integ;
  integ.horizon = setup.horizon;
  integ.stop_rhs = 0.0;
  const CanonicalTrajectory can = integrate_canonical(m, setup.u0, setup.form, integ, setup.options);
  const double width = m.space.width();
  for (std::size_t k = 0; k < row.times.size(); ++k) {
    double s = 0.0;
    for (const auto& p : paths) s += p[k];
    const double mean_u = s / static_cast<double>(paths.size());
    row.mean_path.push_back(mean_u);
    row.canonical_path.push_back(can.u_at(row.times[k]));
    row.distance = std::max(row.distance, std::abs(mean_u - row.canonical_path.back()) / width);
  }
  row.m1 = m1_modulus(row.times, row.mean_path, setup.horizon / 10.0);
  return row;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

double csv_distance(const std::string& path_a, const std::string& path_b) {
  const auto a = read_csv(path_a);
  const auto b = read_csv(path_b);
  if (a.empty() || b.empty() || a[0] != b[0]) throw ConfigError("CSV files have different headers");
  if (a.size() != b.size()) throw ConfigError("CSV files have different row counts");
  double worst = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw ConfigError("CSV rows differ in length");
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] == b[i][j]) continue;
      try {
        worst = std::max(worst, std::abs(std::stod(a[i][j]) - std::stod(b[i][j])));
      } catch (const std::exception&) {
        throw ConfigError("CSV cells differ and are not numeric");
      }
    }
  }
  return worst;
}

}  // namespace adyn
