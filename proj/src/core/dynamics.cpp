#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "errors.hpp"

namespace adyn {

NphCoordinates to_nph(const GenotypeDensities& d) {
  const double n = d.total();
  if (!(n > 0.0)) throw DomainError("(n, p, h) coordinates undefined at zero total density");
  const double p = (d.x + 0.5 * d.y) / n;
  return {n, p, d.y / n - 2.0 * p * (1.0 - p)};
}

GenotypeDensities from_nph(const NphCoordinates& c) {
  const double y = c.n * (c.h + 2.0 * c.p * (1.0 - c.p));
  const double x = c.n * c.p - 0.5 * y;
  return {x, y, c.n - x - y};
}

double logistic_rhs(double n, double f, double D, double C) {
  if (!(C > 0.0)) throw DomainError("logistic equation needs a positive competition coefficient");
  return n * (f - D - C * n);
}

double carrying_capacity(double f, double D, double C) {
  if (!(C > 0.0)) throw DomainError("carrying capacity needs a positive competition coefficient");
  return (f - D) / C;
}

// ------------------------------------------------------------ dimorphic

DimorphicModel DimorphicModel::from_model(const DemographyModel& model, double u_A, double u_a) {
  const std::array<Genotype, 3> g{Genotype(u_A, u_A), Genotype(u_A, u_a), Genotype(u_a, u_a)};
  model.phenotype(g[0]);
  model.phenotype(g[2]);
  DimorphicModel dm;
  dm.u_A = u_A;
  dm.u_a = u_a;
  dm.zeta = u_a - u_A;
  for (std::size_t i = 0; i < 3; ++i) {
    dm.fertility[i] = model.fertility(g[i]);
    dm.death[i] = model.death(g[i]);
    for (std::size_t j = 0; j < 3; ++j) dm.competition[i][j] = model.competition(g[i], g[j]);
  }
  return dm;
}

DimorphicModel DimorphicModel::from_constants(const Vec3& f, const Vec3& D, const Mat3& C) {
  DimorphicModel dm;
  dm.fertility = f;
  dm.death = D;
  dm.competition = C;
  return dm;
}

DimorphicModel DimorphicModel::neutral(double f, double D0, double D1) {
  Mat3 c;
  for (auto& row : c) row = {D1, D1, D1};
  return from_constants({f, f, f}, {D0, D0, D0}, c);
}

double DimorphicModel::n_AA() const {
  return carrying_capacity(fertility[0], death[0], competition[0][0]);
}

double DimorphicModel::n_aa() const {
  return carrying_capacity(fertility[2], death[2], competition[2][2]);
}

double DimorphicModel::fitness_Aa_in_AA() const {
  return fertility[1] - death[1] - competition[1][0] * n_AA();
}

double DimorphicModel::fitness_Aa_in_aa() const {
  return fertility[1] - death[1] - competition[1][2] * n_aa();
}

DimorphicModel DimorphicModel::swapped() const {
  DimorphicModel s;
  s.u_A = u_a;
  s.u_a = u_A;
  s.zeta = -zeta;
  const std::array<std::size_t, 3> perm{2, 1, 0};
  for (std::size_t i = 0; i < 3; ++i) {
    s.fertility[i] = fertility[perm[i]];
    s.death[i] = death[perm[i]];
    for (std::size_t j = 0; j < 3; ++j) s.competition[i][j] = competition[perm[i]][perm[j]];
  }
  return s;
}

Vec3 genotype_rhs(const GenotypeDensities& d, const DimorphicModel& dm) {
  const Vec3 m = d.vec();
  if (d.total() == 0.0) return {0.0, 0.0, 0.0};
  const auto& f = dm.fertility;
  const double gametes = f[0] * m[0] + f[1] * m[1] + f[2] * m[2];
  Vec3 birth{0.0, 0.0, 0.0};
  if (gametes != 0.0) {
    const double a_out = f[0] * m[0] + 0.5 * f[1] * m[1];
    const double b_out = f[2] * m[2] + 0.5 * f[1] * m[1];
    birth = {a_out * a_out / gametes, 2.0 * a_out * b_out / gametes, b_out * b_out / gametes};
  }
  Vec3 out;
  for (std::size_t i = 0; i < 3; ++i) {
    const double pressure = dot(dm.competition[i], m);
    out[i] = birth[i] - (dm.death[i] + pressure) * m[i];
  }
  return out;
}

Mat3 numerical_jacobian(const GenotypeDensities& d, const DimorphicModel& dm, double step) {
  Mat3 jac{};
  const Vec3 base = d.vec();
  for (std::size_t j = 0; j < 3; ++j) {
    const double h = step * std::max(1.0, std::abs(base[j]));
    Vec3 plus = base;
    Vec3 minus = base;
    plus[j] += h;
    minus[j] -= h;
    const Vec3 fp = genotype_rhs(GenotypeDensities::of(plus), dm);
    const Vec3 fm = genotype_rhs(GenotypeDensities::of(minus), dm);
    for (std::size_t i = 0; i < 3; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

Vec3 real_eigenvalues(const Mat3& m) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::EigenSolver<Eigen::Matrix3d> solver(a, false);
  Vec3 out;
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int i = 0; i < 3; ++i) {
    const std::complex<double> ev = solver.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8 * scale) throw NumericalError("complex eigenvalue in spectrum");
    out[static_cast<std::size_t>(i)] = ev.real();
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double fitness_unchecked(const DemographyModel& model, double u_a, double u_A) {
  const Genotype res = Genotype::homozygote(u_A);
  const Genotype het(u_A, u_a);
  const double c_res = model.competition(res, res);
  if (c_res == 0.0) throw DomainError("invasion fitness undefined: C(AA, AA) = 0");
  return model.fertility(het) - model.death(het) -
         model.competition(het, res) * (model.fertility(res) - model.death(res)) / c_res;
}

}  // namespace

double invasion_fitness(const DemographyModel& model, double u_a, double u_A) {
  model.phenotype(Genotype(u_A, u_a));
  return fitness_unchecked(model, u_a, u_A);
}

double invasion_fitness_slope(const DemographyModel& model, double u_A) {
  const double h = 1e-3 * model.space.width();
  auto central = [&](double step) {
    return (fitness_unchecked(model, u_A + step, u_A) - fitness_unchecked(model, u_A - step, u_A)) /
           (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

Vec3 jacobian_spectrum_at_AA(const DimorphicModel& dm) {
  const double n = dm.n_AA();
  if (!(n > 0.0)) throw PreconditionError("spectrum at AA needs a positive carrying capacity");
  return {-dm.fertility[0] + dm.death[0], -dm.competition[2][0] * n - dm.death[2],
          dm.fitness_Aa_in_AA()};
}

Vec3 jacobian_spectrum_at_aa(const DimorphicModel& dm) { return jacobian_spectrum_at_AA(dm.swapped()); }

// ------------------------------------------------------------ neutral

NeutralGeometry::NeutralGeometry(double f, double D0, double D1) : f_(f), D0_(D0), D1_(D1) {
  if (!(f > D0) || !(D1 > 0.0)) throw DomainError("neutral geometry needs f > D0 and D1 > 0");
  n0_ = (f - D0) / D1;
}

NeutralGeometry NeutralGeometry::of(const DimorphicModel& m) {
  return {m.fertility[0], m.death[0], m.competition[0][0]};
}

Vec3 NeutralGeometry::gamma(double v) const {
  const double n = n0_;
  return {(v - n) * (v - n) / (4.0 * n), -(v * v - n * n) / (2.0 * n), (v + n) * (v + n) / (4.0 * n)};
}

Vec3 NeutralGeometry::e2(double v) const {
  const double n = n0_;
  return {(v - n) / (2.0 * n), -v / n, (v + n) / (2.0 * n)};
}

Vec3 NeutralGeometry::e3(double) const {
  const double c = 1.0 / (2.0 * n0_);
  return {c, -2.0 * c, c};
}

std::array<Vec3, 3> NeutralGeometry::duals(double v) const {
  Eigen::Matrix3d basis;
  const std::array<Vec3, 3> e{e1(v), e2(v), e3(v)};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      basis(i, j) = e[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  const double det = basis.determinant();
  if (!(std::abs(det) > 1e-300)) throw NumericalError("degenerate neutral eigen-frame");
  const Eigen::Matrix3d inv = basis.inverse();
  std::array<Vec3, 3> out;
  for (int i = 0; i < 3; ++i)
    out[static_cast<std::size_t>(i)] = {inv(i, 0), inv(i, 1), inv(i, 2)};
  return out;
}

Vec3 NeutralGeometry::frame_point(double v, double r, double s) const {
  const Vec3 g = gamma(v);
  const Vec3 c = e3(v);
  return {(1.0 + r) * g[0] + s * c[0], (1.0 + r) * g[1] + s * c[1], (1.0 + r) * g[2] + s * c[2]};
}

NeutralGeometry neutral_geometry(double f, double D0, double D1) { return {f, D0, D1}; }

// ------------------------------------------------------------ zero curve

ZeroCurvePoint zero_curve(const DimorphicModel& dm, const NeutralGeometry& geom, double v,
                          const ZeroCurveOptions& opt) {
  if (std::abs(dm.zeta) > opt.zeta_threshold)
    throw PreconditionError("zero curve requested for |zeta| above the configured threshold");
  const auto b = geom.duals(v);
  auto residual = [&](double r, double s) -> std::array<double, 2> {
    const Vec3 x = genotype_rhs(GenotypeDensities::of(geom.frame_point(v, r, s)), dm);
    return {dot(b[0], x), dot(b[2], x)};
  };
  auto norm = [](const std::array<double, 2>& a) { return std::hypot(a[0], a[1]); };

  ZeroCurvePoint pt;
  auto res = residual(0.0, 0.0);
  for (int it = 0; it < opt.max_iterations; ++it) {
    pt.iterations = it;
    if (norm(res) < opt.tolerance) return pt;
    const double h = 1e-7;
    const auto rp = residual(pt.r + h, pt.s);
    const auto rm = residual(pt.r - h, pt.s);
    const auto sp = residual(pt.r, pt.s + h);
    const auto sm = residual(pt.r, pt.s - h);
    const double j00 = (rp[0] - rm[0]) / (2 * h), j01 = (sp[0] - sm[0]) / (2 * h);
    const double j10 = (rp[1] - rm[1]) / (2 * h), j11 = (sp[1] - sm[1]) / (2 * h);
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0) break;
    const double dr = -(j11 * res[0] - j01 * res[1]) / det;
    const double ds = -(-j10 * res[0] + j00 * res[1]) / det;
    double lambda = 1.0;
    auto trial = residual(pt.r + dr, pt.s + ds);
    for (int k = 0; k < 30 && norm(trial) > norm(res); ++k) {
      lambda *= 0.5;
      trial = residual(pt.r + lambda * dr, pt.s + lambda * ds);
    }
    pt.r += lambda * dr;
    pt.s += lambda * ds;
    res = trial;
    if (std::abs(lambda * dr) + std::abs(lambda * ds) < 1e-15 && norm(res) < 1e3 * opt.tolerance)
      return pt;
  }
  if (norm(res) < opt.tolerance) return pt;
  throw NumericalError("zero curve: Newton iteration did not converge (zeta too large?)");
}

double reduced_field(const DimorphicModel& dm, const NeutralGeometry& geom, double v,
                     const ZeroCurveOptions& opt) {
  const auto pt = zero_curve(dm, geom, v, opt);
  const Vec3 x = genotype_rhs(GenotypeDensities::of(geom.frame_point(v, pt.r, pt.s)), dm);
  return dot(geom.beta(2, v), x);
}

double reduced_field_limit(double v, double n_AA, double fitness_slope) {
  return -(1.0 / (2.0 * n_AA)) * fitness_slope * (v * v - n_AA * n_AA);
}

ZeroCount count_zeros_near_curve(const DimorphicModel& dm, const NeutralGeometry& geom,
                                 const ZeroCountOptions& opt) {
  ZeroCount out;
  if (dm.zeta == 0.0) {
    out.degenerate = true;
    return out;
  }
  const double n0 = geom.n0();
  const double lo = -n0 * (1.0 + opt.delta_fraction);
  const double hi = n0 * (1.0 + opt.delta_fraction);
  std::vector<double> vs(static_cast<std::size_t>(opt.grid));
  std::vector<double> rs(vs.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    vs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(vs.size() - 1);
    rs[i] = reduced_field(dm, geom, vs[i], opt.curve);
    scale = std::max(scale, std::abs(rs[i]));
  }
  if (scale < 1e-15) {
    out.degenerate = true;
    return out;
  }
  auto f = [&](double v) { return reduced_field(dm, geom, v, opt.curve); };
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    if (rs[i] == 0.0) {
      out.roots.push_back(vs[i]);
      continue;
    }
    if ((rs[i] < 0.0) == (rs[i + 1] < 0.0) || rs[i + 1] == 0.0) continue;
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    try {
      const auto br = boost::math::tools::toms748_solve(f, vs[i], vs[i + 1], rs[i], rs[i + 1], tol, iters);
      out.roots.push_back(0.5 * (br.first + br.second));
    } catch (const std::exception& e) {
      throw NumericalError(std::string("zero count: root bracketing failed: ") + e.what());
    }
  }
  if (rs.back() == 0.0) out.roots.push_back(vs.back());
  for (double v : out.roots) {
    const auto pt = zero_curve(dm, geom, v, opt.curve);
    out.points.push_back(geom.frame_point(v, pt.r, pt.s));
  }
  out.count = static_cast<int>(out.roots.size());
  return out;
}

// ------------------------------------------------------------ flow

FlowTrajectory integrate_flow(const GenotypeDensities& d0, const DimorphicModel& dm, double horizon,
                              const FlowOptions& opt) {
  if (d0.x < 0.0 || d0.y < 0.0 || d0.z < 0.0)
    throw PreconditionError("flow start must lie in the closed positive octant");
  OdeOptions o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.record_dt = opt.record_dt;
  auto rhs = [&dm](const Vec3& m, double) { return genotype_rhs(GenotypeDensities::of(m), dm); };
  auto clamp = [](Vec3& m) {
    bool changed = false;
    for (double& c : m)
      if (c < 0.0) {
        c = 0.0;
        changed = true;
      }
    return changed;
  };
  bool anchored = false;
  double anchor_t = 0.0;
  Vec3 anchor{};
  bool reached = false;
  auto stop = [&](double t, const Vec3& m) {
    if (opt.fixed_point_tol <= 0.0) return false;
    const Vec3 x = genotype_rhs(GenotypeDensities::of(m), dm);
    const double speed = std::sqrt(dot(x, x));
    if (speed >= opt.fixed_point_tol) {
      anchored = false;
      return false;
    }
    if (!anchored) {
      anchored = true;
      anchor_t = t;
      anchor = m;
      return false;
    }
    double moved = 0.0;
    for (std::size_t i = 0; i < 3; ++i) moved = std::max(moved, std::abs(m[i] - anchor[i]));
    if (moved >= opt.fixed_point_tol) {
      anchor_t = t;
      anchor = m;
      return false;
    }
    if (t - anchor_t >= 1.0) reached = true;
    return reached;
  };
  const auto sol = integrate_adaptive<3>(rhs, d0.vec(), 0.0, horizon, o, clamp, stop);
  FlowTrajectory out;
  out.t = sol.t;
  out.states.reserve(sol.y.size());
  for (const auto& y : sol.y) out.states.push_back(GenotypeDensities::of(y));
  out.reached_fixed_point = reached;
  return out;
}

Vec3 phenotype_weights(const DemographyModel& model, double u_A, double u_a) {
  return {model.phenotype({u_A, u_A}), model.phenotype({u_A, u_a}), model.phenotype({u_a, u_a})};
}

std::vector<double> average_phenotype_series(const FlowTrajectory& traj, const Vec3& weights) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) {
    const double n = s.total();
    if (!(n > 0.0)) throw DomainError("mean phenotype undefined at zero total density");
    out.push_back(dot(s.vec(), weights) / n);
  }
  return out;
}

double integrate_logistic(double n0, double f, double D, double C, double horizon, double rtol) {
  OdeOptions o;
  o.rtol = rtol;
  o.atol = 1e-14;
  auto rhs = [=](const std::array<double, 1>& n, double) {
    return std::array<double, 1>{logistic_rhs(n[0], f, D, C)};
  };
  const auto sol = integrate_adaptive<1>(rhs, std::array<double, 1>{n0}, 0.0, horizon, o);
  return sol.y.back()[0];
}

}  // namespace adyn
