#pragma once

#include <array>
#include <optional>
#include <vector>

#include "model.hpp"
#include "ode.hpp"

namespace adyn {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Densities of AA, Aa and aa.
struct GenotypeDensities {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double total() const { return x + y + z; }
  Vec3 vec() const { return {x, y, z}; }
  static GenotypeDensities of(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

// Total density n, A-allele frequency p and excess heterozygosity h.
struct NphCoordinates {
  double n = 0.0;
  double p = 0.0;
  double h = 0.0;
};

NphCoordinates to_nph(const GenotypeDensities& d);
GenotypeDensities from_nph(const NphCoordinates& c);

double logistic_rhs(double n, double f, double D, double C);
double carrying_capacity(double f, double D, double C);

// The nine demographic constants of a two-allele population, indexed
// 0 = AA, 1 = Aa, 2 = aa. competition[i][j] is C(focal i, other j).
struct DimorphicModel {
  double u_A = 0.0;
  double u_a = 0.0;
  double zeta = 0.0;
  Vec3 fertility{};
  Vec3 death{};
  Mat3 competition{};

  static DimorphicModel from_model(const DemographyModel& model, double u_A, double u_a);
  static DimorphicModel from_constants(const Vec3& f, const Vec3& D, const Mat3& C);
  // f_i = f, D_i = D0, C_ij = D1.
  static DimorphicModel neutral(double f, double D0, double D1);

  double n_AA() const;
  double n_aa() const;
  // S_{Aa,AA} = f_Aa - D_Aa - C_{Aa,AA} n_AA.
  double fitness_Aa_in_AA() const;
  // S_{Aa,aa} = f_Aa - D_Aa - C_{Aa,aa} n_aa.
  double fitness_Aa_in_aa() const;
  // Exchanges the roles of A and a.
  DimorphicModel swapped() const;
};

// The vector field X(x, y, z) of the three-genotype system.
Vec3 genotype_rhs(const GenotypeDensities& d, const DimorphicModel& dm);
Mat3 numerical_jacobian(const GenotypeDensities& d, const DimorphicModel& dm, double step = 1e-6);
// Eigenvalues of a real 3x3 matrix, sorted ascending by real part; throws
// NumericalError if any has a non-negligible imaginary part.
Vec3 real_eigenvalues(const Mat3& m);

// S(u_a; u_A).
double invasion_fitness(const DemographyModel& model, double u_a, double u_A);
// d/dzeta S(u_A + zeta; u_A) at zeta = 0 (Richardson-extrapolated central
// differences).
double invasion_fitness_slope(const DemographyModel& model, double u_A);

// Closed-form spectrum of DX at (n_AA, 0, 0):
// (-f_AA + D_AA, -C_{aa,AA} n_AA - D_aa, S_{Aa,AA}).
Vec3 jacobian_spectrum_at_AA(const DimorphicModel& dm);
Vec3 jacobian_spectrum_at_aa(const DimorphicModel& dm);

// Line of fixed points of the neutral field and the eigen-frame along it.
class NeutralGeometry {
 public:
  NeutralGeometry(double f, double D0, double D1);
  static NeutralGeometry of(const DimorphicModel& neutral_model);

  double n0() const { return n0_; }
  double f() const { return f_; }
  double D0() const { return D0_; }
  double D1() const { return D1_; }
  // v = n0 (1 - 2p); gamma(-n0) = (n0, 0, 0) and gamma(n0) = (0, 0, n0).
  Vec3 gamma(double v) const;
  Vec3 e1(double v) const { return gamma(v); }
  Vec3 e2(double v) const;
  Vec3 e3(double v) const;
  // Dual basis: <beta_i(v), e_j(v)> = delta_ij.
  std::array<Vec3, 3> duals(double v) const;
  Vec3 beta(int i, double v) const { return duals(v)[static_cast<std::size_t>(i - 1)]; }
  // Eigenvalues attached to e1, e2, e3.
  Vec3 eigenvalues() const { return {D0_ - f_, 0.0, -f_}; }
  // M(v, r, s) = (1 + r) gamma(v) + s e3(v).
  Vec3 frame_point(double v, double r, double s) const;

 private:
  double f_;
  double D0_;
  double D1_;
  double n0_;
};

NeutralGeometry neutral_geometry(double f, double D0, double D1);

struct ZeroCurveOptions {
  int max_iterations = 50;
  double tolerance = 1e-13;
  // Largest |zeta| accepted, in absolute trait units.
  double zeta_threshold = 0.05;
};

struct ZeroCurvePoint {
  double r = 0.0;
  double s = 0.0;
  int iterations = 0;
};

// Solves <beta1(v), X(M(v,r,s))> = <beta3(v), X(M(v,r,s))> = 0 for (r, s)
// by damped Newton from (0, 0).
ZeroCurvePoint zero_curve(const DimorphicModel& dm, const NeutralGeometry& geom, double v,
                          const ZeroCurveOptions& opt = {});
// <beta2(v), X(M(v, r(v), s(v)))> along the zero curve.
double reduced_field(const DimorphicModel& dm, const NeutralGeometry& geom, double v,
                     const ZeroCurveOptions& opt = {});
// g(v) = -(1 / (2 n_AA)) dS/dzeta(0) (v^2 - n_AA^2).
double reduced_field_limit(double v, double n_AA, double fitness_slope);

struct ZeroCount {
  bool degenerate = false;
  int count = 0;
  std::vector<double> roots;   // v positions
  std::vector<Vec3> points;    // corresponding (x, y, z)
};

struct ZeroCountOptions {
  // Half-width of the scanned neighbourhood as a fraction of n0.
  double delta_fraction = 0.1;
  int grid = 401;
  ZeroCurveOptions curve;
};

ZeroCount count_zeros_near_curve(const DimorphicModel& dm, const NeutralGeometry& geom,
                                 const ZeroCountOptions& opt = {});

struct FlowTrajectory {
  std::vector<double> t;
  std::vector<GenotypeDensities> states;
  bool reached_fixed_point = false;
};

struct FlowOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double record_dt = 0.0;
  // Stop once ||X|| < fixed_point_tol and the state moved less than that
  // over the last unit of time; 0 disables.
  double fixed_point_tol = 0.0;
};

FlowTrajectory integrate_flow(const GenotypeDensities& d0, const DimorphicModel& dm, double horizon,
                              const FlowOptions& opt = {});

// W_phi = (phi(uA,uA), phi(uA,ua), phi(ua,ua)).
Vec3 phenotype_weights(const DemographyModel& model, double u_A, double u_a);
// <M(t), W> / <M(t), 1> along a trajectory.
std::vector<double> average_phenotype_series(const FlowTrajectory& traj, const Vec3& weights);

// n(t) of the logistic equation, integrated numerically.
double integrate_logistic(double n0, double f, double D, double C, double horizon,
                          double rtol = 1e-10);

}  // namespace adyn
