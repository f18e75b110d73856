#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "errors.hpp"

namespace adyn {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  // Record spacing; 0 records every accepted step.
  double record_dt = 0.0;
  double initial_dt = 1e-3;
  double min_dt = 1e-13;
  std::size_t max_steps = 50'000'000;
};

template <std::size_t N>
struct OdeSolution {
  std::vector<double> t;
  std::vector<std::array<double, N>> y;
  bool stopped_early = false;
};

struct NoPostStep {
  template <class State>
  bool operator()(State&) const {
    return false;
  }
};

struct NeverStop {
  template <class State>
  bool operator()(double, const State&) const {
    return false;
  }
};

// Adaptive Dormand-Prince 5(4) integration of y' = rhs(y, t) on [t0, t1].
// `post` may project the state after each accepted step and returns true if
// it changed it; `stop` is consulted at every recorded point.
template <std::size_t N, class Rhs, class Post = NoPostStep, class Stop = NeverStop>
OdeSolution<N> integrate_adaptive(Rhs rhs, std::array<double, N> y, double t0, double t1,
                                  const OdeOptions& opt, Post post = {}, Stop stop = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  auto system = [&rhs](const State& x, State& dxdt, double t) { dxdt = rhs(x, t); };
  auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());

  OdeSolution<N> out;
  out.t.push_back(t0);
  out.y.push_back(y);
  if (!(t1 > t0)) return out;

  double t = t0;
  double dt = std::min(opt.initial_dt, t1 - t0);
  std::size_t record_index = 1;
  std::size_t steps = 0;
  const double span = t1 - t0;
  auto next_record = [&]() {
    if (opt.record_dt <= 0.0) return t1;
    return std::min(t1, t0 + opt.record_dt * static_cast<double>(record_index));
  };

  while (t < t1) {
    const double target = next_record();
    double trial = std::min(dt, target - t);
    const bool truncated = trial < dt;
    const double dt_before = dt;
    odeint::controlled_step_result res = stepper.try_step(system, y, t, trial);
    if (res == odeint::success) {
      ++steps;
      if (post(y)) stepper.reset();
      dt = truncated ? std::max(dt_before, trial) : trial;
      const bool at_target = std::abs(t - target) <= 1e-12 * std::max(1.0, std::abs(target));
      if (at_target) t = target;
      if (opt.record_dt <= 0.0 || at_target) {
        out.t.push_back(t);
        out.y.push_back(y);
        if (at_target && opt.record_dt > 0.0) ++record_index;
        if (stop(t, y)) {
          out.stopped_early = t < t1;
          return out;
        }
      }
      if (steps > opt.max_steps) throw NumericalError("ODE integration exceeded the step budget");
    } else {
      dt = trial;
      if (dt < opt.min_dt * std::max(1.0, span))
        throw NumericalError("ODE step size underflow (stiff or singular system)");
    }
    for (double v : y)
      if (!std::isfinite(v)) throw NumericalError("ODE state became non-finite");
  }
  return out;
}

}  // namespace adyn
