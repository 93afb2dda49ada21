#include "fracdelay/trajectory_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracdelay/errors.hpp"
#include "fracdelay/parallel.hpp"

namespace fracdelay {

namespace {

void require_tau(int tau) {
  if (tau < 1) throw DomainError("delay tau must be >= 1, got " + std::to_string(tau));
}

// sum_{m<len} phi[m] * u[m], four independent partial sums so the loop is
// not serialized on one accumulator.  Fixed order, so results are
// reproducible bit for bit.
inline double dot(const double* phi, const double* u, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t m = 0;
  for (; m + 4 <= len; m += 4) {
    s0 += phi[m] * u[m];
    s1 += phi[m + 1] * u[m + 1];
    s2 += phi[m + 2] * u[m + 2];
    s3 += phi[m + 3] * u[m + 3];
  }
  for (; m < len; ++m) s0 += phi[m] * u[m];
  return (s0 + s1) + (s2 + s3);
}

inline std::size_t window(std::size_t t, const SimulationOptions& options) {
  return options.memory_length == 0 ? t : std::min(t, options.memory_length);
}

void require_steps(std::size_t steps) {
  if (steps < 1) throw DomainError("number of steps must be >= 1");
}

void require_kernel(const FractionalKernel& kernel, double alpha) {
  if (kernel.alpha() != alpha) throw DomainError("kernel order does not match the system order");
}

}  // namespace

LinearDelaySystem LinearDelaySystem::with_constant_history(double alpha, cplx a, double b, int tau, cplx x0) {
  require_tau(tau);
  return LinearDelaySystem{alpha, a, b, tau, x0, std::vector<cplx>(static_cast<std::size_t>(tau), x0)};
}

void LinearDelaySystem::validate() const {
  require_order(alpha);
  require_tau(tau);
  if (history.size() != static_cast<std::size_t>(tau)) throw DomainError("history length must equal tau");
  if (!std::isfinite(b) || !std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw DomainError("system coefficients must be finite");
  }
}

NonlinearDelaySystem NonlinearDelaySystem::with_constant_history(MapModel map, double b, int tau, double alpha,
                                                                 double x0) {
  require_tau(tau);
  return NonlinearDelaySystem{map, b, tau, alpha, x0, std::vector<double>(static_cast<std::size_t>(tau), x0)};
}

void NonlinearDelaySystem::validate() const {
  require_order(alpha);
  require_tau(tau);
  if (history.size() != static_cast<std::size_t>(tau)) throw DomainError("history length must equal tau");
  if (!std::isfinite(b) || !std::isfinite(x0)) throw DomainError("system coefficients must be finite");
}

LinearTrajectory simulate_linear(const LinearDelaySystem& sys, std::size_t steps, const SimulationOptions& options) {
  sys.validate();
  FractionalKernel kernel(sys.alpha);
  return simulate_linear(sys, steps, kernel, options);
}

LinearTrajectory simulate_linear(const LinearDelaySystem& sys, std::size_t steps, const FractionalKernel& kernel,
                                 const SimulationOptions& options) {
  sys.validate();
  require_steps(steps);
  require_kernel(kernel, sys.alpha);
  const auto phi_snapshot = kernel.coefficients(steps);
  const double* phi = phi_snapshot->data();

  LinearTrajectory out;
  auto& x = out.states;
  x.reserve(steps + 1);
  x.push_back(sys.x0);

  // Forcing u(k) = (a-1) x(k) + b x(k-tau), stored back to front so that the
  // convolution for x(t) reads phi and u in the same direction:
  // u(k) lives at index steps-1-k.
  std::vector<double> ure(steps), uim(steps);
  const cplx am1 = sys.a - 1.0;
  const auto tau = static_cast<std::ptrdiff_t>(sys.tau);
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::size_t k = t - 1;
    const std::ptrdiff_t lag = static_cast<std::ptrdiff_t>(k) - tau;
    const cplx delayed = lag >= 0 ? x[static_cast<std::size_t>(lag)] : sys.history[static_cast<std::size_t>(lag + tau)];
    const cplx u = am1 * x[k] + sys.b * delayed;
    ure[steps - 1 - k] = u.real();
    uim[steps - 1 - k] = u.imag();

    const std::size_t base = steps - t;
    const std::size_t len = window(t, options);
    const cplx xt = sys.x0 + cplx(dot(phi, ure.data() + base, len), dot(phi, uim.data() + base, len));
    x.push_back(xt);
    if (!std::isfinite(xt.real()) || !std::isfinite(xt.imag()) || std::abs(xt) > options.divergence_threshold) {
      out.diverged = true;
      break;
    }
  }
  return out;
}

NonlinearTrajectory simulate_nonlinear(const NonlinearDelaySystem& sys, std::size_t steps,
                                       const SimulationOptions& options) {
  sys.validate();
  FractionalKernel kernel(sys.alpha);
  return simulate_nonlinear(sys, steps, kernel, options);
}

NonlinearTrajectory simulate_nonlinear(const NonlinearDelaySystem& sys, std::size_t steps,
                                       const FractionalKernel& kernel, const SimulationOptions& options) {
  sys.validate();
  require_steps(steps);
  require_kernel(kernel, sys.alpha);
  const auto phi_snapshot = kernel.coefficients(steps);
  const double* phi = phi_snapshot->data();

  NonlinearTrajectory out;
  auto& x = out.states;
  x.reserve(steps + 1);
  x.push_back(sys.x0);

  // v(k) = f(x(k)) + b x(k-tau) - x(k); x(t) = x0 + sum_{k<t} phi(t-1-k) v(k).
  std::vector<double> v(steps);
  const auto tau = static_cast<std::ptrdiff_t>(sys.tau);
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::size_t k = t - 1;
    const std::ptrdiff_t lag = static_cast<std::ptrdiff_t>(k) - tau;
    const double delayed = lag >= 0 ? x[static_cast<std::size_t>(lag)] : sys.history[static_cast<std::size_t>(lag + tau)];
    v[steps - 1 - k] = sys.map.eval(x[k]) + sys.b * delayed - x[k];

    const std::size_t base = steps - t;
    const double xt = sys.x0 + dot(phi, v.data() + base, window(t, options));
    x.push_back(xt);
    if (!std::isfinite(xt) || std::abs(xt) > options.divergence_threshold) {
      out.diverged = true;
      break;
    }
  }
  return out;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ConvergedToFixedPoint: return "converged";
    case Outcome::Bounded: return "bounded";
    case Outcome::Diverged: return "diverged";
    case Outcome::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

template <class State>
TrajectoryVerdict detect_impl(std::span<const State> traj, const DetectOptions& options) {
  if (traj.empty()) throw DomainError("detect_verdict needs a nonempty trajectory");
  if (!(options.tol > 0.0)) throw DomainError("detect_verdict tolerance must be > 0");
  if (options.dwell < 1) throw DomainError("detect_verdict dwell must be >= 1");

  TrajectoryVerdict verdict;
  const std::size_t n = traj.size();
  verdict.steps_run = n - 1;

  for (const State& s : traj) {
    const double m = std::abs(s);
    if (!std::isfinite(m) || m > options.guard) {
      verdict.outcome = Outcome::Diverged;
      verdict.final_deviation = std::numeric_limits<double>::infinity();
      return verdict;
    }
  }

  const cplx last = cplx(traj.back());
  const cplx ref = options.target.value_or(last);
  const std::size_t dwell = std::min(options.dwell, n);
  double worst = 0.0;
  for (std::size_t i = n - dwell; i < n; ++i) worst = std::max(worst, std::abs(cplx(traj[i]) - ref));
  verdict.final_deviation = worst;
  if (worst < options.tol && dwell == options.dwell) {
    verdict.outcome = Outcome::ConvergedToFixedPoint;
    verdict.limit_estimate = options.target.value_or(last);
    return verdict;
  }

  const cplx centre = options.target.value_or(0.0);
  if (n < 8) {
    verdict.outcome = Outcome::Undetermined;
    return verdict;
  }
  double earlier = 0.0, later = 0.0;
  for (std::size_t i = n / 2; i < (3 * n) / 4; ++i) earlier = std::max(earlier, std::abs(cplx(traj[i]) - centre));
  for (std::size_t i = (3 * n) / 4; i < n; ++i) later = std::max(later, std::abs(cplx(traj[i]) - centre));
  verdict.outcome = later <= earlier ? Outcome::Bounded : Outcome::Undetermined;
  return verdict;
}

}  // namespace

TrajectoryVerdict detect_verdict(std::span<const cplx> traj, const DetectOptions& options) {
  return detect_impl(traj, options);
}

TrajectoryVerdict detect_verdict(std::span<const double> traj, const DetectOptions& options) {
  return detect_impl(traj, options);
}

TrajectoryVerdict verdict_near_equilibrium(std::span<const double> traj, double x_star, double tol, std::size_t dwell,
                                           double capture, double guard) {
  DetectOptions opts;
  opts.tol = tol;
  opts.dwell = dwell;
  opts.guard = guard;
  TrajectoryVerdict v = detect_verdict(traj, opts);
  if (v.outcome == Outcome::Diverged) return v;
  if (v.outcome == Outcome::ConvergedToFixedPoint) {
    if (std::abs(v.limit_estimate->real() - x_star) > capture) v.outcome = Outcome::Bounded;
    return v;
  }
  // Not settled: take the envelope around x_star instead of around 0.
  opts.target = x_star;
  const Outcome around = detect_verdict(traj, opts).outcome;
  v.outcome = around == Outcome::ConvergedToFixedPoint ? Outcome::Bounded : around;
  return v;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ScanModel model) {
  switch (model) {
    case ScanModel::Linear: return "linear";
    case ScanModel::Logistic: return "logistic";
    case ScanModel::Cubic: return "cubic";
  }
  return "?";
}

std::string_view to_string(ScanPlane plane) {
  switch (plane) {
    case ScanPlane::ComplexA: return "complex-a";
    case ScanPlane::BA: return "b-a";
  }
  return "?";
}

GridScanResult grid_scan(const GridScanRequest& req, unsigned threads) {
  require_order(req.alpha);
  require_tau(req.tau);
  require_steps(req.steps);
  if (req.x.n < 1 || req.y.n < 1) throw DomainError("scan resolution must be >= 1 per axis");
  if (req.model != ScanModel::Linear && req.plane != ScanPlane::BA) {
    throw DomainError("nonlinear scans run in the b-a plane");
  }

  GridScanResult result{req.x, req.y, std::vector<TrajectoryVerdict>(req.x.n * req.y.n)};
  const FractionalKernel kernel(req.alpha);
  kernel.coefficients(req.steps);

  parallel_for(result.cells.size(), resolve_thread_count(threads), [&](std::size_t cell) {
    const std::size_t ix = cell % req.x.n;
    const std::size_t iy = cell / req.x.n;
    const double xv = req.x.at(ix);
    const double yv = req.y.at(iy);

    if (req.model == ScanModel::Linear) {
      const cplx a = req.plane == ScanPlane::ComplexA ? cplx(xv, yv) : cplx(yv, 0.0);
      const double b = req.plane == ScanPlane::ComplexA ? req.b : xv;
      const auto sys = LinearDelaySystem::with_constant_history(req.alpha, a, b, req.tau);
      const auto traj = simulate_linear(sys, req.steps, kernel, req.simulation);
      DetectOptions opts;
      opts.target = cplx(0.0);
      opts.tol = req.tol;
      opts.dwell = req.dwell;
      opts.guard = req.simulation.divergence_threshold;
      result.cells[cell] = detect_verdict(std::span<const cplx>(traj.states), opts);
      return;
    }

    const double b = xv;
    const double a = yv;
    const MapModel map = req.model == ScanModel::Logistic ? MapModel::logistic(a) : MapModel::cubic(1.0 - a);
    const auto sys = NonlinearDelaySystem::with_constant_history(map, b, req.tau, req.alpha, req.offset);
    const auto traj = simulate_nonlinear(sys, req.steps, kernel, req.simulation);
    result.cells[cell] = verdict_near_equilibrium(traj.states, 0.0, req.tol, req.dwell, 0.5 * std::abs(req.offset),
                                                  req.simulation.divergence_threshold);
  });
  return result;
}

}  // namespace fracdelay
