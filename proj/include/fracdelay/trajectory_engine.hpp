#pragma once

// Brute-force forward iteration of the delayed fractional systems
//
//   linear:    x(t) = x0 + sum_{j=0}^{t-1} phi(t-1-j) [(a-1) x(j) + b x(j-tau)]
//   nonlinear: x(t) = x0 + sum_{j=1}^{t}   phi(t-j)   [f(x(j-1)) + b x(j-tau-1) - x(j-1)]
//
// Every step convolves the whole history, so a run of T steps costs O(T^2).
// Samples at negative time are read from the system's history.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fracdelay/fractional_kernel.hpp"
#include "fracdelay/map_model.hpp"

namespace fracdelay {

using cplx = std::complex<double>;

struct LinearDelaySystem {
  double alpha = 1.0;
  cplx a = 0.0;
  double b = 0.0;
  int tau = 1;
  cplx x0 = 1.0;
  /// x(-tau), ..., x(-1)
  std::vector<cplx> history;

  /// History filled with x0, the usual choice for scans.
  static LinearDelaySystem with_constant_history(double alpha, cplx a, double b, int tau, cplx x0 = 1.0);
  void validate() const;
};

struct NonlinearDelaySystem {
  MapModel map = MapModel::logistic(0.0);
  double b = 0.0;
  int tau = 1;
  double alpha = 1.0;
  double x0 = 0.0;
  /// x(-tau), ..., x(-1)
  std::vector<double> history;

  static NonlinearDelaySystem with_constant_history(MapModel map, double b, int tau, double alpha, double x0);
  void validate() const;
};

struct SimulationOptions {
  /// A run halts as soon as |x(t)| exceeds this (or turns non-finite).
  double divergence_threshold = 1e12;
  /// Short-memory truncation: keep only the most recent `memory_length`
  /// terms of the convolution.  0 keeps the full history.
  std::size_t memory_length = 0;
};

template <class State>
struct Trajectory {
  /// x(0), ..., x(last); shorter than steps + 1 when the run diverged.
  std::vector<State> states;
  bool diverged = false;
};

using LinearTrajectory = Trajectory<cplx>;
using NonlinearTrajectory = Trajectory<double>;

LinearTrajectory simulate_linear(const LinearDelaySystem& sys, std::size_t steps,
                                 const SimulationOptions& options = {});
/// Same, reusing a kernel whose order must equal sys.alpha.
LinearTrajectory simulate_linear(const LinearDelaySystem& sys, std::size_t steps, const FractionalKernel& kernel,
                                 const SimulationOptions& options = {});

NonlinearTrajectory simulate_nonlinear(const NonlinearDelaySystem& sys, std::size_t steps,
                                       const SimulationOptions& options = {});
NonlinearTrajectory simulate_nonlinear(const NonlinearDelaySystem& sys, std::size_t steps,
                                       const FractionalKernel& kernel, const SimulationOptions& options = {});

enum class Outcome { ConvergedToFixedPoint, Bounded, Diverged, Undetermined };
std::string_view to_string(Outcome outcome);

struct TrajectoryVerdict {
  Outcome outcome = Outcome::Undetermined;
  std::size_t steps_run = 0;
  /// Largest deviation over the dwell window (from the target, or from the
  /// last sample when no target was given).
  double final_deviation = 0.0;
  std::optional<cplx> limit_estimate;
};

struct DetectOptions {
  std::optional<cplx> target;
  double tol = 1e-4;
  std::size_t dwell = 100;
  double guard = 1e12;
};

/// Classifies a finished trajectory.
///
///  - Diverged: some sample is non-finite or exceeds `guard`.
///  - ConvergedToFixedPoint: the last `dwell` samples all lie within `tol`
///    of the target (or of the final sample when no target is set).
///  - Bounded: neither, and the deviation envelope over the last quarter of
///    the run does not exceed the envelope over the quarter before it.
///  - Undetermined: the envelope is still growing but has not hit the guard.
///
/// Deviation for the envelope is measured from the target, or from 0.
TrajectoryVerdict detect_verdict(std::span<const cplx> traj, const DetectOptions& options);
TrajectoryVerdict detect_verdict(std::span<const double> traj, const DetectOptions& options);

/// Verdict for a nonlinear run started near the equilibrium `x_star`:
/// ConvergedToFixedPoint only if the trajectory settles (to `tol` over
/// `dwell` samples) and the settled value is within `capture` of x_star.
/// Settling anywhere else reports Bounded.
TrajectoryVerdict verdict_near_equilibrium(std::span<const double> traj, double x_star, double tol,
                                           std::size_t dwell, double capture, double guard = 1e12);

// ---------------------------------------------------------------------------
// Parameter-plane scans

/// Which system a scan iterates.  Logistic and Cubic are started next to
/// their x* = 0 equilibrium, whose linearization is a = lambda and a = 1 - beta.
enum class ScanModel { Linear, Logistic, Cubic };
/// ComplexA: x = Re a, y = Im a at fixed b.  BA: x = b, y = real a.
enum class ScanPlane { ComplexA, BA };

std::string_view to_string(ScanModel model);
std::string_view to_string(ScanPlane plane);

struct ScanAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 2;
  /// n == 1 collapses the axis onto `min`.
  double at(std::size_t i) const { return n == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1); }
};

struct GridScanRequest {
  ScanPlane plane = ScanPlane::ComplexA;
  ScanModel model = ScanModel::Linear;
  ScanAxis x;
  ScanAxis y;
  double alpha = 0.5;
  double b = 0.0;  ///< used by the ComplexA plane only
  int tau = 1;
  std::size_t steps = 10000;
  /// Convergence tolerance (delta) and dwell window.
  double tol = 1e-4;
  std::size_t dwell = 100;
  /// Initial offset from x* = 0 for the nonlinear models.
  double offset = 1e-2;
  SimulationOptions simulation;
};

struct GridScanResult {
  ScanAxis x;
  ScanAxis y;
  /// Row-major: cells[iy * x.n + ix].
  std::vector<TrajectoryVerdict> cells;

  const TrajectoryVerdict& at(std::size_t ix, std::size_t iy) const { return cells[iy * x.n + ix]; }
};

/// Evaluates every cell independently; deterministic for a given request
/// whatever the thread count.
GridScanResult grid_scan(const GridScanRequest& request, unsigned threads = 0);

}  // namespace fracdelay
