#pragma once

// Fixed points of x = f(x) + b x for the catalog maps, the real slice of the
// linear stability region in the b-a plane, and sweeps that compare the
// linearized prediction a = f'(x*) against brute-force iteration.

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fracdelay/map_model.hpp"
#include "fracdelay/trajectory_engine.hpp"

namespace fracdelay {

struct FixedPointRecord {
  double x_star;
  /// f'(x*); empty where f is not differentiable.
  std::optional<double> a_lin;
  double b;
  /// |f(x*) + b x* - x*|
  double residual;
};

/// Real solutions of f(x) + b x = x in increasing order.  Empty when all
/// roots are complex (or the equation is degenerate with no isolated root).
std::vector<FixedPointRecord> fixed_points(const MapModel& map, double b);

/// The three curves bounding the real stable region in the b-a plane.
struct RegionCurves {
  double alpha;
  int tau;

  /// a = 1 - b (t = 0)
  double line_a1(double b) const;
  /// a = 1 - 2^alpha - (-1)^tau b (t = pi)
  double line_a2(double b) const;
  /// (b(t), a(t)) from Im gamma(t) = 0; empty where sin(tau t) = 0.
  std::optional<std::pair<double, double>> parametric(double t) const;
  /// n points of the parametric curve on (0, pi), poles skipped: (t, b, a).
  std::vector<std::array<double, 3>> sample_parametric(std::size_t n) const;
};

RegionCurves region_curves(double alpha, int tau);

/// Real a values where gamma(t), t in [0, pi], meets the real axis at this b.
std::vector<double> real_axis_crossings(double alpha, int tau, double b);

/// Smallest and largest real a that are stable at this b.  Empty when no
/// real a is stable.
std::optional<std::pair<double, double>> stable_interval(double alpha, int tau, double b);

struct SweepOptions {
  std::size_t steps = 10000;
  /// Settling tolerance, relative to max(1, |x*|); 0 picks 1e-5 for
  /// Henon/Lozi and 1e-4 otherwise.
  double tol = 0.0;
  std::size_t dwell = 100;
  /// Start at x* + offset * max(1, |x*|).
  double offset = 1e-2;
  /// Rows whose a_lin is this close to an end of the stable interval are
  /// reported but left out of the agreement score.
  double margin = 0.02;
  unsigned threads = 0;
};

struct SweepRow {
  double param;
  double x_star;
  std::optional<double> a_lin;
  bool predicted;
  Outcome simulated;
  bool agree;
  bool excluded;
};

struct SweepResult {
  std::optional<std::pair<double, double>> interval;
  std::vector<SweepRow> rows;

  std::size_t scored() const;
  std::size_t agreed() const;
  double agreement() const;
};

/// Sweeps the map parameter (lambda, beta or A) over `samples` points of
/// [param_min, param_max].  For Henon and Lozi, b is also the map's B.
SweepResult predict_and_verify(MapKind kind, double alpha, int tau, double b, double param_min, double param_max,
                               std::size_t samples, const SweepOptions& options = {});

}  // namespace fracdelay
